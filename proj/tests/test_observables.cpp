// test_observables.cpp -- reduced eigenvalues, entropy, inversion.
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "cpbnr/observables.hpp"

using namespace cpbnr;

namespace {

LadderState random_state(unsigned seed, std::size_t n_max) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    LadderState s(n_max);
    for (std::size_t n = 0; n < n_max; ++n) {
        s.c_e[n] = Complex{gauss(rng), gauss(rng)};
        s.c_g[n] = Complex{gauss(rng), gauss(rng)};
    }
    const double scale = 1.0 / std::sqrt(norm2(s));
    for (std::size_t n = 0; n < n_max; ++n) {
        s.c_e[n] *= scale;
        s.c_g[n] *= scale;
    }
    return s;
}

} // namespace

TEST_CASE("product states have eigenvalue pair (norm2, 0) and zero entropy") {
    LadderState s(3);
    s.c_e[0] = 0.6;
    s.c_e[1] = Complex{0.0, 0.8};
    const ReducedPair p = reduced_eigenvalues(s);
    CHECK(p.s_plus == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.s_minus == doctest::Approx(0.0));
    CHECK(entropy(s) == doctest::Approx(0.0));

    // (|e> + |g>)/sqrt(2) x |1>: entangled-looking amplitudes, product state
    LadderState bell_like(3);
    bell_like.c_e[1] = std::sqrt(0.5); // |e, 1>
    bell_like.c_g[0] = std::sqrt(0.5); // |g, 1>
    const ReducedPair q = reduced_eigenvalues(bell_like);
    CHECK(q.s_plus == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q.s_minus == doctest::Approx(0.0));
    CHECK(entropy(bell_like) == doctest::Approx(0.0));
}

TEST_CASE("balanced branches with no matching coherence give ln 2") {
    LadderState s(3);
    s.c_e[0] = std::sqrt(0.5); // |e, 0>
    s.c_g[1] = std::sqrt(0.5); // |g, 2>, no shared Fock level
    const ReducedPair p = reduced_eigenvalues(s);
    CHECK(p.s_plus == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.s_minus == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(entropy(s) == doctest::Approx(0.693147180559945).epsilon(1e-14));
}

TEST_CASE("frozen entropy value for the (0.9, 0.1) split") {
    LadderState s(3);
    s.c_e[0] = std::sqrt(0.9);
    s.c_g[1] = std::sqrt(0.1);
    CHECK(entropy(s) == doctest::Approx(0.325082973391448).epsilon(1e-14));
}

TEST_CASE("eigenvalues sum to the squared norm") {
    const LadderState s = random_state(41, 8);
    const ReducedPair p = reduced_eigenvalues(s);
    CHECK(p.s_plus + p.s_minus == doctest::Approx(norm2(s)).epsilon(1e-13));
    CHECK(p.s_minus >= 0.0);
}

TEST_CASE("normalized entropy ignores overall scale, raw entropy does not") {
    LadderState s = random_state(7, 6);
    const double s_norm = entropy(s, true);
    const double s_raw = entropy(s, false);
    CHECK(s_norm == doctest::Approx(s_raw).epsilon(1e-12)); // unit norm here
    for (std::size_t n = 0; n < s.n_max(); ++n) {
        s.c_e[n] *= 0.5;
        s.c_g[n] *= 0.5;
    }
    CHECK(entropy(s, true) == doctest::Approx(s_norm).epsilon(1e-12));
    CHECK(entropy(s, false) < s_raw); // shrinks with the norm
}

TEST_CASE("entropy is invariant under the phase moves used by the integrator") {
    const LadderState s = random_state(11, 7);
    const double base_entropy = entropy(s);
    const double base_inv = inversion(s);
    const double base_mean = mean_excitation(s);

    // per-Fock-level phases phi_n on both branches plus a qubit rotation chi
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    std::vector<double> phi(s.n_max() + 1);
    for (auto& x : phi)
        x = uni(rng);
    const double chi = uni(rng);

    LadderState r(s.n_max());
    for (std::size_t n = 0; n < s.n_max(); ++n) {
        r.c_e[n] = s.c_e[n] * std::polar(1.0, phi[n] - chi);     // Fock n, excited
        r.c_g[n] = s.c_g[n] * std::polar(1.0, phi[n + 1] + chi); // Fock n+1, ground
    }
    CHECK(entropy(r) == doctest::Approx(base_entropy).epsilon(1e-12));
    CHECK(inversion(r) == doctest::Approx(base_inv).epsilon(1e-12));
    CHECK(mean_excitation(r) == doctest::Approx(base_mean).epsilon(1e-12));
    CHECK(norm2(r) == doctest::Approx(norm2(s)).epsilon(1e-12));
}

TEST_CASE("inversion is the branch population difference") {
    LadderState s(2);
    s.c_e[0] = 0.7;
    s.c_g[1] = Complex{0.0, 0.5};
    CHECK(inversion(s) == doctest::Approx(0.49 - 0.25).epsilon(1e-15));
}

TEST_CASE("entropy of a zero-norm state cannot be normalized") {
    CHECK_THROWS_AS(entropy(LadderState(3), true), DegenerateStateError);
    CHECK(entropy(LadderState(3), false) == 0.0);
}

TEST_CASE("make_row mirrors the individual observables") {
    const LadderState s = random_state(17, 5);
    const ObservableRow row = make_row(2.5, s, true);
    CHECK(row.t == 2.5);
    CHECK(row.entropy == doctest::Approx(entropy(s, true)));
    CHECK(row.inversion == doctest::Approx(inversion(s)));
    CHECK(row.norm2 == doctest::Approx(norm2(s)));
    CHECK(row.mean_n == doctest::Approx(mean_excitation(s)));
}
