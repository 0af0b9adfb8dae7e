// test_state.cpp -- ladder storage, norms, and coherent-state preparation.
#include "doctest.h"

#include <cmath>
#include <complex>

#include "cpbnr/state.hpp"

using namespace cpbnr;

TEST_CASE("ladder construction and shape checks") {
    CHECK_THROWS_AS(LadderState(0), ValidationError);
    LadderState s(4);
    CHECK(s.n_max() == 4);
    CHECK(s.c_e.size() == 4);
    CHECK(s.c_g.size() == 4);
    s.c_g.resize(3);
    CHECK_THROWS_AS(norm2(s), ValidationError);
}

TEST_CASE("norm2 sums both branches") {
    LadderState s(2);
    s.c_e[0] = Complex{0.0, 0.6};
    s.c_g[1] = Complex{0.8, 0.0};
    CHECK(norm2(s) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("mean excitation counts the resonator quanta of each branch") {
    LadderState s(3);
    s.c_e[1] = 1.0; // |e, 1>
    CHECK(mean_excitation(s) == doctest::Approx(1.0));
    s = LadderState(3);
    s.c_g[0] = 1.0; // |g, 1>
    CHECK(mean_excitation(s) == doctest::Approx(1.0));
    s = LadderState(3);
    s.c_e[0] = std::sqrt(0.5); // |e, 0>
    s.c_g[1] = std::sqrt(0.5); // |g, 2>
    CHECK(mean_excitation(s) == doctest::Approx(1.0));
    // normalization by the current norm
    s.c_e[0] *= 0.5;
    s.c_g[1] *= 0.5;
    CHECK(mean_excitation(s) == doctest::Approx(1.0));
    CHECK_THROWS_AS(mean_excitation(LadderState(2)), DegenerateStateError);
}

TEST_CASE("coherent spec validation") {
    CHECK_NOTHROW(CoherentSpec{}.validate());
    CHECK_THROWS_AS((CoherentSpec{-1.0, 0.0}.validate()), ValidationError);
    CHECK_THROWS_AS((CoherentSpec{1.0, std::nan("")}.validate()), ValidationError);
}

TEST_CASE("truncation size covers the Poisson tail with padding") {
    CHECK(truncation_for(CoherentSpec{0.0, 0.0}) == 11); // vacuum: 1 slot + 10 pad
    CHECK(truncation_for(CoherentSpec{9.0, 0.0}) == 45);
    // tighter tolerance can only enlarge the ladder
    CHECK(truncation_for(CoherentSpec{9.0, 0.0}, 1e-14) >= 45);
    CHECK_THROWS_AS(truncation_for(CoherentSpec{9.0, 0.0}, 0.0), ValidationError);
    CHECK_THROWS_AS(truncation_for(CoherentSpec{9.0, 0.0}, 1.0), ValidationError);
}

TEST_CASE("initial state is the excited qubit with a coherent resonator") {
    SUBCASE("vacuum") {
        const LadderState s = initial_state(CoherentSpec{0.0, 0.0}, 3);
        CHECK(s.c_e[0] == Complex{1.0, 0.0});
        CHECK(s.c_e[1] == Complex{0.0, 0.0});
        CHECK(norm2(s) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("Poisson weights at meanN = 9") {
        const double mu = 9.0;
        const LadderState s = initial_state(CoherentSpec{mu, 0.0}, 45);
        CHECK(norm2(s) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::norm(s.c_e[9]) == doctest::Approx(0.131755640009523).epsilon(1e-12));
        for (std::size_t n : {0u, 3u, 9u, 20u}) {
            const double pmf =
                std::exp(-mu + static_cast<double>(n) * std::log(mu) - std::lgamma(n + 1.0));
            CHECK(std::norm(s.c_e[n]) == doctest::Approx(pmf).epsilon(1e-12));
        }
        for (std::size_t n = 0; n < s.n_max(); ++n)
            CHECK(s.c_g[n] == Complex{0.0, 0.0});
        CHECK(mean_excitation(s) == doctest::Approx(mu).epsilon(1e-9));
    }
    SUBCASE("phase enters through alpha") {
        const LadderState s = initial_state(CoherentSpec{1.0, 0.7}, 25);
        CHECK(std::arg(s.c_e[1]) == doctest::Approx(0.7).epsilon(1e-14));
        CHECK(std::arg(s.c_e[2]) == doctest::Approx(1.4).epsilon(1e-14));
        CHECK(std::abs(s.c_e[0] - std::exp(-0.5)) < 1e-15);
    }
}

TEST_CASE("initial state rejects truncations that drop real mass") {
    CHECK_THROWS_AS(initial_state(CoherentSpec{9.0, 0.0}, 12), TruncationError);
    CHECK_NOTHROW(initial_state(CoherentSpec{9.0, 0.0}, 12, 0.2));
    CHECK_THROWS_AS(initial_state(CoherentSpec{9.0, 0.0}, 0), ValidationError);
}
