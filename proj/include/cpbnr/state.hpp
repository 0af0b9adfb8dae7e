// state.hpp -- truncated two-branch Fock ladder and coherent-state setup.
//
// The joint state is stored as amplitude pairs (C_{e,n}, C_{g,n+1}) for
// n = 0..n_max-1.  There is no |g,0> slot: that level is decoupled from
// the excitation-preserving dynamics and never populated by the initial
// states used here.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "cpbnr/errors.hpp"

namespace cpbnr {

using Complex = std::complex<double>;

struct LadderState {
    std::vector<Complex> c_e; // C_{e,n},   n = 0..n_max-1
    std::vector<Complex> c_g; // C_{g,n+1}, n = 0..n_max-1

    LadderState() = default;
    explicit LadderState(std::size_t n_max) : c_e(n_max), c_g(n_max) {
        if (n_max == 0)
            throw ValidationError("LadderState: n_max must be >= 1");
    }

    std::size_t n_max() const { return c_e.size(); }
};

inline void require_well_formed(const LadderState& s, const char* where) {
    if (s.c_e.empty() || s.c_e.size() != s.c_g.size())
        throw ValidationError(std::string(where) +
                              ": ladder branches must be nonempty and equal-sized");
}

// Squared norm <psi|psi>; decays under loss, conserved otherwise.
inline double norm2(const LadderState& s) {
    require_well_formed(s, "norm2");
    double acc = 0.0;
    for (std::size_t n = 0; n < s.n_max(); ++n)
        acc += std::norm(s.c_e[n]) + std::norm(s.c_g[n]);
    return acc;
}

// Mean resonator excitation of the normalized state.
inline double mean_excitation(const LadderState& s) {
    require_well_formed(s, "mean_excitation");
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < s.n_max(); ++n) {
        const double pe = std::norm(s.c_e[n]);
        const double pg = std::norm(s.c_g[n]);
        num += static_cast<double>(n) * pe + static_cast<double>(n + 1) * pg;
        den += pe + pg;
    }
    if (den == 0.0)
        throw DegenerateStateError("mean_excitation: state has zero norm");
    return num / den;
}

// ---- coherent-state preparation ----------------------------------------

struct CoherentSpec {
    double mean_n = 0.0; // |alpha|^2
    double phase = 0.0;  // arg(alpha)

    void validate() const {
        if (!std::isfinite(mean_n) || mean_n < 0.0)
            throw ValidationError("CoherentSpec: meanN must be finite and >= 0");
        if (!std::isfinite(phase))
            throw ValidationError("CoherentSpec: phase must be finite");
    }
};

// Smallest ladder size whose Poisson tail mass falls below tail_tol,
// padded by 10 spare pairs.  The padding costs little and keeps the
// top-pair occupancy guard far away from the physically occupied slots.
inline std::size_t truncation_for(const CoherentSpec& spec, double tail_tol = 1e-10) {
    spec.validate();
    if (!(tail_tol > 0.0) || tail_tol >= 1.0)
        throw ValidationError("truncation_for: tail tolerance must lie in (0,1)");
    const double mu = spec.mean_n;
    double p = std::exp(-mu); // Poisson pmf at n = 0
    double cum = 0.0;
    const std::size_t hard_cap = 100000;
    for (std::size_t n = 1; n <= hard_cap; ++n) {
        cum += p;
        if (1.0 - cum < tail_tol)
            return n + 10;
        p *= mu / static_cast<double>(n);
    }
    throw ValidationError("truncation_for: tail tolerance unreachable in double precision");
}

// Qubit excited, resonator in |alpha>:  C_{e,n}(0) = F_n, C_{g,n+1}(0) = 0,
// built by the cancellation-free recurrence F_{n+1} = F_n * alpha/sqrt(n+1).
inline LadderState initial_state(const CoherentSpec& spec, std::size_t n_max,
                                 double tail_tol = 1e-8) {
    spec.validate();
    if (n_max == 0)
        throw ValidationError("initial_state: n_max must be >= 1");
    LadderState s(n_max);
    const Complex alpha = std::polar(std::sqrt(spec.mean_n), spec.phase);
    Complex f = std::exp(-0.5 * spec.mean_n);
    double captured = 0.0;
    for (std::size_t n = 0; n < n_max; ++n) {
        s.c_e[n] = f;
        captured += std::norm(f);
        f *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    if (1.0 - captured > tail_tol)
        throw TruncationError("initial_state: n_max=" + std::to_string(n_max) +
                              " drops tail mass " + std::to_string(1.0 - captured) +
                              " (allowed " + std::to_string(tail_tol) + ")");
    return s;
}

} // namespace cpbnr
