// observables.hpp -- reduced-state quantities recorded along a trajectory.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "cpbnr/errors.hpp"
#include "cpbnr/state.hpp"

namespace cpbnr {

// One output record.  meanN refers to the normalized state; entropy is
// normalized or raw depending on how the row was produced.
struct ObservableRow {
    double t = 0.0;
    double entropy = 0.0;
    double inversion = 0.0;
    double norm2 = 0.0;
    double mean_n = 0.0;
};

struct ReducedPair {
    double s_plus = 0.0;
    double s_minus = 0.0;
};

// Eigenvalues of the 2x2 reduced qubit matrix of the (generally
// unnormalized) pure joint state:
//   A = sum |C_{e,n}|^2,  B = sum |C_{g,n+1}|^2,
//   X = sum C*_{e,n+1} C_{g,n+1}   (coherence between equal Fock slots),
//   s_pm = (A + B +- sqrt((A-B)^2 + 4|X|^2)) / 2.
// They sum to norm2; for a pure product state the pair is (norm2, 0).
inline ReducedPair reduced_eigenvalues(const LadderState& s) {
    require_well_formed(s, "reduced_eigenvalues");
    double a = 0.0, b = 0.0;
    Complex x{0.0, 0.0};
    const std::size_t n = s.n_max();
    for (std::size_t k = 0; k < n; ++k) {
        a += std::norm(s.c_e[k]);
        b += std::norm(s.c_g[k]);
        if (k + 1 < n)
            x += std::conj(s.c_e[k + 1]) * s.c_g[k];
    }
    const double disc = std::sqrt((a - b) * (a - b) + 4.0 * std::norm(x));
    ReducedPair out{0.5 * (a + b + disc), 0.5 * (a + b - disc)};
    // Cauchy-Schwarz bounds s_minus >= 0; only roundoff can undershoot.
    if (out.s_minus < 0.0) {
        if (out.s_minus < -1e-12)
            throw NumericsError("reduced_eigenvalues: eigenvalue " +
                                std::to_string(out.s_minus) + " below clamp window");
        out.s_minus = 0.0;
    }
    return out;
}

// Von Neumann entropy -sum p ln p of the reduced qubit state.  With
// normalize on (default) the eigenvalues are divided by norm2 first;
// the raw variant feeds them in as-is, which makes the entropy of a
// decaying state sink together with its norm.
inline double entropy(const LadderState& s, bool normalize = true) {
    ReducedPair p = reduced_eigenvalues(s);
    if (normalize) {
        const double n2 = p.s_plus + p.s_minus;
        if (n2 == 0.0)
            throw DegenerateStateError("entropy: cannot normalize a zero-norm state");
        p.s_plus /= n2;
        p.s_minus /= n2;
    }
    double acc = 0.0;
    for (double q : {p.s_plus, p.s_minus})
        if (q > 0.0)
            acc -= q * std::log(q);
    return std::max(acc, 0.0);
}

// Excitation inversion: excited-branch minus ground-branch population,
// deliberately unnormalized so loss shows up as a shrinking envelope.
inline double inversion(const LadderState& s) {
    require_well_formed(s, "inversion");
    double acc = 0.0;
    for (std::size_t n = 0; n < s.n_max(); ++n)
        acc += std::norm(s.c_e[n]) - std::norm(s.c_g[n]);
    return acc;
}

inline ObservableRow make_row(double t, const LadderState& s, bool normalize_entropy = true) {
    ObservableRow row;
    row.t = t;
    row.norm2 = norm2(s);
    row.entropy = entropy(s, normalize_entropy);
    row.inversion = inversion(s);
    row.mean_n = mean_excitation(s);
    return row;
}

} // namespace cpbnr
