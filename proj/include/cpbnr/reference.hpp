// reference.hpp -- slow, independent cross-checks for the RK4 integrator.
//
// Everything here deliberately avoids the co-rotating gauge used by
// integrate(): the generator is assembled as a dense lab-frame matrix and
// the state is advanced with matrix-exponential actions over piecewise-
// frozen coefficients, so the two code paths share no algebra beyond the
// model definition itself.  Entropies are recomputed from an explicit
// partial trace and a dense eigensolve rather than the closed 2x2 form.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cpbnr/errors.hpp"
#include "cpbnr/model.hpp"
#include "cpbnr/state.hpp"

namespace cpbnr {

// Dense-oracle size limit; the production integrator has no such cap.
inline constexpr std::size_t k_reference_max_pairs = 64;

// ---- vector packing --------------------------------------------------------

// Stacks the amplitudes as [c_e[0..N-1], c_g[0..N-1]].
inline Eigen::VectorXcd to_vector(const LadderState& s) {
    const auto n = static_cast<Eigen::Index>(s.n_max());
    Eigen::VectorXcd out(2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out(k) = s.c_e[static_cast<std::size_t>(k)];
        out(n + k) = s.c_g[static_cast<std::size_t>(k)];
    }
    return out;
}

inline LadderState from_vector(const Eigen::VectorXcd& v) {
    if (v.size() % 2 != 0 || v.size() == 0)
        throw ValidationError("from_vector: length must be a positive even number");
    const Eigen::Index n = v.size() / 2;
    LadderState s(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        s.c_e[static_cast<std::size_t>(k)] = v(k);
        s.c_g[static_cast<std::size_t>(k)] = v(n + k);
    }
    return s;
}

// ---- generator -------------------------------------------------------------

// Dense matrix G(t) with dY/dt = G(t) Y for the stacked amplitude vector.
inline Eigen::MatrixXcd build_generator(const ModelParams& params, double t, std::size_t n_max) {
    if (n_max == 0)
        throw ValidationError("build_generator: n_max must be positive");
    if (n_max > k_reference_max_pairs)
        throw DimensionError("build_generator: dense reference capped at " +
                             std::to_string(k_reference_max_pairs) + " pairs, got " +
                             std::to_string(n_max));
    const double w = params.omega_at(t);
    const double lam = params.coupling_at(t);
    const double g = params.gamma(t);
    const double d = params.delta(t);
    const double half_wc = 0.5 * params.omega_c;
    const auto n = static_cast<Eigen::Index>(n_max);

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double dn = static_cast<double>(k);
        m(k, k) = Complex{-(g + dn * d), -(dn * w + half_wc)};
        m(n + k, n + k) = Complex{-(dn + 1.0) * d, -((dn + 1.0) * w - half_wc)};
        m(k, n + k) = Complex{0.0, -lam * (dn + 1.0)};
        m(n + k, k) = Complex{0.0, -lam * (dn + 1.0)};
    }
    return m;
}

namespace detail {

// y <- exp(a) y via scaling plus a Taylor series of matrix-vector products.
inline void expm_action(const Eigen::MatrixXcd& a, Eigen::VectorXcd& y) {
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int s = 0;
    if (norm1 > 0.5)
        s = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    const double scale = std::ldexp(1.0, -s);
    const Eigen::MatrixXcd b = a * scale;

    const std::int64_t reps = std::int64_t{1} << s;
    for (std::int64_t r = 0; r < reps; ++r) {
        Eigen::VectorXcd acc = y;
        Eigen::VectorXcd term = y;
        bool converged = false;
        for (int j = 1; j <= 60; ++j) {
            term = (b * term) / static_cast<double>(j);
            acc += term;
            if (term.cwiseAbs().maxCoeff() <= 1e-18 * (1.0 + acc.cwiseAbs().maxCoeff())) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw NumericsError("expm_action: series failed to converge");
        y = acc;
    }
}

// Single pass with the generator frozen at each subinterval midpoint.
inline Eigen::VectorXcd propagate_with_pieces(const ModelParams& params,
                                              const Eigen::VectorXcd& y0, double t_end,
                                              std::int64_t pieces, std::size_t n_max) {
    Eigen::VectorXcd y = y0;
    const double dt = t_end / static_cast<double>(pieces);
    for (std::int64_t p = 0; p < pieces; ++p) {
        const double mid = (static_cast<double>(p) + 0.5) * dt;
        const Eigen::MatrixXcd g = build_generator(params, mid, n_max) * dt;
        expm_action(g, y);
    }
    return y;
}

} // namespace detail

// Advances the initial state to t_end, refining the time grid until two
// consecutive resolutions agree to `tol` in every amplitude.  `max_rungs`
// bounds the number of refinement attempts (each one doubles the grid).
inline LadderState reference_propagate(const ModelParams& params, const LadderState& initial,
                                       double t_end, double tol = 1e-10, int max_rungs = 16) {
    params.validate();
    require_well_formed(initial, "reference_propagate");
    if (!std::isfinite(t_end) || t_end <= 0.0)
        throw ValidationError("reference_propagate: t_end must be positive");
    if (!std::isfinite(tol) || tol <= 0.0)
        throw ValidationError("reference_propagate: tol must be positive");
    if (max_rungs < 1)
        throw ValidationError("reference_propagate: max_rungs must be >= 1");
    const std::size_t n_max = initial.n_max();
    build_generator(params, 0.0, n_max); // size and parameter checks up front

    const Eigen::VectorXcd y0 = to_vector(initial);
    std::int64_t pieces = 64;
    Eigen::VectorXcd prev = detail::propagate_with_pieces(params, y0, t_end, pieces, n_max);
    double diff = std::numeric_limits<double>::infinity();
    for (int rung = 0; rung < max_rungs; ++rung) {
        pieces *= 2;
        Eigen::VectorXcd next = detail::propagate_with_pieces(params, y0, t_end, pieces, n_max);
        diff = (next - prev).cwiseAbs().maxCoeff();
        if (diff <= tol)
            return from_vector(next);
        prev = std::move(next);
    }
    throw ConvergenceError("reference_propagate: grid refinement stalled at " +
                           std::to_string(pieces) + " pieces, residual " + std::to_string(diff));
}

// ---- partial-trace entropy --------------------------------------------------

enum class Subsystem { cpb, resonator };

// Von Neumann entropy of one side of the pure state, from an explicit
// reduced density matrix and a dense Hermitian eigensolve.  With
// `normalize` set the state is first rescaled to unit norm, matching the
// conditional (no-loss-record) convention of observables.hpp.
inline double partial_trace_entropy(const LadderState& s, Subsystem side, bool normalize = true) {
    require_well_formed(s, "partial_trace_entropy");
    const std::size_t n_max = s.n_max();
    const auto fock_dim = static_cast<Eigen::Index>(n_max + 1);

    // psi(q, n): q = 0 excited, q = 1 ground; n = 0..n_max Fock levels.
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(2, fock_dim);
    for (std::size_t k = 0; k < n_max; ++k) {
        psi(0, static_cast<Eigen::Index>(k)) = s.c_e[k];
        psi(1, static_cast<Eigen::Index>(k) + 1) = s.c_g[k];
    }

    Eigen::MatrixXcd rho;
    if (side == Subsystem::cpb)
        rho = psi * psi.adjoint(); // 2 x 2
    else
        rho = psi.transpose() * psi.conjugate(); // (n_max+1) x (n_max+1)

    const double trace = rho.trace().real();
    if (!(trace > 0.0))
        throw DegenerateStateError("partial_trace_entropy: state has zero norm");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
    solver.compute(rho, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericsError("partial_trace_entropy: eigensolve failed");

    const double scale = normalize ? trace : 1.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        double q = solver.eigenvalues()(i) / scale;
        if (q < -1e-9)
            throw NumericsError("partial_trace_entropy: reduced matrix not positive, eigenvalue " +
                                std::to_string(q));
        if (q > 0.0)
            acc -= q * std::log(q);
    }
    return std::max(acc, 0.0);
}

// Both subsystem entropies of the same snapshot; for a pure state they
// agree up to floating-point noise, which makes the pair a useful
// consistency probe.
inline std::pair<double, double> entropy_both_sides(const LadderState& s, bool normalize = true) {
    return {partial_trace_entropy(s, Subsystem::cpb, normalize),
            partial_trace_entropy(s, Subsystem::resonator, normalize)};
}

} // namespace cpbnr
