// dynamics.hpp -- fixed-step RK4 propagation of the amplitude ladder.
//
// The equations of motion for pair n are
//   dC_{e,n}/dt   = (-i n w(t) - i wc/2 - gamma(t) - n delta(t)) C_{e,n}
//                   - i lambda(t) (n+1) C_{g,n+1}
//   dC_{g,n+1}/dt = (-i (n+1) w(t) + i wc/2 - (n+1) delta(t)) C_{g,n+1}
//                   - i lambda(t) (n+1) C_{e,n}.
// The diagonal carries phases up to n_max * omega0 per time unit, far too
// stiff for an explicit stepper at any practical step size, but it is
// exactly integrable for every supported profile.  integrate() therefore
// rotates it out analytically (amplitudes u_n, v_n in the co-rotating
// gauge with the loss kept explicit),
//   C_{e,n}   = exp(-i (n W(t) + wc t/2)) u_n,   W(t) = \int_0^t w,
//   C_{g,n+1} = exp(-i ((n+1) W(t) - wc t/2)) v_n,
// and runs RK4 on the slow remainder
//   du_n/dt = -(gamma + n delta) u_n - i lambda(t)(n+1) e^{-i phi(t)} v_n,
//   dv_n/dt = -(n+1) delta v_n    - i lambda(t)(n+1) e^{+i phi(t)} u_n,
// with phi(t) = W(t) - wc t.  This is a change of variables, not an
// approximation: recorded amplitudes solve the original equations.  The
// gauge is a product of local phase rotations, so |u_n| = |C_{e,n}| and
// |v_n| = |C_{g,n+1}| hold exactly and every recorded observable can be
// evaluated directly from (u, v), avoiding sin/cos of ~1e6 rad arguments.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "cpbnr/errors.hpp"
#include "cpbnr/model.hpp"
#include "cpbnr/observables.hpp"
#include "cpbnr/state.hpp"

namespace cpbnr {

// ---- plan and results ---------------------------------------------------

struct IntegrationPlan {
    double t_end = 25.0;
    double step = 5e-5;
    std::int64_t record_every = 200;
};

struct RecordOptions {
    bool keep_states = false;       // retain a lab-frame snapshot per record
    bool normalize_entropy = true;  // entropy of the conditional state
    double overflow_tol = 1e-8;     // top-pair occupancy guard
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ObservableRow> rows;
    std::vector<LadderState> states; // filled when keep_states is set
    LadderState final_state;         // lab-frame amplitudes at t_end
};

// Number of RK4 steps encoded by the plan; throws if the grid is inconsistent.
inline std::int64_t plan_steps(const IntegrationPlan& plan) {
    if (!std::isfinite(plan.t_end) || plan.t_end <= 0.0)
        throw ValidationError("IntegrationPlan: tEnd must be positive");
    if (!std::isfinite(plan.step) || plan.step <= 0.0)
        throw ValidationError("IntegrationPlan: stepSize must be positive");
    if (plan.record_every < 1)
        throw ValidationError("IntegrationPlan: recordEvery must be >= 1");
    const auto steps = static_cast<std::int64_t>(std::llround(plan.t_end / plan.step));
    if (steps < 1 || std::abs(steps * plan.step - plan.t_end) > 1e-9 * std::max(1.0, plan.t_end))
        throw ValidationError("IntegrationPlan: tEnd must be an integer number of steps");
    if (steps % plan.record_every != 0)
        throw ValidationError("IntegrationPlan: recordEvery must divide the step count");
    return steps;
}

inline void check_plan(const ModelParams& params, const IntegrationPlan& plan) {
    plan_steps(plan);
    if (plan.step * std::max(params.omega0, params.omega_c) > 0.25 + 1e-12)
        throw ValidationError("IntegrationPlan: step too coarse, need stepSize*max(omega0, omegaC) <= 0.25");
}

// ---- literal right-hand side ---------------------------------------------

// Time derivative of the lab-frame amplitudes, transcribed term by term.
// Used by the unit tests and the single-step driver; integrate() works in
// the rotated gauge instead.
inline LadderState derivative(const ModelParams& params, double t, const LadderState& s) {
    require_well_formed(s, "derivative");
    const double w = params.omega_at(t);
    const double lam = params.coupling_at(t);
    const double g = params.gamma(t);
    const double d = params.delta(t);
    const double half_wc = 0.5 * params.omega_c;
    const std::size_t n_max = s.n_max();

    LadderState out(n_max);
    for (std::size_t n = 0; n < n_max; ++n) {
        const double dn = static_cast<double>(n);
        const Complex diag_e{-(g + dn * d), -(dn * w + half_wc)};
        const Complex diag_g{-(dn + 1.0) * d, -((dn + 1.0) * w - half_wc)};
        const Complex hop{0.0, -lam * (dn + 1.0)};
        out.c_e[n] = diag_e * s.c_e[n] + hop * s.c_g[n];
        out.c_g[n] = diag_g * s.c_g[n] + hop * s.c_e[n];
    }
    return out;
}

// One classical RK4 step on the literal right-hand side.
inline LadderState rk4_step(const ModelParams& params, double t, const LadderState& s, double h) {
    if (!std::isfinite(h) || h == 0.0)
        throw ValidationError("rk4_step: step size must be finite and nonzero");
    const std::size_t n_max = s.n_max();
    LadderState stage(n_max);

    const LadderState k1 = derivative(params, t, s);
    for (std::size_t n = 0; n < n_max; ++n) {
        stage.c_e[n] = s.c_e[n] + 0.5 * h * k1.c_e[n];
        stage.c_g[n] = s.c_g[n] + 0.5 * h * k1.c_g[n];
    }
    const LadderState k2 = derivative(params, t + 0.5 * h, stage);
    for (std::size_t n = 0; n < n_max; ++n) {
        stage.c_e[n] = s.c_e[n] + 0.5 * h * k2.c_e[n];
        stage.c_g[n] = s.c_g[n] + 0.5 * h * k2.c_g[n];
    }
    const LadderState k3 = derivative(params, t + 0.5 * h, stage);
    for (std::size_t n = 0; n < n_max; ++n) {
        stage.c_e[n] = s.c_e[n] + h * k3.c_e[n];
        stage.c_g[n] = s.c_g[n] + h * k3.c_g[n];
    }
    const LadderState k4 = derivative(params, t + h, stage);

    LadderState out(n_max);
    const double w = h / 6.0;
    for (std::size_t n = 0; n < n_max; ++n) {
        out.c_e[n] = s.c_e[n] + w * (k1.c_e[n] + 2.0 * k2.c_e[n] + 2.0 * k3.c_e[n] + k4.c_e[n]);
        out.c_g[n] = s.c_g[n] + w * (k1.c_g[n] + 2.0 * k2.c_g[n] + 2.0 * k3.c_g[n] + k4.c_g[n]);
        if (!std::isfinite(out.c_e[n].real()) || !std::isfinite(out.c_e[n].imag()) ||
            !std::isfinite(out.c_g[n].real()) || !std::isfinite(out.c_g[n].imag()))
            throw NumericsError("rk4_step: non-finite amplitude at t=" + std::to_string(t));
    }
    return out;
}

// ---- trajectory integration ----------------------------------------------

namespace detail {

// Gauge-frame slope evaluation shared by the four RK4 stages.
struct StageCoeffs {
    double g = 0.0, d = 0.0, lam = 0.0;
    Complex eph{1.0, 0.0}; // e^{-i phi(s)}
};

inline StageCoeffs stage_coeffs(const ModelParams& params, double s) {
    StageCoeffs c;
    c.g = params.gamma(s);
    c.d = params.delta(s);
    c.lam = params.coupling_at(s);
    const double phi = (params.omega0 - params.omega_c) * s + params.detuning.integral(s);
    c.eph = Complex{std::cos(phi), -std::sin(phi)};
    return c;
}

inline void gauge_slopes(const StageCoeffs& c, const std::vector<Complex>& u,
                         const std::vector<Complex>& v, std::vector<Complex>& du,
                         std::vector<Complex>& dv) {
    const std::size_t n_max = u.size();
    const Complex hop_e = Complex{0.0, -1.0} * c.lam * c.eph;
    const Complex hop_g = Complex{0.0, -1.0} * c.lam * std::conj(c.eph);
    for (std::size_t n = 0; n < n_max; ++n) {
        const double dn = static_cast<double>(n);
        du[n] = -(c.g + dn * c.d) * u[n] + (dn + 1.0) * hop_e * v[n];
        dv[n] = -((dn + 1.0) * c.d) * v[n] + (dn + 1.0) * hop_g * u[n];
    }
}

} // namespace detail

inline Trajectory integrate(const ModelParams& params, const LadderState& initial,
                            const IntegrationPlan& plan, const RecordOptions& opts = {}) {
    params.validate();
    require_well_formed(initial, "integrate");
    check_plan(params, plan);
    const std::int64_t steps = plan_steps(plan);
    const std::size_t n_max = initial.n_max();

    std::vector<Complex> u = initial.c_e;
    std::vector<Complex> v = initial.c_g;
    std::vector<Complex> k1u(n_max), k1v(n_max), k2u(n_max), k2v(n_max);
    std::vector<Complex> k3u(n_max), k3v(n_max), k4u(n_max), k4v(n_max);
    std::vector<Complex> su(n_max), sv(n_max);

    Trajectory traj;
    const std::int64_t n_records = steps / plan.record_every + 1;
    traj.times.reserve(n_records);
    traj.rows.reserve(n_records);
    if (opts.keep_states)
        traj.states.reserve(n_records);

    LadderState gauge(n_max); // snapshot with the fast phases rotated out

    auto restore_phases = [&](double t) {
        // Lab-frame amplitudes from the gauge snapshot.
        const double w_int = params.frequency_integral(t);
        const double half_wc_t = 0.5 * params.omega_c * t;
        LadderState lab(n_max);
        for (std::size_t n = 0; n < n_max; ++n) {
            const double dn = static_cast<double>(n);
            lab.c_e[n] = gauge.c_e[n] * std::polar(1.0, -(dn * w_int + half_wc_t));
            lab.c_g[n] = gauge.c_g[n] * std::polar(1.0, -((dn + 1.0) * w_int - half_wc_t));
        }
        return lab;
    };

    for (std::int64_t step = 0;; ++step) {
        if (step % plan.record_every == 0) {
            const double t = static_cast<double>(step) * plan.step;
            for (std::size_t n = 0; n < n_max; ++n) {
                gauge.c_e[n] = u[n];
                gauge.c_g[n] = v[n];
                if (!std::isfinite(gauge.c_e[n].real()) || !std::isfinite(gauge.c_e[n].imag()) ||
                    !std::isfinite(gauge.c_g[n].real()) || !std::isfinite(gauge.c_g[n].imag()))
                    throw NumericsError("integrate: non-finite amplitude at t=" +
                                        std::to_string(t));
            }
            const double top = std::norm(gauge.c_e[n_max - 1]) + std::norm(gauge.c_g[n_max - 1]);
            if (top > opts.overflow_tol)
                throw TruncationOverflowError(
                    "integrate: top-pair occupancy " + std::to_string(top) +
                    " exceeded " + std::to_string(opts.overflow_tol) +
                    " at t=" + std::to_string(t) + "; enlarge n_max");
            traj.times.push_back(t);
            traj.rows.push_back(make_row(t, gauge, opts.normalize_entropy));
            if (opts.keep_states)
                traj.states.push_back(restore_phases(t));
            if (step == steps) {
                traj.final_state = restore_phases(t);
                break;
            }
        }
        const double t = static_cast<double>(step) * plan.step;
        const double h = plan.step;
        const auto c1 = detail::stage_coeffs(params, t);
        const auto c2 = detail::stage_coeffs(params, t + 0.5 * h);
        const auto c4 = detail::stage_coeffs(params, t + h);

        detail::gauge_slopes(c1, u, v, k1u, k1v);
        for (std::size_t n = 0; n < n_max; ++n) {
            su[n] = u[n] + 0.5 * h * k1u[n];
            sv[n] = v[n] + 0.5 * h * k1v[n];
        }
        detail::gauge_slopes(c2, su, sv, k2u, k2v);
        for (std::size_t n = 0; n < n_max; ++n) {
            su[n] = u[n] + 0.5 * h * k2u[n];
            sv[n] = v[n] + 0.5 * h * k2v[n];
        }
        detail::gauge_slopes(c2, su, sv, k3u, k3v);
        for (std::size_t n = 0; n < n_max; ++n) {
            su[n] = u[n] + h * k3u[n];
            sv[n] = v[n] + h * k3v[n];
        }
        detail::gauge_slopes(c4, su, sv, k4u, k4v);
        const double w6 = h / 6.0;
        for (std::size_t n = 0; n < n_max; ++n) {
            u[n] += w6 * (k1u[n] + 2.0 * k2u[n] + 2.0 * k3u[n] + k4u[n]);
            v[n] += w6 * (k1v[n] + 2.0 * k2v[n] + 2.0 * k3v[n] + k4v[n]);
        }
    }
    return traj;
}

} // namespace cpbnr
