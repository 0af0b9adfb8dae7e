// model.hpp -- system parameters of the driven qubit/resonator ladder.
//
// All rates and frequencies are expressed in units of the bare pair
// coupling lambda0, time in units of 1/lambda0.  The resonator frequency
// can be shifted by a time profile f(t); the coupling then follows
// lambda(t) = lambda0 * sqrt(1 + f(t)/omega0).
#pragma once

#include <cmath>
#include <string>

#include "cpbnr/errors.hpp"

namespace cpbnr {

// ---- time profiles ---------------------------------------------------

// Scalar control signal: identically zero, a constant, or eta*sin(w't).
// Kept as a tagged value pair instead of std::function so profiles stay
// comparable, serializable and trivially copyable.
struct TimeProfile {
    enum class Kind { zero, constant, sinusoid };

    Kind kind = Kind::zero;
    double value = 0.0;    // constant value, or amplitude eta
    double mod_freq = 0.0; // modulation frequency w' (sinusoid only)

    static TimeProfile zero() { return {}; }

    static TimeProfile constant(double c) {
        if (!std::isfinite(c))
            throw ValidationError("TimeProfile: constant value must be finite");
        return {Kind::constant, c, 0.0};
    }

    static TimeProfile sinusoid(double eta, double omega_prime) {
        if (!std::isfinite(eta) || eta < 0.0)
            throw ValidationError("TimeProfile: sinusoid amplitude must be >= 0");
        if (!std::isfinite(omega_prime) || omega_prime <= 0.0)
            throw ValidationError("TimeProfile: sinusoid frequency must be > 0");
        return {Kind::sinusoid, eta, omega_prime};
    }

    double operator()(double t) const {
        switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::constant: return value;
        case Kind::sinusoid: return value * std::sin(mod_freq * t);
        }
        return 0.0;
    }

    // Closed-form \int_0^t of the profile; used to factor the stiff
    // diagonal phases out of the equations of motion exactly.
    double integral(double t) const {
        switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::constant: return value * t;
        case Kind::sinusoid:
            return value * (1.0 - std::cos(mod_freq * t)) / mod_freq;
        }
        return 0.0;
    }

    bool is_zero() const { return kind == Kind::zero || value == 0.0; }

    bool operator==(const TimeProfile&) const = default;
};

// ---- model parameters -------------------------------------------------

struct ModelParams {
    double omega0 = 2000.0;  // bare resonator frequency
    double omega_c = 2000.0; // qubit transition frequency
    double lambda0 = 1.0;    // pair coupling scale; defines the unit system

    TimeProfile gamma;    // qubit amplitude decay rate (zero/constant)
    TimeProfile delta;    // resonator amplitude decay rate (zero/constant)
    TimeProfile detuning; // resonator frequency shift f(t), any kind

    // Multiplies the coupling; production runs keep 1.0.  Tests set 0 to
    // switch the interaction off and probe the pure-decay solution.
    double coupling_scale = 1.0;

    void validate() const {
        if (!std::isfinite(omega0) || omega0 <= 0.0)
            throw ValidationError("ModelParams: omega0 must be positive");
        if (!std::isfinite(omega_c) || omega_c <= 0.0)
            throw ValidationError("ModelParams: omegaC must be positive");
        if (!std::isfinite(lambda0) || lambda0 <= 0.0)
            throw ValidationError("ModelParams: lambda0 must be positive");
        if (!std::isfinite(coupling_scale) || coupling_scale < 0.0)
            throw ValidationError("ModelParams: coupling scale must be >= 0");
        check_loss(gamma, "gamma");
        check_loss(delta, "delta");
        if (detuning.kind == TimeProfile::Kind::constant &&
            1.0 + detuning.value / omega0 <= 0.0)
            throw ValidationError("ModelParams: constant detuning must keep omega0 + f > 0");
        if (detuning.kind == TimeProfile::Kind::sinusoid && detuning.value >= omega0)
            throw ValidationError("ModelParams: detuning amplitude eta must stay below omega0");
    }

    // Instantaneous resonator frequency omega0 + f(t).
    double omega_at(double t) const { return omega0 + detuning(t); }

    // Instantaneous pair coupling lambda0 * sqrt(1 + f(t)/omega0).
    double coupling_at(double t) const {
        const double radicand = 1.0 + detuning(t) / omega0;
        if (radicand <= 0.0)
            throw DomainError("coupling_at: omega(t) dropped to or below zero at t=" +
                              std::to_string(t));
        return coupling_scale * lambda0 * std::sqrt(radicand);
    }

    // \int_0^t omega(s) ds, exact for every supported profile.
    double frequency_integral(double t) const {
        return omega0 * t + detuning.integral(t);
    }

  private:
    static void check_loss(const TimeProfile& p, const char* name) {
        if (p.kind == TimeProfile::Kind::sinusoid)
            throw ValidationError(std::string("ModelParams: ") + name +
                                  " must be zero or constant");
        if (p.value < 0.0 || !std::isfinite(p.value))
            throw ValidationError(std::string("ModelParams: ") + name +
                                  " must be a finite rate >= 0");
    }
};

} // namespace cpbnr
