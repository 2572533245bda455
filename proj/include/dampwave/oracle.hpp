#pragma once

#include "dampwave/charpoly.hpp"
#include "dampwave/duhamel.hpp"
#include "dampwave/forcing.hpp"
#include "dampwave/propagator.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace dampwave {

// Reference solutions for tests and certification; never used by the solvers themselves.

enum class OracleMethod {
    Auto,         // exponential integrator for stiff real pairs, 7/8 Runge-Kutta otherwise
    Dopri45,
    Fehlberg78,
    Exponential,  // matrix exponential of the companion system, forcing interpolated at Gauss points
};

struct OracleConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-13;
    long max_steps = 2000000;
    OracleMethod method = OracleMethod::Auto;

    void validate() const;
};

// Raised when the oracle cannot produce a trustworthy answer (stiffness guard,
// step budget, under-resolved kernel). Callers treat it as a skip, never a pass.
class OracleFailure : public std::runtime_error {
public:
    explicit OracleFailure(const std::string& what) : std::runtime_error(what) {}
};

// Beyond this ratio x1/x2 the oracle refuses.
inline constexpr double kOracleStiffnessLimit = 1e8;
// Auto switches to the exponential integrator above this ratio.
inline constexpr double kOracleStiffSwitch = 50.0;

ModeTrajectory integrate_mode(const DampingParams& p, double lambda, const ModeForcing& f, const ModeIC& ic,
                              const std::vector<double>& t_grid, const OracleConfig& cfg = {});

struct BruteForceResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

// int_0^t K(t - s) f(s) ds with f given at s_j = j dt, j = 0..N (t = N dt), where K is the
// fundamental solution (derivative 0) or its derivative (1). The kernel is propagated by
// repeated multiplication with exp(dt M); the sum is trapezoid plus one Richardson step.
BruteForceResult convolve_bruteforce(const CharRoots& r, const std::vector<double>& f_samples, double dt,
                                     int derivative = 0);

// Uniform samples of f on [0, t] with at least `per_unit` points per unit time; N is even.
std::vector<double> sample_uniform(const ModeForcing& f, double t, double per_unit, double& dt_out);

}  // namespace dampwave
