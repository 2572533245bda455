#pragma once

#include "dampwave/charpoly.hpp"
#include "dampwave/forcing.hpp"
#include "dampwave/propagator.hpp"
#include "dampwave/spectrum.hpp"

#include <complex>
#include <vector>

namespace dampwave {

// coef * tau^power * exp(rate * tau); the fundamental solution and its
// derivative are sums of such terms (real part taken at the end).
struct KernelTerm {
    std::complex<double> coef;
    int power = 0;
    std::complex<double> rate;
};

// derivative 0: G with G(0)=0, G'(0)=1; derivative 1: G'.
std::vector<KernelTerm> kernel_terms(const CharRoots& r, int derivative);

// Null-data response to f at time t, exact for segment and sample forcings.
// Periodic forcings (period > 0) are unrolled over [0, t].
ModeState forced_mode(const CharRoots& r, const ModeForcing& f, double t);

// Response with data ic plus forcing f.
ModeState solve_mode(const CharRoots& r, const ModeIC& ic, const ModeForcing& f, double t);

// Response to f = 1 with null data for given roots; cancellation-free for tiny slow roots.
ModeState unit_step_response(const CharRoots& r, double t);

// f = 1 with null data, written in the form that avoids cancellation for tiny slow roots.
ModeState constant_forcing_mode(const DampingParams& p, double lambda, double t);

// f(s) = cos(b (T - s) - pi/4) with null data, evaluated at T (oscillatory modes only).
ModeState resonant_mode_response(const DampingParams& p, double lambda, double T);

struct ModeTrajectory {
    std::vector<double> times;
    std::vector<double> u;
    std::vector<double> up;
    double max_error_estimate = 0.0;
    bool accuracy_warning = false;
};

// Step-by-step convolution with composite 12-point Gauss panels graded toward
// the kernel's decay scales and split at forcing breakpoints.
ModeTrajectory duhamel_quadrature(const CharRoots& r, const ModeForcing& f, const std::vector<double>& t_grid,
                                  double tol, const ModeIC& ic = {});

// Exact trajectory on a nondecreasing grid, advanced step by step: the state is
// propagated homogeneously and only the forcing inside each step is integrated.
ModeTrajectory exact_trajectory(const CharRoots& r, const ModeForcing& f, const ModeIC& ic,
                                const std::vector<double>& t_grid);

// Unique solution bounded on the whole line for periodic f (period > 0).
ModeState line_bounded_mode(const CharRoots& r, const ModeForcing& f, double t);

struct AttractionReport {
    double fitted_rate = 0.0;
    double slow_rate = 0.0;
    double relative_error = 0.0;
    double initial_gap = 0.0;
    double final_gap = 0.0;
};

// Fits the decay of |u_ic - u_line| (energy-weighted) over [horizon/2, horizon].
AttractionReport asymptotic_attraction_check(const CharRoots& r, const ModeForcing& f, const ModeIC& ic,
                                             double horizon);

// max over x >= 0 of exp(-x) max(x^b, x^c), located numerically.
double kernel_bound_constant(double b, double c);

// Forced trajectories for every mode, exact per-mode evaluation at each time.
Trajectory forced_solve(const SpectrumModel& m, const DampingParams& p, const ForcingSpec& f,
                        const std::vector<double>& t_grid, int threads = 1, const SpectralVector* U0 = nullptr,
                        const SpectralVector* U1 = nullptr);

// Smoothed periodic square wave of the given period: +1 / -1 halves joined by ramps.
ModeForcing smoothed_square_wave(double period, double amplitude, double ramp_fraction);

}  // namespace dampwave
