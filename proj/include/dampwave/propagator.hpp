#pragma once

#include "dampwave/charpoly.hpp"
#include "dampwave/spectrum.hpp"

#include <cstddef>
#include <vector>

namespace dampwave {

struct ModeIC {
    double u0 = 0.0;
    double u1 = 0.0;
};

struct ModeState {
    double u = 0.0;
    double up = 0.0;
};

// Exponentials below this log value are flushed to exact zero.
inline constexpr double kLogUnderflow = -745.0;

// exp(x), or 0 when x is below the underflow threshold.
double flushed_exp(double x);

ModeState homogeneous_mode(const CharRoots& r, const ModeIC& ic, double t);

// exp(log_weight) * d^m u / dt^m at time t, every factor combined in log form
// so huge Sobolev weights can meet tiny exponentials.
double mode_derivative_lw(const CharRoots& r, const ModeIC& ic, double t, int m, double log_weight);

// lambda^weight * d^m u / dt^m.
double mode_derivative(const CharRoots& r, const ModeIC& ic, double t, int m, double weight = 0.0);

// Time samples of (U, U') for every mode; row-major [time][mode].
struct Trajectory {
    std::vector<double> times;
    std::size_t modes = 0;
    std::vector<double> u;
    std::vector<double> up;

    Trajectory() = default;
    Trajectory(std::vector<double> t, std::size_t k)
        : times(std::move(t)), modes(k), u(times.size() * k, 0.0), up(times.size() * k, 0.0) {}

    double& u_at(std::size_t ti, std::size_t k) { return u[ti * modes + k]; }
    double& up_at(std::size_t ti, std::size_t k) { return up[ti * modes + k]; }
    double u_at(std::size_t ti, std::size_t k) const { return u[ti * modes + k]; }
    double up_at(std::size_t ti, std::size_t k) const { return up[ti * modes + k]; }
    SpectralVector u_slice(std::size_t ti) const;
    SpectralVector up_slice(std::size_t ti) const;
};

Trajectory homogeneous_solve(const SpectrumModel& m, const DampingParams& p, const SpectralVector& U0,
                             const SpectralVector& U1, const std::vector<double>& t_grid, int threads = 1);

struct GapScanConfig {
    double alpha0 = 0.0;
    double alpha1 = 0.0;
    std::vector<double> t_grid;
    std::vector<double> lambda_grid;  // must be eigenvalues of the model
};

struct GapRow {
    double lambda = 0.0;
    double amplification = 0.0;
    double t_at_max = 0.0;
    int ic_at_max = 0;  // 0: (1,0), 1: (0,1), 2: (1,1)
};

// Per-lambda amplification factor of the phase-space norm.
std::vector<GapRow> gap_scan(const SpectrumModel& m, const DampingParams& p, const GapScanConfig& cfg,
                             int threads = 1);

// log-spaced times in [t_min, t_max] with t = 0 prepended.
std::vector<double> log_time_grid(double t_min, double t_max, std::size_t per_decade, bool with_zero = true);

// sup over the spectrum of lambda^{alpha1 - (m-1) gamma} |u^{(m)}(t)| for data (0, lambda^{-alpha1}).
double derivative_gap_probe(const SpectrumModel& m, const DampingParams& p, double alpha1, int m_deriv, double t);

// sup over the spectrum of lambda^{alpha0 + m(sigma-1)} |u^{(m)}(t)| for unit data
// (lambda^{-alpha0}, 0) and (0, lambda^{-alpha1}); meaningful for sigma >= 1, t > 0.
double forward_regularity_probe(const SpectrumModel& m, const DampingParams& p, double alpha0, double alpha1,
                                int m_deriv, double t);

// sup over the spectrum of lambda^alpha |u(t)| for unit data in H (either slot).
double smoothing_probe(const SpectrumModel& m, const DampingParams& p, double alpha, double t);

}  // namespace dampwave
