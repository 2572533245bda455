#pragma once

#include "dampwave/charpoly.hpp"
#include "dampwave/forcing.hpp"
#include "dampwave/propagator.hpp"
#include "dampwave/spectrum.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace dampwave {

// ---- membership across truncation levels ----

enum class Membership { Converged, Diverging, Inconclusive };
std::string to_string(Membership m);

struct MembershipThresholds {
    double converge_ratio = 0.9;  // tail increment ratios at or below this count as geometric decay
    std::size_t min_levels = 8;
};

struct MembershipVerdict {
    Membership tag = Membership::Inconclusive;
    double rate = 0.0;  // slope of log(increment) per level
    std::string detail;
};

// partial_sums[j] = weighted sum over the first K_j modes, K_j increasing geometrically.
MembershipVerdict membership_diagnosis(const std::vector<double>& partial_sums,
                                       const MembershipThresholds& th = {});

// ---- growth fits ----

enum class GrowthKind { PowerLaw, Logarithmic, Bounded, Inconclusive };
std::string to_string(GrowthKind g);

struct GrowthThresholds {
    double min_r2 = 0.99;
    double min_exponent = 0.05;
    double bounded_ratio = 1.2;  // max / median
    double min_decades = 3.0;
};

struct GrowthFit {
    GrowthKind kind = GrowthKind::Inconclusive;
    double exponent = 0.0;   // power-law slope
    double log_slope = 0.0;  // d norm / d log(1+t)
    double r2_power = 0.0;
    double r2_log = 0.0;
};

GrowthFit fit_growth(const std::vector<double>& times, const std::vector<double>& norms,
                     const GrowthThresholds& th = {});

// ---- energy inequality and L^2-in-time statements ----

struct EnergyLedger {
    std::vector<double> times;        // even-index grid points where the ledger is evaluated
    std::vector<double> energy;       // |A^{s/2} u'|^2 + |A^{(s+1)/2} u|^2
    std::vector<double> dissipation;  // 3 delta int |A^s u'|^2
    std::vector<double> source;       // (1/delta) int |f|^2
};

struct EnergyReport {
    EnergyLedger ledger;
    double min_margin = 0.0;        // min over t of source - energy - dissipation
    double final_source = 0.0;
    double quadrature_error = 0.0;  // Richardson estimate for the two integrals
    bool quadrature_ok = true;      // error below 1% of the source integral
    bool violated = false;          // margin below -tol * source somewhere
};

// traj from null data on a uniform grid starting at 0 with a multiple of 4 intervals.
EnergyReport energy_check(const Trajectory& traj, const ForcingSpec& f, const SpectrumModel& m,
                          const DampingParams& p, double tol = 1e-9);

struct L2Integrals {
    double uprime = 0.0;  // int_0^T |A^sigma u'|^2
    double u = 0.0;       // int_0^T |A^alpha_u u|^2
    double alpha_u = 0.0;
};

// Time integrals of the L^2 statements; the u part requires sigma in [0, 1] unless
// alpha_u_override is given (>= 0).
L2Integrals l2_integrals(const Trajectory& traj, const SpectrumModel& m, const DampingParams& p,
                         double alpha_u_override = -1.0);

struct L2StabilityRow {
    std::size_t K = 0;
    L2Integrals integrals;
};

struct L2Report {
    std::vector<L2StabilityRow> rows;
    double max_rel_change_uprime = 0.0;
    double max_rel_change_u = 0.0;
    bool stable = false;
};

// Runs the two integrals for each truncation K (prefixes of the forcing modes) and checks the
// relative change between consecutive K stays within rel_tol.
L2Report l2_regularity_check(const SpectrumModel& full, const ForcingSpec& f, const DampingParams& p, double T,
                             std::size_t intervals, const std::vector<std::size_t>& Ks, double rel_tol = 0.01,
                             double alpha_u_override = -1.0, int threads = 1);

// ---- composite Simpson with Richardson estimate on a uniform grid ----

struct SimpsonResult {
    std::vector<double> cumulative;  // at even grid indices 0, 2, 4, ...
    double error = 0.0;              // |S_h - S_2h| / 15 at the end point
};
SimpsonResult simpson_cumulative(const std::vector<double>& y, double h);

// ---- boundedness sweep ----

enum class Component { U, UPrime };
std::string to_string(Component c);

// sup over |f| <= 1 of |d^c u(t)| for a single mode with null data, i.e. the
// L^1(0, t) norm of the fundamental solution (c = 0) or its derivative (c = 1).
double worst_case_mode_response(const CharRoots& r, Component c, double t);

enum class BoundVerdict { Bounded, Growing, UnboundedInLambda, Inconclusive };
std::string to_string(BoundVerdict v);

struct BoundednessRow {
    double alpha = 0.0;
    Component component = Component::U;
    BoundVerdict verdict = BoundVerdict::Inconclusive;
    GrowthFit fit;
    double half_spectrum_ratio = 1.0;  // sup over all modes / sup over the lower half, at the horizon
    std::vector<double> sup_norms;     // per time
};

struct BoundednessScanConfig {
    std::vector<double> times;           // spans >= 3 decades
    double lambda_growth_ratio = 1.5;    // half_spectrum_ratio above this flags divergence in lambda
    GrowthThresholds growth;
};

// Sweep over the spectrum: sup over modes k of lambda_k^alpha times the worst single-mode response
// to forcings bounded by 1, tracked over time.
std::vector<BoundednessRow> boundedness_scan(const SpectrumModel& m, const DampingParams& p,
                                             const std::vector<double>& alpha_grid, Component c,
                                             const BoundednessScanConfig& cfg, int threads = 1);

// Sup over time of the supremum above (a running sup is already monotone).
BoundednessRow classify_sup_series(double alpha, Component c, const std::vector<double>& times,
                                   const std::vector<double>& sup_all, const std::vector<double>& sup_half,
                                   const BoundednessScanConfig& cfg);

// ---- diagrams ----

enum class Region { Inside, Boundary, Outside };
std::string to_string(Region r);

// Where the global-boundedness statements place (sigma, alpha) for the component.
Region bounded_region(double sigma, double alpha, Component c);
// Same for continuity on finite intervals.
Region continuity_region(double sigma, double alpha, Component c);
// Threshold exponent of the boundedness diagram.
double bounded_threshold(double sigma, Component c);

struct DiagramRow {
    double sigma = 0.0;
    double alpha = 0.0;
    Component component = Component::U;
    Region expected = Region::Inside;
    std::string verdict;  // Bounded / Growing / UnboundedInLambda / Inconclusive
    double fit_exponent = 0.0;
    bool agrees = false;
};

// For each sigma and epsilon, probes alpha = threshold - eps and threshold + eps.
std::vector<DiagramRow> boundedness_diagram(const std::vector<double>& sigmas, const std::vector<double>& eps_grid,
                                            double delta, const SpectrumModel& m,
                                            const BoundednessScanConfig& cfg, int threads = 1);

std::string diagram_csv(const std::vector<DiagramRow>& rows);

// ---- probe report over a trajectory ----

struct ProbeReport {
    std::vector<double> alpha_grid;
    std::vector<double> times;
    std::vector<std::vector<double>> norms;  // [time][alpha]
    std::vector<MembershipVerdict> divergence_flags;  // per alpha, at the last time
    std::vector<GrowthFit> fitted_growth;             // per alpha (empty when times span < 3 decades)
};

ProbeReport probe_trajectory(const Trajectory& traj, const SpectrumModel& m, const std::vector<double>& alpha_grid,
                             Component c, const std::vector<std::size_t>& levels);

// Least squares y = a + b x; returns {a, b, r2}.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace dampwave
