#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dampwave {

// Eigenvalues above this are only handled through the log-domain paths.
inline constexpr double kLambdaCap = 1e15;

// Finite diagonal stand-in for (H, A): one positive eigenvalue per mode.
class SpectrumModel {
public:
    explicit SpectrumModel(std::vector<double> eigenvalues, double coercivity_floor = 0.0);

    std::size_t size() const { return eigenvalues_.size(); }
    double operator[](std::size_t k) const { return eigenvalues_[k]; }
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    double coercivity_floor() const { return nu_; }

    // Restriction to the given (increasing) mode indices.
    SpectrumModel subset(const std::vector<std::size_t>& indices) const;

private:
    std::vector<double> eigenvalues_;
    double nu_;
};

using SpectralVector = std::vector<double>;

// Neumaier-compensated running sum; ascending insertion order is the caller's job.
class KahanSum {
public:
    void add(double x);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// sqrt(sum_k lambda_k^{2 alpha} v_k^2). Negative alpha is accepted (gap-scan use).
double sobolev_norm(const SpectralVector& v, double alpha, const SpectrumModel& m);

// Squared norm, also the building block of partial-sum diagnostics.
double sobolev_norm_sq(const SpectralVector& v, double alpha, const SpectrumModel& m);

// Squared weighted sums over the prefixes [0, K_j) for each level K_j.
std::vector<double> weighted_partial_sums(const SpectralVector& v, double alpha,
                                          const SpectrumModel& m,
                                          const std::vector<std::size_t>& levels);

// Same, with eigenvalues given by their natural logarithms.
std::vector<double> weighted_partial_sums_log(const SpectralVector& v, double alpha,
                                              const std::vector<double>& log_lambda,
                                              const std::vector<std::size_t>& levels);

SpectrumModel geometric_spectrum(int K, double base, double scale);

// ln(lambda_k) = ln(scale) + k ln(base); never materializes lambda itself.
std::vector<double> geometric_log_spectrum(std::size_t K, double base, double scale,
                                           std::size_t first_index = 0);

std::vector<std::vector<std::size_t>> partition_interleave(const SpectrumModel& m, int n_parts);

// Roughly geometric truncation levels between k_min and k_max (inclusive), deduplicated.
std::vector<std::size_t> geometric_levels(std::size_t k_min, std::size_t k_max, std::size_t count);

std::string spectrum_csv(const SpectrumModel& m);

}  // namespace dampwave
