#include "dampwave/spectrum.hpp"

#include "dampwave/csv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dampwave {

SpectrumModel::SpectrumModel(std::vector<double> eigenvalues, double coercivity_floor)
    : eigenvalues_(std::move(eigenvalues)), nu_(coercivity_floor) {
    if (eigenvalues_.empty()) throw std::invalid_argument("spectrum: need at least one mode");
    for (std::size_t k = 0; k < eigenvalues_.size(); ++k) {
        double l = eigenvalues_[k];
        if (!(l > 0.0) || !std::isfinite(l))
            throw std::invalid_argument("spectrum: eigenvalue " + std::to_string(k) + " not positive finite");
        if (k > 0 && !(l > eigenvalues_[k - 1]))
            throw std::invalid_argument("spectrum: eigenvalues must be strictly increasing");
    }
    if (nu_ <= 0.0) nu_ = eigenvalues_.front();
    if (nu_ > eigenvalues_.front())
        throw std::invalid_argument("spectrum: coercivity floor exceeds smallest eigenvalue");
}

SpectrumModel SpectrumModel::subset(const std::vector<std::size_t>& indices) const {
    std::vector<double> sub;
    sub.reserve(indices.size());
    for (auto i : indices) sub.push_back(eigenvalues_.at(i));
    return SpectrumModel(std::move(sub));
}

void KahanSum::add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

namespace {

void check_shape(const SpectralVector& v, const SpectrumModel& m) {
    if (v.size() != m.size())
        throw std::length_error("spectral vector length " + std::to_string(v.size()) +
                                " does not match spectrum size " + std::to_string(m.size()));
}

bool needs_log_domain(const SpectrumModel& m, double alpha) {
    return m.eigenvalues().back() > kLambdaCap || std::abs(alpha) > 2.5;
}

// log of each term lambda^{2 alpha} v^2, -inf for zero components.
std::vector<double> log_terms(const SpectralVector& v, double alpha, const std::vector<double>& log_lambda) {
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k)
        out[k] = v[k] == 0.0 ? -std::numeric_limits<double>::infinity()
                             : 2.0 * alpha * log_lambda[k] + 2.0 * std::log(std::abs(v[k]));
    return out;
}

std::vector<double> partial_sums_from_logs(const std::vector<double>& lt, const std::vector<std::size_t>& levels) {
    std::vector<double> out;
    out.reserve(levels.size());
    for (auto K : levels) {
        if (K > lt.size()) throw std::out_of_range("truncation level exceeds spectrum size");
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < K; ++k) mx = std::max(mx, lt[k]);
        if (!std::isfinite(mx)) {
            out.push_back(0.0);
            continue;
        }
        KahanSum s;
        for (std::size_t k = 0; k < K; ++k) s.add(std::exp(lt[k] - mx));
        out.push_back(std::exp(mx) * s.value());
    }
    return out;
}

}  // namespace

double sobolev_norm_sq(const SpectralVector& v, double alpha, const SpectrumModel& m) {
    check_shape(v, m);
    if (!needs_log_domain(m, alpha)) {
        KahanSum s;
        for (std::size_t k = 0; k < v.size(); ++k) {
            double w = std::pow(m[k], alpha) * v[k];
            s.add(w * w);
        }
        return s.value();
    }
    std::vector<double> ll(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) ll[k] = std::log(m[k]);
    return partial_sums_from_logs(log_terms(v, alpha, ll), {m.size()}).front();
}

double sobolev_norm(const SpectralVector& v, double alpha, const SpectrumModel& m) {
    return std::sqrt(sobolev_norm_sq(v, alpha, m));
}

std::vector<double> weighted_partial_sums(const SpectralVector& v, double alpha, const SpectrumModel& m,
                                          const std::vector<std::size_t>& levels) {
    check_shape(v, m);
    std::vector<double> ll(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) ll[k] = std::log(m[k]);
    return weighted_partial_sums_log(v, alpha, ll, levels);
}

std::vector<double> weighted_partial_sums_log(const SpectralVector& v, double alpha,
                                              const std::vector<double>& log_lambda,
                                              const std::vector<std::size_t>& levels) {
    if (v.size() != log_lambda.size()) throw std::length_error("spectral vector / log spectrum size mismatch");
    return partial_sums_from_logs(log_terms(v, alpha, log_lambda), levels);
}

SpectrumModel geometric_spectrum(int K, double base, double scale) {
    if (K < 1) throw std::invalid_argument("geometric_spectrum: K must be >= 1");
    if (!(base > 1.0)) throw std::invalid_argument("geometric_spectrum: base must exceed 1");
    if (!(scale > 0.0)) throw std::invalid_argument("geometric_spectrum: scale must be positive");
    std::vector<double> ev(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) ev[static_cast<std::size_t>(k)] = scale * std::pow(base, k);
    return SpectrumModel(std::move(ev));
}

std::vector<double> geometric_log_spectrum(std::size_t K, double base, double scale, std::size_t first_index) {
    if (!(base > 1.0)) throw std::invalid_argument("geometric_log_spectrum: base must exceed 1");
    if (!(scale > 0.0)) throw std::invalid_argument("geometric_log_spectrum: scale must be positive");
    std::vector<double> out(K);
    const double lb = std::log(base), ls = std::log(scale);
    for (std::size_t k = 0; k < K; ++k) out[k] = ls + static_cast<double>(first_index + k) * lb;
    return out;
}

std::vector<std::vector<std::size_t>> partition_interleave(const SpectrumModel& m, int n_parts) {
    if (n_parts < 1) throw std::invalid_argument("partition_interleave: n_parts must be >= 1");
    std::vector<std::vector<std::size_t>> parts(static_cast<std::size_t>(n_parts));
    for (std::size_t k = 0; k < m.size(); ++k) parts[k % static_cast<std::size_t>(n_parts)].push_back(k);
    return parts;
}

std::vector<std::size_t> geometric_levels(std::size_t k_min, std::size_t k_max, std::size_t count) {
    if (k_min < 1 || k_max < k_min || count < 2) throw std::invalid_argument("geometric_levels: bad range");
    std::vector<std::size_t> out;
    const double r = std::log(static_cast<double>(k_max) / static_cast<double>(k_min)) / static_cast<double>(count - 1);
    for (std::size_t j = 0; j < count; ++j) {
        auto K = static_cast<std::size_t>(std::llround(static_cast<double>(k_min) * std::exp(r * static_cast<double>(j))));
        K = std::clamp(K, k_min, k_max);
        if (out.empty() || K > out.back()) out.push_back(K);
    }
    if (out.back() != k_max) out.push_back(k_max);
    return out;
}

std::string spectrum_csv(const SpectrumModel& m) {
    CsvWriter w({"k", "lambda"});
    for (std::size_t k = 0; k < m.size(); ++k) w.row(static_cast<long long>(k), m[k]);
    return w.str();
}

}  // namespace dampwave
