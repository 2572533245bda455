#include "dampwave/oracle.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>

namespace dampwave {

void OracleConfig::validate() const {
    if (!(rel_tol >= 1e-13) || !(abs_tol >= 1e-13))
        throw std::invalid_argument("OracleConfig: tolerances must be >= 1e-13");
    if (max_steps <= 0) throw std::invalid_argument("OracleConfig: max_steps must be positive");
}

namespace {

// Times where f may be non-smooth, restricted to (lo, hi), periodic images included.
std::vector<double> forcing_breaks(const ModeForcing& f, double lo, double hi) {
    std::vector<double> out;
    const auto base = f.breakpoints();
    if (f.period > 0.0) {
        const double P = f.period;
        for (double n = std::floor(lo / P); n * P <= hi; n += 1.0) {
            out.push_back(n * P);
            for (double b : base)
                if (b >= 0.0 && b <= P) out.push_back(b + n * P);
        }
    } else {
        out = base;
    }
    std::vector<double> in;
    for (double b : out)
        if (b > lo && b < hi) in.push_back(b);
    return in;
}

struct Companion {
    double lambda;
    double damping;  // delta lambda^sigma
};

// One exponential-integrator step of length h from t0, with f replaced by its
// interpolant at six Gauss points of the step.
Eigen::Vector2d expo_step(const Companion& c, const ModeForcing& f, const Eigen::Vector2d& y, double t0, double h) {
    constexpr int q = 6;
    const auto& xa = boost::math::quadrature::gauss<double, q>::abscissa();
    std::array<double, q> theta{};
    for (int i = 0; i < q / 2; ++i) {
        theta[2 * i] = 0.5 * (1.0 - xa[i]);
        theta[2 * i + 1] = 0.5 * (1.0 + xa[i]);
    }
    Eigen::Matrix<double, q, q> V;
    Eigen::Matrix<double, q, 1> fv;
    for (int i = 0; i < q; ++i) {
        fv(i) = f.value(t0 + theta[i] * h);
        double pw = 1.0;
        for (int k = 0; k < q; ++k) {
            V(i, k) = pw;
            pw *= theta[i];
        }
    }
    const bool forced = fv.cwiseAbs().maxCoeff() > 0.0;
    Eigen::Matrix<double, 2 + q, 2 + q> B = Eigen::Matrix<double, 2 + q, 2 + q>::Zero();
    B(0, 1) = h;
    B(1, 0) = -h * c.lambda;
    B(1, 1) = -2.0 * h * c.damping;
    if (forced) {
        const Eigen::Matrix<double, q, 1> coef = V.partialPivLu().solve(fv);
        double fact = 1.0;
        for (int k = 0; k < q; ++k) {
            if (k > 0) fact *= k;
            B(1, 2 + k) = h * coef(k) * fact;  // theta^k = k! z_k
        }
        for (int k = 1; k < q; ++k) B(2 + k, 2 + k - 1) = 1.0;
    }
    Eigen::Matrix<double, 2 + q, 1> X = Eigen::Matrix<double, 2 + q, 1>::Zero();
    X(0) = y(0);
    X(1) = y(1);
    X(2) = 1.0;
    const Eigen::Matrix<double, 2 + q, 2 + q> E = B.exp();
    const Eigen::Matrix<double, 2 + q, 1> Y = E * X;
    return {Y(0), Y(1)};
}

class StepBudget {
public:
    explicit StepBudget(long max) : max_(max) {}
    void take() {
        if (++used_ > max_) throw OracleFailure("oracle: step limit exceeded (" + std::to_string(max_) + " steps)");
    }

private:
    long max_;
    long used_ = 0;
};

Eigen::Vector2d expo_interval(const Companion& c, const ModeForcing& f, Eigen::Vector2d y, double a, double b,
                              const OracleConfig& cfg, StepBudget& budget, double& max_err) {
    double t = a;
    double h = b - a;
    while (t < b) {
        h = std::min(h, b - t);
        budget.take();
        const Eigen::Vector2d full = expo_step(c, f, y, t, h);
        const Eigen::Vector2d half = expo_step(c, f, expo_step(c, f, y, t, 0.5 * h), t + 0.5 * h, 0.5 * h);
        const double scale = cfg.abs_tol + cfg.rel_tol * half.cwiseAbs().maxCoeff();
        const double err = (full - half).cwiseAbs().maxCoeff() / scale;
        if (err <= 1.0 || h < 1e-14 * std::max(1.0, std::abs(t))) {
            max_err = std::max(max_err, err * scale);
            y = half;
            t = (b - t <= h) ? b : t + h;
            h *= err > 0.0 ? std::clamp(0.9 * std::pow(err, -1.0 / 7.0), 0.2, 4.0) : 4.0;
        } else {
            h *= std::clamp(0.9 * std::pow(err, -1.0 / 7.0), 0.1, 0.5);
        }
    }
    return y;
}

template <class Stepper>
std::array<double, 2> rk_interval(const Companion& c, const ModeForcing& f, std::array<double, 2> y, double a,
                                  double b, const OracleConfig& cfg, StepBudget& budget) {
    namespace ode = boost::numeric::odeint;
    // Evaluate f from inside [a, b) so that stage points on b see the left limit.
    const double b_in = std::nextafter(b, a);
    auto rhs = [&](const std::array<double, 2>& x, std::array<double, 2>& dx, double t) {
        dx[0] = x[1];
        dx[1] = f.value(std::clamp(t, a, b_in)) - 2.0 * c.damping * x[1] - c.lambda * x[0];
    };
    auto stepper = ode::make_controlled(cfg.abs_tol, cfg.rel_tol, Stepper());
    double t = a;
    double dt = std::min(b - a, 0.01 / std::sqrt(c.lambda + c.damping * c.damping + 1.0));
    while (t < b) {
        budget.take();
        if (t + dt > b) dt = b - t;
        if (stepper.try_step(rhs, y, t, dt) == ode::success) {
            if (b - t < 1e-15 * std::max(1.0, std::abs(b))) t = b;
        }
    }
    return y;
}

}  // namespace

ModeTrajectory integrate_mode(const DampingParams& p, double lambda, const ModeForcing& f, const ModeIC& ic,
                              const std::vector<double>& t_grid, const OracleConfig& cfg) {
    cfg.validate();
    p.validate();
    if (!(lambda > 0.0)) throw std::invalid_argument("integrate_mode: lambda must be positive");
    const CharRoots r = roots(p, lambda);
    const double ratio = r.regime == Regime::RealPair ? r.x1 / r.x2 : 1.0;
    if (ratio > kOracleStiffnessLimit)
        throw OracleFailure("oracle: stiffness ratio " + std::to_string(ratio) + " exceeds the 1e8 guard");
    OracleMethod method = cfg.method;
    if (method == OracleMethod::Auto) method = ratio > kOracleStiffSwitch ? OracleMethod::Exponential : OracleMethod::Fehlberg78;

    const Companion c{lambda, p.delta * std::pow(lambda, p.sigma)};
    StepBudget budget(cfg.max_steps);
    ModeTrajectory out;
    out.times = t_grid;
    std::array<double, 2> y{ic.u0, ic.u1};
    double t = 0.0;
    for (double target : t_grid) {
        if (!(target >= t)) throw std::invalid_argument("integrate_mode: time grid must be nondecreasing from 0");
        std::vector<double> cuts{t};
        for (double b : forcing_breaks(f, t, target)) cuts.push_back(b);
        cuts.push_back(target);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double a = cuts[i], b = cuts[i + 1];
            if (!(b > a)) continue;
            namespace ode = boost::numeric::odeint;
            switch (method) {
                case OracleMethod::Exponential: {
                    const Eigen::Vector2d v =
                        expo_interval(c, f, Eigen::Vector2d(y[0], y[1]), a, b, cfg, budget, out.max_error_estimate);
                    y = {v(0), v(1)};
                    break;
                }
                case OracleMethod::Dopri45:
                    y = rk_interval<ode::runge_kutta_dopri5<std::array<double, 2>>>(c, f, y, a, b, cfg, budget);
                    break;
                default:
                    y = rk_interval<ode::runge_kutta_fehlberg78<std::array<double, 2>>>(c, f, y, a, b, cfg, budget);
                    break;
            }
        }
        out.u.push_back(y[0]);
        out.up.push_back(y[1]);
        t = target;
    }
    return out;
}

BruteForceResult convolve_bruteforce(const CharRoots& r, const std::vector<double>& f_samples, double dt,
                                     int derivative) {
    if (derivative != 0 && derivative != 1) throw std::invalid_argument("convolve_bruteforce: derivative must be 0 or 1");
    if (f_samples.size() <= 1) return {};
    const std::size_t N = f_samples.size() - 1;
    if (N % 2 != 0) throw std::invalid_argument("convolve_bruteforce: need an even number of intervals");
    if (!(dt > 0.0) || dt > 1e-4 * (1.0 + 1e-12))
        throw std::invalid_argument("convolve_bruteforce: need at least 1e4 samples per unit time");
    const double freq = r.regime == Regime::OscillatoryPair ? r.b : 0.0;
    if (freq * dt > 0.1)
        throw OracleFailure("convolve_bruteforce: oscillatory kernel under-resolved (b*dt = " +
                            std::to_string(freq * dt) + ")");

    Eigen::Matrix2d M;
    M << 0.0, 1.0, -r.lambda, -2.0 * r.damping;
    const Eigen::Matrix2d E = (dt * M).exp();
    std::vector<double> kern(N + 1);
    Eigen::Vector2d k(0.0, 1.0);
    for (std::size_t j = 0; j <= N; ++j) {
        kern[j] = k(derivative);
        k = E * k;
    }
    auto trapezoid = [&](std::size_t stride) {
        KahanSum acc;
        for (std::size_t j = 0; j <= N; j += stride) {
            const double w = (j == 0 || j == N) ? 0.5 : 1.0;
            acc.add(w * kern[N - j] * f_samples[j]);
        }
        return acc.value() * dt * static_cast<double>(stride);
    };
    const double t1 = trapezoid(1);
    const double t2 = trapezoid(2);
    return {t1 + (t1 - t2) / 3.0, std::abs(t1 - t2) / 3.0};
}

std::vector<double> sample_uniform(const ModeForcing& f, double t, double per_unit, double& dt_out) {
    if (!(t >= 0.0) || !(per_unit > 0.0)) throw std::invalid_argument("sample_uniform: bad arguments");
    if (t == 0.0) {
        dt_out = 0.0;
        return {f.value(0.0)};
    }
    auto N = static_cast<std::size_t>(std::ceil(t * per_unit));
    if (N % 2) ++N;
    N = std::max<std::size_t>(N, 2);
    dt_out = t / static_cast<double>(N);
    std::vector<double> out(N + 1);
    for (std::size_t j = 0; j <= N; ++j) out[j] = f.value(dt_out * static_cast<double>(j));
    return out;
}

}  // namespace dampwave
