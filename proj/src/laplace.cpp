#include "v2xsec/laplace.hpp"

#include <cmath>
#include <stdexcept>

namespace v2xsec {

namespace {

constexpr double kOmegaBranchEps = 1e-9;

void check_nonnegative_s(double s) {
    if (s < 0.0) throw std::invalid_argument("laplace: transform argument s must be >= 0");
}

// Semi-infinite quadrature for integrands with a known algebraic tail
// f(x) ~ x^{-p}, p > 1. The substitution x = y^m steepens the tail enough
// that the rational variable change of integrate_semi_infinite leaves no
// endpoint singularity (p close to 2 would otherwise stall the bisection).
QuadResult integrate_power_tail(const Integrand& f, double p, const QuadratureSpec& spec) {
    const int m = std::max(1, std::min(24, static_cast<int>(std::ceil(2.2 / (p - 1.0)))));
    if (m == 1) return integrate_semi_infinite(f, 0.0, spec);
    const double md = static_cast<double>(m);
    const auto mapped = [&f, md](double y) {
        const double x = std::pow(y, md);
        if (!std::isfinite(x)) return 0.0;
        const double v = f(x);
        if (v == 0.0) return 0.0;
        return v * md * std::pow(y, md - 1.0);
    };
    return integrate_semi_infinite(mapped, 0.0, spec);
}

// Natural cubic spline second derivatives (tridiagonal solve).
std::vector<double> spline_second_derivatives(const std::vector<double>& x,
                                              const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> m(n, 0.0), scratch(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double sig = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
        const double p = sig * m[i - 1] + 2.0;
        m[i] = (sig - 1.0) / p;
        scratch[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]) - (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
        scratch[i] = (6.0 * scratch[i] / (x[i + 1] - x[i - 1]) - sig * scratch[i - 1]) / p;
    }
    for (std::size_t k = n - 1; k-- > 1;) m[k] = m[k] * m[k + 1] + scratch[k];
    m[0] = m[n - 1] = 0.0;
    return m;
}

double spline_eval(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& m, double xq) {
    std::size_t lo = 0, hi = x.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (x[mid] > xq ? hi : lo) = mid;
    }
    const double h = x[hi] - x[lo];
    const double a = (x[hi] - xq) / h;
    const double b = (xq - x[lo]) / h;
    return a * y[lo] + b * y[hi] +
           ((a * a * a - a) * m[lo] + (b * b * b - b) * m[hi]) * h * h / 6.0;
}

}  // namespace

GainDistribution GainDistribution::gamma_shape(int k) {
    if (k < 1) throw std::invalid_argument("GainDistribution: gamma shape must be >= 1");
    GainDistribution g;
    g.kind = Kind::GammaShape;
    g.shape = k;
    return g;
}

GainDistribution GainDistribution::mrt_an_mixture(double phi, int n_antennas) {
    if (n_antennas < 2) throw std::invalid_argument("GainDistribution: mixture requires N >= 2");
    if (!(phi > 0.0 && phi <= 1.0))
        throw std::invalid_argument("GainDistribution: mixture requires phi in (0, 1]");
    GainDistribution g;
    g.kind = Kind::MrtAnMixture;
    g.phi = phi;
    g.n_antennas = n_antennas;
    return g;
}

double GainDistribution::mean() const {
    switch (kind) {
        case Kind::UnitExponential: return 1.0;
        case Kind::GammaShape: return static_cast<double>(shape);
        case Kind::MrtAnMixture: return 1.0;  // phi + (1-phi)
    }
    return 1.0;
}

double gain_laplace(const GainDistribution& gain, double s) {
    check_nonnegative_s(s);
    switch (gain.kind) {
        case GainDistribution::Kind::UnitExponential:
            return 1.0 / (1.0 + s);
        case GainDistribution::Kind::GammaShape:
            return std::pow(1.0 + s, -gain.shape);
        case GainDistribution::Kind::MrtAnMixture: {
            const int n = gain.n_antennas;
            const double an = (1.0 - gain.phi) * s / (n - 1);
            return 1.0 / ((1.0 + gain.phi * s) * std::pow(1.0 + an, n - 1));
        }
    }
    return 1.0;
}

double gain_delta_moment(const GainDistribution& gain, double alpha) {
    const double delta = 2.0 / alpha;
    switch (gain.kind) {
        case GainDistribution::Kind::UnitExponential:
            return std::tgamma(1.0 + delta);
        case GainDistribution::Kind::GammaShape:
            return std::exp(std::lgamma(gain.shape + delta) - std::lgamma(gain.shape));
        case GainDistribution::Kind::MrtAnMixture:
            return omega(gain.phi, gain.n_antennas, alpha);
    }
    return 1.0;
}

double omega(double phi, int n_antennas, double alpha) {
    if (!(phi > 0.0 && phi <= 1.0)) throw std::invalid_argument("omega: phi must lie in (0, 1]");
    if (n_antennas < 2) throw std::invalid_argument("omega: requires N >= 2");
    if (!(alpha > 2.0)) throw std::invalid_argument("omega: requires alpha > 2");
    const int n = n_antennas;
    const double delta = 2.0 / alpha;
    if (std::fabs(phi - 1.0 / n) <= kOmegaBranchEps) {
        return std::pow(phi, delta) * std::exp(std::lgamma(n + delta) - std::lgamma(n));
    }
    const double a = (n - 1.0 / phi) / (n - 1.0);
    double sum = 0.0;
    double a_pow = 1.0;
    for (int k = 0; k <= n - 2; ++k) {
        sum += a_pow * std::exp(std::lgamma(k + 1.0 + delta) - std::lgamma(k + 1.0));
        a_pow *= a;
    }
    const double an_scale = (1.0 - phi) / (n - 1.0);
    const double head = std::pow(phi, 1.0 + delta) * std::tgamma(1.0 + delta);
    return (head - std::pow(an_scale, 1.0 + delta) * sum) * std::pow(a, 1.0 - n) / phi;
}

// --- scale-normalized kernels -------------------------------------------

double unit_road_kernel(const GainDistribution& gain, double alpha, double x,
                        const QuadratureSpec& quad) {
    const double x2 = x * x;
    const auto integrand = [&](double y) {
        return 1.0 - gain_laplace(gain, std::pow(x2 + y * y, -0.5 * alpha));
    };
    return require_converged(integrate_power_tail(integrand, alpha, quad), "unit_road_kernel");
}

double road_integral(const GainDistribution& gain, double alpha, double s, double r,
                     const QuadratureSpec& quad) {
    check_nonnegative_s(s);
    if (s == 0.0) return 0.0;
    const double scale = std::pow(s, 1.0 / alpha);
    return scale * unit_road_kernel(gain, alpha, r / scale, quad);
}

double field_integral(const GainDistribution& gain, double alpha, double u_b, double s,
                      const QuadratureSpec& quad) {
    check_nonnegative_s(s);
    if (s == 0.0 || u_b <= 0.0) return 0.0;
    const double scale = std::pow(s, 1.0 / alpha);
    const QuadratureSpec inner = quad.tightened(0.1);
    const auto integrand = [&](double x) {
        return 1.0 - std::exp(-2.0 * u_b * scale * unit_road_kernel(gain, alpha, x, inner));
    };
    const QuadResult outer = integrate_power_tail(integrand, alpha - 1.0, quad);
    return scale * require_converged(outer, "field_integral");
}

double road_integral_direct(const GainDistribution& gain, double alpha, double s, double r,
                            const QuadratureSpec& quad) {
    check_nonnegative_s(s);
    if (s == 0.0) return 0.0;
    const double r2 = r * r;
    const auto integrand = [&](double t) {
        return 1.0 - gain_laplace(gain, s * std::pow(r2 + t * t, -0.5 * alpha));
    };
    return require_converged(integrate_power_tail(integrand, alpha, quad),
                             "road_integral_direct");
}

double field_integral_direct(const GainDistribution& gain, double alpha, double u_b, double s,
                             const QuadratureSpec& quad) {
    check_nonnegative_s(s);
    if (s == 0.0 || u_b <= 0.0) return 0.0;
    const QuadratureSpec inner = quad.tightened(0.1);
    const auto integrand = [&](double r) {
        return 1.0 - std::exp(-2.0 * u_b * road_integral_direct(gain, alpha, s, r, inner));
    };
    return require_converged(integrate_power_tail(integrand, alpha - 1.0, quad),
                             "field_integral_direct");
}

// --- spec-facing transform operations -------------------------------------

namespace {

double planar_exponent_closed(double intensity, const GainDistribution& gain, double alpha,
                              double s) {
    if (intensity <= 0.0 || s == 0.0) return 0.0;
    const double delta = 2.0 / alpha;
    return intensity * M_PI * gain_delta_moment(gain, alpha) * std::tgamma(1.0 - delta) *
           std::pow(s, delta);
}

}  // namespace

LaplaceEval lt_coverage_planar_field(double s, const NetworkParams& params,
                                     const QuadratureSpec& quad) {
    (void)quad;
    check_nonnegative_s(s);
    params.validate();
    const auto gain = GainDistribution::mrt_an_mixture(params.phi, params.n_antennas);
    const double e = planar_exponent_closed(params.lambda_b, gain, params.alpha, s);
    return {std::exp(-e), s, LaplaceSource::CoveragePlanarField};
}

LaplaceEval lt_coverage_vehicular_field(double s, const NetworkParams& params,
                                        const QuadratureSpec& quad) {
    check_nonnegative_s(s);
    params.validate();
    const auto gain = GainDistribution::mrt_an_mixture(params.phi, params.n_antennas);
    const double integral =
        params.lambda_l > 0.0 ? field_integral(gain, params.alpha, params.u_b, s, quad) : 0.0;
    return {std::exp(-2.0 * params.lambda_l * integral), s, LaplaceSource::CoverageVehicularField};
}

LaplaceEval lt_coverage_single_road(double s, double r, const NetworkParams& params,
                                    const QuadratureSpec& quad) {
    check_nonnegative_s(s);
    if (r < 0.0) throw std::invalid_argument("lt_coverage_single_road: r must be >= 0");
    params.validate();
    const auto gain = GainDistribution::mrt_an_mixture(params.phi, params.n_antennas);
    const double integral =
        params.u_b > 0.0 ? road_integral(gain, params.alpha, s, r, quad) : 0.0;
    return {std::exp(-2.0 * params.u_b * integral), s, LaplaceSource::CoverageSingleRoad};
}

LaplaceEval lt_secrecy_planar_field(double s, const NetworkParams& params,
                                    const QuadratureSpec& quad) {
    (void)quad;
    check_nonnegative_s(s);
    params.validate();
    const auto gain = GainDistribution::gamma_shape(params.n_antennas - 1);
    const double e = planar_exponent_closed(params.lambda_b, gain, params.alpha, s);
    return {std::exp(-e), s, LaplaceSource::SecrecyPlanarField};
}

LaplaceEval lt_secrecy_vehicular_field(double s, const NetworkParams& params,
                                       const QuadratureSpec& quad) {
    check_nonnegative_s(s);
    params.validate();
    const auto gain = GainDistribution::gamma_shape(params.n_antennas - 1);
    const double integral =
        params.lambda_l > 0.0 ? field_integral(gain, params.alpha, params.u_b, s, quad) : 0.0;
    return {std::exp(-2.0 * params.lambda_l * integral), s, LaplaceSource::SecrecyVehicularField};
}

LaplaceEval lt_secrecy_single_road(double s, double r, const NetworkParams& params,
                                   const QuadratureSpec& quad) {
    check_nonnegative_s(s);
    if (r < 0.0) throw std::invalid_argument("lt_secrecy_single_road: r must be >= 0");
    params.validate();
    const auto gain = GainDistribution::gamma_shape(params.n_antennas - 1);
    const double integral =
        params.u_b > 0.0 ? road_integral(gain, params.alpha, s, r, quad) : 0.0;
    return {std::exp(-2.0 * params.u_b * integral), s, LaplaceSource::SecrecySingleRoad};
}

LaplaceEval lt_asymptotic_vehicular_field(double s, double lambda_bar,
                                          const GainDistribution& gain, double alpha,
                                          const QuadratureSpec& quad) {
    check_nonnegative_s(s);
    if (lambda_bar < 0.0)
        throw std::invalid_argument("lt_asymptotic_vehicular_field: lambda_bar must be >= 0");
    if (s == 0.0 || lambda_bar == 0.0) return {1.0, s, LaplaceSource::AsymptoticVehicularField};
    // 2 int (1 - L(s rho^-alpha)) rho drho  ==  int (1 - L(s u^-alpha/2)) du
    const auto integrand = [&](double u) {
        return 1.0 - gain_laplace(gain, s * std::pow(u, -0.5 * alpha));
    };
    const double integral =
        require_converged(integrate_power_tail(integrand, 0.5 * alpha, quad),
                          "lt_asymptotic_vehicular_field");
    return {std::exp(-M_PI * lambda_bar * integral), s, LaplaceSource::AsymptoticVehicularField};
}

// --- RoadKernelTable -------------------------------------------------------

RoadKernelTable::RoadKernelTable(const GainDistribution& gain, double alpha,
                                 const QuadratureSpec& quad)
    : gain_(gain), alpha_(alpha), x_min_(1e-6), x_max_(1e4) {
    constexpr int kPointsPerDecade = 48;
    const double lo = std::log(x_min_), hi = std::log(x_max_);
    const int n = static_cast<int>(kPointsPerDecade * (hi - lo) / std::log(10.0)) + 1;
    log_x_.reserve(n + 1);
    log_w_.reserve(n + 1);
    const QuadratureSpec node_quad = quad.tightened(0.1);
    for (int i = 0; i <= n; ++i) {
        const double lx = lo + (hi - lo) * i / n;
        log_x_.push_back(lx);
        log_w_.push_back(std::log(unit_road_kernel(gain_, alpha_, std::exp(lx), node_quad)));
    }
    second_ = spline_second_derivatives(log_x_, log_w_);
    tail_coeff_ = std::exp(log_w_.back()) * std::pow(x_max_, alpha_ - 1.0);
}

double RoadKernelTable::operator()(double x) const {
    if (x <= x_min_) return std::exp(log_w_.front());
    if (x >= x_max_) return tail_coeff_ * std::pow(x, 1.0 - alpha_);
    return std::exp(spline_eval(log_x_, log_w_, second_, std::log(x)));
}

// --- InterferenceFieldModel ------------------------------------------------

InterferenceFieldModel::InterferenceFieldModel(const GainDistribution& gain,
                                               const NetworkParams& params,
                                               const QuadratureSpec& quad)
    : lambda_b_(params.lambda_b),
      lambda_l_(params.lambda_l),
      u_b_(params.u_b),
      alpha_(params.alpha),
      inv_alpha_(1.0 / params.alpha),
      quad_(quad),
      w1_(gain, params.alpha, quad),
      s_min_(1e-8),
      s_max_(1e26) {
    const double delta = 2.0 / alpha_;
    planar_coeff_ = lambda_b_ > 0.0 ? lambda_b_ * M_PI * gain_delta_moment(gain, alpha_) *
                                          std::tgamma(1.0 - delta)
                                    : 0.0;
    if (lambda_l_ <= 0.0 || u_b_ <= 0.0) return;  // field exponent identically zero

    constexpr int kPointsPerDecade = 12;
    const double lo = std::log(s_min_), hi = std::log(s_max_);
    const int n = static_cast<int>(kPointsPerDecade * (hi - lo) / std::log(10.0)) + 1;
    log_s_.reserve(n + 1);
    log_e_.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double ls = lo + (hi - lo) * i / n;
        log_s_.push_back(ls);
        log_e_.push_back(std::log(field_exponent_exact(std::exp(ls))));
    }
    second_ = spline_second_derivatives(log_s_, log_e_);
    slope_lo_ = (log_e_[1] - log_e_[0]) / (log_s_[1] - log_s_[0]);
    const std::size_t m = log_s_.size();
    slope_hi_ = (log_e_[m - 1] - log_e_[m - 2]) / (log_s_[m - 1] - log_s_[m - 2]);
}

double InterferenceFieldModel::planar_exponent(double s) const {
    if (planar_coeff_ == 0.0 || s <= 0.0) return 0.0;
    return planar_coeff_ * std::pow(s, 2.0 / alpha_);
}

double InterferenceFieldModel::road_exponent(double s, double r) const {
    if (u_b_ <= 0.0 || s <= 0.0) return 0.0;
    const double scale = std::pow(s, inv_alpha_);
    return 2.0 * u_b_ * scale * w1_(std::fabs(r) / scale);
}

double InterferenceFieldModel::field_exponent_exact(double s) const {
    const double scale = std::pow(s, inv_alpha_);
    const auto integrand = [&](double x) {
        return 1.0 - std::exp(-2.0 * u_b_ * scale * w1_(x));
    };
    const QuadResult res = integrate_power_tail(integrand, alpha_ - 1.0, quad_);
    return 2.0 * lambda_l_ * scale * require_converged(res, "field_exponent");
}

double InterferenceFieldModel::field_exponent(double s) const {
    if (log_s_.empty() || s <= 0.0) return 0.0;
    const double ls = std::log(s);
    if (ls <= log_s_.front())
        return std::exp(log_e_.front() + slope_lo_ * (ls - log_s_.front()));
    if (ls >= log_s_.back())
        return std::exp(log_e_.back() + slope_hi_ * (ls - log_s_.back()));
    return std::exp(spline_eval(log_s_, log_e_, second_, ls));
}

}  // namespace v2xsec
