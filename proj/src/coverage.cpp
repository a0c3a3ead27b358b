#include "v2xsec/coverage.hpp"

#include <cmath>
#include <iostream>

namespace v2xsec {

namespace {

double binomial_weight(int n_total, int k) {
    return std::exp(std::lgamma(n_total + 1.0) - std::lgamma(k + 1.0) -
                    std::lgamma(n_total - k + 1.0));
}

double clamp_probability(double value, double error, const char* context) {
    if (value >= 0.0 && value <= 1.0) return value;
    const double overshoot = value < 0.0 ? -value : value - 1.0;
    if (overshoot > 10.0 * std::max(error, 1e-12)) {
        throw QuadratureError(std::string(context) +
                              ": result escapes [0,1] beyond quadrature noise");
    }
    std::cerr << context << ": clamped " << value << " into [0,1]\n";
    return value < 0.0 ? 0.0 : 1.0;
}

}  // namespace

CoverageEvaluator::CoverageEvaluator(const NetworkParams& params, const QuadratureSpec& quad)
    : params_(params),
      quad_(quad),
      model_(GainDistribution::mrt_an_mixture(params.phi, params.n_antennas), params, quad) {
    params_.validate();
    const int n = params_.n_antennas;
    kappa_ = std::exp(-std::lgamma(n + 1.0) / n);
    const double rx_road = params_.u_u * params_.lambda_l;
    kappa_p_ = (params_.lambda_u + rx_road) > 0.0
                   ? params_.lambda_u / (params_.lambda_u + rx_road)
                   : 1.0;
    kappa_v_ = 1.0 - kappa_p_;
}

// Combined exponent of the planar-field and road-network transforms, with
// the typical road added when the receiver is conditioned onto one.
CoverageEvaluator::TermIntegrals CoverageEvaluator::planar_association(double nk, double gamma,
                                                                       bool typical_road) const {
    const double inv_phi = 1.0 / params_.phi;
    const auto integrand = [&](double r) {
        const double s = nk * gamma * std::pow(r, params_.alpha) * inv_phi;
        double e = model_.planar_exponent(s) + model_.field_exponent(s);
        if (typical_road) e += model_.road_exponent(s, 0.0);
        return e > 700.0 ? 0.0 : r * std::exp(-e);
    };
    const QuadResult res = integrate_semi_infinite(integrand, 0.0, quad_);
    require_converged(res, "coverage planar association");
    return {res.value, res.error_estimate};
}

CoverageEvaluator::TermIntegrals CoverageEvaluator::vehicular_association(
    double nk, double gamma, bool typical_road) const {
    const double inv_phi = 1.0 / params_.phi;
    const QuadratureSpec theta_quad = quad_.tightened(0.1);
    const auto integrand = [&](double rho) {
        const double s = nk * gamma * std::pow(rho, params_.alpha) * inv_phi;
        double e = model_.planar_exponent(s) + model_.field_exponent(s);
        if (typical_road) e += model_.road_exponent(s, 0.0);
        if (e > 700.0) return 0.0;
        const double base = std::exp(-e);
        // own-road transform depends on the road's perpendicular distance
        // rho*cos(theta); everything else is radial
        const auto road_factor = [&](double theta) {
            return std::exp(-model_.road_exponent(s, rho * std::cos(theta)));
        };
        const QuadResult inner = integrate_finite(road_factor, 0.0, 0.5 * M_PI, theta_quad);
        return rho * base * inner.value;
    };
    const QuadResult res = integrate_semi_infinite(integrand, 0.0, quad_);
    require_converged(res, "coverage vehicular association");
    return {res.value, res.error_estimate};
}

CoverageEvaluator::TermIntegrals CoverageEvaluator::typical_road_association(double nk,
                                                                             double gamma) const {
    const double inv_phi = 1.0 / params_.phi;
    const auto integrand = [&](double t) {
        const double s = nk * gamma * std::pow(t, params_.alpha) * inv_phi;
        const double e = model_.planar_exponent(s) + model_.field_exponent(s) +
                         model_.road_exponent(s, 0.0);
        return e > 700.0 ? 0.0 : std::exp(-e);
    };
    const QuadResult res = integrate_semi_infinite(integrand, 0.0, quad_);
    require_converged(res, "coverage typical-road association");
    return {res.value, res.error_estimate};
}

double CoverageEvaluator::association_sum(double gamma, bool typical_road,
                                          std::vector<double>* partials) const {
    if (!(gamma > 1.0)) {
        throw ValidationError("coverage: gamma must be > 1 (the analytic form needs it)");
    }
    const int n_ant = params_.n_antennas;
    const double pref_planar = 2.0 * M_PI * params_.lambda_b;
    const double pref_field = 4.0 * params_.lambda_l * params_.u_b;
    const double pref_road = typical_road ? 2.0 * params_.u_b : 0.0;

    double sum = 0.0, comp = 0.0, err = 0.0;
    if (partials) partials->clear();
    for (int n = 1; n <= n_ant; ++n) {
        const double nk = n * kappa_;
        const double sign = (n % 2 == 1) ? 1.0 : -1.0;
        const double weight = sign * binomial_weight(n_ant, n);
        double term = 0.0;
        if (pref_planar > 0.0) {
            const TermIntegrals t = planar_association(nk, gamma, typical_road);
            term += pref_planar * t.value;
            err += std::fabs(weight) * pref_planar * t.error;
        }
        if (pref_field > 0.0) {
            const TermIntegrals t = vehicular_association(nk, gamma, typical_road);
            term += pref_field * t.value;
            err += std::fabs(weight) * pref_field * t.error;
        }
        if (pref_road > 0.0) {
            const TermIntegrals t = typical_road_association(nk, gamma);
            term += pref_road * t.value;
            err += std::fabs(weight) * pref_road * t.error;
        }
        // Kahan-compensated accumulation; the terms alternate in sign.
        const double y = weight * term - comp;
        const double next = sum + y;
        comp = (next - sum) - y;
        sum = next;
        if (partials) partials->push_back(sum);
    }
    error_estimate_ = err;
    return sum;
}

double CoverageEvaluator::planar(double gamma) const {
    const double raw = association_sum(gamma, /*typical_road=*/false, nullptr);
    return clamp_probability(raw, error_estimate_, "coverage_planar");
}

double CoverageEvaluator::vehicular(double gamma) const {
    const double raw = association_sum(gamma, /*typical_road=*/true, nullptr);
    return clamp_probability(raw, error_estimate_, "coverage_vehicular");
}

std::vector<double> CoverageEvaluator::planar_partial_sums(double gamma) const {
    std::vector<double> partials;
    association_sum(gamma, /*typical_road=*/false, &partials);
    return partials;
}

CoverageResult CoverageEvaluator::total(double gamma) const {
    CoverageResult out;
    out.gamma = gamma;
    out.p_c_planar = planar(gamma);
    double err = error_estimate_;
    out.p_c_vehicular = vehicular(gamma);
    err += error_estimate_;
    out.p_c_total = kappa_p_ * out.p_c_planar + kappa_v_ * out.p_c_vehicular;
    out.quadrature_error = err;
    error_estimate_ = err;
    return out;
}

double coverage_planar(const NetworkParams& params, double gamma, const QuadratureSpec& quad) {
    return CoverageEvaluator(params, quad).planar(gamma);
}

double coverage_vehicular(const NetworkParams& params, double gamma, const QuadratureSpec& quad) {
    return CoverageEvaluator(params, quad).vehicular(gamma);
}

CoverageResult coverage_total(const NetworkParams& params, double gamma,
                              const QuadratureSpec& quad) {
    return CoverageEvaluator(params, quad).total(gamma);
}

}  // namespace v2xsec
