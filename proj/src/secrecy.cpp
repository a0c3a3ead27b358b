#include "v2xsec/secrecy.hpp"

#include <cmath>
#include <stdexcept>

namespace v2xsec {

namespace {

constexpr double kExpFloor = 700.0;  // exp(-x) underflows to 0 well before this

double safe_exp_neg(double e) { return e > kExpFloor ? 0.0 : std::exp(-e); }

// int_0^tau (1 - e^{-2 u_e sqrt(tau^2 - r^2)}) dr with r = tau sin(u); the
// square root becomes tau cos(u) and the endpoint singularity disappears.
double road_void_integral(double tau, double u_e, const QuadratureSpec& quad) {
    if (tau <= 0.0 || u_e <= 0.0) return 0.0;
    const auto integrand = [&](double u) {
        const double c = std::cos(u);
        return (1.0 - std::exp(-2.0 * u_e * tau * c)) * tau * c;
    };
    return integrate_finite(integrand, 0.0, 0.5 * M_PI, quad).value;
}

// d/dtau of the road-void exponent: 4 lam_l u_e int_0^{pi/2} tau e^{-2 u_e tau cos u} du
double road_void_derivative(double tau, double lambda_l, double u_e,
                            const QuadratureSpec& quad) {
    if (tau <= 0.0 || u_e <= 0.0 || lambda_l <= 0.0) return 0.0;
    const auto integrand = [&](double u) {
        return tau * std::exp(-2.0 * u_e * tau * std::cos(u));
    };
    return 4.0 * lambda_l * u_e * integrate_finite(integrand, 0.0, 0.5 * M_PI, quad).value;
}

}  // namespace

void MinDistEvent::validate() const {
    if (kind == MinDistEventKind::VehicularOnTypicalRoad &&
        transmitter_kind != TransmitterKind::VehicularTx) {
        throw ValidationError(
            "MinDistEvent: the on-typical-road event exists only for a vehicular transmitter");
    }
}

double min_dist_pdf(double tau, const MinDistEvent& event, const NetworkParams& params,
                    const QuadratureSpec& quad) {
    if (tau < 0.0) throw std::invalid_argument("min_dist_pdf: tau must be >= 0");
    event.validate();
    params.validate();
    const QuadratureSpec inner = quad.tightened(0.1);
    double void_exponent = 2.0 * params.lambda_l * road_void_integral(tau, params.u_e, inner) +
                           params.lambda_e * M_PI * tau * tau;
    if (event.transmitter_kind == TransmitterKind::VehicularTx) {
        void_exponent += 2.0 * params.u_e * tau;
    }
    const double survival = safe_exp_neg(void_exponent);
    switch (event.kind) {
        case MinDistEventKind::VehicularOffTypicalRoad:
            return survival * road_void_derivative(tau, params.lambda_l, params.u_e, inner);
        case MinDistEventKind::VehicularOnTypicalRoad:
            return survival * 2.0 * params.u_e;
        case MinDistEventKind::Planar:
            return survival * 2.0 * params.lambda_e * M_PI * tau;
    }
    return 0.0;
}

double min_dist_pdf_asymptotic(double tau, const MinDistEvent& event, double lambda_l,
                               double u_e, double lambda_e) {
    if (tau < 0.0) throw std::invalid_argument("min_dist_pdf_asymptotic: tau must be >= 0");
    if (event.kind == MinDistEventKind::VehicularOnTypicalRoad) {
        throw ValidationError("min_dist_pdf_asymptotic: no dense-road limit for the typical road");
    }
    const double total = lambda_l * u_e + lambda_e;
    const double rayleigh = safe_exp_neg(total * M_PI * tau * tau);
    const double rate =
        event.kind == MinDistEventKind::VehicularOffTypicalRoad ? lambda_l * u_e : lambda_e;
    return 2.0 * rate * M_PI * tau * rayleigh;
}

// --- SecrecyEvaluator --------------------------------------------------------

SecrecyEvaluator::SecrecyEvaluator(const NetworkParams& params, const QuadratureSpec& quad)
    : params_(params),
      quad_(quad),
      model_(GainDistribution::gamma_shape(params.n_antennas - 1), params, quad) {
    params_.validate();
    const double tx_road = params_.u_b * params_.lambda_l;
    rho_p_ = (params_.lambda_b + tx_road) > 0.0
                 ? params_.lambda_b / (params_.lambda_b + tx_road)
                 : 1.0;
    rho_v_ = 1.0 - rho_p_;
}

SecrecyEvaluator::BetaContext SecrecyEvaluator::context(double beta) const {
    if (!(beta > 0.0)) throw ValidationError("secrecy: beta must be > 0");
    BetaContext c;
    c.s0 = (1.0 / params_.phi - 1.0) * beta / (params_.n_antennas - 1);
    c.log_pref = (1.0 - params_.n_antennas) * std::log1p(c.s0);
    return c;
}

bool SecrecyEvaluator::any_eve() const {
    return params_.lambda_e > 0.0 || (params_.lambda_l > 0.0 && params_.u_e > 0.0);
}

double SecrecyEvaluator::log_core(const BetaContext& c, double v) const {
    return -c.log_pref + model_.planar_exponent(v) + model_.field_exponent(v);
}

double SecrecyEvaluator::log_core_road0(const BetaContext& c, double v) const {
    return log_core(c, v) + model_.road_exponent(v, 0.0);
}

// Planar eavesdroppers of a planar transmitter see the planar and road
// interference fields only; without either the kernel has no decay and the
// bound collapses to zero.
double SecrecyEvaluator::planar_eve_exponent(const BetaContext& c) const {
    if (params_.lambda_e <= 0.0) return 0.0;
    const double s0 = c.s0;
    const auto integrand = [&](double r) {
        const double v = s0 * std::pow(r, params_.alpha);
        return r * safe_exp_neg(log_core(c, v));
    };
    const QuadResult res = integrate_semi_infinite(integrand, 0.0, quad_);
    return 2.0 * M_PI * params_.lambda_e * require_converged(res, "secrecy planar-eve term");
}

double SecrecyEvaluator::road_eve_exponent(const BetaContext& c) const {
    if (params_.lambda_l <= 0.0 || params_.u_e <= 0.0) return 0.0;
    const double s0 = c.s0;
    const QuadratureSpec inner = quad_.tightened(0.1);
    const auto kernel_t = [&](double r_e, double t) {
        const double rho2 = r_e * r_e + t * t;
        const double v = s0 * std::pow(rho2, 0.5 * params_.alpha);
        return safe_exp_neg(log_core_road0(c, v));
    };
    const auto outer = [&](double r_e) {
        const QuadResult ti = integrate_semi_infinite(
            [&](double t) { return kernel_t(r_e, t); }, 0.0, inner);
        return 1.0 - std::exp(-2.0 * params_.u_e * ti.value);
    };
    const QuadResult res = integrate_semi_infinite(outer, 0.0, quad_);
    return 2.0 * params_.lambda_l * require_converged(res, "secrecy road-eve term");
}

double SecrecyEvaluator::typical_road_eve_exponent(const BetaContext& c) const {
    if (params_.u_e <= 0.0) return 0.0;
    const double s0 = c.s0;
    const auto integrand = [&](double t) {
        const double v = s0 * std::pow(t, params_.alpha);
        return safe_exp_neg(log_core_road0(c, v));
    };
    const QuadResult res = integrate_semi_infinite(integrand, 0.0, quad_);
    return 2.0 * params_.u_e * require_converged(res, "secrecy typical-road term");
}

double SecrecyEvaluator::lower_planar(double beta) const {
    const BetaContext c = context(beta);
    if (!any_eve()) return 1.0;
    if (degenerate_no_an() || c.s0 == 0.0) return 0.0;
    const bool field_decay = params_.lambda_b > 0.0 ||
                             (params_.lambda_l > 0.0 && params_.u_b > 0.0);
    if (params_.lambda_e > 0.0 && !field_decay) return 0.0;
    if (params_.lambda_l > 0.0 && params_.u_e > 0.0 && !(field_decay || params_.u_b > 0.0))
        return 0.0;
    return std::exp(-road_eve_exponent(c) - planar_eve_exponent(c));
}

double SecrecyEvaluator::upper_planar(double beta) const {
    const BetaContext c = context(beta);
    if (!any_eve()) return 1.0;
    if (degenerate_no_an() || c.s0 == 0.0) return 0.0;
    const double s0 = c.s0;
    const MinDistEvent vehicular{MinDistEventKind::VehicularOffTypicalRoad,
                                 TransmitterKind::PlanarTx};
    const MinDistEvent planar{MinDistEventKind::Planar, TransmitterKind::PlanarTx};
    const auto integrand = [&](double tau) {
        const double v = s0 * std::pow(tau, params_.alpha);
        const double core = safe_exp_neg(log_core(c, v));
        if (core == 0.0) return 0.0;
        double acc = 0.0;
        if (params_.lambda_e > 0.0) acc += core * min_dist_pdf(tau, planar, params_, quad_);
        if (params_.lambda_l > 0.0 && params_.u_e > 0.0) {
            acc += core * safe_exp_neg(model_.road_exponent(v, 0.0)) *
                   min_dist_pdf(tau, vehicular, params_, quad_);
        }
        return acc;
    };
    const QuadResult res = integrate_semi_infinite(integrand, 0.0, quad_);
    return 1.0 - require_converged(res, "secrecy planar upper bound");
}

// theta-average of the typical-road transform seen from distance `dist`,
// 64-node Gauss-Legendre over [0, 2pi), refined if a 32-node pass disagrees
// by more than 1e-6.
double SecrecyEvaluator::theta_average_road_factor(const BetaContext& c, double v,
                                                   double dist) const {
    (void)c;
    const auto f = [&](double theta) {
        return safe_exp_neg(model_.road_exponent(v, std::fabs(dist * std::sin(theta))));
    };
    const auto gl_average = [&](int n) {
        const GaussLegendre& rule = gauss_legendre(n);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += rule.weights[i] * f(M_PI * (rule.nodes[i] + 1.0));
        }
        return 0.5 * acc;  // weights sum to 2 over [-1,1]; average over the circle
    };
    const double a64 = gl_average(64);
    const double a32 = gl_average(32);
    if (std::fabs(a64 - a32) <= 1e-6) return a64;
    QuadratureSpec tight = quad_.tightened(0.1);
    const QuadResult res = integrate_finite(f, 0.0, 2.0 * M_PI, tight);
    return res.value / (2.0 * M_PI);
}

double SecrecyEvaluator::lower_vehicular_fast(double beta) const {
    const BetaContext c = context(beta);
    const bool eves = any_eve() || params_.u_e > 0.0;
    if (!eves) return 1.0;
    if (degenerate_no_an() || c.s0 == 0.0) return 0.0;
    if (params_.u_e > 0.0 && !(params_.lambda_b > 0.0 || params_.u_b > 0.0)) return 0.0;
    const double base = lower_planar(beta);
    if (base == 0.0) return 0.0;
    return base * std::exp(-typical_road_eve_exponent(c));
}

double SecrecyEvaluator::lower_vehicular_full(double beta) const {
    const BetaContext c = context(beta);
    const bool eves = any_eve() || params_.u_e > 0.0;
    if (!eves) return 1.0;
    if (degenerate_no_an() || c.s0 == 0.0) return 0.0;
    const bool field_decay = params_.lambda_b > 0.0 ||
                             (params_.lambda_l > 0.0 && params_.u_b > 0.0);
    if ((params_.lambda_e > 0.0 || params_.u_e > 0.0) &&
        !(field_decay || params_.u_b > 0.0)) {
        return 0.0;
    }
    const double s0 = c.s0;
    const double alpha = params_.alpha;
    const QuadratureSpec inner = quad_.tightened(0.1);
    const GaussLegendre& rule = gauss_legendre(32);

    // off-road vehicular eavesdroppers: the kernel keeps the transform of the
    // typical road at signed perpendicular distance h = r sin(theta) - t cos(theta)
    double road_term = 0.0;
    if (params_.lambda_l > 0.0 && params_.u_e > 0.0) {
        const auto t_integral = [&](double r_e, double theta) {
            const double sin_th = std::sin(theta), cos_th = std::cos(theta);
            const auto one_side = [&](double t) {
                const double rho2 = r_e * r_e + t * t;
                const double v = s0 * std::pow(rho2, 0.5 * alpha);
                const double base = log_core_road0(c, v);
                if (base > kExpFloor) return 0.0;
                const double h = r_e * sin_th - t * cos_th;
                const double hm = r_e * sin_th + t * cos_th;  // mirror t -> -t
                return std::exp(-base) * (safe_exp_neg(model_.road_exponent(v, std::fabs(h))) +
                                          safe_exp_neg(model_.road_exponent(v, std::fabs(hm))));
            };
            return integrate_semi_infinite(one_side, 0.0, inner).value;
        };
        // theta has period pi and mirror symmetry about pi/2
        const auto outer = [&](double r_e) {
            double acc = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double theta = 0.25 * M_PI * (rule.nodes[i] + 1.0);
                acc += rule.weights[i] *
                       (1.0 - std::exp(-params_.u_e * t_integral(r_e, theta)));
            }
            return 0.25 * M_PI * acc;
        };
        const QuadResult res = integrate_semi_infinite(outer, 0.0, quad_);
        road_term = (4.0 * params_.lambda_l / M_PI) *
                    require_converged(res, "secrecy vehicular road-eve term");
    }

    double planar_term = 0.0;
    if (params_.lambda_e > 0.0) {
        const auto outer = [&](double r_e) {
            const double v = s0 * std::pow(r_e, alpha);
            const double base = log_core(c, v);
            if (base > kExpFloor) return 0.0;
            double acc = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double theta = 0.25 * M_PI * (rule.nodes[i] + 1.0);
                acc += rule.weights[i] *
                       safe_exp_neg(model_.road_exponent(v, r_e * std::sin(theta)));
            }
            return r_e * std::exp(-base) * 0.25 * M_PI * acc;
        };
        const QuadResult res = integrate_semi_infinite(outer, 0.0, quad_);
        planar_term =
            4.0 * params_.lambda_e * require_converged(res, "secrecy vehicular planar-eve term");
    }

    return std::exp(-road_term - planar_term - typical_road_eve_exponent(c));
}

double SecrecyEvaluator::upper_vehicular(double beta) const {
    const BetaContext c = context(beta);
    const bool eves = any_eve() || params_.u_e > 0.0;
    if (!eves) return 1.0;
    if (degenerate_no_an() || c.s0 == 0.0) return 0.0;
    const double s0 = c.s0;
    const MinDistEvent off_road{MinDistEventKind::VehicularOffTypicalRoad,
                                TransmitterKind::VehicularTx};
    const MinDistEvent on_road{MinDistEventKind::VehicularOnTypicalRoad,
                               TransmitterKind::VehicularTx};
    const MinDistEvent planar{MinDistEventKind::Planar, TransmitterKind::VehicularTx};
    const auto integrand = [&](double tau) {
        const double v = s0 * std::pow(tau, params_.alpha);
        const double core = safe_exp_neg(log_core(c, v));
        if (core == 0.0) return 0.0;
        const double road0 = safe_exp_neg(model_.road_exponent(v, 0.0));
        double avg = -1.0;  // computed lazily, shared by two event terms
        double acc = 0.0;
        if (params_.lambda_l > 0.0 && params_.u_e > 0.0) {
            avg = theta_average_road_factor(c, v, tau);
            acc += core * road0 * avg * min_dist_pdf(tau, off_road, params_, quad_);
        }
        if (params_.u_e > 0.0) {
            acc += core * road0 * min_dist_pdf(tau, on_road, params_, quad_);
        }
        if (params_.lambda_e > 0.0) {
            if (avg < 0.0) avg = theta_average_road_factor(c, v, tau);
            acc += core * avg * min_dist_pdf(tau, planar, params_, quad_);
        }
        return acc;
    };
    const QuadResult res = integrate_semi_infinite(integrand, 0.0, quad_);
    return 1.0 - require_converged(res, "secrecy vehicular upper bound");
}

double SecrecyEvaluator::upper_vehicular_fast(double beta) const {
    const BetaContext c = context(beta);
    const bool eves = any_eve() || params_.u_e > 0.0;
    if (!eves) return 1.0;
    if (degenerate_no_an() || c.s0 == 0.0) return 0.0;
    const double s0 = c.s0;
    const MinDistEvent off_road{MinDistEventKind::VehicularOffTypicalRoad,
                                TransmitterKind::VehicularTx};
    const MinDistEvent on_road{MinDistEventKind::VehicularOnTypicalRoad,
                               TransmitterKind::VehicularTx};
    const MinDistEvent planar{MinDistEventKind::Planar, TransmitterKind::VehicularTx};
    const auto integrand = [&](double tau) {
        const double v = s0 * std::pow(tau, params_.alpha);
        const double core = safe_exp_neg(log_core(c, v));
        if (core == 0.0) return 0.0;
        const double road0 = safe_exp_neg(model_.road_exponent(v, 0.0));
        double acc = 0.0;
        if (params_.lambda_l > 0.0 && params_.u_e > 0.0) {
            acc += core * road0 * road0 * min_dist_pdf(tau, off_road, params_, quad_);
        }
        if (params_.u_e > 0.0) {
            acc += core * road0 * min_dist_pdf(tau, on_road, params_, quad_);
        }
        if (params_.lambda_e > 0.0) {
            acc += core * road0 * min_dist_pdf(tau, planar, params_, quad_);
        }
        return acc;
    };
    const QuadResult res = integrate_semi_infinite(integrand, 0.0, quad_);
    return 1.0 - require_converged(res, "secrecy vehicular fast upper bound");
}

SecrecyBounds SecrecyEvaluator::bounds_total(double beta, bool fast_vehicular) const {
    SecrecyBounds b;
    b.beta = beta;
    b.lower_planar = lower_planar(beta);
    b.upper_planar = upper_planar(beta);
    b.lower_vehicular_fast = lower_vehicular_fast(beta);
    b.lower_vehicular_full = fast_vehicular ? b.lower_vehicular_fast : lower_vehicular_full(beta);
    b.upper_vehicular_fast = upper_vehicular_fast(beta);
    b.upper_vehicular = fast_vehicular ? b.upper_vehicular_fast : upper_vehicular(beta);
    const double lower_v = fast_vehicular ? b.lower_vehicular_fast : b.lower_vehicular_full;
    const double upper_v = fast_vehicular ? b.upper_vehicular_fast : b.upper_vehicular;
    b.lower_total = rho_p_ * b.lower_planar + rho_v_ * lower_v;
    b.upper_total = rho_p_ * b.upper_planar + rho_v_ * upper_v;
    return b;
}

double secrecy_lb_planar(const NetworkParams& params, double beta, const QuadratureSpec& quad) {
    return SecrecyEvaluator(params, quad).lower_planar(beta);
}

double secrecy_ub_planar(const NetworkParams& params, double beta, const QuadratureSpec& quad) {
    return SecrecyEvaluator(params, quad).upper_planar(beta);
}

double secrecy_lb_vehicular_full(const NetworkParams& params, double beta,
                                 const QuadratureSpec& quad) {
    return SecrecyEvaluator(params, quad).lower_vehicular_full(beta);
}

double secrecy_lb_vehicular_fast(const NetworkParams& params, double beta,
                                 const QuadratureSpec& quad) {
    return SecrecyEvaluator(params, quad).lower_vehicular_fast(beta);
}

double secrecy_ub_vehicular(const NetworkParams& params, double beta, const QuadratureSpec& quad) {
    return SecrecyEvaluator(params, quad).upper_vehicular(beta);
}

double secrecy_ub_vehicular_fast(const NetworkParams& params, double beta,
                                 const QuadratureSpec& quad) {
    return SecrecyEvaluator(params, quad).upper_vehicular_fast(beta);
}

SecrecyBounds secrecy_bounds_total(const NetworkParams& params, double beta,
                                   const QuadratureSpec& quad, bool fast_vehicular) {
    return SecrecyEvaluator(params, quad).bounds_total(beta, fast_vehicular);
}

}  // namespace v2xsec
