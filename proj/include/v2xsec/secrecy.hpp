#pragma once

#include <optional>

#include "v2xsec/laplace.hpp"
#include "v2xsec/model.hpp"
#include "v2xsec/numerics.hpp"

namespace v2xsec {

struct SecrecyBounds {
    double lower_planar = 1.0;
    double upper_planar = 1.0;
    double lower_vehicular_full = 1.0;
    double lower_vehicular_fast = 1.0;
    double upper_vehicular = 1.0;
    double upper_vehicular_fast = 1.0;
    double lower_total = 1.0;
    double upper_total = 1.0;
    double beta = 0.0;
};

enum class MinDistEventKind {
    VehicularOffTypicalRoad,
    VehicularOnTypicalRoad,
    Planar,
};

enum class TransmitterKind { PlanarTx, VehicularTx };

struct MinDistEvent {
    MinDistEventKind kind = MinDistEventKind::Planar;
    TransmitterKind transmitter_kind = TransmitterKind::PlanarTx;

    void validate() const;
};

// Density of the distance to the nearest eavesdropper, split by the type of
// that nearest eavesdropper. The inverse-square-root endpoint singularity of
// the road term is removed exactly by the substitution r = tau * sin(u).
double min_dist_pdf(double tau, const MinDistEvent& event, const NetworkParams& params,
                    const QuadratureSpec& quad);

// Dense-road closed forms: the nearest-eavesdropper law of a 2D PPP with
// intensity lambda_l * u_e + lambda_e.
double min_dist_pdf_asymptotic(double tau, const MinDistEvent& event, double lambda_l,
                               double u_e, double lambda_e);

// Evaluates all secrecy-probability bounds for one parameter set. The
// interference tables are beta-independent, so one evaluator serves a whole
// beta sweep.
class SecrecyEvaluator {
public:
    SecrecyEvaluator(const NetworkParams& params, const QuadratureSpec& quad);

    double lower_planar(double beta) const;
    double upper_planar(double beta) const;
    double lower_vehicular_full(double beta) const;
    double lower_vehicular_fast(double beta) const;
    double upper_vehicular(double beta) const;
    double upper_vehicular_fast(double beta) const;

    SecrecyBounds bounds_total(double beta, bool fast_vehicular = true) const;

private:
    struct BetaContext {
        double s0;       // (1/phi - 1) beta / (N - 1)
        double log_pref; // (1 - N) log(1 + s0)
    };
    BetaContext context(double beta) const;

    bool any_eve() const;
    bool degenerate_no_an() const { return params_.phi >= 1.0; }

    // log of the nearest-eve SIR ccdf kernels; v = s0 * distance^alpha
    double log_core(const BetaContext& c, double v) const;        // planar + field
    double log_core_road0(const BetaContext& c, double v) const;  // + typical/own road

    double planar_eve_exponent(const BetaContext& c) const;          // 2 pi lam_e int
    double road_eve_exponent(const BetaContext& c) const;            // 2 lam_l int (1-e^{-2 u_e T})
    double typical_road_eve_exponent(const BetaContext& c) const;    // 2 u_e int Lambda_3

    double theta_average_road_factor(const BetaContext& c, double v, double dist) const;

    NetworkParams params_;
    QuadratureSpec quad_;
    InterferenceFieldModel model_;  // gamma(N-1,1) gain field
    double rho_p_, rho_v_;
};

double secrecy_lb_planar(const NetworkParams& params, double beta, const QuadratureSpec& quad);
double secrecy_ub_planar(const NetworkParams& params, double beta, const QuadratureSpec& quad);
double secrecy_lb_vehicular_full(const NetworkParams& params, double beta,
                                 const QuadratureSpec& quad);
double secrecy_lb_vehicular_fast(const NetworkParams& params, double beta,
                                 const QuadratureSpec& quad);
double secrecy_ub_vehicular(const NetworkParams& params, double beta, const QuadratureSpec& quad);
double secrecy_ub_vehicular_fast(const NetworkParams& params, double beta,
                                 const QuadratureSpec& quad);
SecrecyBounds secrecy_bounds_total(const NetworkParams& params, double beta,
                                   const QuadratureSpec& quad, bool fast_vehicular = true);

}  // namespace v2xsec
