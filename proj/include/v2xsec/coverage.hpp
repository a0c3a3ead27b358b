#pragma once

#include <vector>

#include "v2xsec/laplace.hpp"
#include "v2xsec/model.hpp"
#include "v2xsec/numerics.hpp"

namespace v2xsec {

struct CoverageResult {
    double p_c_planar = 0.0;
    double p_c_vehicular = 0.0;
    double p_c_total = 0.0;
    double gamma = 0.0;
    double quadrature_error = 0.0;
};

// Max-SIR coverage through the gamma-cdf bound: an alternating binomial sum
// over transforms evaluated at n * kappa * s. Building one evaluator
// amortizes the interference-transform tables across gamma and N sweeps.
class CoverageEvaluator {
public:
    CoverageEvaluator(const NetworkParams& params, const QuadratureSpec& quad);

    double planar(double gamma) const;
    double vehicular(double gamma) const;
    CoverageResult total(double gamma) const;

    // Partial sums over the binomial index, for the bracketing check.
    std::vector<double> planar_partial_sums(double gamma) const;

    double last_error_estimate() const { return error_estimate_; }

private:
    struct TermIntegrals {
        double value = 0.0;
        double error = 0.0;
    };

    double association_sum(double gamma, bool typical_road, std::vector<double>* partials) const;
    TermIntegrals planar_association(double nk, double gamma, bool typical_road) const;
    TermIntegrals vehicular_association(double nk, double gamma, bool typical_road) const;
    TermIntegrals typical_road_association(double nk, double gamma) const;

    NetworkParams params_;
    QuadratureSpec quad_;
    InterferenceFieldModel model_;
    double kappa_;
    double kappa_p_, kappa_v_;
    mutable double error_estimate_ = 0.0;
};

double coverage_planar(const NetworkParams& params, double gamma, const QuadratureSpec& quad);
double coverage_vehicular(const NetworkParams& params, double gamma, const QuadratureSpec& quad);
CoverageResult coverage_total(const NetworkParams& params, double gamma,
                              const QuadratureSpec& quad);

}  // namespace v2xsec
