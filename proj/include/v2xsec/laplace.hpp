#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "v2xsec/model.hpp"
#include "v2xsec/numerics.hpp"

namespace v2xsec {

// Fading-gain law attached to an interference field. UnitExponential is the
// plain Rayleigh power gain, GammaShape(k) a gamma(k,1) gain, MrtAnMixture
// the gain an interfering beamformer presents to the legitimate receiver:
// phi * exp(1) + (1-phi)/(N-1) * gamma(N-1,1).
struct GainDistribution {
    enum class Kind { UnitExponential, GammaShape, MrtAnMixture };

    Kind kind = Kind::UnitExponential;
    int shape = 1;        // GammaShape only
    double phi = 1.0;     // MrtAnMixture only
    int n_antennas = 2;   // MrtAnMixture only

    static GainDistribution unit_exponential() { return {}; }
    static GainDistribution gamma_shape(int k);
    static GainDistribution mrt_an_mixture(double phi, int n_antennas);

    double mean() const;
};

// E(exp(-s * gain)); rejects s < 0.
double gain_laplace(const GainDistribution& gain, double s);

// E(gain^delta) with delta = 2/alpha.
double gain_delta_moment(const GainDistribution& gain, double alpha);

// delta-moment of the MRT/AN mixture gain; the phi = 1/N branch is taken
// within |phi - 1/N| <= 1e-9 where the general expression degenerates.
double omega(double phi, int n_antennas, double alpha);

enum class LaplaceSource {
    CoveragePlanarField,
    CoverageVehicularField,
    CoverageSingleRoad,
    SecrecyPlanarField,
    SecrecyVehicularField,
    SecrecySingleRoad,
    AsymptoticVehicularField,
};

struct LaplaceEval {
    double value = 1.0;
    double s = 0.0;
    LaplaceSource source = LaplaceSource::CoveragePlanarField;
};

// Laplace transforms of the interference power at the typical receiver
// (mixture gain) and at an eavesdropper (gamma(N-1,1) gain), for the three
// field types: the whole road network, the planar field, and a single road
// at perpendicular distance r.
LaplaceEval lt_coverage_planar_field(double s, const NetworkParams& params,
                                     const QuadratureSpec& quad);
LaplaceEval lt_coverage_vehicular_field(double s, const NetworkParams& params,
                                        const QuadratureSpec& quad);
LaplaceEval lt_coverage_single_road(double s, double r, const NetworkParams& params,
                                    const QuadratureSpec& quad);
LaplaceEval lt_secrecy_planar_field(double s, const NetworkParams& params,
                                    const QuadratureSpec& quad);
LaplaceEval lt_secrecy_vehicular_field(double s, const NetworkParams& params,
                                       const QuadratureSpec& quad);
LaplaceEval lt_secrecy_single_road(double s, double r, const NetworkParams& params,
                                   const QuadratureSpec& quad);

// Dense-road limit: the road network behaves like a 2D PPP of intensity
// lambda_bar = lambda_l * u_b.
LaplaceEval lt_asymptotic_vehicular_field(double s, double lambda_bar,
                                          const GainDistribution& gain, double alpha,
                                          const QuadratureSpec& quad);

// --- scale-normalized kernels -------------------------------------------
//
// With v = s and x = r * v^(-1/alpha), the single-road integral obeys
//   int_0^inf (1 - L_gain(s (r^2+t^2)^(-alpha/2))) dt
//     = v^(1/alpha) * unit_road_kernel(x),
// which makes every road transform a one-parameter family and keeps the
// quadrature well conditioned over the full s range.

double unit_road_kernel(const GainDistribution& gain, double alpha, double x,
                        const QuadratureSpec& quad);

double road_integral(const GainDistribution& gain, double alpha, double s, double r,
                     const QuadratureSpec& quad);

double field_integral(const GainDistribution& gain, double alpha, double u_b, double s,
                      const QuadratureSpec& quad);

// Literal nested-quadrature routes, kept as an independent cross-check of
// the scaled forms.
double road_integral_direct(const GainDistribution& gain, double alpha, double s, double r,
                            const QuadratureSpec& quad);
double field_integral_direct(const GainDistribution& gain, double alpha, double u_b, double s,
                             const QuadratureSpec& quad);

// Tabulated unit road kernel: log-log cubic spline with an exact power-law
// tail, built once per (gain, alpha) and reused across thousands of
// transform evaluations inside the coverage/secrecy integrators.
class RoadKernelTable {
public:
    RoadKernelTable(const GainDistribution& gain, double alpha, const QuadratureSpec& quad);

    double operator()(double x) const;
    double alpha() const { return alpha_; }
    const GainDistribution& gain() const { return gain_; }

private:
    GainDistribution gain_;
    double alpha_;
    double x_min_, x_max_;
    double tail_coeff_;
    std::vector<double> log_x_, log_w_, second_;
};

// Everything needed to evaluate the three interference transforms of one
// gain law against one parameter set. Immutable after construction; safe to
// share across threads.
class InterferenceFieldModel {
public:
    InterferenceFieldModel(const GainDistribution& gain, const NetworkParams& params,
                           const QuadratureSpec& quad);

    // -log of the respective Laplace transform
    double planar_exponent(double s) const;
    double road_exponent(double s, double r) const;
    double field_exponent(double s) const;

    double planar_laplace(double s) const { return std::exp(-planar_exponent(s)); }
    double road_laplace(double s, double r) const { return std::exp(-road_exponent(s, r)); }
    double field_laplace(double s) const { return std::exp(-field_exponent(s)); }

    const RoadKernelTable& kernel() const { return w1_; }

private:
    double field_exponent_exact(double s) const;

    double lambda_b_, lambda_l_, u_b_, alpha_, inv_alpha_;
    double planar_coeff_;  // lambda_b * pi * E(gain^delta) * Gamma(1-delta)
    QuadratureSpec quad_;
    RoadKernelTable w1_;
    double s_min_, s_max_;
    std::vector<double> log_s_, log_e_, second_;
    double slope_lo_ = 0.0, slope_hi_ = 0.0;
};

}  // namespace v2xsec
