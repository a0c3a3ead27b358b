#include "v2xsec/model.hpp"

#include <cmath>
#include <sstream>

namespace v2xsec {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ValidationError(what);
}

}  // namespace

void NetworkParams::validate() const {
    require(lambda_b >= 0.0, "lambda_b must be >= 0");
    require(lambda_u >= 0.0, "lambda_u must be >= 0");
    require(lambda_e >= 0.0, "lambda_e must be >= 0");
    require(lambda_l >= 0.0, "lambda_l must be >= 0");
    require(u_b >= 0.0, "u_b must be >= 0");
    require(u_u >= 0.0, "u_u must be >= 0");
    require(u_e >= 0.0, "u_e must be >= 0");
    require(n_antennas >= 2, "n_antennas must be >= 2 (the AN null space needs N-1 >= 1)");
    require(n_antennas <= 64, "n_antennas must be <= 64");
    require(phi > 0.0 && phi <= 1.0, "phi must lie in (0, 1]");
    require(alpha > 2.0, "alpha must be > 2");
}

void Thresholds::validate() const {
    require(gamma > 1.0, "gamma must be > 1 (0 dB) for the analytic coverage expressions");
    require(beta > 0.0, "beta must be > 0");
    require(gamma > beta, "gamma must exceed beta so the secrecy rate is positive");
}

DerivedConstants derive_constants(const NetworkParams& params, const Thresholds& thresholds) {
    params.validate();
    thresholds.validate();

    DerivedConstants d{};
    d.delta = params.delta();
    const int n = params.n_antennas;
    // (N!)^(-1/N) in log space; safe for any supported N.
    d.kappa = std::exp(-std::lgamma(static_cast<double>(n) + 1.0) / n);

    const double rx_road = params.u_u * params.lambda_l;
    if (params.lambda_u + rx_road > 0.0) {
        d.kappa_p = params.lambda_u / (params.lambda_u + rx_road);
    } else {
        d.kappa_p = 1.0;  // no receivers anywhere; planar by convention
    }
    d.kappa_v = 1.0 - d.kappa_p;

    const double tx_road = params.u_b * params.lambda_l;
    if (params.lambda_b + tx_road > 0.0) {
        d.rho_p = params.lambda_b / (params.lambda_b + tx_road);
    } else {
        d.rho_p = 1.0;
    }
    d.rho_v = 1.0 - d.rho_p;

    d.s_secrecy = (1.0 / params.phi - 1.0) * thresholds.beta / (n - 1);
    d.r_b_rate = std::log2(1.0 + thresholds.gamma);
    d.r_e_rate = std::log2(1.0 + thresholds.beta);
    d.r_s_rate = d.r_b_rate - d.r_e_rate;
    return d;
}

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace v2xsec
