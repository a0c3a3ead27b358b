#pragma once

#include <string>

namespace v2xsec {

// All spatial intensities are per meter (roads, on-road nodes) or per square
// meter (planar nodes). Total transmit power is fixed to 1; the SIR of an
// interference-limited network is invariant to that scale.
struct NetworkParams {
    double lambda_b = 0.0;  // planar transmitters, per m^2
    double lambda_u = 0.0;  // planar receivers, per m^2
    double lambda_e = 0.0;  // planar eavesdroppers, per m^2
    double lambda_l = 0.0;  // road (line) intensity, per m
    double u_b = 0.0;       // vehicular transmitters per road, per m
    double u_u = 0.0;       // vehicular receivers per road, per m
    double u_e = 0.0;       // vehicular eavesdroppers per road, per m
    int n_antennas = 2;     // transmit antennas N (>= 2, AN needs a null space)
    double phi = 0.5;       // power fraction given to the information beam
    double alpha = 3.0;     // path-loss exponent (> 2)

    void validate() const;
    double delta() const { return 2.0 / alpha; }
};

// SIR thresholds in linear scale. dB exists only at the CLI boundary.
struct Thresholds {
    double gamma = 10.0;  // legitimate link threshold, > 1
    double beta = 1.0;    // eavesdropper threshold, > 0, < gamma

    void validate() const;
};

struct DerivedConstants {
    double delta;      // 2/alpha
    double kappa;      // (N!)^(-1/N)
    double kappa_p;    // probability the typical receiver is planar
    double kappa_v;    // probability the typical receiver is vehicular
    double rho_p;      // probability the typical transmitter is planar
    double rho_v;      // probability the typical transmitter is vehicular
    double s_secrecy;  // (1/phi - 1) * beta / (N - 1)
    double r_b_rate;   // log2(1 + gamma), bits/s/Hz
    double r_s_rate;   // r_b_rate - r_e_rate
    double r_e_rate;   // log2(1 + beta)
};

DerivedConstants derive_constants(const NetworkParams& params, const Thresholds& thresholds);

double db_to_linear(double x_db);
double linear_to_db(double x);

// Thrown by parameter and threshold validation; the message names the
// violated bound.
class ValidationError : public std::exception {
public:
    explicit ValidationError(std::string message) : message_(std::move(message)) {}
    const char* what() const noexcept override { return message_.c_str(); }

private:
    std::string message_;
};

}  // namespace v2xsec
