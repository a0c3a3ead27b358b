#pragma once

#include <vector>

#include "v2xsec/coverage.hpp"
#include "v2xsec/model.hpp"
#include "v2xsec/numerics.hpp"
#include "v2xsec/secrecy.hpp"

namespace v2xsec {

enum class PsecSource { AnalyticLowerTotal, AnalyticLowerFullTotal, MonteCarlo };

struct ThroughputResult {
    double eta = 0.0;    // bits/s/Hz
    double p_c = 0.0;    // coverage probability used
    double p_sec = 0.0;  // secrecy probability used
    double r_s = 0.0;    // secrecy rate, bits/s/Hz
    PsecSource p_sec_source = PsecSource::AnalyticLowerTotal;
};

// eta = R_s * p_c * p_sec with the conservative lower-bound secrecy total.
ThroughputResult effective_secrecy_throughput(const NetworkParams& params,
                                              const Thresholds& thresholds,
                                              const QuadratureSpec& quad,
                                              bool fast_bounds = true);

struct PhiGridSpec {
    double start = 0.05;
    double stop = 0.95;
    int count = 19;
};

struct PhiOptimum {
    double phi_star = 0.0;
    double eta_star = 0.0;
    std::vector<std::pair<double, double>> curve;  // (phi, eta) on the scan grid
    bool multimodal_warning = false;
};

// Coarse grid scan followed by golden-section refinement around the grid
// maximum. A flat or multi-peaked scan skips refinement and returns the grid
// maximum with the warning flag set.
PhiOptimum optimize_phi(const NetworkParams& params, const Thresholds& thresholds,
                        const PhiGridSpec& grid, const QuadratureSpec& quad);

// True when the sampled curve rises to a single peak and falls afterwards,
// up to a small tolerance.
bool is_unimodal(const std::vector<std::pair<double, double>>& curve, double tol = 1e-12);

}  // namespace v2xsec
