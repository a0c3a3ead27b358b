#include "v2xsec/throughput.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace v2xsec {

ThroughputResult effective_secrecy_throughput(const NetworkParams& params,
                                              const Thresholds& thresholds,
                                              const QuadratureSpec& quad, bool fast_bounds) {
    const DerivedConstants d = derive_constants(params, thresholds);
    ThroughputResult out;
    out.r_s = d.r_s_rate;
    out.p_c = coverage_total(params, thresholds.gamma, quad).p_c_total;
    const SecrecyBounds bounds = secrecy_bounds_total(params, thresholds.beta, quad, fast_bounds);
    out.p_sec = bounds.lower_total;
    out.p_sec_source =
        fast_bounds ? PsecSource::AnalyticLowerTotal : PsecSource::AnalyticLowerFullTotal;
    out.eta = out.r_s * out.p_c * out.p_sec;
    return out;
}

bool is_unimodal(const std::vector<std::pair<double, double>>& curve, double tol) {
    bool falling = false;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const double step = curve[i].second - curve[i - 1].second;
        if (step < -tol) falling = true;
        else if (step > tol && falling) return false;
    }
    return true;
}

PhiOptimum optimize_phi(const NetworkParams& params, const Thresholds& thresholds,
                        const PhiGridSpec& grid, const QuadratureSpec& quad) {
    if (!(grid.start > 0.0 && grid.stop < 1.0 && grid.start < grid.stop)) {
        throw ValidationError("optimize_phi: grid must lie inside (0, 1)");
    }
    if (grid.count < 3) throw ValidationError("optimize_phi: grid needs at least 3 points");

    const auto eta_at = [&](double phi) {
        NetworkParams p = params;
        p.phi = phi;
        return effective_secrecy_throughput(p, thresholds, quad).eta;
    };

    PhiOptimum out;
    out.curve.reserve(static_cast<std::size_t>(grid.count));
    std::size_t best_idx = 0;
    for (int i = 0; i < grid.count; ++i) {
        const double phi = grid.start + (grid.stop - grid.start) * i / (grid.count - 1);
        const double eta = eta_at(phi);
        out.curve.emplace_back(phi, eta);
        if (eta > out.curve[best_idx].second) best_idx = out.curve.size() - 1;
    }
    out.phi_star = out.curve[best_idx].first;
    out.eta_star = out.curve[best_idx].second;

    const double range = out.eta_star - std::min_element(out.curve.begin(), out.curve.end(),
                                                         [](const auto& a, const auto& b) {
                                                             return a.second < b.second;
                                                         })
                                            ->second;
    if (!is_unimodal(out.curve, 1e-9 * std::max(out.eta_star, 1e-30)) || range <= 0.0) {
        out.multimodal_warning = true;
        return out;  // grid maximum without refinement
    }
    if (best_idx == 0 || best_idx + 1 == out.curve.size()) {
        return out;  // maximum at a grid edge; nothing to bracket
    }

    // golden-section refinement inside the bracketing grid cells
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = out.curve[best_idx - 1].first;
    double b = out.curve[best_idx + 1].first;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = eta_at(x1);
    double f2 = eta_at(x2);
    while (b - a > 1e-3) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = eta_at(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = eta_at(x1);
        }
    }
    const double phi_ref = f1 > f2 ? x1 : x2;
    const double eta_ref = std::max(f1, f2);
    if (eta_ref >= out.eta_star) {
        out.phi_star = phi_ref;
        out.eta_star = eta_ref;
    }
    return out;
}

}  // namespace v2xsec
