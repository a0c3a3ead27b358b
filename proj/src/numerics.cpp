#include "v2xsec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace v2xsec {

namespace {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000,
};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
};

struct PanelEstimate {
    double value;
    double error;
};

PanelEstimate gauss_kronrod_15(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double gauss = fc * kGaussWeights[3];
    double kronrod = fc * kKronrodWeights[7];
    for (int i = 0; i < 7; ++i) {
        const double offset = half * kKronrodNodes[i];
        const double sum = f(center - offset) + f(center + offset);
        kronrod += sum * kKronrodWeights[i];
        if (i % 2 == 1) gauss += sum * kGaussWeights[i / 2];
    }
    kronrod *= half;
    gauss *= half;
    const double diff = std::fabs(kronrod - gauss);
    // QUADPACK-style sharpened error estimate.
    const double err = diff == 0.0 ? 0.0 : diff * std::min(1.0, std::pow(200.0 * diff, 1.5));
    return {kronrod, std::max(err, 1e-300)};
}

void subdivide(const Integrand& f, double a, double b, double tol, int depth,
               const QuadratureSpec& spec, QuadResult& out) {
    const PanelEstimate est = gauss_kronrod_15(f, a, b);
    out.evaluations += 15;
    if (est.error <= tol || depth >= spec.max_depth) {
        out.value += est.value;
        out.error_estimate += est.error;
        return;
    }
    const double mid = 0.5 * (a + b);
    subdivide(f, a, mid, 0.5 * tol, depth + 1, spec, out);
    subdivide(f, mid, b, 0.5 * tol, depth + 1, spec, out);
}

}  // namespace

QuadResult integrate_finite(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
    if (!(a <= b)) throw QuadratureError("integrate_finite: requires a <= b");
    QuadResult out;
    if (a == b) return out;
    const PanelEstimate first = gauss_kronrod_15(f, a, b);
    out.evaluations = 15;
    double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(first.value));
    if (first.error <= tol) {
        out.value = first.value;
        out.error_estimate = first.error;
        return out;
    }
    // The panel budgets derive from a first-pass estimate of the integral;
    // when that estimate was off, retry once against the refined value.
    const double mid = 0.5 * (a + b);
    long evaluations = out.evaluations;
    for (int attempt = 0; attempt < 3; ++attempt) {
        out = QuadResult{};
        subdivide(f, a, mid, 0.5 * tol, 1, spec, out);
        subdivide(f, mid, b, 0.5 * tol, 1, spec, out);
        evaluations += out.evaluations;
        const double bound = std::max(spec.abs_tol, spec.rel_tol * std::fabs(out.value));
        out.converged = out.error_estimate <= bound;
        if (out.converged || tol <= 0.5 * bound) break;
        tol = 0.5 * bound;
    }
    out.evaluations = evaluations;
    return out;
}

QuadResult integrate_semi_infinite(const Integrand& f, double a, const QuadratureSpec& spec) {
    if (spec.tail_cut == TailPolicy::VariableChange) {
        const auto mapped = [&f, a](double u) {
            const double one_minus = 1.0 - u;
            if (one_minus < 1e-14) return 0.0;  // integrable tails vanish here
            const double t = a + u / one_minus;
            return f(t) / (one_minus * one_minus);
        };
        return integrate_finite(mapped, 0.0, 1.0, spec);
    }
    // AdaptiveExtension: grow the truncation point until two consecutive
    // extensions contribute less than the requested tolerance.
    QuadResult total;
    double left = a;
    double len = 1.0;
    int quiet = 0;
    for (int iter = 0; iter < 64; ++iter) {
        QuadResult piece = integrate_finite(f, left, left + len, spec);
        total.value += piece.value;
        total.error_estimate += piece.error_estimate;
        total.evaluations += piece.evaluations;
        total.converged = total.converged && piece.converged;
        left += len;
        len *= 2.0;
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(total.value));
        quiet = std::fabs(piece.value) <= tol ? quiet + 1 : 0;
        if (quiet >= 2) return total;
    }
    total.converged = false;
    return total;
}

QuadResult integrate_nested(const std::function<double(double, QuadResult)>& outer_kernel,
                            const std::function<double(double, double)>& inner_kernel,
                            double outer_a, double inner_a, const QuadratureSpec& spec) {
    const QuadratureSpec inner_spec = spec.tightened(0.1);
    QuadResult inner_failure;
    double failed_at = 0.0;
    bool inner_failed = false;
    long inner_evals = 0;

    const auto outer_integrand = [&](double r) {
        QuadResult inner = integrate_semi_infinite(
            [&](double t) { return inner_kernel(r, t); }, inner_a, inner_spec);
        inner_evals += inner.evaluations;
        if (!inner.converged && !inner_failed) {
            inner_failed = true;
            failed_at = r;
            inner_failure = inner;
        }
        return outer_kernel(r, inner);
    };

    QuadResult out = integrate_semi_infinite(outer_integrand, outer_a, spec);
    out.evaluations += inner_evals;
    if (inner_failed) {
        std::ostringstream msg;
        msg << "integrate_nested: inner integral did not converge at outer abscissa " << failed_at
            << " (error estimate " << inner_failure.error_estimate << ")";
        throw QuadratureError(msg.str());
    }
    return out;
}

double require_converged(const QuadResult& r, const char* context) {
    if (!r.converged) {
        std::ostringstream msg;
        msg << context << ": quadrature did not converge (value " << r.value << ", error estimate "
            << r.error_estimate << ", " << r.evaluations << " evaluations)";
        throw QuadratureError(msg.str());
    }
    return r.value;
}

const GaussLegendre& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n, Chebyshev initial guesses.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    auto [pos, inserted] = cache.emplace(n, std::move(rule));
    (void)inserted;
    return pos->second;
}

}  // namespace v2xsec
