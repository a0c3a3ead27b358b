#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace v2xsec {

enum class TailPolicy {
    VariableChange,     // map [a,inf) onto [0,1) with t = a + u/(1-u)
    AdaptiveExtension,  // integrate [a, a+L] with doubling L until stable
};

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_depth = 48;
    TailPolicy tail_cut = TailPolicy::VariableChange;

    QuadratureSpec tightened(double factor) const {
        QuadratureSpec s = *this;
        s.rel_tol *= factor;
        s.abs_tol *= factor;
        return s;
    }
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = true;
};

class QuadratureError : public std::runtime_error {
public:
    explicit QuadratureError(const std::string& message) : std::runtime_error(message) {}
};

using Integrand = std::function<double(double)>;

QuadResult integrate_finite(const Integrand& f, double a, double b, const QuadratureSpec& spec);

QuadResult integrate_semi_infinite(const Integrand& f, double a, const QuadratureSpec& spec);

// Evaluates  int_{outer_a}^{inf} outer_kernel(r, I(r)) dr  with
// I(r) = int_{inner_a}^{inf} inner_kernel(r, t) dt, the inner tolerance one
// order tighter than the outer one. Inner non-convergence is reported with
// the outer abscissa that triggered it.
QuadResult integrate_nested(const std::function<double(double, QuadResult)>& outer_kernel,
                            const std::function<double(double, double)>& inner_kernel,
                            double outer_a, double inner_a, const QuadratureSpec& spec);

// Throws QuadratureError if r did not converge.
double require_converged(const QuadResult& r, const char* context);

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussLegendre& gauss_legendre(int n);

}  // namespace v2xsec
