#include <doctest.h>

#include <cmath>
#include <vector>

#include "v2xsec/laplace.hpp"
#include "v2xsec/numerics.hpp"

using namespace v2xsec;

namespace {
const QuadratureSpec kSpec{};
}

TEST_CASE("finite integrals of smooth functions") {
    CHECK(integrate_finite([](double) { return 1.0; }, 0.0, 1.0, kSpec).value ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(integrate_finite([](double x) { return std::sin(x); }, 0.0, M_PI, kSpec).value ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK(integrate_finite([](double x) { return x * x; }, 0.0, 3.0, kSpec).value ==
          doctest::Approx(9.0).epsilon(1e-10));
}

TEST_CASE("semi-infinite integrals") {
    CHECK(integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0, kSpec).value ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(integrate_semi_infinite([](double x) { return x * std::exp(-x * x); }, 0.0, kSpec)
              .value == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, kSpec)
              .value == doctest::Approx(M_PI / 2.0).epsilon(1e-10));
}

TEST_CASE("adaptive-extension tail policy agrees with the variable change") {
    QuadratureSpec ext = kSpec;
    ext.tail_cut = TailPolicy::AdaptiveExtension;
    const auto f = [](double x) { return std::exp(-0.3 * x) * std::cos(x); };
    const double a = integrate_semi_infinite(f, 0.0, kSpec).value;
    const double b = integrate_semi_infinite(f, 0.0, ext).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-7));
}

TEST_CASE("nested separable product") {
    const auto outer = [](double r, QuadResult inner) { return inner.value * std::exp(-r); };
    const auto inner = [](double, double t) { return std::exp(-t); };
    const QuadResult res = integrate_nested(outer, inner, 0.0, 0.0, kSpec);
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-8));

    const auto zero_inner = [](double, double t) { return t < 1.0 ? 0.0 : 0.0; };
    const QuadResult zero = integrate_nested(outer, zero_inner, 0.0, 0.0, kSpec);
    CHECK(zero.value == doctest::Approx(0.0));
}

// Trapezoid-grid oracle for the road-network transform exponent at small s:
// 2*lambda_l*int(1 - exp(-2 u_b int(1 - L((r^2+t^2)^{-a/2})) dt)) dr with a
// million-node grid on a truncated box.
TEST_CASE("road-network exponent matches a brute-force trapezoid grid") {
    const double lambda_l = 1e-3, u_b = 1e-2, alpha = 3.0, s = 1.0;
    const GainDistribution gain = GainDistribution::unit_exponential();

    const double T_inner = 400.0, T_outer = 400.0;
    const int n = 1000;
    std::vector<double> inner_vals(n + 1);
    auto kernel = [&](double r, double t) {
        return 1.0 - gain_laplace(gain, s * std::pow(r * r + t * t, -alpha / 2.0));
    };
    double outer_sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double r = T_outer * i / n;
        double inner = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double t = T_inner * j / n;
            const double w = (j == 0 || j == n) ? 0.5 : 1.0;
            inner += w * kernel(r, t);
        }
        inner *= T_inner / n;
        const double v = 1.0 - std::exp(-2.0 * u_b * inner);
        outer_sum += ((i == 0 || i == n) ? 0.5 : 1.0) * v;
    }
    const double oracle = 2.0 * lambda_l * outer_sum * T_outer / n;

    const double exact = 2.0 * lambda_l * field_integral(gain, alpha, u_b, s, kSpec);
    CHECK(exact == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("linearity in the integrand") {
    const auto base = [](double x) { return std::exp(-x) * (1.0 + std::sin(3.0 * x)); };
    const double ref = integrate_semi_infinite(base, 0.0, kSpec).value;
    for (double c : {-1.0, 2.0, 10.0}) {
        const double scaled =
            integrate_semi_infinite([&](double x) { return c * base(x); }, 0.0, kSpec).value;
        CHECK(scaled == doctest::Approx(c * ref).epsilon(1e-9));
    }
}

TEST_CASE("domain split is additive") {
    const auto f = [](double x) { return std::cos(x) * std::exp(-0.1 * x); };
    const QuadResult whole = integrate_finite(f, 0.0, 7.0, kSpec);
    const QuadResult left = integrate_finite(f, 0.0, 2.5, kSpec);
    const QuadResult right = integrate_finite(f, 2.5, 7.0, kSpec);
    CHECK(whole.value == doctest::Approx(left.value + right.value)
                             .epsilon(1e-10));
}

TEST_CASE("determinism: identical calls give bitwise-identical results") {
    const auto f = [](double x) { return std::sqrt(x) * std::exp(-x); };
    const QuadResult a = integrate_semi_infinite(f, 0.0, kSpec);
    const QuadResult b = integrate_semi_infinite(f, 0.0, kSpec);
    CHECK(a.value == b.value);
    CHECK(a.error_estimate == b.error_estimate);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("non-convergence is flagged, not silently returned") {
    QuadratureSpec strict;
    strict.rel_tol = 1e-14;
    strict.abs_tol = 1e-16;
    strict.max_depth = 2;
    const auto nasty = [](double x) { return 1.0 / std::sqrt(std::fabs(x - 1.0 / 3.0)); };
    const QuadResult res = integrate_finite(nasty, 0.0, 1.0, strict);
    CHECK(!res.converged);
    CHECK_THROWS_AS(require_converged(res, "test"), QuadratureError);
}

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
    const GaussLegendre& rule = gauss_legendre(8);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes[i];
        acc += rule.weights[i] * (5.0 * x * x * x * x - x * x + 2.0);
    }
    // int_{-1}^{1} = 2 + 2*5/5 - 2/3
    CHECK(acc == doctest::Approx(2.0 + 2.0 - 2.0 / 3.0).epsilon(1e-13));
}
