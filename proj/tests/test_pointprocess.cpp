#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "v2xsec/pointprocess.hpp"

using namespace v2xsec;

namespace {

NetworkParams road_params() {
    NetworkParams p;
    p.lambda_b = 1e-6;
    p.lambda_l = 1e-3;
    p.u_b = 1e-3;
    p.u_u = 1e-3;
    p.u_e = 1e-3;
    p.alpha = 3.0;
    return p;
}

}  // namespace

TEST_CASE("planar PPP count statistics") {
    Rng rng(7);
    const double lam = 1e-6, R = 3000.0;
    const double expected = lam * M_PI * R * R;  // ~28.27
    const int draws = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < draws; ++i) {
        const auto pts = sample_ppp_disk(lam, R, rng);
        sum += static_cast<double>(pts.size());
        sum_sq += static_cast<double>(pts.size()) * pts.size();
    }
    const double mean = sum / draws;
    const double var = sum_sq / draws - mean * mean;
    CHECK(mean == doctest::Approx(expected).epsilon(0.2 / expected));
    CHECK(var == doctest::Approx(mean).epsilon(0.03));

    CHECK(sample_ppp_disk(0.0, R, rng).empty());
}

TEST_CASE("line process road count and angle distribution") {
    Rng rng(11);
    const double lam_l = 1e-3, R = 3000.0;
    const int draws = 100000;
    double sum = 0.0;
    std::vector<double> thetas;
    for (int i = 0; i < draws; ++i) {
        const auto roads = sample_plp(lam_l, R, rng);
        sum += static_cast<double>(roads.size());
        if (thetas.size() < 20000) {
            for (const auto& road : roads) thetas.push_back(road.theta);
        }
    }
    CHECK(sum / draws == doctest::Approx(2.0 * lam_l * R).epsilon(0.1 / 6.0));

    // Kolmogorov-Smirnov against uniform on [0, 2pi), 1% level
    std::sort(thetas.begin(), thetas.end());
    double d_stat = 0.0;
    const double n = static_cast<double>(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const double cdf = thetas[i] / (2.0 * M_PI);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d_stat = std::max({d_stat, std::fabs(cdf - lo), std::fabs(cdf - hi)});
    }
    CHECK(d_stat < 1.63 / std::sqrt(n));

    CHECK(sample_plp(0.0, R, rng).empty());
}

TEST_CASE("road population lives on the chord") {
    Rng rng(13);
    const double R = 3000.0, u = 1e-3;
    LineRoad through_center;
    through_center.r = 0.0;
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        sum += static_cast<double>(populate_road(through_center, u, R, rng).size());
    }
    CHECK(sum / draws == doctest::Approx(2.0 * u * R).epsilon(0.1 / 6.0));

    LineRoad grazing;
    grazing.r = R;
    CHECK(populate_road(grazing, u, R, rng).empty());
    CHECK(populate_road(through_center, 0.0, R, rng).empty());
}

TEST_CASE("palm conditioning") {
    const NetworkParams p = road_params();
    Rng rng(17);
    SUBCASE("planar typical leaves roads untouched") {
        NetworkRealization net = sample_network(p, 3000.0, rng);
        const std::size_t roads_before = net.roads.size();
        net = palm_condition(std::move(net), TypicalKind::PlanarNode, p, rng);
        CHECK(net.roads.size() == roads_before);
        CHECK(!net.typical_road_index.has_value());
    }
    SUBCASE("vehicular typical adds one road through the origin") {
        NetworkRealization net = sample_network(p, 3000.0, rng);
        const std::size_t roads_before = net.roads.size();
        net = palm_condition(std::move(net), TypicalKind::VehicularNode, p, rng);
        CHECK(net.roads.size() == roads_before + 1);
        REQUIRE(net.typical_road_index.has_value());
        CHECK(net.roads[*net.typical_road_index].r == 0.0);
    }
    SUBCASE("typical road carries the right transmitter mean") {
        double sum = 0.0;
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) {
            NetworkRealization net;
            net.window_radius = 3000.0;
            net = palm_condition(std::move(net), TypicalKind::VehicularNode, p, rng);
            sum += static_cast<double>(net.roads.back().nodes_b.size());
        }
        CHECK(sum / draws == doctest::Approx(2.0 * p.u_b * 3000.0).epsilon(0.1 / 6.0));
    }
    SUBCASE("double conditioning is rejected") {
        NetworkRealization net = sample_network(p, 3000.0, rng);
        net = palm_condition(std::move(net), TypicalKind::PlanarNode, p, rng);
        CHECK_THROWS_AS(palm_condition(std::move(net), TypicalKind::PlanarNode, p, rng),
                        std::logic_error);
    }
}

TEST_CASE("distances") {
    CHECK(distance_to_origin({3.0, 4.0}) == doctest::Approx(5.0));
    CHECK(road_node_distance(0.0, -7.5) == doctest::Approx(7.5));
    CHECK(road_node_distance(30.0, 40.0) == doctest::Approx(50.0));
    LineRoad road;
    road.r = 30.0;
    road.theta = 1.1;
    const Point2 pos = road.node_position(40.0);
    CHECK(distance_to_origin(pos) == doctest::Approx(50.0).epsilon(1e-12));
}

// Dense roads with a fixed mean planar intensity behave like a 2D PPP:
// chi-square on annulus counts against the Poisson expectation.
TEST_CASE("cox process aggregates toward a planar PPP") {
    const double lambda_bar = 1e-5;
    const double lambda_l = 5e-2;  // 100x a 5e-4 baseline
    const double u_b = lambda_bar / lambda_l;
    const double R = 1000.0;
    Rng rng(23);
    const int draws = 2000;
    const int n_annuli = 5;
    std::vector<double> counts(n_annuli, 0.0);
    for (int d = 0; d < draws; ++d) {
        const auto roads = sample_plp(lambda_l, R, rng);
        for (const auto& road : roads) {
            for (double t : populate_road(road, u_b, R, rng)) {
                const double dist = road_node_distance(road.r, t);
                const int k = std::min(n_annuli - 1, static_cast<int>(dist / (R / n_annuli)));
                counts[static_cast<std::size_t>(k)] += 1.0;
            }
        }
    }
    double chi2 = 0.0;
    for (int k = 0; k < n_annuli; ++k) {
        const double r0 = R * k / n_annuli, r1 = R * (k + 1) / n_annuli;
        const double expected = draws * lambda_bar * M_PI * (r1 * r1 - r0 * r0);
        const double diff = counts[static_cast<std::size_t>(k)] - expected;
        chi2 += diff * diff / expected;
    }
    CHECK(chi2 < 15.09);  // chi-square 1% critical value, 5 dof
}

TEST_CASE("counts in disjoint quadrants are uncorrelated") {
    Rng rng(29);
    const int draws = 100000;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int i = 0; i < draws; ++i) {
        const auto pts = sample_ppp_disk(2e-6, 2000.0, rng);
        double a = 0, b = 0;
        for (const auto& pt : pts) {
            if (pt.x > 0 && pt.y > 0) a += 1.0;
            if (pt.x < 0 && pt.y < 0) b += 1.0;
        }
        sx += a;
        sy += b;
        sxx += a * a;
        syy += b * b;
        sxy += a * b;
    }
    const double n = draws;
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double corr =
        cov / std::sqrt((sxx / n - sx * sx / (n * n)) * (syy / n - sy * sy / (n * n)));
    CHECK(std::fabs(corr) < 0.02);
}

TEST_CASE("sampling is a deterministic function of the seed") {
    const NetworkParams p = road_params();
    Rng a(99), b(99);
    NetworkRealization na = sample_network(p, 2000.0, a);
    NetworkRealization nb = sample_network(p, 2000.0, b);
    REQUIRE(na.planar_tx.size() == nb.planar_tx.size());
    REQUIRE(na.roads.size() == nb.roads.size());
    for (std::size_t i = 0; i < na.roads.size(); ++i) {
        CHECK(na.roads[i].r == nb.roads[i].r);
        CHECK(na.roads[i].theta == nb.roads[i].theta);
        CHECK(na.roads[i].nodes_b == nb.roads[i].nodes_b);
    }
}

TEST_CASE("realization dump is one well-formed JSON document") {
    const NetworkParams p = road_params();
    Rng rng(5);
    NetworkRealization net = sample_network(p, 500.0, rng);
    std::ostringstream os;
    dump_realization_json(net, os);
    const std::string doc = os.str();
    CHECK(doc.find("\"roads\"") != std::string::npos);
    CHECK(doc.find("\"planar_tx\"") != std::string::npos);
    CHECK(doc.back() == '\n');
    CHECK(std::count(doc.begin(), doc.end(), '{') == std::count(doc.begin(), doc.end(), '}'));
}
