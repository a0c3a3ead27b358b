#include "v2xsec/pointprocess.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace v2xsec {

std::vector<Point2> sample_ppp_disk(double intensity, double radius, Rng& rng) {
    std::vector<Point2> points;
    if (intensity <= 0.0) return points;
    const long n = rng.poisson(intensity * M_PI * radius * radius);
    points.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const double rho = radius * std::sqrt(rng.uniform());
        const double angle = 2.0 * M_PI * rng.uniform();
        points.push_back({rho * std::cos(angle), rho * std::sin(angle)});
    }
    return points;
}

std::vector<LineRoad> sample_plp(double line_intensity, double radius, Rng& rng) {
    std::vector<LineRoad> roads;
    if (line_intensity <= 0.0) return roads;
    const long n = rng.poisson(2.0 * line_intensity * radius);
    roads.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        LineRoad road;
        road.r = radius * rng.uniform();
        road.theta = 2.0 * M_PI * rng.uniform();
        roads.push_back(std::move(road));
    }
    return roads;
}

std::vector<double> populate_road(const LineRoad& road, double intensity, double radius, Rng& rng) {
    std::vector<double> offsets;
    if (intensity <= 0.0 || road.r >= radius) return offsets;
    const double half = std::sqrt(radius * radius - road.r * road.r);
    const long n = rng.poisson(2.0 * intensity * half);
    offsets.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) offsets.push_back(half * (2.0 * rng.uniform() - 1.0));
    return offsets;
}

NetworkRealization sample_network(const NetworkParams& params, double radius, Rng& rng) {
    NetworkRealization net;
    net.window_radius = radius;
    net.roads = sample_plp(params.lambda_l, radius, rng);
    for (auto& road : net.roads) {
        road.nodes_b = populate_road(road, params.u_b, radius, rng);
        road.nodes_u = populate_road(road, params.u_u, radius, rng);
        road.nodes_e = populate_road(road, params.u_e, radius, rng);
    }
    net.planar_tx = sample_ppp_disk(params.lambda_b, radius, rng);
    net.planar_rx = sample_ppp_disk(params.lambda_u, radius, rng);
    net.planar_eve = sample_ppp_disk(params.lambda_e, radius, rng);
    return net;
}

NetworkRealization palm_condition(NetworkRealization realization, TypicalKind kind,
                                  const NetworkParams& params, Rng& rng) {
    if (realization.conditioned) {
        throw std::logic_error("palm_condition: realization is already conditioned");
    }
    realization.conditioned = true;
    realization.typical_kind = kind;
    if (kind == TypicalKind::VehicularNode) {
        // Rotation invariance lets the typical road lie along theta = 0.
        LineRoad road;
        road.r = 0.0;
        road.theta = 0.0;
        road.nodes_b = populate_road(road, params.u_b, realization.window_radius, rng);
        road.nodes_u = populate_road(road, params.u_u, realization.window_radius, rng);
        road.nodes_e = populate_road(road, params.u_e, realization.window_radius, rng);
        realization.roads.push_back(std::move(road));
        realization.typical_road_index = realization.roads.size() - 1;
    }
    return realization;
}

void dump_realization_json(const NetworkRealization& net, std::ostream& os) {
    const auto points = [&os](const std::vector<Point2>& pts) {
        os << "[";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) os << ",";
            os << "[" << pts[i].x << "," << pts[i].y << "]";
        }
        os << "]";
    };
    const auto offsets = [&os](const std::vector<double>& ts) {
        os << "[";
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (i) os << ",";
            os << ts[i];
        }
        os << "]";
    };
    os << "{\"window_radius\":" << net.window_radius << ",\"roads\":[";
    for (std::size_t i = 0; i < net.roads.size(); ++i) {
        const auto& road = net.roads[i];
        if (i) os << ",";
        os << "{\"r\":" << road.r << ",\"theta\":" << road.theta << ",\"tx\":";
        offsets(road.nodes_b);
        os << ",\"rx\":";
        offsets(road.nodes_u);
        os << ",\"eve\":";
        offsets(road.nodes_e);
        os << "}";
    }
    os << "],\"planar_tx\":";
    points(net.planar_tx);
    os << ",\"planar_rx\":";
    points(net.planar_rx);
    os << ",\"planar_eve\":";
    points(net.planar_eve);
    os << "}\n";
}

}  // namespace v2xsec
