#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "v2xsec/model.hpp"
#include "v2xsec/rng.hpp"

namespace v2xsec {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

// A road of the line process. (r, theta) parameterize the line: r is the
// perpendicular distance from the origin, theta the direction of the foot of
// the perpendicular. Node offsets t are signed distances along the road from
// that foot; a node at offset t sits at planar distance sqrt(r^2 + t^2).
struct LineRoad {
    double r = 0.0;
    double theta = 0.0;
    std::vector<double> nodes_b;  // vehicular transmitters
    std::vector<double> nodes_u;  // vehicular receivers
    std::vector<double> nodes_e;  // vehicular eavesdroppers

    Point2 node_position(double t) const {
        const double c = std::cos(theta), s = std::sin(theta);
        return {r * c - t * s, r * s + t * c};
    }
};

enum class TypicalKind { PlanarNode, VehicularNode };

struct NetworkRealization {
    double window_radius = 0.0;
    std::vector<LineRoad> roads;
    std::vector<Point2> planar_tx;
    std::vector<Point2> planar_rx;
    std::vector<Point2> planar_eve;
    bool conditioned = false;
    TypicalKind typical_kind = TypicalKind::PlanarNode;
    std::optional<std::size_t> typical_road_index;
};

std::vector<Point2> sample_ppp_disk(double intensity, double radius, Rng& rng);

// Roads whose (r, theta) representation points form a PPP of intensity
// lambda_l / pi on [0, radius] x [0, 2pi); 2 * lambda_l * radius roads hit
// the disk on average. Node lists are left empty.
std::vector<LineRoad> sample_plp(double line_intensity, double radius, Rng& rng);

// 1D PPP on the chord the road cuts out of the disk.
std::vector<double> populate_road(const LineRoad& road, double intensity, double radius, Rng& rng);

// Unconditioned snapshot: roads carrying all three vehicular populations
// plus the three planar PPPs.
NetworkRealization sample_network(const NetworkParams& params, double radius, Rng& rng);

// Palm conditioning for the typical node at the origin. A vehicular typical
// node brings its own road through the origin (r = 0, theta = 0), populated
// with fresh 1D PPPs.
NetworkRealization palm_condition(NetworkRealization realization, TypicalKind kind,
                                  const NetworkParams& params, Rng& rng);

inline double distance_to_origin(const Point2& p) { return std::hypot(p.x, p.y); }
inline double road_node_distance(double r, double t) { return std::hypot(r, t); }

// One JSON document per realization, for external scatter-plot tooling.
void dump_realization_json(const NetworkRealization& realization, std::ostream& os);

}  // namespace v2xsec
