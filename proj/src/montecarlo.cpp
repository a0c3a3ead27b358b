#include "v2xsec/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <thread>

namespace v2xsec {

namespace {

constexpr double kZ95 = 1.959963984540054;

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs f(trial, rng) for every trial on a pool; results must be merged
// commutatively by the caller, which keeps the output independent of the
// scheduling.
template <typename PerTrial>
void run_trials(long n_trials, std::uint64_t master_seed, int n_threads, PerTrial&& f) {
    const int threads = static_cast<int>(std::min<long>(resolve_threads(n_threads), n_trials));
    if (threads <= 1) {
        for (long t = 0; t < n_trials; ++t) {
            Rng rng = Rng::for_stream(master_seed, static_cast<std::uint64_t>(t));
            f(t, rng);
        }
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const long t = next.fetch_add(1);
                if (t >= n_trials) return;
                Rng rng = Rng::for_stream(master_seed, static_cast<std::uint64_t>(t));
                f(t, rng);
            }
        });
    }
    for (auto& th : pool) th.join();
}

double mixture_gain(double phi, int n_antennas, Rng& rng) {
    if (phi >= 1.0) return rng.exponential();
    return phi * rng.exponential() + (1.0 - phi) / (n_antennas - 1) * rng.gamma_int(n_antennas - 1);
}

double receiver_planar_weight(const NetworkParams& p) {
    const double road = p.u_u * p.lambda_l;
    return (p.lambda_u + road) > 0.0 ? p.lambda_u / (p.lambda_u + road) : 1.0;
}

double transmitter_planar_weight(const NetworkParams& p) {
    const double road = p.u_b * p.lambda_l;
    return (p.lambda_b + road) > 0.0 ? p.lambda_b / (p.lambda_b + road) : 1.0;
}

// Mean interference arriving from beyond the simulation window, evaluated at
// the origin (the planar-equivalent intensity of the road network is
// lambda_l * u_b). Keeping this term removes the window-truncation bias that
// otherwise dominates at path-loss exponents near 2.
double tail_mean_2d(double intensity, double radius, double alpha) {
    if (intensity <= 0.0) return 0.0;
    return intensity * 2.0 * M_PI * std::pow(radius, 2.0 - alpha) / (alpha - 2.0);
}

double tail_mean_1d(double intensity, double radius, double alpha) {
    if (intensity <= 0.0) return 0.0;
    return intensity * 2.0 * std::pow(radius, 1.0 - alpha) / (alpha - 1.0);
}

struct TraceBuffer {
    std::vector<std::string> lines;
    explicit TraceBuffer(long n) : lines(static_cast<std::size_t>(n)) {}
    void flush(std::ostream& os) {
        os << "trial,typical_kind,n_tx,n_eve,max_sir_db,outcome\n";
        for (auto& l : lines) os << l;
    }
};

TypicalKind draw_typical_kind(TypicalKindPolicy policy, double planar_weight, Rng& rng) {
    switch (policy) {
        case TypicalKindPolicy::Planar: return TypicalKind::PlanarNode;
        case TypicalKindPolicy::Vehicular: return TypicalKind::VehicularNode;
        case TypicalKindPolicy::MixByWeights:
            return rng.uniform() < planar_weight ? TypicalKind::PlanarNode
                                                 : TypicalKind::VehicularNode;
    }
    return TypicalKind::PlanarNode;
}

// Max over candidate transmitters of the received SIR; -inf when the window
// holds no transmitter at all.
double coverage_trial_max_sir(const NetworkParams& p, double radius, TypicalKind kind, Rng& rng,
                              long* n_tx_out) {
    std::vector<double> sq;  // squared distances
    {
        const long n_planar = rng.poisson(p.lambda_b * M_PI * radius * radius);
        sq.reserve(static_cast<std::size_t>(n_planar) + 16);
        for (long i = 0; i < n_planar; ++i) sq.push_back(radius * radius * rng.uniform());
        const long n_roads = rng.poisson(2.0 * p.lambda_l * radius);
        for (long k = 0; k < n_roads; ++k) {
            const double r = radius * rng.uniform();
            const double half = std::sqrt(radius * radius - r * r);
            const long m = rng.poisson(2.0 * p.u_b * half);
            for (long i = 0; i < m; ++i) {
                const double t = half * (2.0 * rng.uniform() - 1.0);
                sq.push_back(r * r + t * t);
            }
        }
        if (kind == TypicalKind::VehicularNode) {
            const long m = rng.poisson(2.0 * p.u_b * radius);
            for (long i = 0; i < m; ++i) {
                const double t = radius * (2.0 * rng.uniform() - 1.0);
                sq.push_back(t * t);
            }
        }
    }
    if (n_tx_out) *n_tx_out = static_cast<long>(sq.size());
    if (sq.empty()) return -std::numeric_limits<double>::infinity();

    double tail = tail_mean_2d(p.lambda_b + p.lambda_l * p.u_b, radius, p.alpha);
    if (kind == TypicalKind::VehicularNode) tail += tail_mean_1d(p.u_b, radius, p.alpha);

    const std::size_t n = sq.size();
    std::vector<double> att(n), serving(n), interf(n);
    double total = tail;
    for (std::size_t i = 0; i < n; ++i) {
        att[i] = std::pow(sq[i], -0.5 * p.alpha);
        serving[i] = rng.gamma_int(p.n_antennas);
        interf[i] = mixture_gain(p.phi, p.n_antennas, rng);
        total += interf[i] * att[i];
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double den = total - interf[i] * att[i];
        const double sir = den > 0.0 ? p.phi * serving[i] * att[i] / den
                                     : std::numeric_limits<double>::infinity();
        best = std::max(best, sir);
    }
    return best;
}

struct XY {
    double x, y;
};

// Coarse uniform grid over the window for near-first interference
// accumulation around each eavesdropper.
class CellGrid {
public:
    CellGrid(const std::vector<XY>& pts, double radius, int cells_per_side)
        : n_(cells_per_side), cell_(2.0 * radius / cells_per_side), origin_(-radius) {
        buckets_.resize(static_cast<std::size_t>(n_) * n_);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            buckets_[index_of(pts[i].x, pts[i].y)].push_back(static_cast<int>(i));
        }
    }

    int cell_x(double x) const { return clamp(static_cast<int>((x - origin_) / cell_)); }
    int side() const { return n_; }

    template <typename Visit>
    void visit_rings(double x, double y, Visit&& visit) const {
        const int cx = cell_x(x), cy = cell_x(y);
        for (int ring = 0; ring <= n_; ++ring) {
            const int x0 = cx - ring, x1 = cx + ring;
            const int y0 = cy - ring, y1 = cy + ring;
            for (int gx = x0; gx <= x1; ++gx) {
                if (gx < 0 || gx >= n_) continue;
                for (int gy = y0; gy <= y1; ++gy) {
                    if (gy < 0 || gy >= n_) continue;
                    if (ring > 0 && gx != x0 && gx != x1 && gy != y0 && gy != y1) continue;
                    for (int idx : buckets_[static_cast<std::size_t>(gx) * n_ + gy]) {
                        if (!visit(idx)) return;
                    }
                }
            }
        }
    }

private:
    int clamp(int v) const { return v < 0 ? 0 : (v >= n_ ? n_ - 1 : v); }
    std::size_t index_of(double x, double y) const {
        return static_cast<std::size_t>(cell_x(x)) * n_ + cell_x(y);
    }

    int n_;
    double cell_, origin_;
    std::vector<std::vector<int>> buckets_;
};

// Exact max-SIR over all eavesdroppers. Transmitter sums stop as soon as the
// accumulated interference pins the eavesdropper's SIR below the running
// maximum; every skipped term is nonnegative, so the result is unchanged.
double secrecy_trial_max_sir(const NetworkParams& p, double radius, TypicalKind kind,
                             EveModel eve_model, Rng& rng, long* n_tx_out, long* n_eve_out) {
    NetworkRealization net = sample_network(p, radius, rng);
    net = palm_condition(std::move(net), kind, p, rng);

    std::vector<XY> tx;
    for (const auto& pt : net.planar_tx) tx.push_back({pt.x, pt.y});
    for (const auto& road : net.roads) {
        for (double t : road.nodes_b) {
            const Point2 pos = road.node_position(t);
            tx.push_back({pos.x, pos.y});
        }
    }
    std::vector<XY> eve;
    for (const auto& pt : net.planar_eve) eve.push_back({pt.x, pt.y});
    for (const auto& road : net.roads) {
        for (double t : road.nodes_e) {
            const Point2 pos = road.node_position(t);
            eve.push_back({pos.x, pos.y});
        }
    }
    if (n_tx_out) *n_tx_out = static_cast<long>(tx.size());
    if (n_eve_out) *n_eve_out = static_cast<long>(eve.size());
    if (eve.empty()) return 0.0;

    std::sort(eve.begin(), eve.end(), [](const XY& a, const XY& b) {
        const double da = a.x * a.x + a.y * a.y, db = b.x * b.x + b.y * b.y;
        if (da != db) return da < db;
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    });

    const bool optimistic = eve_model == EveModel::Optimistic;
    const double gain_mean = optimistic ? 1.0 : (1.0 - p.phi);
    double tail = tail_mean_2d(p.lambda_b + p.lambda_l * p.u_b, radius, p.alpha) * gain_mean;
    if (kind == TypicalKind::VehicularNode) {
        tail += tail_mean_1d(p.u_b, radius, p.alpha) * gain_mean;
    }

    const double an_scale = (1.0 - p.phi) / (p.n_antennas - 1);
    const CellGrid grid(tx, radius, 48);
    double best = 0.0;
    for (const XY& e : eve) {
        const double d2_oe = e.x * e.x + e.y * e.y;
        const double att_oe = std::pow(d2_oe, -0.5 * p.alpha);
        const double q = rng.exponential();
        const double g_self = rng.gamma_int(p.n_antennas - 1);
        const double num = p.phi * q * att_oe;
        double den = an_scale * g_self * att_oe + tail;
        if (den > 0.0 && num / den <= best) continue;  // cannot beat the running max
        bool decided = false;
        grid.visit_rings(e.x, e.y, [&](int idx) {
            const double dx = tx[idx].x - e.x, dy = tx[idx].y - e.y;
            const double att = std::pow(dx * dx + dy * dy, -0.5 * p.alpha);
            double g = an_scale * rng.gamma_int(p.n_antennas - 1);
            if (optimistic) g += p.phi * rng.exponential();
            den += g * att;
            if (den > 0.0 && num / den <= best) {
                decided = true;
                return false;  // SIR can only fall further
            }
            return true;
        });
        if (!decided) {
            const double sir = den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
            best = std::max(best, sir);
        }
    }
    return best;
}

}  // namespace

void SimConfig::validate() const {
    if (n_trials < 1) throw ValidationError("SimConfig: n_trials must be >= 1");
    if (!(window_radius > 0.0)) throw ValidationError("SimConfig: window_radius must be > 0");
}

ProbEstimate wilson_estimate(long successes, long trials) {
    ProbEstimate e;
    e.n_trials = trials;
    if (trials <= 0) return e;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    e.p_hat = p;
    e.std_err = std::sqrt(p * (1.0 - p) / n);
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    e.ci_low = std::max(0.0, center - half);
    e.ci_high = std::min(1.0, center + half);
    return e;
}

GainAssignment sample_gains(const NetworkRealization& net, const NetworkParams& params,
                            Rng& rng) {
    GainAssignment g;
    const auto draw = [&]() {
        g.serving.push_back(rng.gamma_int(params.n_antennas));
        g.interference.push_back(mixture_gain(params.phi, params.n_antennas, rng));
    };
    for (std::size_t i = 0; i < net.planar_tx.size(); ++i) draw();
    for (const auto& road : net.roads) {
        for (std::size_t i = 0; i < road.nodes_b.size(); ++i) draw();
    }
    return g;
}

std::vector<double> transmitter_sq_distances(const NetworkRealization& net) {
    std::vector<double> sq;
    for (const auto& pt : net.planar_tx) sq.push_back(pt.x * pt.x + pt.y * pt.y);
    for (const auto& road : net.roads) {
        for (double t : road.nodes_b) sq.push_back(road.r * road.r + t * t);
    }
    return sq;
}

std::vector<ProbEstimate> simulate_coverage_curve(const NetworkParams& params,
                                                  const std::vector<double>& gammas,
                                                  const SimConfig& sim) {
    params.validate();
    sim.validate();
    const double planar_weight = receiver_planar_weight(params);
    std::vector<std::atomic<long>> hits(gammas.size());
    for (auto& h : hits) h.store(0);
    std::unique_ptr<TraceBuffer> trace;
    if (sim.trace) trace = std::make_unique<TraceBuffer>(sim.n_trials);

    run_trials(sim.n_trials, sim.master_seed, sim.n_threads, [&](long trial, Rng& rng) {
        const TypicalKind kind = draw_typical_kind(sim.typical_kind_policy, planar_weight, rng);
        long n_tx = 0;
        const double best = coverage_trial_max_sir(params, sim.window_radius, kind, rng, &n_tx);
        for (std::size_t j = 0; j < gammas.size(); ++j) {
            if (best >= gammas[j]) hits[j].fetch_add(1);
        }
        if (trace) {
            std::ostringstream line;
            line << trial << "," << (kind == TypicalKind::PlanarNode ? "planar" : "vehicular")
                 << "," << n_tx << ",0," << 10.0 * std::log10(std::max(best, 1e-300)) << ","
                 << (best >= gammas.front() ? 1 : 0) << "\n";
            trace->lines[static_cast<std::size_t>(trial)] = line.str();
        }
    });

    if (trace) trace->flush(*sim.trace);
    std::vector<ProbEstimate> out;
    out.reserve(gammas.size());
    for (auto& h : hits) out.push_back(wilson_estimate(h.load(), sim.n_trials));
    return out;
}

std::vector<ProbEstimate> simulate_secrecy_curve(const NetworkParams& params,
                                                 const std::vector<double>& betas,
                                                 const SimConfig& sim) {
    params.validate();
    sim.validate();
    const double planar_weight = transmitter_planar_weight(params);
    std::vector<std::atomic<long>> secure(betas.size());
    for (auto& s : secure) s.store(0);
    std::unique_ptr<TraceBuffer> trace;
    if (sim.trace) trace = std::make_unique<TraceBuffer>(sim.n_trials);

    run_trials(sim.n_trials, sim.master_seed, sim.n_threads, [&](long trial, Rng& rng) {
        const TypicalKind kind = draw_typical_kind(sim.typical_kind_policy, planar_weight, rng);
        long n_tx = 0, n_eve = 0;
        const double best = secrecy_trial_max_sir(params, sim.window_radius, kind, sim.eve_model,
                                                  rng, &n_tx, &n_eve);
        for (std::size_t j = 0; j < betas.size(); ++j) {
            if (best <= betas[j]) secure[j].fetch_add(1);
        }
        if (trace) {
            std::ostringstream line;
            line << trial << "," << (kind == TypicalKind::PlanarNode ? "planar" : "vehicular")
                 << "," << n_tx << "," << n_eve << ","
                 << 10.0 * std::log10(std::max(best, 1e-300)) << ","
                 << (best <= betas.front() ? 1 : 0) << "\n";
            trace->lines[static_cast<std::size_t>(trial)] = line.str();
        }
    });

    if (trace) trace->flush(*sim.trace);
    std::vector<ProbEstimate> out;
    out.reserve(betas.size());
    for (auto& s : secure) out.push_back(wilson_estimate(s.load(), sim.n_trials));
    return out;
}

ProbEstimate simulate_coverage(const NetworkParams& params, double gamma, const SimConfig& sim) {
    if (!(gamma > 0.0)) throw ValidationError("simulate_coverage: gamma must be > 0");
    return simulate_coverage_curve(params, {gamma}, sim).front();
}

ProbEstimate simulate_secrecy(const NetworkParams& params, double beta, const SimConfig& sim) {
    if (!(beta > 0.0)) throw ValidationError("simulate_secrecy: beta must be > 0");
    return simulate_secrecy_curve(params, {beta}, sim).front();
}

ThroughputEstimate simulate_throughput(const NetworkParams& params, const Thresholds& thresholds,
                                       const SimConfig& sim) {
    const DerivedConstants d = derive_constants(params, thresholds);
    std::uint64_t chain = sim.master_seed;
    SimConfig cov_sim = sim;
    cov_sim.master_seed = splitmix64(chain);
    SimConfig sec_sim = sim;
    sec_sim.master_seed = splitmix64(chain);
    sec_sim.trace = nullptr;

    ThroughputEstimate t;
    t.coverage = simulate_coverage(params, thresholds.gamma, cov_sim);
    t.secrecy = simulate_secrecy(params, thresholds.beta, sec_sim);
    t.r_s = d.r_s_rate;
    t.eta_hat = t.r_s * t.coverage.p_hat * t.secrecy.p_hat;
    t.eta_std_err = t.r_s * std::sqrt(t.coverage.p_hat * t.coverage.p_hat *
                                          t.secrecy.std_err * t.secrecy.std_err +
                                      t.secrecy.p_hat * t.secrecy.p_hat *
                                          t.coverage.std_err * t.coverage.std_err);
    return t;
}

std::vector<double> nearest_eve_type_frequencies(const NetworkParams& params,
                                                 TypicalKindPolicy typical, long n_trials,
                                                 std::uint64_t seed) {
    params.validate();
    const bool vehicular = typical == TypicalKindPolicy::Vehicular;
    const double planar_rate = params.lambda_e + params.lambda_l * params.u_e;
    double radius = 0.0;
    if (planar_rate > 0.0) radius = std::sqrt(40.0 / (M_PI * planar_rate));
    else if (vehicular && params.u_e > 0.0) radius = 20.0 / params.u_e;
    std::vector<std::atomic<long>> counts(3);
    for (auto& c : counts) c.store(0);
    if (radius == 0.0) return {0.0, 0.0, 0.0};

    run_trials(n_trials, seed, 0, [&](long, Rng& rng) {
        double best = std::numeric_limits<double>::infinity();
        int kind = -1;
        for (const Point2& pt : sample_ppp_disk(params.lambda_e, radius, rng)) {
            const double d = distance_to_origin(pt);
            if (d < best) {
                best = d;
                kind = 2;
            }
        }
        for (const LineRoad& road : sample_plp(params.lambda_l, radius, rng)) {
            for (double t : populate_road(road, params.u_e, radius, rng)) {
                const double d = road_node_distance(road.r, t);
                if (d < best) {
                    best = d;
                    kind = 0;
                }
            }
        }
        if (vehicular) {
            LineRoad typical_road;
            for (double t : populate_road(typical_road, params.u_e, radius, rng)) {
                const double d = std::fabs(t);
                if (d < best) {
                    best = d;
                    kind = 1;
                }
            }
        }
        if (kind >= 0) counts[static_cast<std::size_t>(kind)].fetch_add(1);
    });

    std::vector<double> freq(3);
    for (int k = 0; k < 3; ++k) {
        freq[static_cast<std::size_t>(k)] =
            static_cast<double>(counts[static_cast<std::size_t>(k)].load()) / n_trials;
    }
    return freq;
}

}  // namespace v2xsec
