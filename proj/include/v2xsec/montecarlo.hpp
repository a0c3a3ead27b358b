#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "v2xsec/model.hpp"
#include "v2xsec/pointprocess.hpp"
#include "v2xsec/rng.hpp"

namespace v2xsec {

enum class EveModel {
    WorstCaseSIC,  // eavesdroppers cancel every information beam
    Optimistic,    // information beams of other transmitters interfere too
};

enum class TypicalKindPolicy { Planar, Vehicular, MixByWeights };

struct SimConfig {
    long n_trials = 10000;
    double window_radius = 3000.0;
    std::uint64_t master_seed = 1;
    EveModel eve_model = EveModel::WorstCaseSIC;
    TypicalKindPolicy typical_kind_policy = TypicalKindPolicy::MixByWeights;
    int n_threads = 0;           // 0: hardware concurrency
    std::ostream* trace = nullptr;  // optional per-trial CSV trace

    void validate() const;
};

struct ProbEstimate {
    double p_hat = 0.0;
    double std_err = 0.0;
    double ci_low = 0.0;   // Wilson 95%
    double ci_high = 0.0;
    long n_trials = 0;
};

ProbEstimate wilson_estimate(long successes, long trials);

// Per-transmitter fading draws for one coverage trial: the candidate-server
// beamforming gain (gamma(N,1)) and the interference gain the same
// transmitter presents when another candidate is tested (the MRT/AN
// mixture phi*exp(1) + (1-phi)/(N-1)*gamma(N-1,1)).
struct GainAssignment {
    std::vector<double> serving;
    std::vector<double> interference;
};

GainAssignment sample_gains(const NetworkRealization& realization, const NetworkParams& params,
                            Rng& rng);

// Squared distances to the origin of every transmitter in the realization,
// ordered planar first then road by road; matches sample_gains ordering.
std::vector<double> transmitter_sq_distances(const NetworkRealization& realization);

ProbEstimate simulate_coverage(const NetworkParams& params, double gamma, const SimConfig& sim);
ProbEstimate simulate_secrecy(const NetworkParams& params, double beta, const SimConfig& sim);

// Shared-realization curves: one pass over the trials serves every
// threshold, so a sweep costs the same as a single point.
std::vector<ProbEstimate> simulate_coverage_curve(const NetworkParams& params,
                                                  const std::vector<double>& gammas,
                                                  const SimConfig& sim);
std::vector<ProbEstimate> simulate_secrecy_curve(const NetworkParams& params,
                                                 const std::vector<double>& betas,
                                                 const SimConfig& sim);

struct ThroughputEstimate {
    ProbEstimate coverage;
    ProbEstimate secrecy;
    double r_s = 0.0;
    double eta_hat = 0.0;
    double eta_std_err = 0.0;  // delta method
};

ThroughputEstimate simulate_throughput(const NetworkParams& params, const Thresholds& thresholds,
                                       const SimConfig& sim);

// Frequencies of "the nearest eavesdropper is of type k", the Monte Carlo
// side of the minimum-distance densities. Order: off-road vehicular,
// on-typical-road vehicular, planar.
std::vector<double> nearest_eve_type_frequencies(const NetworkParams& params,
                                                 TypicalKindPolicy typical, long n_trials,
                                                 std::uint64_t seed);

}  // namespace v2xsec
