#pragma once

#include <optional>
#include <string>
#include <vector>

#include "v2xsec/model.hpp"
#include "v2xsec/montecarlo.hpp"
#include "v2xsec/numerics.hpp"

namespace v2xsec {

enum class Metric { Coverage, Secrecy, Throughput };

enum class SweepVariable {
    GammaDb,
    BetaDb,
    Phi,
    NAntennas,
    EveIntensityScale,
    TxIntensityScale,
};

struct SweepSpec {
    SweepVariable variable = SweepVariable::GammaDb;
    std::vector<double> values;  // resolved grid, monotone

    static SweepSpec from_grid(SweepVariable variable, double start, double stop, int count);
    void validate() const;
};

// One fully-resolved invocation: base parameters, thresholds in dB (the CLI
// boundary), simulation settings, engine and metric selection, optional
// sweep.
struct RunConfig {
    NetworkParams params;
    double gamma_db = 10.0;
    double beta_db = 0.0;
    SimConfig sim;
    Metric metric = Metric::Coverage;
    bool engine_analytic = true;
    bool engine_mc = false;
    bool fast_bounds = true;
    bool timing = false;
    std::optional<SweepSpec> sweep;
    QuadratureSpec quad;

    Thresholds thresholds() const {
        return Thresholds{db_to_linear(gamma_db), db_to_linear(beta_db)};
    }
};

// Strict JSON config loader: unknown keys are an error, never a silent
// default.
RunConfig load_config_file(const std::string& path);
RunConfig parse_config_json(const std::string& text, const std::string& origin);

struct ResultRow {
    Metric metric;
    std::string engine;
    std::string sweep_variable;  // empty when not sweeping
    std::optional<double> sweep_value;
    NetworkParams params;
    double gamma_db = 0.0;
    double beta_db = 0.0;
    long n_trials = 0;
    double window_radius = 0.0;
    std::uint64_t master_seed = 0;
    std::string eve_model;
    std::string typical_kind_policy;
    bool fast_bounds = true;
    std::optional<double> p_c;
    std::optional<double> p_sec_lower;
    std::optional<double> p_sec_upper;
    std::optional<double> eta;
    std::optional<double> mc_p_hat;
    std::optional<double> mc_ci_low;
    std::optional<double> mc_ci_high;
    std::optional<double> runtime_ms;
};

std::string csv_header();
std::string csv_line(const ResultRow& row);

// Entry point behind the binary; also called directly by tests. Returns the
// process exit code: 0 success, 1 validation failure, 2 usage/config error.
int run_command(const std::vector<std::string>& args);

}  // namespace v2xsec
