#include "v2xsec/cli_app.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "v2xsec/coverage.hpp"
#include "v2xsec/pointprocess.hpp"
#include "v2xsec/secrecy.hpp"
#include "v2xsec/throughput.hpp"

namespace v2xsec {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::Coverage: return "coverage";
        case Metric::Secrecy: return "secrecy";
        case Metric::Throughput: return "throughput";
    }
    return "?";
}

Metric metric_from_name(const std::string& name) {
    if (name == "coverage") return Metric::Coverage;
    if (name == "secrecy") return Metric::Secrecy;
    if (name == "throughput") return Metric::Throughput;
    throw ValidationError("unknown metric '" + name + "'");
}

std::string variable_name(SweepVariable v) {
    switch (v) {
        case SweepVariable::GammaDb: return "gamma_db";
        case SweepVariable::BetaDb: return "beta_db";
        case SweepVariable::Phi: return "phi";
        case SweepVariable::NAntennas: return "n_antennas";
        case SweepVariable::EveIntensityScale: return "eve_intensity_scale";
        case SweepVariable::TxIntensityScale: return "tx_intensity_scale";
    }
    return "?";
}

SweepVariable variable_from_name(const std::string& name) {
    if (name == "gamma_db") return SweepVariable::GammaDb;
    if (name == "beta_db") return SweepVariable::BetaDb;
    if (name == "phi") return SweepVariable::Phi;
    if (name == "n_antennas") return SweepVariable::NAntennas;
    if (name == "eve_intensity_scale") return SweepVariable::EveIntensityScale;
    if (name == "tx_intensity_scale") return SweepVariable::TxIntensityScale;
    throw ValidationError("unknown sweep variable '" + name + "'");
}

std::string eve_model_name(EveModel m) {
    return m == EveModel::WorstCaseSIC ? "sic" : "optimistic";
}

EveModel eve_model_from_name(const std::string& name) {
    if (name == "sic") return EveModel::WorstCaseSIC;
    if (name == "optimistic") return EveModel::Optimistic;
    throw ValidationError("unknown eve_model '" + name + "' (want sic|optimistic)");
}

std::string typical_name(TypicalKindPolicy p) {
    switch (p) {
        case TypicalKindPolicy::Planar: return "planar";
        case TypicalKindPolicy::Vehicular: return "vehicular";
        case TypicalKindPolicy::MixByWeights: return "mix";
    }
    return "?";
}

TypicalKindPolicy typical_from_name(const std::string& name) {
    if (name == "planar") return TypicalKindPolicy::Planar;
    if (name == "vehicular") return TypicalKindPolicy::Vehicular;
    if (name == "mix") return TypicalKindPolicy::MixByWeights;
    throw ValidationError("unknown typical_kind_policy '" + name + "' (want planar|vehicular|mix)");
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ValidationError("unknown key '" + it.key() + "' in " + where);
        }
    }
}

}  // namespace

SweepSpec SweepSpec::from_grid(SweepVariable variable, double start, double stop, int count) {
    SweepSpec s;
    s.variable = variable;
    if (count < 1) throw ValidationError("sweep: count must be >= 1");
    if (count == 1) {
        s.values.push_back(start);
    } else {
        for (int i = 0; i < count; ++i) {
            s.values.push_back(start + (stop - start) * i / (count - 1));
        }
    }
    s.validate();
    return s;
}

void SweepSpec::validate() const {
    if (values.empty()) throw ValidationError("sweep: values must be non-empty");
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > values[i - 1])) {
            throw ValidationError("sweep: grid must be strictly increasing");
        }
    }
}

RunConfig parse_config_json(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(origin + ": " + e.what());
    }
    RunConfig cfg;
    reject_unknown_keys(doc, {"params", "thresholds", "sim", "metric", "sweep", "fast_bounds"},
                        origin);
    if (doc.contains("params")) {
        const json& p = doc["params"];
        reject_unknown_keys(p,
                            {"lambda_b", "lambda_u", "lambda_e", "lambda_l", "u_b", "u_u", "u_e",
                             "n_antennas", "phi", "alpha"},
                            origin + ".params");
        if (p.contains("lambda_b")) cfg.params.lambda_b = p["lambda_b"].get<double>();
        if (p.contains("lambda_u")) cfg.params.lambda_u = p["lambda_u"].get<double>();
        if (p.contains("lambda_e")) cfg.params.lambda_e = p["lambda_e"].get<double>();
        if (p.contains("lambda_l")) cfg.params.lambda_l = p["lambda_l"].get<double>();
        if (p.contains("u_b")) cfg.params.u_b = p["u_b"].get<double>();
        if (p.contains("u_u")) cfg.params.u_u = p["u_u"].get<double>();
        if (p.contains("u_e")) cfg.params.u_e = p["u_e"].get<double>();
        if (p.contains("n_antennas")) cfg.params.n_antennas = p["n_antennas"].get<int>();
        if (p.contains("phi")) cfg.params.phi = p["phi"].get<double>();
        if (p.contains("alpha")) cfg.params.alpha = p["alpha"].get<double>();
    }
    if (doc.contains("thresholds")) {
        const json& t = doc["thresholds"];
        reject_unknown_keys(t, {"gamma_db", "beta_db"}, origin + ".thresholds");
        if (t.contains("gamma_db")) cfg.gamma_db = t["gamma_db"].get<double>();
        if (t.contains("beta_db")) cfg.beta_db = t["beta_db"].get<double>();
    }
    if (doc.contains("sim")) {
        const json& s = doc["sim"];
        reject_unknown_keys(
            s, {"n_trials", "window_radius", "master_seed", "eve_model", "typical_kind_policy"},
            origin + ".sim");
        if (s.contains("n_trials")) cfg.sim.n_trials = s["n_trials"].get<long>();
        if (s.contains("window_radius")) cfg.sim.window_radius = s["window_radius"].get<double>();
        if (s.contains("master_seed")) cfg.sim.master_seed = s["master_seed"].get<std::uint64_t>();
        if (s.contains("eve_model"))
            cfg.sim.eve_model = eve_model_from_name(s["eve_model"].get<std::string>());
        if (s.contains("typical_kind_policy"))
            cfg.sim.typical_kind_policy =
                typical_from_name(s["typical_kind_policy"].get<std::string>());
    }
    if (doc.contains("metric")) cfg.metric = metric_from_name(doc["metric"].get<std::string>());
    if (doc.contains("fast_bounds")) cfg.fast_bounds = doc["fast_bounds"].get<bool>();
    if (doc.contains("sweep")) {
        const json& s = doc["sweep"];
        reject_unknown_keys(s, {"variable", "start", "stop", "count", "values"}, origin + ".sweep");
        const SweepVariable var = variable_from_name(s.at("variable").get<std::string>());
        if (s.contains("values")) {
            SweepSpec spec;
            spec.variable = var;
            spec.values = s["values"].get<std::vector<double>>();
            spec.validate();
            cfg.sweep = spec;
        } else {
            cfg.sweep = SweepSpec::from_grid(var, s.at("start").get<double>(),
                                             s.at("stop").get<double>(), s.at("count").get<int>());
        }
    }
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str(), path);
}

std::string csv_header() {
    return "metric,engine,sweep_variable,sweep_value,lambda_b,lambda_u,lambda_e,lambda_l,"
           "u_b,u_u,u_e,n_antennas,phi,alpha,gamma_db,beta_db,n_trials,window_radius,"
           "master_seed,eve_model,typical_kind_policy,fast_bounds,p_c,p_sec_lower,p_sec_upper,"
           "eta,mc_p_hat,mc_ci_low,mc_ci_high,runtime_ms";
}

std::string csv_line(const ResultRow& r) {
    const auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
    std::ostringstream os;
    os << metric_name(r.metric) << ',' << r.engine << ',' << r.sweep_variable << ','
       << opt(r.sweep_value) << ',' << fmt(r.params.lambda_b) << ',' << fmt(r.params.lambda_u)
       << ',' << fmt(r.params.lambda_e) << ',' << fmt(r.params.lambda_l) << ','
       << fmt(r.params.u_b) << ',' << fmt(r.params.u_u) << ',' << fmt(r.params.u_e) << ','
       << r.params.n_antennas << ',' << fmt(r.params.phi) << ',' << fmt(r.params.alpha) << ','
       << fmt(r.gamma_db) << ',' << fmt(r.beta_db) << ',' << r.n_trials << ','
       << fmt(r.window_radius) << ',' << r.master_seed << ',' << r.eve_model << ','
       << r.typical_kind_policy << ',' << (r.fast_bounds ? 1 : 0) << ',' << opt(r.p_c) << ','
       << opt(r.p_sec_lower) << ',' << opt(r.p_sec_upper) << ',' << opt(r.eta) << ','
       << opt(r.mc_p_hat) << ',' << opt(r.mc_ci_low) << ',' << opt(r.mc_ci_high) << ','
       << opt(r.runtime_ms);
    return os.str();
}

namespace {

struct SweepPoint {
    NetworkParams params;
    Thresholds thresholds;
    std::optional<double> value;
};

std::vector<SweepPoint> expand_sweep(const RunConfig& cfg) {
    std::vector<SweepPoint> points;
    const Thresholds base{db_to_linear(cfg.gamma_db), db_to_linear(cfg.beta_db)};
    if (!cfg.sweep) {
        points.push_back({cfg.params, base, std::nullopt});
        return points;
    }
    for (double v : cfg.sweep->values) {
        SweepPoint pt{cfg.params, base, v};
        switch (cfg.sweep->variable) {
            case SweepVariable::GammaDb: pt.thresholds.gamma = db_to_linear(v); break;
            case SweepVariable::BetaDb: pt.thresholds.beta = db_to_linear(v); break;
            case SweepVariable::Phi: pt.params.phi = v; break;
            case SweepVariable::NAntennas:
                pt.params.n_antennas = static_cast<int>(v + 0.5);
                break;
            case SweepVariable::EveIntensityScale:
                pt.params.lambda_e *= v;
                pt.params.u_e *= v;
                break;
            case SweepVariable::TxIntensityScale:
                pt.params.lambda_b *= v;
                pt.params.u_b *= v;
                break;
        }
        points.push_back(pt);
    }
    return points;
}

ResultRow base_row(const RunConfig& cfg, const SweepPoint& pt, const std::string& engine) {
    ResultRow row;
    row.metric = cfg.metric;
    row.engine = engine;
    if (cfg.sweep) row.sweep_variable = variable_name(cfg.sweep->variable);
    row.sweep_value = pt.value;
    row.params = pt.params;
    row.gamma_db = linear_to_db(pt.thresholds.gamma);
    row.beta_db = linear_to_db(pt.thresholds.beta);
    row.n_trials = cfg.sim.n_trials;
    row.window_radius = cfg.sim.window_radius;
    row.master_seed = cfg.sim.master_seed;
    row.eve_model = eve_model_name(cfg.sim.eve_model);
    row.typical_kind_policy = typical_name(cfg.sim.typical_kind_policy);
    row.fast_bounds = cfg.fast_bounds;
    return row;
}

class Stopwatch {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void fill_analytic_row(const RunConfig& cfg, const SweepPoint& pt, ResultRow& row) {
    Stopwatch watch;
    switch (cfg.metric) {
        case Metric::Coverage: {
            row.p_c = coverage_total(pt.params, pt.thresholds.gamma, cfg.quad).p_c_total;
            break;
        }
        case Metric::Secrecy: {
            const SecrecyBounds b =
                secrecy_bounds_total(pt.params, pt.thresholds.beta, cfg.quad, cfg.fast_bounds);
            row.p_sec_lower = b.lower_total;
            row.p_sec_upper = b.upper_total;
            break;
        }
        case Metric::Throughput: {
            const ThroughputResult t = effective_secrecy_throughput(pt.params, pt.thresholds,
                                                                    cfg.quad, cfg.fast_bounds);
            row.eta = t.eta;
            row.p_c = t.p_c;
            row.p_sec_lower = t.p_sec;
            break;
        }
    }
    if (cfg.timing) row.runtime_ms = watch.ms();
}

void fill_mc_row(const RunConfig& cfg, const SweepPoint& pt, ResultRow& row) {
    Stopwatch watch;
    switch (cfg.metric) {
        case Metric::Coverage: {
            const ProbEstimate e = simulate_coverage(pt.params, pt.thresholds.gamma, cfg.sim);
            row.mc_p_hat = e.p_hat;
            row.mc_ci_low = e.ci_low;
            row.mc_ci_high = e.ci_high;
            break;
        }
        case Metric::Secrecy: {
            const ProbEstimate e = simulate_secrecy(pt.params, pt.thresholds.beta, cfg.sim);
            row.mc_p_hat = e.p_hat;
            row.mc_ci_low = e.ci_low;
            row.mc_ci_high = e.ci_high;
            break;
        }
        case Metric::Throughput: {
            const ThroughputEstimate t = simulate_throughput(pt.params, pt.thresholds, cfg.sim);
            row.eta = t.eta_hat;
            const double prod = t.coverage.p_hat * t.secrecy.p_hat;
            row.mc_p_hat = prod;
            const double half = t.r_s > 0.0 ? 1.96 * t.eta_std_err / t.r_s : 0.0;
            row.mc_ci_low = std::max(0.0, prod - half);
            row.mc_ci_high = std::min(1.0, prod + half);
            break;
        }
    }
    if (cfg.timing) row.runtime_ms = watch.ms();
}

void write_rows(const std::string& out_path, const std::vector<ResultRow>& rows) {
    std::ostringstream text;
    text << csv_header() << '\n';
    for (const auto& row : rows) text << csv_line(row) << '\n';
    if (out_path.empty() || out_path == "-") {
        std::cout << text.str();
        return;
    }
    std::ofstream out(out_path, std::ios::binary);  // LF line endings everywhere
    if (!out) throw ValidationError("cannot open output file '" + out_path + "'");
    out << text.str();
}

// Analytic sweep points run on a worker pool; rows land in input order.
void run_analytic_rows(const RunConfig& cfg, const std::vector<SweepPoint>& points,
                       std::vector<ResultRow>& rows) {
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < points.size(); ++i) indices.push_back(i);
    const int threads =
        std::max(1, std::min<int>(cfg.sim.n_threads > 0
                                      ? cfg.sim.n_threads
                                      : static_cast<int>(std::thread::hardware_concurrency()),
                                  static_cast<int>(points.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::string> errors(points.size());
    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            try {
                fill_analytic_row(cfg, points[i], rows[i]);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& err : errors) {
        if (!err.empty()) throw ValidationError(err);
    }
}

int run_resolved(RunConfig cfg, const std::string& out_path, bool validate_mode,
                 const std::string& dump_path, int dump_count) {
    cfg.params.validate();
    cfg.sim.validate();

    if (!dump_path.empty()) {
        std::ofstream out(dump_path, std::ios::binary);
        if (!out) throw ValidationError("cannot open dump file '" + dump_path + "'");
        for (int i = 0; i < dump_count; ++i) {
            Rng rng = Rng::for_stream(cfg.sim.master_seed, static_cast<std::uint64_t>(i));
            NetworkRealization net = sample_network(cfg.params, cfg.sim.window_radius, rng);
            dump_realization_json(net, out);
        }
    }

    const std::vector<SweepPoint> points = expand_sweep(cfg);
    std::vector<ResultRow> rows;

    if (validate_mode) {
        cfg.engine_analytic = true;
        cfg.engine_mc = true;
    }

    std::vector<ResultRow> analytic_rows(points.size());
    if (cfg.engine_analytic) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            analytic_rows[i] = base_row(cfg, points[i], "analytic");
        }
        run_analytic_rows(cfg, points, analytic_rows);
    }
    std::vector<ResultRow> mc_rows(points.size());
    if (cfg.engine_mc) {
        // threshold sweeps share one batch of realizations across the grid
        const bool shared_gamma =
            cfg.sweep && cfg.sweep->variable == SweepVariable::GammaDb &&
            cfg.metric == Metric::Coverage;
        const bool shared_beta = cfg.sweep && cfg.sweep->variable == SweepVariable::BetaDb &&
                                 cfg.metric == Metric::Secrecy;
        for (std::size_t i = 0; i < points.size(); ++i) {
            mc_rows[i] = base_row(cfg, points[i], "mc");
        }
        if (shared_gamma) {
            std::vector<double> gammas;
            for (const auto& pt : points) gammas.push_back(pt.thresholds.gamma);
            Stopwatch watch;
            const auto est = simulate_coverage_curve(cfg.params, gammas, cfg.sim);
            for (std::size_t i = 0; i < points.size(); ++i) {
                mc_rows[i].mc_p_hat = est[i].p_hat;
                mc_rows[i].mc_ci_low = est[i].ci_low;
                mc_rows[i].mc_ci_high = est[i].ci_high;
                if (cfg.timing) mc_rows[i].runtime_ms = watch.ms() / points.size();
            }
        } else if (shared_beta) {
            std::vector<double> betas;
            for (const auto& pt : points) betas.push_back(pt.thresholds.beta);
            Stopwatch watch;
            const auto est = simulate_secrecy_curve(cfg.params, betas, cfg.sim);
            for (std::size_t i = 0; i < points.size(); ++i) {
                mc_rows[i].mc_p_hat = est[i].p_hat;
                mc_rows[i].mc_ci_low = est[i].ci_low;
                mc_rows[i].mc_ci_high = est[i].ci_high;
                if (cfg.timing) mc_rows[i].runtime_ms = watch.ms() / points.size();
            }
        } else {
            for (std::size_t i = 0; i < points.size(); ++i) {
                fill_mc_row(cfg, points[i], mc_rows[i]);
            }
        }
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (cfg.engine_analytic) rows.push_back(analytic_rows[i]);
        if (cfg.engine_mc) rows.push_back(mc_rows[i]);
    }

    int exit_code = 0;
    if (validate_mode) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            const ResultRow& a = analytic_rows[i];
            const ResultRow& m = mc_rows[i];
            const double half = (*m.mc_ci_high - *m.mc_ci_low) / 2.0;
            bool ok = true;
            std::string what;
            if (cfg.metric == Metric::Coverage) {
                const double diff = std::fabs(*a.p_c - *m.mc_p_hat);
                ok = diff <= 0.03 + half;
                what = "|p_c - mc| = " + fmt(diff) + " vs " + fmt(0.03 + half);
            } else if (cfg.metric == Metric::Secrecy) {
                const bool lower_ok = *a.p_sec_lower <= *m.mc_p_hat + half;
                const bool upper_ok = *a.p_sec_upper >= *m.mc_p_hat - half;
                ok = lower_ok && upper_ok;
                what = "lower " + fmt(*a.p_sec_lower) + " <= mc " + fmt(*m.mc_p_hat) +
                       " (+/-" + fmt(half) + ") <= upper " + fmt(*a.p_sec_upper);
            } else {
                throw ValidationError("validate supports the coverage and secrecy metrics");
            }
            std::cerr << "validate[" << metric_name(cfg.metric) << "] point "
                      << (points[i].value ? fmt(*points[i].value) : std::string("-")) << ": "
                      << (ok ? "ok" : "VIOLATION") << " (" << what << ")\n";
            if (!ok) exit_code = 1;
        }
    }

    write_rows(out_path, rows);
    return exit_code;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"analytic and Monte Carlo secrecy toolkit for AN-assisted C-V2X networks"};
    app.require_subcommand(1);

    std::string config_path, out_path, engine = "analytic", metric_arg;
    std::string eve_model_arg, typical_arg, variable_arg, dump_path;
    std::vector<double> values_arg;
    double start = 0.0, stop = 0.0;
    int count = 0, threads = 0, dump_count = 8;
    long trials = -1;
    double window = -1.0;
    std::uint64_t seed = 0;
    bool have_seed = false, fast_bounds = true, have_fast = false, timing = false;
    NetworkParams overrides;
    bool have[10] = {};
    double gamma_db = 0.0, beta_db = 0.0;
    bool have_gamma = false, have_beta = false;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--out", out_path, "output CSV path (default: stdout)");
        cmd->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
            have_seed = true;
        });
        cmd->add_option("--trials", trials, "Monte Carlo trials");
        cmd->add_option("--window-m", window, "simulation window radius, meters");
        cmd->add_option("--engine", engine, "analytic|mc|both");
        cmd->add_option("--eve-model", eve_model_arg, "sic|optimistic");
        cmd->add_option("--typical", typical_arg, "planar|vehicular|mix");
        cmd->add_option("--fast-bounds", fast_bounds, "use the fast vehicular secrecy bounds")
            ->each([&](const std::string&) { have_fast = true; });
        cmd->add_option("--threads", threads, "worker threads (0: all cores)");
        cmd->add_flag("--timing", timing, "record runtime_ms in the CSV");
        cmd->add_option("--phi", overrides.phi)->each([&](const std::string&) { have[0] = true; });
        cmd->add_option("--alpha", overrides.alpha)->each([&](const std::string&) {
            have[1] = true;
        });
        cmd->add_option("--N", overrides.n_antennas)->each([&](const std::string&) {
            have[2] = true;
        });
        cmd->add_option("--gamma-db", gamma_db)->each([&](const std::string&) {
            have_gamma = true;
        });
        cmd->add_option("--beta-db", beta_db)->each([&](const std::string&) { have_beta = true; });
        cmd->add_option("--lambda-b", overrides.lambda_b)->each([&](const std::string&) {
            have[3] = true;
        });
        cmd->add_option("--lambda-l", overrides.lambda_l)->each([&](const std::string&) {
            have[4] = true;
        });
        cmd->add_option("--u-b", overrides.u_b)->each([&](const std::string&) { have[5] = true; });
        cmd->add_option("--u-e", overrides.u_e)->each([&](const std::string&) { have[6] = true; });
        cmd->add_option("--lambda-e", overrides.lambda_e)->each([&](const std::string&) {
            have[7] = true;
        });
        cmd->add_option("--lambda-u", overrides.lambda_u)->each([&](const std::string&) {
            have[8] = true;
        });
        cmd->add_option("--u-u", overrides.u_u)->each([&](const std::string&) { have[9] = true; });
    };

    CLI::App* cov = app.add_subcommand("coverage", "coverage probability at one threshold");
    CLI::App* sec = app.add_subcommand("secrecy", "secrecy-probability bounds at one threshold");
    CLI::App* thr = app.add_subcommand("throughput", "effective secrecy throughput");
    CLI::App* swp = app.add_subcommand("sweep", "parameter sweep");
    CLI::App* simc = app.add_subcommand("simulate", "Monte Carlo only");
    CLI::App* val = app.add_subcommand("validate", "cross-engine agreement check");
    for (CLI::App* cmd : {cov, sec, thr, swp, simc, val}) add_common(cmd);

    swp->add_option("metric", metric_arg, "coverage|secrecy|throughput");
    swp->add_option("--variable", variable_arg, "sweep variable");
    swp->add_option("--start", start);
    swp->add_option("--stop", stop);
    swp->add_option("--count", count);
    swp->add_option("--values", values_arg, "explicit sweep values");
    simc->add_option("--metric", metric_arg, "coverage|secrecy|throughput");
    simc->add_option("--dump-realizations", dump_path, "write sampled realizations as JSON lines");
    simc->add_option("--dump-count", dump_count, "number of realizations to dump");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::cout << app.help() << std::endl;
            return 0;
        }
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            cfg = load_config_file(config_path);
        } else {
            // documented baseline defaults
            cfg.params = NetworkParams{1e-5, 1e-5, 1e-4, 5e-4, 1e-3, 1e-3, 1e-3, 2, 0.6, 2.3};
        }
        if (have[0]) cfg.params.phi = overrides.phi;
        if (have[1]) cfg.params.alpha = overrides.alpha;
        if (have[2]) cfg.params.n_antennas = overrides.n_antennas;
        if (have[3]) cfg.params.lambda_b = overrides.lambda_b;
        if (have[4]) cfg.params.lambda_l = overrides.lambda_l;
        if (have[5]) cfg.params.u_b = overrides.u_b;
        if (have[6]) cfg.params.u_e = overrides.u_e;
        if (have[7]) cfg.params.lambda_e = overrides.lambda_e;
        if (have[8]) cfg.params.lambda_u = overrides.lambda_u;
        if (have[9]) cfg.params.u_u = overrides.u_u;
        if (have_gamma) cfg.gamma_db = gamma_db;
        if (have_beta) cfg.beta_db = beta_db;
        if (have_seed) cfg.sim.master_seed = seed;
        if (trials >= 0) cfg.sim.n_trials = trials;
        if (window > 0.0) cfg.sim.window_radius = window;
        if (!eve_model_arg.empty()) cfg.sim.eve_model = eve_model_from_name(eve_model_arg);
        if (!typical_arg.empty()) cfg.sim.typical_kind_policy = typical_from_name(typical_arg);
        if (have_fast) cfg.fast_bounds = fast_bounds;
        cfg.sim.n_threads = threads;
        cfg.timing = timing;

        if (engine == "analytic") {
            cfg.engine_analytic = true;
            cfg.engine_mc = false;
        } else if (engine == "mc") {
            cfg.engine_analytic = false;
            cfg.engine_mc = true;
        } else if (engine == "both") {
            cfg.engine_analytic = true;
            cfg.engine_mc = true;
        } else {
            throw ValidationError("unknown --engine '" + engine + "' (want analytic|mc|both)");
        }

        if (cov->parsed()) cfg.metric = Metric::Coverage;
        if (sec->parsed()) cfg.metric = Metric::Secrecy;
        if (thr->parsed()) cfg.metric = Metric::Throughput;
        if (cov->parsed() || sec->parsed() || thr->parsed()) {
            cfg.sweep.reset();  // single-point commands; sweeps live in `sweep`/`validate`
        }
        if (!metric_arg.empty()) cfg.metric = metric_from_name(metric_arg);
        if (simc->parsed()) {
            cfg.engine_analytic = false;
            cfg.engine_mc = true;
        }

        if (!variable_arg.empty()) {
            const SweepVariable var = variable_from_name(variable_arg);
            if (!values_arg.empty()) {
                SweepSpec spec;
                spec.variable = var;
                spec.values = values_arg;
                spec.validate();
                cfg.sweep = spec;
            } else {
                cfg.sweep = SweepSpec::from_grid(var, start, stop, count);
            }
        }
        if (swp->parsed() && !cfg.sweep) {
            throw ValidationError("sweep: needs --variable/--start/--stop/--count or a config");
        }
        if (val->parsed() && !cfg.sweep) {
            // default validation grid over the metric's own threshold
            if (cfg.metric == Metric::Coverage) {
                cfg.sweep = SweepSpec{SweepVariable::GammaDb, {1.5, 5.0, 10.0}};
            } else {
                cfg.sweep = SweepSpec::from_grid(SweepVariable::BetaDb, -10.0, 10.0, 9);
            }
        }

        return run_resolved(std::move(cfg), out_path, val->parsed(),
                            simc->parsed() ? dump_path : std::string(), dump_count);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace v2xsec
