#include "purify/cli.hpp"

#include "purify/csv.hpp"
#include "purify/json_io.hpp"
#include "purify/mismatch_search.hpp"
#include "purify/sector_model.hpp"
#include "purify/temporal_fock.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace purify::cli {

namespace {

using nlohmann::json;

class ConfigurationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string config_scalar(const std::string& key, const json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number() || value.is_boolean()) return value.dump();
    throw ConfigurationError("config key '" + key + "' must hold a scalar or a list of scalars");
}

/// Loads a flat JSON object whose keys are flag names spelled with '_' into
/// the options of `sub` that were not given on the command line.
void apply_json_config(CLI::App& sub, const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigurationError("cannot read config file '" + path + "'");
    json j;
    try {
        file >> j;
    } catch (const json::exception& e) {
        throw ConfigurationError("invalid JSON in '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw ConfigurationError("config file must hold a JSON object");

    for (const auto& [key, value] : j.items()) {
        std::string flag = key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        CLI::Option* opt = key == "config" || key == "help" ? nullptr : sub.get_option_no_throw("--" + flag);
        if (opt == nullptr) throw ConfigurationError("unknown config key '" + key + "'");
        if (opt->count() > 0) continue;  // command-line flags override the file

        std::vector<std::string> inputs;
        if (value.is_array()) {
            for (const auto& element : value) inputs.push_back(config_scalar(key, element));
        } else {
            inputs.push_back(config_scalar(key, value));
        }
        for (const auto& input : inputs) opt->add_result(input);
        try {
            opt->run_callback();
        } catch (const CLI::ParseError& e) {
            throw ConfigurationError("config key '" + key + "': " + e.what());
        }
    }
}

std::vector<double> uniform_grid(double lo, double hi, int steps) {
    std::vector<double> grid;
    if (steps == 1) return {lo};
    for (int i = 0; i < steps; ++i) grid.push_back(lo + (hi - lo) * i / (steps - 1));
    grid.back() = hi;
    return grid;
}

struct Output {
    std::string path;
    std::string config;

    template <class Write>
    void emit(std::ostream& fallback, Write&& write) const {
        // Render fully first so a failed run leaves no partial file behind.
        std::ostringstream buffer;
        CsvWriter csv(buffer);
        write(csv);
        if (path.empty()) {
            fallback << buffer.str();
            return;
        }
        std::ofstream file(path, std::ios::binary);
        if (!file) throw ConfigurationError("cannot open output file '" + path + "'");
        file << buffer.str();
    }
};

void add_common(CLI::App* sub, Output& output) {
    sub->add_option("--out", output.path, "Write CSV to this path instead of standard output");
    sub->add_option("--config", output.config, "JSON file holding flag values (keys use '_')");
}

struct IdealCurveOptions {
    double f_min = 0.5;
    double f_max = 1.0;
    int steps = 51;
};

void run_ideal_curve(const IdealCurveOptions& o, const Output& output, std::ostream& out) {
    if (!(o.f_min >= 0.0 && o.f_min < o.f_max && o.f_max <= 1.0)) {
        throw ConfigurationError("need 0 <= f-min < f-max <= 1");
    }
    if (o.steps < 2) throw ConfigurationError("steps must be at least 2");
    output.emit(out, [&](CsvWriter& csv) {
        csv.header({"f", "f_prime"});
        for (double f : uniform_grid(o.f_min, o.f_max, o.steps)) csv.row({f, purify_fidelity(f)});
    });
}

struct CascadeOptions {
    int rounds = 3;
    double eta = 0.01;
    std::string loss_placement = "before";
    double f0 = 1.0;
    double p0 = 0.0;
    double p1 = 0.0;
    double p2 = 1.0;
};

void run_cascade(const CascadeOptions& o, const Output& output, std::ostream& out) {
    CascadeConfig config;
    try {
        config = json{{"rounds", o.rounds}, {"eta", o.eta}, {"loss_placement", o.loss_placement},
                      {"f0", o.f0},         {"p0", o.p0},   {"p1", o.p1},
                      {"p2", o.p2}}
                     .get<CascadeConfig>();
    } catch (const std::exception& e) {
        throw ConfigurationError(e.what());
    }
    const CascadeTrace trace = cascade(config);
    normalized_two_photon_prob(trace);  // throws NumericDegeneracy once the mass is gone
    output.emit(out, [&](CsvWriter& csv) {
        csv.header({"round", "p0", "p1", "p2", "f", "p2_norm", "effective_fidelity"});
        int round = 1;
        for (const auto& r : trace.rounds) {
            csv.row({static_cast<double>(round++), r.sectors.p0(), r.sectors.p1(), r.sectors.p2(), r.fidelity,
                     *r.p2_norm, r.fidelity * *r.p2_norm});
        }
    });
}

struct MismatchOptions {
    double f_min = 0.5;
    double f_max = 1.0;
    int steps = 11;
    std::vector<double> tau_bounds{0.2, 0.4, 0.6, 0.8};
    int samples = 1000;
    int grid = 0;
    std::uint64_t seed = 0;
    std::string policy = "strict";
    std::optional<double> sigma;
    unsigned threads = 1;
};

void run_mode_mismatch(const MismatchOptions& o, const Output& output, std::ostream& out) {
    if (!(o.f_min >= 0.0 && o.f_min <= o.f_max && o.f_max <= 1.0)) {
        throw ConfigurationError("need 0 <= f-min <= f-max <= 1");
    }
    if (o.steps < 1 || (o.steps == 1 && o.f_min != o.f_max)) {
        throw ConfigurationError("steps must be at least 1 (exactly 1 only when f-min equals f-max)");
    }
    if (o.tau_bounds.empty()) throw ConfigurationError("tau-bounds must not be empty");
    for (double t : o.tau_bounds) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigurationError("tau bounds must be non-negative");
    }
    if (o.samples < 1) throw ConfigurationError("samples must be at least 1");
    if (o.grid < 0) throw ConfigurationError("grid must be at least 1");
    if (o.threads < 1) throw ConfigurationError("threads must be at least 1");

    AcceptancePolicy policy;
    if (o.policy == "strict") {
        policy = AcceptancePolicy::StrictPlusPlusMinusMinus;
    } else if (o.policy == "feedforward") {
        policy = AcceptancePolicy::FeedForwardAllFour;
    } else {
        throw ConfigurationError("policy must be 'strict' or 'feedforward'");
    }

    std::optional<WavePacketConvention> conv;
    try {
        conv = o.sigma ? WavePacketConvention{*o.sigma} : default_convention();
    } catch (const std::domain_error& e) {
        throw ConfigurationError(e.what());
    }

    SearchConfig search;
    search.seed = o.seed;
    if (o.grid > 0) {
        search.mode = GridSearch{o.grid};
    } else {
        search.mode = MonteCarloSearch{o.samples};
    }

    const auto f_grid = uniform_grid(o.f_min, o.f_max, o.steps);
    const auto rows = mismatch_curve(f_grid, o.tau_bounds, search, policy, *conv, o.threads);
    output.emit(out, [&](CsvWriter& csv) {
        csv.header({"tau_bound", "f", "min_f_prime", "argmin_tau1", "argmin_tau2"});
        for (const auto& r : rows) csv.row({r.tau_bound, r.f, r.min_f_prime, r.argmin_tau1, r.argmin_tau2});
    });
}

struct BandwidthOptions {
    double omega_min = 0.1;
    double omega_max = 6.0;
    int steps = 60;
};

void run_bandwidth(const BandwidthOptions& o, const Output& output, std::ostream& out) {
    if (!(o.omega_min > 0.0 && o.omega_min < o.omega_max) || !std::isfinite(o.omega_max)) {
        throw ConfigurationError("need 0 < omega-min < omega-max");
    }
    if (o.steps < 2) throw ConfigurationError("steps must be at least 2");
    output.emit(out, [&](CsvWriter& csv) {
        csv.header({"omega", "eta"});
        for (double omega : uniform_grid(o.omega_min, o.omega_max, o.steps)) {
            csv.row({omega, bandwidth_to_efficiency(omega)});
        }
    });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entanglement purification under loss, finite detector bandwidth and mode-mismatch", "purify"};
    app.require_subcommand(1);

    Output output;
    std::function<void()> action;

    IdealCurveOptions ideal;
    auto* ideal_cmd = app.add_subcommand("ideal-curve", "Output fidelity against input fidelity for a lossless round");
    ideal_cmd->add_option("--f-min", ideal.f_min)->capture_default_str();
    ideal_cmd->add_option("--f-max", ideal.f_max)->capture_default_str();
    ideal_cmd->add_option("--steps", ideal.steps)->capture_default_str();
    add_common(ideal_cmd, output);
    ideal_cmd->callback([&] {
        action = [&] {
            if (!output.config.empty()) apply_json_config(*ideal_cmd, output.config);
            run_ideal_curve(ideal, output, out);
        };
    });

    CascadeOptions casc;
    auto* casc_cmd = app.add_subcommand("cascade", "Photon-number sectors through repeated lossy rounds");
    casc_cmd->add_option("--rounds", casc.rounds)->capture_default_str();
    casc_cmd->add_option("--eta", casc.eta, "Intensity loss per arm")->capture_default_str();
    casc_cmd->add_option("--loss-placement", casc.loss_placement)
        ->check(CLI::IsMember({"before", "after"}))
        ->capture_default_str();
    casc_cmd->add_option("--f0", casc.f0, "Initial two-photon fidelity")->capture_default_str();
    casc_cmd->add_option("--p0", casc.p0, "Initial vacuum probability")->capture_default_str();
    casc_cmd->add_option("--p1", casc.p1, "Initial one-photon probability")->capture_default_str();
    casc_cmd->add_option("--p2", casc.p2, "Initial two-photon probability")->capture_default_str();
    add_common(casc_cmd, output);
    casc_cmd->callback([&] {
        action = [&] {
            if (!output.config.empty()) apply_json_config(*casc_cmd, output.config);
            run_cascade(casc, output, out);
        };
    });

    MismatchOptions mm;
    auto* mm_cmd = app.add_subcommand("mode-mismatch", "Worst-case output fidelity under bounded temporal mismatch");
    mm_cmd->add_option("--f-min", mm.f_min)->capture_default_str();
    mm_cmd->add_option("--f-max", mm.f_max)->capture_default_str();
    mm_cmd->add_option("--steps", mm.steps)->capture_default_str();
    mm_cmd->add_option("--tau-bounds", mm.tau_bounds)->delimiter(',')->capture_default_str();
    auto* samples = mm_cmd->add_option("--samples", mm.samples, "Monte Carlo samples per cell")->capture_default_str();
    auto* grid = mm_cmd->add_option("--grid", mm.grid, "Use a k x k lattice instead of Monte Carlo");
    samples->excludes(grid);
    mm_cmd->add_option("--seed", mm.seed)->capture_default_str();
    mm_cmd->add_option("--policy", mm.policy)->check(CLI::IsMember({"strict", "feedforward"}))->capture_default_str();
    mm_cmd->add_option("--sigma", mm.sigma, "Gaussian wave-packet width (default: calibrated to V(0.4) = 0.74)");
    mm_cmd->add_option("--threads", mm.threads)->capture_default_str();
    add_common(mm_cmd, output);
    mm_cmd->callback([&] {
        action = [&] {
            if (!output.config.empty()) apply_json_config(*mm_cmd, output.config);
            run_mode_mismatch(mm, output, out);
        };
    });

    BandwidthOptions bw;
    auto* bw_cmd = app.add_subcommand("bandwidth", "Effective loss of a band-limited detector");
    bw_cmd->add_option("--omega-min", bw.omega_min)->capture_default_str();
    bw_cmd->add_option("--omega-max", bw.omega_max)->capture_default_str();
    bw_cmd->add_option("--steps", bw.steps)->capture_default_str();
    add_common(bw_cmd, output);
    bw_cmd->callback([&] {
        action = [&] {
            if (!output.config.empty()) apply_json_config(*bw_cmd, output.config);
            run_bandwidth(bw, output, out);
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        action();
    } catch (const ConfigurationError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericDegeneracy& e) {
        err << "error: " << e.what() << '\n';
        return kNumericDegeneracy;
    }
    return kSuccess;
}

}  // namespace purify::cli
