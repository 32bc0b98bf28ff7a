// Command-line front end: fig2 / stddev / robustness / tomo / fit
// subcommands over the natsim library, with CSV or JSON output.

#include "natsim/errors.hpp"
#include "natsim/experiments.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace {

using natsim::ExperimentConfig;

struct OutputOptions {
    std::string path = "-";
    std::string format;  // "", "csv", "json"
};

std::string resolve_format(const OutputOptions& out) {
    if (!out.format.empty()) return out.format;
    if (out.path.size() > 5 && out.path.substr(out.path.size() - 5) == ".json") return "json";
    return "csv";
}

void write_output(const OutputOptions& out, const std::string& csv, const std::string& json) {
    const std::string& text = resolve_format(out) == "json" ? json : csv;
    if (out.path == "-" || out.path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out.path, std::ios::binary);
    if (!f) throw natsim::ConfigError("cannot open output file '" + out.path + "'");
    f << text;
}

natsim::PrepKind prep_from_name(const std::string& p) {
    if (p == "product") return natsim::PrepKind::ProductMain;
    if (p == "soft") return natsim::PrepKind::SoftMeasurement;
    throw natsim::ConfigError("prep must be 'product' or 'soft'");
}

natsim::TimeMode time_mode_from_name(const std::string& m) {
    if (m == "exponential") return natsim::TimeMode::Exponential;
    if (m == "linear") return natsim::TimeMode::Linear;
    throw natsim::ConfigError("time_mode must be 'exponential' or 'linear'");
}

natsim::EngineChoice engine_from_name(const std::string& e) {
    if (e == "auto") return natsim::EngineChoice::Auto;
    if (e == "dense") return natsim::EngineChoice::Dense;
    if (e == "krylov") return natsim::EngineChoice::Krylov;
    throw natsim::ConfigError("engine must be auto, dense, or krylov");
}

void apply_config_values(ExperimentConfig& cfg, OutputOptions& out, const nlohmann::json& j) {
    static const std::set<std::string> known{
        "sizes",      "coupling",         "boundary",   "beta_formula",     "prep",
        "time_mode",  "time_multiplier",  "seed",       "trials",           "shots",
        "tomo_size",  "engine",           "dense_max_qubits", "krylov_dim",
        "krylov_tolerance", "echo",       "echo_steps", "anisotropy",       "threads",
        "out",        "format"};
    for (const auto& item : j.items())
        if (!known.count(item.key()))
            throw natsim::ConfigError("unknown config key '" + item.key() + "'");
    auto get = [&](const char* key, auto& target) {
        if (j.contains(key)) {
            try {
                target = j.at(key).get<std::decay_t<decltype(target)>>();
            } catch (const std::exception&) {
                throw natsim::ConfigError(std::string("bad value for config key '") + key + "'");
            }
        }
    };
    get("sizes", cfg.sizes);
    get("coupling", cfg.coupling);
    if (j.contains("boundary"))
        cfg.boundary = natsim::boundary_from_name(j.at("boundary").get<std::string>());
    get("beta_formula", cfg.beta_formula);
    if (j.contains("prep")) cfg.prep = prep_from_name(j.at("prep").get<std::string>());
    if (j.contains("time_mode"))
        cfg.time_mode = time_mode_from_name(j.at("time_mode").get<std::string>());
    get("time_multiplier", cfg.time_multiplier);
    get("seed", cfg.seed);
    get("trials", cfg.trials);
    get("shots", cfg.shots);
    get("tomo_size", cfg.tomo_size);
    if (j.contains("engine")) cfg.engine = engine_from_name(j.at("engine").get<std::string>());
    get("dense_max_qubits", cfg.dense_max_qubits);
    get("krylov_dim", cfg.krylov_dim);
    get("krylov_tolerance", cfg.krylov_tolerance);
    get("echo", cfg.echo);
    get("echo_steps", cfg.echo_steps);
    get("anisotropy", cfg.anisotropy);
    get("threads", cfg.threads);
    get("out", out.path);
    get("format", out.format);
}

/// Reads a config file into the defaults. JSON is parsed directly; anything
/// else goes through CLI11's TOML reader (flat key = value entries; keys may
/// use '-' or '_').
void apply_config_file(ExperimentConfig& cfg, OutputOptions& out, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw natsim::ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        try {
            f >> j;
        } catch (const std::exception& e) {
            throw natsim::ConfigError("config parse error: " + std::string(e.what()));
        }
    } else {
        static const std::set<std::string> int_list_keys{"sizes"};
        static const std::set<std::string> number_keys{
            "coupling",   "time_multiplier", "krylov_tolerance", "anisotropy",
            "seed",       "trials",          "shots",            "tomo_size",
            "krylov_dim", "echo_steps",      "threads",          "dense_max_qubits"};
        static const std::set<std::string> bool_keys{"echo"};
        CLI::ConfigTOML reader;
        std::vector<CLI::ConfigItem> items;
        try {
            items = reader.from_config(f);
        } catch (const std::exception& e) {
            throw natsim::ConfigError("config parse error: " + std::string(e.what()));
        }
        for (const CLI::ConfigItem& item : items) {
            if (!item.parents.empty())
                throw natsim::ConfigError("config sections are not supported (key '" +
                                          item.fullname() + "')");
            std::string key = item.name;
            for (char& c : key) c = c == '-' ? '_' : c;
            if (item.inputs.empty()) continue;
            auto parse_scalar = [&](const std::string& text) -> nlohmann::json {
                std::string value = text;
                CLI::detail::remove_quotes(value);
                if (bool_keys.count(key)) return value == "true" || value == "1";
                if (number_keys.count(key) || int_list_keys.count(key)) {
                    try {
                        if (value.find_first_of(".eE") == std::string::npos)
                            return std::stoll(value);
                        return std::stod(value);
                    } catch (const std::exception&) {
                        throw natsim::ConfigError("bad numeric value '" + value + "' for '" +
                                                  key + "'");
                    }
                }
                return value;
            };
            if (int_list_keys.count(key)) {
                nlohmann::json arr = nlohmann::json::array();
                for (const std::string& v : item.inputs) arr.push_back(parse_scalar(v));
                j[key] = arr;
            } else if (item.inputs.size() == 1) {
                j[key] = parse_scalar(item.inputs.front());
            } else {
                throw natsim::ConfigError("config key '" + key + "' expects a single value");
            }
        }
    }
    apply_config_values(cfg, out, j);
}

/// Pull `--config PATH` out of args; the file becomes the new defaults and
/// explicit flags still override.
std::string extract_config_path(std::vector<std::string>& args) {
    for (std::size_t k = 0; k < args.size(); ++k) {
        if ((args[k] == "--config" || args[k] == "-c") && k + 1 < args.size()) {
            const std::string value = args[k + 1];
            args.erase(args.begin() + k, args.begin() + k + 2);
            return value;
        }
        if (args[k].rfind("--config=", 0) == 0) {
            const std::string value = args[k].substr(9);
            args.erase(args.begin() + k);
            return value;
        }
    }
    return "";
}

void add_common_options(CLI::App* cmd, ExperimentConfig& cfg, OutputOptions& out) {
    // The config file is extracted and applied before CLI11 parses, so this
    // option exists for --help and for catching a missing filename.
    static std::string config_sink;
    cmd->add_option("--config,-c", config_sink, "Config file (TOML or JSON) applied as defaults");
    cmd->add_option("--seed", cfg.seed, "Master RNG seed");
    cmd->add_option("--sizes", cfg.sizes, "Chain lengths Nn (even)")->delimiter(',');
    cmd->add_option("--coupling", cfg.coupling, "Bond energy J");
    cmd->add_option("--boundary", cfg.boundary, "Boundary condition")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, natsim::Boundary>{{"closed", natsim::Boundary::Closed},
                                                    {"periodic", natsim::Boundary::Periodic}}));
    cmd->add_option("--beta-formula", cfg.beta_formula,
                    "First-order beta variant: auto, closed, periodic")
        ->check(CLI::IsMember({"auto", "closed", "periodic"}));
    cmd->add_option("--time-mode", cfg.time_mode, "exponential: t = 2^Nn, linear: t = mult*Nn/J")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, natsim::TimeMode>{{"exponential", natsim::TimeMode::Exponential},
                                                    {"linear", natsim::TimeMode::Linear}}));
    cmd->add_option("--time-mult", cfg.time_multiplier, "Linear-mode multiplier");
    cmd->add_option("--prep", cfg.prep, "Initial-state protocol")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, natsim::PrepKind>{{"product", natsim::PrepKind::ProductMain},
                                                    {"soft", natsim::PrepKind::SoftMeasurement}}));
    cmd->add_option("--engine", cfg.engine, "Propagator engine")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, natsim::EngineChoice>{{"auto", natsim::EngineChoice::Auto},
                                                        {"dense", natsim::EngineChoice::Dense},
                                                        {"krylov", natsim::EngineChoice::Krylov}}));
    cmd->add_option("--krylov-dim", cfg.krylov_dim, "Lanczos subspace size");
    cmd->add_option("--krylov-tol", cfg.krylov_tolerance, "Total Krylov error budget");
    cmd->add_flag_callback(
        "--allow-large", [&cfg] { cfg.dense_max_qubits = 14; },
        "Raise the dense-engine guard to 14 qubits (long runtime)");
    cmd->add_option("--threads", cfg.threads, "Worker threads (0 = hardware)");
    cmd->add_option("--out", out.path, "Output path ('-' = stdout)");
    cmd->add_option("--format", out.format, "Force output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-chain thermalization studies with noncommuting conserved charges",
                 "natsim"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    OutputOptions out;
    std::string records_path;
    std::string fit_in, fit_xcol = "R", fit_ycol = "D_nats";

    CLI::App* fig2 = app.add_subcommand("fig2", "Thermalization distances vs chain size");
    add_common_options(fig2, cfg, out);

    CLI::App* stddev =
        app.add_subcommand("stddev", "Charge std-dev scaling after soft measurements");
    add_common_options(stddev, cfg, out);
    stddev->add_option("--trials", cfg.trials, "Random states per size");

    CLI::App* robustness =
        app.add_subcommand("robustness", "Distances under anisotropic evolution with echo");
    add_common_options(robustness, cfg, out);
    robustness->add_option("--delta", cfg.anisotropy, "Isotropy parameter of the evolution");
    robustness->add_flag("--echo,!--no-echo", cfg.echo, "Interleave global axis cycles");
    robustness->add_option("--echo-steps", cfg.echo_steps,
                           "Evolution segments (0 = 3*round(t)+1)");

    CLI::App* tomo = app.add_subcommand("tomo", "Tomography of the long-time reduced state");
    add_common_options(tomo, cfg, out);
    tomo->add_option("--size", cfg.tomo_size, "Chain length Nn");
    tomo->add_option("--shots", cfg.shots, "Shots per basis (0 = exact frequencies)");
    tomo->add_option("--records", records_path, "Also write raw records as JSON lines");

    CLI::App* fit = app.add_subcommand("fit", "Power-law fit of two CSV columns");
    fit->add_option("--in", fit_in, "Input CSV")->required();
    fit->add_option("--xcol", fit_xcol, "Abscissa column name");
    fit->add_option("--ycol", fit_ycol, "Ordinate column name");
    fit->add_option("--out", out.path, "Output path ('-' = stdout)");
    fit->add_option("--format", out.format, "Force output format")
        ->check(CLI::IsMember({"csv", "json"}));

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        // Config files are loaded as defaults before CLI11 parses the flags,
        // so explicit flags still win.
        const std::string config_path = extract_config_path(args);
        if (!config_path.empty()) apply_config_file(cfg, out, config_path);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const natsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*fig2) {
            const auto rows = natsim::run_fig2(cfg);
            write_output(out, natsim::fig2_csv(rows), natsim::fig2_json(rows));
        } else if (*stddev) {
            const auto result = natsim::run_stddev_scaling(cfg);
            write_output(out, natsim::stddev_csv(result), natsim::stddev_json(result));
            const char* axes = "xyz";
            for (int a = 0; a < 3; ++a)
                std::cerr << "fit " << axes[a] << ": std ~ " << result.fits[a].coefficient
                          << " * Nn^" << result.fits[a].exponent << "\n";
        } else if (*robustness) {
            const auto rows = natsim::run_robustness(cfg);
            write_output(out, natsim::fig2_csv(rows), natsim::fig2_json(rows));
        } else if (*tomo) {
            const auto report = natsim::run_tomography_demo(cfg);
            write_output(out, natsim::tomo_csv(report), natsim::tomo_json(report));
            if (!records_path.empty()) {
                std::ofstream f(records_path, std::ios::binary);
                if (!f)
                    throw natsim::ConfigError("cannot open records file '" + records_path + "'");
                for (const auto& rec : report.records)
                    f << natsim::record_to_json_line(rec) << "\n";
            }
        } else if (*fit) {
            std::ifstream f(fit_in);
            if (!f) throw natsim::ConfigError("cannot open input file '" + fit_in + "'");
            std::string header;
            std::getline(f, header);
            std::vector<std::string> cols;
            {
                std::stringstream ss(header);
                std::string c;
                while (std::getline(ss, c, ',')) cols.push_back(c);
            }
            const auto xit = std::find(cols.begin(), cols.end(), fit_xcol);
            const auto yit = std::find(cols.begin(), cols.end(), fit_ycol);
            if (xit == cols.end() || yit == cols.end())
                throw natsim::ConfigError("columns '" + fit_xcol + "'/'" + fit_ycol +
                                          "' not found in " + fit_in);
            const std::size_t xi = xit - cols.begin(), yi = yit - cols.begin();
            std::vector<std::pair<double, double>> points;
            std::string line;
            while (std::getline(f, line)) {
                if (line.empty()) continue;
                std::stringstream ss(line);
                std::vector<std::string> fields;
                std::string c;
                while (std::getline(ss, c, ',')) fields.push_back(c);
                if (fields.size() <= std::max(xi, yi)) continue;
                points.emplace_back(std::stod(fields[xi]), std::stod(fields[yi]));
            }
            const auto result = natsim::fit_power_law(points);
            write_output(out, natsim::fit_csv(result), natsim::fit_json(result));
        }
    } catch (const natsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const natsim::ResourceError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
