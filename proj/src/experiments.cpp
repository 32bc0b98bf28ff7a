#include "natsim/experiments.hpp"

#include "natsim/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <thread>

namespace natsim {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    threads = std::min(std::max(threads, 1), count);
    if (threads <= 1) {
        for (int k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const int k = next.fetch_add(1);
                if (k >= count || failed.load()) return;
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

void validate_even_sizes(const std::vector<int>& sizes, int minimum) {
    if (sizes.empty()) throw ConfigError("no chain sizes given");
    for (int nn : sizes) {
        if (nn < minimum)
            throw ConfigError("chain size " + std::to_string(nn) + " below minimum " +
                              std::to_string(minimum));
        if (nn % 2 != 0)
            throw ConfigError("chain size " + std::to_string(nn) +
                              " is odd; the chain is built from 2-qubit copies");
    }
}

void check_beta_formula(const ExperimentConfig& cfg) {
    if (cfg.beta_formula == "auto") return;
    if (cfg.beta_formula != "closed" && cfg.beta_formula != "periodic")
        throw ConfigError("beta formula must be auto, closed, or periodic");
    if (cfg.beta_formula != boundary_name(cfg.boundary))
        throw ConfigError("beta formula '" + cfg.beta_formula +
                          "' does not match boundary '" + boundary_name(cfg.boundary) + "'");
}

double evolution_time(const ExperimentConfig& cfg, int nn) {
    if (cfg.time_mode == TimeMode::Exponential) return std::ldexp(1.0, nn);  // 2^Nn
    return cfg.time_multiplier * nn / cfg.coupling;
}

Engine pick_engine(const ExperimentConfig& cfg, int nn) {
    switch (cfg.engine) {
        case EngineChoice::Dense: return Engine::DenseEig;
        case EngineChoice::Krylov: return Engine::Krylov;
        case EngineChoice::Auto: break;
    }
    return nn <= 12 ? Engine::DenseEig : Engine::Krylov;
}

struct SizeResult {
    Fig2Row row;
    Eigen::MatrixXcd rho_s;
    Eigen::MatrixXcd nats;
};

/// Shared single-size pipeline for the distance studies. With `robust` the
/// evolution runs under the anisotropic sign-flipped chain (echoed when
/// configured) while every prediction still comes from the ideal chain.
SizeResult run_distance_size(const ExperimentConfig& cfg, int nn, bool robust) {
    ChainSpec ideal;
    ideal.copies = nn / 2;
    ideal.sites_per_copy = 2;
    ideal.coupling = cfg.coupling;
    ideal.boundary = cfg.boundary;
    ideal.isotropy = 1.0;
    ideal.overall_sign = +1;
    const HamiltonianAction h_ideal(ideal);

    StateVector psi0;
    std::array<double, 3> charges{};
    if (cfg.prep == PrepKind::ProductMain) {
        psi0 = product_state(main_experiment_pattern(nn));
        const ChargeStats stats = charge_statistics(psi0);
        charges = stats.mean;
    } else {
        std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(nn), 0xA11C));
        const AmcSequenceResult prep = amc_prep_sequence(random_state(nn, rng), rng);
        psi0 = prep.state;
        for (const SoftOutcome& o : prep.outcomes)
            charges[static_cast<int>(o.axis)] = o.value;
    }

    const double e_tot = energy_expectation(psi0, h_ideal);
    ThermalParams params;
    params.beta = analytic_beta(e_tot, ideal);
    params.mu = analytic_mu(charges, e_tot, ideal);

    const double t = evolution_time(cfg, nn);
    const ChargeStats stats0 = charge_statistics(psi0);

    StateVector psit;
    std::string engine_used;
    if (robust) {
        ChainSpec aniso = ideal;
        aniso.isotropy = cfg.anisotropy;
        aniso.overall_sign = -1;
        const HamiltonianAction h_aniso(aniso);
        if (nn > cfg.dense_max_qubits)
            throw ResourceError("echo evolution needs the dense engine; " + std::to_string(nn) +
                                " qubits exceed the guard");
        if (cfg.echo) {
            const long steps = cfg.echo_steps > 0 ? cfg.echo_steps : default_echo_steps(t);
            psit = evolve_with_rotation_echo(psi0, h_aniso, t, steps);
            engine_used = "dense_eig+echo";
        } else {
            PropagatorConfig pc;
            pc.engine = Engine::DenseEig;
            pc.time = t;
            pc.dense_max_qubits = cfg.dense_max_qubits;
            psit = evolve(psi0, h_aniso, pc);
            engine_used = "dense_eig";
        }
    } else {
        PropagatorConfig pc;
        pc.engine = pick_engine(cfg, nn);
        pc.time = t;
        pc.krylov_dim = cfg.krylov_dim;
        pc.step_tolerance = cfg.krylov_tolerance;
        pc.dense_max_qubits = cfg.dense_max_qubits;
        psit = evolve(psi0, h_ideal, pc);
        engine_used = engine_name(pc.engine);
    }

    const ChargeStats stats1 = charge_statistics(psit);

    const Eigen::MatrixXcd rho_s = partial_trace(psit, cfg.system_sites);
    const int n_sys = static_cast<int>(cfg.system_sites.size());
    const Eigen::MatrixXcd h_s = system_hamiltonian(ideal, cfg.system_sites.front(), n_sys);
    const std::array<Eigen::MatrixXcd, 3> sys_charges{dense_total_spin(n_sys, Axis::X),
                                                      dense_total_spin(n_sys, Axis::Y),
                                                      dense_total_spin(n_sys, Axis::Z)};
    const Eigen::MatrixXcd nats = thermal_state(h_s, sys_charges, params, EnsembleKind::Nats);
    const Eigen::MatrixXcd can = thermal_state(h_s, sys_charges, params, EnsembleKind::Canonical);
    const Eigen::MatrixXcd gc =
        thermal_state(h_s, sys_charges, params, EnsembleKind::GrandCanonicalZ);

    SizeResult out;
    out.rho_s = rho_s;
    out.nats = nats;
    Fig2Row& row = out.row;
    row.nn = nn;
    row.r = nn / 2.0;
    row.e_tot = e_tot;
    row.charges = charges;
    row.params = params;
    row.d_nats = relative_entropy(rho_s, nats);
    row.d_can = relative_entropy(rho_s, can);
    row.d_gc = relative_entropy(rho_s, gc);
    row.smallparams = small_parameter_report(params, ideal);
    row.smallparam_max = max_small_parameter(row.smallparams);
    row.t = t;
    row.engine = engine_used;
    for (int a = 0; a < 3; ++a) row.charge_drift[a] = std::abs(stats1.mean[a] - stats0.mean[a]);
    return out;
}

std::vector<Fig2Row> run_distance_study(const ExperimentConfig& cfg, bool robust) {
    ExperimentConfig local = cfg;
    if (local.sizes.empty())
        local.sizes = robust ? std::vector<int>{6, 8, 10} : std::vector<int>{6, 8, 10, 12};
    validate_even_sizes(local.sizes, 6);
    check_beta_formula(local);
    if (local.system_sites.empty()) throw ConfigError("system_sites must be nonempty");

    std::vector<Fig2Row> rows;
    for (int nn : local.sizes) rows.push_back(run_distance_size(local, nn, robust).row);
    std::sort(rows.begin(), rows.end(),
              [](const Fig2Row& a, const Fig2Row& b) { return a.nn < b.nn; });
    return rows;
}

nlohmann::json row_to_json(const Fig2Row& row) {
    nlohmann::json j;
    j["Nn"] = row.nn;
    j["R"] = row.r;
    j["E_tot"] = row.e_tot;
    j["S"] = row.charges;
    j["beta"] = row.params.beta;
    j["mu"] = row.params.mu;
    j["D_nats"] = row.d_nats;
    j["D_can"] = row.d_can;
    j["D_gc"] = row.d_gc;
    j["t"] = row.t;
    j["engine"] = row.engine;
    j["charge_drift"] = row.charge_drift;
    nlohmann::json sp = nlohmann::json::object();
    for (const auto& p : row.smallparams) sp[p.name] = p.value;
    j["small_parameters"] = sp;
    j["smallparam_max"] = row.smallparam_max;
    return j;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

std::vector<Fig2Row> run_fig2(const ExperimentConfig& cfg) {
    return run_distance_study(cfg, false);
}

std::vector<Fig2Row> run_robustness(const ExperimentConfig& cfg) {
    return run_distance_study(cfg, true);
}

StdDevResult run_stddev_scaling(const ExperimentConfig& cfg) {
    ExperimentConfig local = cfg;
    if (local.sizes.empty()) local.sizes = {4, 6, 8, 10, 12};
    validate_even_sizes(local.sizes, 2);
    if (local.trials < 1) throw ConfigError("trials must be >= 1");

    StdDevResult result;
    for (int nn : local.sizes) {
        std::vector<ChargeStats> per_trial(local.trials);
        parallel_for(local.trials, resolve_threads(local.threads), [&](int trial) {
            std::mt19937_64 rng(mix_seed(local.seed, static_cast<std::uint64_t>(nn),
                                         static_cast<std::uint64_t>(trial)));
            const AmcSequenceResult prep = amc_prep_sequence(random_state(nn, rng), rng);
            per_trial[trial] = charge_statistics(prep.state);
        });
        StdDevRow row;
        row.nn = nn;
        for (int a = 0; a < 3; ++a) {
            double sum = 0.0;
            for (const auto& stats : per_trial) sum += stats.stddev[a];
            row.mean_std[a] = sum / local.trials;
        }
        result.rows.push_back(row);
    }
    std::sort(result.rows.begin(), result.rows.end(),
              [](const StdDevRow& a, const StdDevRow& b) { return a.nn < b.nn; });

    for (int a = 0; a < 3; ++a) {
        std::vector<std::pair<double, double>> points;
        for (const auto& row : result.rows)
            points.emplace_back(double(row.nn), row.mean_std[a]);
        result.fits[a] = fit_power_law(points);
    }
    return result;
}

TomoReport run_tomography_demo(const ExperimentConfig& cfg) {
    ExperimentConfig local = cfg;
    const int nn = local.tomo_size;
    local.sizes = {nn};
    validate_even_sizes(local.sizes, 6);
    check_beta_formula(local);
    if (local.shots < 0) throw ConfigError("shots must be >= 0");

    const SizeResult size_result = run_distance_size(local, nn, false);
    const int n_sys = static_cast<int>(local.system_sites.size());

    TomoReport report;
    report.nn = nn;
    report.shots = local.shots;
    std::mt19937_64 rng(mix_seed(local.seed, static_cast<std::uint64_t>(nn), 0x70D0));
    for (const std::string& basis : all_measurement_bases(n_sys))
        report.records.push_back(
            simulate_basis_measurement(size_result.rho_s, basis, local.shots, rng));

    const auto expectations = expectations_from_frequencies(report.records, n_sys);
    const Eigen::MatrixXcd recon = reconstruct_state(expectations, n_sys);
    report.trace_dist = trace_distance(recon, size_result.rho_s);
    report.d_recon_nats = relative_entropy(recon, size_result.nats);
    report.d_exact_nats = relative_entropy(size_result.rho_s, size_result.nats);
    return report;
}

FitResult fit_power_law(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw std::domain_error("power-law fit needs at least 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::domain_error("power-law fit needs positive coordinates");
        const double lx = std::log(x);
        const double ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = double(points.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::domain_error("degenerate abscissas in power-law fit");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double ssr = 0.0;
    for (const auto& [x, y] : points) {
        const double r = std::log(y) - (intercept + slope * std::log(x));
        ssr += r * r;
    }
    return FitResult{std::exp(intercept), slope, std::sqrt(ssr / n)};
}

std::string fig2_csv(const std::vector<Fig2Row>& rows) {
    std::string out = "Nn,R,beta,mu_x,mu_y,mu_z,D_nats,D_can,D_gc,smallparam_max,t,engine\n";
    for (const Fig2Row& r : rows) {
        out += std::to_string(r.nn) + ',' + fmt_g(r.r) + ',' + fmt_g(r.params.beta) + ',' +
               fmt_g(r.params.mu[0]) + ',' + fmt_g(r.params.mu[1]) + ',' +
               fmt_g(r.params.mu[2]) + ',' + fmt_g(r.d_nats) + ',' + fmt_g(r.d_can) + ',' +
               fmt_g(r.d_gc) + ',' + fmt_g(r.smallparam_max) + ',' + fmt_g(r.t) + ',' +
               r.engine + '\n';
    }
    return out;
}

std::string fig2_json(const std::vector<Fig2Row>& rows) {
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    for (const Fig2Row& r : rows) j["rows"].push_back(row_to_json(r));
    return j.dump(2) + "\n";
}

std::string stddev_csv(const StdDevResult& result) {
    std::string out = "Nn,std_x,std_y,std_z\n";
    for (const StdDevRow& r : result.rows)
        out += std::to_string(r.nn) + ',' + fmt_g(r.mean_std[0]) + ',' + fmt_g(r.mean_std[1]) +
               ',' + fmt_g(r.mean_std[2]) + '\n';
    return out;
}

std::string stddev_json(const StdDevResult& result) {
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    for (const StdDevRow& r : result.rows) {
        nlohmann::json row;
        row["Nn"] = r.nn;
        row["std"] = r.mean_std;
        j["rows"].push_back(row);
    }
    const char* axes[3] = {"x", "y", "z"};
    for (int a = 0; a < 3; ++a) {
        nlohmann::json f;
        f["coefficient"] = result.fits[a].coefficient;
        f["exponent"] = result.fits[a].exponent;
        f["residual"] = result.fits[a].residual;
        j["fits"][axes[a]] = f;
    }
    return j.dump(2) + "\n";
}

std::string tomo_csv(const TomoReport& report) {
    std::string out = "Nn,shots,trace_dist,D_recon_nats,D_exact_nats\n";
    out += std::to_string(report.nn) + ',' + std::to_string(report.shots) + ',' +
           fmt_g(report.trace_dist) + ',' + fmt_g(report.d_recon_nats) + ',' +
           fmt_g(report.d_exact_nats) + '\n';
    return out;
}

std::string tomo_json(const TomoReport& report) {
    nlohmann::json j;
    j["Nn"] = report.nn;
    j["shots"] = report.shots;
    j["trace_dist"] = report.trace_dist;
    j["D_recon_nats"] = report.d_recon_nats;
    j["D_exact_nats"] = report.d_exact_nats;
    return j.dump(2) + "\n";
}

std::string fit_csv(const FitResult& fit) {
    return "coefficient,exponent,residual\n" + fmt_g(fit.coefficient) + ',' +
           fmt_g(fit.exponent) + ',' + fmt_g(fit.residual) + '\n';
}

std::string fit_json(const FitResult& fit) {
    nlohmann::json j;
    j["coefficient"] = fit.coefficient;
    j["exponent"] = fit.exponent;
    j["residual"] = fit.residual;
    return j.dump(2) + "\n";
}

}  // namespace natsim
