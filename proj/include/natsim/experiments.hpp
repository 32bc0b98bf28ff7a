#pragma once

#include "natsim/propagation.hpp"
#include "natsim/state_prep.hpp"
#include "natsim/thermal.hpp"
#include "natsim/tomography.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace natsim {

enum class PrepKind { ProductMain, SoftMeasurement };
enum class TimeMode { Exponential, Linear };
enum class EngineChoice { Auto, Dense, Krylov };

struct ExperimentConfig {
    std::vector<int> sizes;             // empty -> per-experiment default
    double coupling = 1.0;              // J
    Boundary boundary = Boundary::Periodic;
    std::string beta_formula = "auto";  // auto | closed | periodic
    PrepKind prep = PrepKind::ProductMain;
    TimeMode time_mode = TimeMode::Exponential;
    double time_multiplier = 100.0;     // linear mode: t = multiplier * Nn / J
    std::uint64_t seed = 1;
    int trials = 100;
    long long shots = 1000000;
    int tomo_size = 8;
    EngineChoice engine = EngineChoice::Auto;
    int dense_max_qubits = 13;
    int krylov_dim = 40;
    double krylov_tolerance = 1e-9;
    bool echo = true;                   // robustness: interleave axis cycles
    long echo_steps = 0;                // 0 -> 3*round(t) + 1
    double anisotropy = 0.99;           // robustness Delta
    int threads = 0;                    // 0 -> hardware concurrency
    std::vector<int> system_sites{0, 1};
};

struct Fig2Row {
    int nn = 0;
    double r = 0.0;  // number of copies, Nn/2
    double e_tot = 0.0;
    std::array<double, 3> charges{};
    ThermalParams params;
    double d_nats = 0.0;
    double d_can = 0.0;
    double d_gc = 0.0;
    double smallparam_max = 0.0;
    double t = 0.0;
    std::string engine;
    std::vector<SmallParameter> smallparams;
    std::array<double, 3> charge_drift{};  // |<sigma_a>(t) - <sigma_a>(0)|
};

struct FitResult {
    double coefficient = 0.0;
    double exponent = 0.0;
    double residual = 0.0;  // rms residual of the log-log fit
};

struct StdDevRow {
    int nn = 0;
    std::array<double, 3> mean_std{};  // trial-averaged std dev per axis
};

struct StdDevResult {
    std::vector<StdDevRow> rows;
    std::array<FitResult, 3> fits;  // per axis vs chain length
};

struct TomoReport {
    int nn = 0;
    long long shots = 0;
    double trace_dist = 0.0;     // reconstruction vs exact reduced state
    double d_recon_nats = 0.0;
    double d_exact_nats = 0.0;
    std::vector<MeasurementRecord> records;
};

/// Thermalization-distance study: prepare, evolve to t, reduce to the system
/// window, and compare against the three thermal predictions built from the
/// first-order (beta, mu).
std::vector<Fig2Row> run_fig2(const ExperimentConfig& cfg);

/// Same pipeline under the anisotropic, sign-flipped Hamiltonian with the
/// rotation-echo schedule; predictions still use the ideal isotropic chain.
std::vector<Fig2Row> run_robustness(const ExperimentConfig& cfg);

/// Random-state soft-measurement study: per size, average the post-sequence
/// charge standard deviations over `trials` random states and fit a power
/// law per axis.
StdDevResult run_stddev_scaling(const ExperimentConfig& cfg);

/// Runs the distance pipeline at cfg.tomo_size, then tomographs the reduced
/// state at cfg.shots per basis and reports reconstruction quality.
TomoReport run_tomography_demo(const ExperimentConfig& cfg);

/// Least squares of log y on log x; returns y ~ coefficient * x^exponent.
/// Needs >= 3 points with positive coordinates.
FitResult fit_power_law(const std::vector<std::pair<double, double>>& points);

// Serialization (stable field order, %.12g floats, '\n' line ends).
std::string fig2_csv(const std::vector<Fig2Row>& rows);
std::string fig2_json(const std::vector<Fig2Row>& rows);
std::string stddev_csv(const StdDevResult& result);
std::string stddev_json(const StdDevResult& result);
std::string tomo_csv(const TomoReport& report);
std::string tomo_json(const TomoReport& report);
std::string fit_csv(const FitResult& fit);
std::string fit_json(const FitResult& fit);

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace natsim
