#pragma once

#include "natsim/spin_algebra.hpp"

#include <array>
#include <random>
#include <string>
#include <vector>

namespace natsim {

enum class QubitLabel { XPlus, XMinus, YPlus, YMinus, ZPlus, ZMinus };

using PrepPattern = std::vector<QubitLabel>;

QubitLabel label_from_string(const std::string& s);  // "x+", "z-", ...
std::string label_to_string(QubitLabel l);
Eigen::Vector2cd label_ket(QubitLabel l);

/// The main-experiment pattern: |x+ z+ x- z- x- z+> on the first six qubits,
/// then copies of |z- z+>. Total charges come out as (-1, 0, +1). Requires
/// even nn >= 6.
PrepPattern main_experiment_pattern(int nn);

/// Tensor product of single-qubit eigenstates, qubit 0 first (most significant).
StateVector product_state(const PrepPattern& pattern);

/// Haar-like random state: each amplitude gets independent standard-normal
/// real and imaginary parts, then the vector is normalized.
StateVector random_state(int num_qubits, std::mt19937_64& rng);
StateVector random_state(int num_qubits, std::uint64_t seed);

/// Binomial envelope f_nn(S, Stilde): probability that nn semiclassical
/// spins with mean magnetization Stilde produce magnetization S. Normalized
/// over S for fixed Stilde; peaks at S = Stilde; 0^0 == 1 so Stilde = +-nn
/// gives a point mass.
double binomial_envelope(int nn, int s, int s_tilde);

/// Large-nn Gaussian limit of the envelope on the spacing-2 eigenvalue grid,
/// with width (1/2) sqrt(nn (1 + Stilde/nn)(1 - Stilde/nn)).
double gaussian_envelope(int nn, int s, int s_tilde);

struct SoftOutcome {
    Axis axis = Axis::Z;
    int value = 0;
};

/// Kraus operator M_axis^s |psi> of the soft measurement (unnormalized):
/// sum over eigenspaces of sqrt(f(s, Stilde)) P_axis^{Stilde}.
StateVector soft_kraus_apply(const StateVector& psi, Axis axis, int s);

/// Samples an outcome with probability <psi|M^dag M|psi> and returns the
/// renormalized post-measurement state.
std::pair<SoftOutcome, StateVector> soft_measure(const StateVector& psi, Axis axis,
                                                 std::mt19937_64& rng);

/// Projective sigma_axis^tot measurement; returns (eigenvalue, collapsed state).
std::pair<int, StateVector> strong_measure(const StateVector& psi, Axis axis,
                                           std::mt19937_64& rng);

struct AmcSequenceResult {
    std::array<SoftOutcome, 3> outcomes;  // x, y, z in measurement order
    StateVector state;
};

/// Soft x, then soft y, then soft z measurement; the outcomes define the
/// charge values S_alpha for the run.
AmcSequenceResult amc_prep_sequence(const StateVector& psi, std::mt19937_64& rng);

struct ChargeStats {
    std::array<double, 3> mean{};    // indexed by Axis
    std::array<double, 3> stddev{};
};

/// Per-axis mean and standard deviation of sigma_alpha^tot.
ChargeStats charge_statistics(const StateVector& psi);

// Approximate-microcanonical subspace parameters, reported as metadata for a
// run with `copies` subsystems.
struct AmcParameters {
    double eta_prime = 0.0;
    double delta_prime = 0.32;
    double epsilon = 1.29;
    double delta = 0.32;
    double eta = 0.0;
};

AmcParameters amc_parameters(int copies, double scale_constant);

}  // namespace natsim
