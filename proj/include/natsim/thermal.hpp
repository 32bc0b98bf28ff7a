#pragma once

#include "natsim/hamiltonian.hpp"
#include "natsim/linalg.hpp"

#include <array>
#include <string>
#include <vector>

namespace natsim {

struct ThermalParams {
    double beta = 0.0;              // inverse temperature, 1/energy
    std::array<double, 3> mu{};     // effective chemical potentials, indexed by Axis
};

/// First-order (high-temperature) inverse temperature from the total energy:
/// closed boundary beta = -E / (3 (2 Nn - 3) J^2), periodic beta = -E / (6 Nn J^2).
double analytic_beta(double e_tot, const ChainSpec& spec);

/// First-order effective chemical potentials mu_alpha = S_alpha / (Nn beta).
/// Zero energy with a nonzero charge leaves the first-order theory
/// degenerate and throws.
std::array<double, 3> analytic_mu(const std::array<double, 3>& charges, double e_tot,
                                  const ChainSpec& spec);

struct SmallParameter {
    std::string name;
    double value = 0.0;
    bool pass() const { return value < 1.0; }
    bool warn() const { return value >= 0.1; }
};

/// Dimensionless validity diagnostics of the first-order expansion behind
/// analytic_beta/analytic_mu; everything must be well below 1. The list
/// depends on the boundary condition.
std::vector<SmallParameter> small_parameter_report(const ThermalParams& params,
                                                   const ChainSpec& spec);

double max_small_parameter(const std::vector<SmallParameter>& report);

/// The diagnostic (2/3) |beta| sum_alpha mu_alpha^2 / J.
double mu_quadratic_small_parameter(const ThermalParams& params, double coupling);

/// Dense sigma_alpha^tot on n qubits.
Eigen::MatrixXcd dense_total_spin(int num_qubits, Axis axis);

/// Dense system-of-interest Hamiltonian: the sum of full-chain bonds whose
/// endpoints both lie inside the contiguous window [first_site,
/// first_site + n_sites). For a two-qubit system this is the single
/// intra-system bond.
Eigen::MatrixXcd system_hamiltonian(const ChainSpec& spec, int first_site, int n_sites);

enum class EnsembleKind { Nats, Canonical, GrandCanonicalZ };

std::string ensemble_name(EnsembleKind k);

/// exp(-beta (H_S - sum_active mu_alpha sigma_alpha^S)) / Z via Hermitian
/// eigendecomposition. Nats keeps all three mu's, canonical none,
/// grand-canonical only mu_z.
Eigen::MatrixXcd thermal_state(const Eigen::MatrixXcd& h_s,
                               const std::array<Eigen::MatrixXcd, 3>& charges,
                               const ThermalParams& params, EnsembleKind which);

/// Reduced density operator of the kept qubits of a pure state.
Eigen::MatrixXcd partial_trace(const StateVector& psi, const std::vector<int>& keep);

/// Reduced density operator of the kept qubits of a density matrix on
/// num_qubits qubits.
Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, int num_qubits,
                               const std::vector<int>& keep);

/// Quantum relative entropy Tr(rho (log rho - log sigma)) in nats.
/// Eigenvalues below 1e-12 follow the 0 log 0 = 0 convention; a support
/// violation (sigma ~ 0 where rho has weight > 1e-9) reports +infinity.
double relative_entropy(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);

}  // namespace natsim
