#pragma once

#include "natsim/spin_algebra.hpp"

#include <array>
#include <string>
#include <vector>

namespace natsim {

enum class Boundary { Closed, Periodic };

std::string boundary_name(Boundary b);
Boundary boundary_from_name(const std::string& name);

// Chain geometry: `copies` identical n-qubit subsystems in a line, coupled by
// nearest- and next-nearest-neighbor Heisenberg bonds of strength
// overall_sign * coupling, with the sigma_z sigma_z part of every bond scaled
// by `isotropy`.
struct ChainSpec {
    int copies = 3;
    int sites_per_copy = 2;
    double coupling = 1.0;
    Boundary boundary = Boundary::Periodic;
    double isotropy = 1.0;
    int overall_sign = +1;

    int num_qubits() const { return copies * sites_per_copy; }
    std::string cache_key() const;
};

struct Bond {
    int i = 0;
    int j = 0;
    std::array<double, 3> weights{1.0, 1.0, 1.0};
};

// Matrix-free action of the chain Hamiltonian
//   H = overall_sign * J * sum_bonds sum_alpha w_alpha sigma_alpha^(i) sigma_alpha^(j).
// Closed boundary: Nn-1 nearest + Nn-2 next-nearest bonds. Periodic: Nn of
// each, with site Nn identified with site 0.
class HamiltonianAction {
  public:
    explicit HamiltonianAction(const ChainSpec& spec);

    const ChainSpec& spec() const { return spec_; }
    const std::vector<Bond>& bonds() const { return bonds_; }
    double prefactor() const { return spec_.overall_sign * spec_.coupling; }

    StateVector apply(const StateVector& psi) const;
    /// out += scale * H * in. `out` must be presized to in.size().
    void apply_add(const Eigen::VectorXcd& in, Eigen::VectorXcd& out, double scale = 1.0) const;

  private:
    ChainSpec spec_;
    std::vector<Bond> bonds_;
};

inline HamiltonianAction build_hamiltonian(const ChainSpec& spec) { return HamiltonianAction(spec); }

/// Dense realization of the action, for verification and eigensolves.
/// Guarded at Nn <= 14.
Eigen::MatrixXcd dense_hamiltonian(const ChainSpec& spec);

/// <psi|H|psi>, real for Hermitian H.
double energy_expectation(const StateVector& psi, const HamiltonianAction& h);

}  // namespace natsim
