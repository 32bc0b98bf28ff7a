#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace natsim {

using Complex = std::complex<double>;

enum class Axis : int { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::X, Axis::Y, Axis::Z};

/// Cyclic successor x -> y -> z -> x.
inline Axis next_axis(Axis a) { return static_cast<Axis>((static_cast<int>(a) + 1) % 3); }

char axis_char(Axis a);
Axis axis_from_char(char c);

/// Pauli matrix in the computational (sigma_z product) basis.
Eigen::Matrix2cd pauli_matrix(Axis a);

/// Single-qubit W with sigma_axis = W sigma_z W^dagger; columns are the
/// +1/-1 eigenvectors of sigma_axis. W_z = I, W_x = Hadamard, W_y = S*H.
Eigen::Matrix2cd axis_basis_unitary(Axis a);

// Global pure state over num_qubits qubits in the sigma_z product basis.
// Qubit 0 is the most significant bit of the basis index; bit value 0 means
// the +1 eigenstate |z+>.
struct StateVector {
    Eigen::VectorXcd amp;
    int num_qubits = 0;

    StateVector() = default;
    StateVector(Eigen::VectorXcd a, int nq) : amp(std::move(a)), num_qubits(nq) {}

    Eigen::Index dim() const { return amp.size(); }
    double norm() const { return amp.norm(); }
    void normalize() { amp /= amp.norm(); }
};

/// Computational basis state |index> on nq qubits.
StateVector basis_state(int nq, std::uint64_t index);

/// Bit mask selecting qubit `site` in a basis index (qubit 0 = MSB).
inline std::uint64_t qubit_mask(int num_qubits, int site) {
    return std::uint64_t{1} << (num_qubits - 1 - site);
}

/// sigma_axis^(site) |psi>. Involutive and norm preserving.
StateVector apply_pauli(const StateVector& psi, Axis axis, int site);

/// sigma_axis^tot |psi> = sum_j sigma_axis^(j) |psi> (generally unnormalized).
StateVector total_spin_apply(const StateVector& psi, Axis axis);

/// Projector onto the eigenvalue-`eigenvalue` eigenspace of sigma_axis^tot.
/// Valid eigenvalues are {-Nn, -Nn+2, ..., Nn}; anything else is a domain
/// error. For x/y the z-eigenspace projector is conjugated with the
/// per-qubit basis change, so no operator is ever materialized.
StateVector charge_eigenprojector_apply(const StateVector& psi, Axis axis, int eigenvalue);

/// sum_alpha w_alpha sigma_alpha^(i) sigma_alpha^(j) |psi>. Weights (1,1,1)
/// give the isotropic Heisenberg bond.
StateVector heisenberg_bond_apply(const StateVector& psi, int i, int j,
                                  const std::array<double, 3>& weights);

enum class CycleDirection { Forward, Backward };

/// U^{\otimes Nn} with U the 2pi/3 rotation about (1,1,1)/sqrt(3).
/// Forward conjugation maps sigma_x -> sigma_y -> sigma_z -> sigma_x;
/// applying forward three times is the identity up to a global phase.
StateVector global_axis_cycle(const StateVector& psi, CycleDirection dir);

/// In-place application of the same single-qubit unitary to every qubit.
void apply_unitary_everywhere(Eigen::VectorXcd& amp, int num_qubits, const Eigen::Matrix2cd& u);

/// Weights ||P_axis^{S} psi||^2 indexed by Hamming weight w = (Nn - S)/2
/// in the rotated basis, so weights[w] corresponds to eigenvalue Nn - 2w.
/// Sums to ||psi||^2.
std::vector<double> eigenspace_weights(const StateVector& psi, Axis axis);

/// Eigenvalue of sigma^tot for Hamming weight w on nq qubits.
inline int eigenvalue_of_weight(int num_qubits, int w) { return num_qubits - 2 * w; }

}  // namespace natsim
