#include "natsim/spin_algebra.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace natsim {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_site(const StateVector& psi, int site) {
    if (site < 0 || site >= psi.num_qubits)
        throw std::out_of_range("qubit index " + std::to_string(site) + " out of range for " +
                                std::to_string(psi.num_qubits) + " qubits");
}

}  // namespace

char axis_char(Axis a) {
    switch (a) {
        case Axis::X: return 'x';
        case Axis::Y: return 'y';
        case Axis::Z: return 'z';
    }
    return '?';
}

Axis axis_from_char(char c) {
    switch (c) {
        case 'x': return Axis::X;
        case 'y': return Axis::Y;
        case 'z': return Axis::Z;
    }
    throw std::invalid_argument(std::string("invalid axis label '") + c + "'");
}

Eigen::Matrix2cd pauli_matrix(Axis a) {
    Eigen::Matrix2cd m;
    switch (a) {
        case Axis::X: m << 0, 1, 1, 0; break;
        case Axis::Y: m << 0, -kI, kI, 0; break;
        case Axis::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

Eigen::Matrix2cd axis_basis_unitary(Axis a) {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd m;
    switch (a) {
        case Axis::X: m << s, s, s, -s; break;
        case Axis::Y: m << s, s, kI * s, -kI * s; break;
        case Axis::Z: m = Eigen::Matrix2cd::Identity(); break;
    }
    return m;
}

StateVector basis_state(int nq, std::uint64_t index) {
    StateVector psi(Eigen::VectorXcd::Zero(Eigen::Index{1} << nq), nq);
    psi.amp(static_cast<Eigen::Index>(index)) = 1.0;
    return psi;
}

StateVector apply_pauli(const StateVector& psi, Axis axis, int site) {
    check_site(psi, site);
    const std::uint64_t m = qubit_mask(psi.num_qubits, site);
    const Eigen::Index dim = psi.dim();
    StateVector out(Eigen::VectorXcd(dim), psi.num_qubits);
    switch (axis) {
        case Axis::X:
            for (Eigen::Index b = 0; b < dim; ++b) out.amp(b) = psi.amp(b ^ m);
            break;
        case Axis::Y:
            // <1|sigma_y|0> = i, <0|sigma_y|1> = -i
            for (Eigen::Index b = 0; b < dim; ++b)
                out.amp(b) = ((b & m) ? kI : -kI) * psi.amp(b ^ m);
            break;
        case Axis::Z:
            for (Eigen::Index b = 0; b < dim; ++b)
                out.amp(b) = ((b & m) ? -psi.amp(b) : psi.amp(b));
            break;
    }
    return out;
}

StateVector total_spin_apply(const StateVector& psi, Axis axis) {
    const int nq = psi.num_qubits;
    const Eigen::Index dim = psi.dim();
    StateVector out(Eigen::VectorXcd::Zero(dim), nq);
    switch (axis) {
        case Axis::X:
            for (int j = 0; j < nq; ++j) {
                const std::uint64_t m = qubit_mask(nq, j);
                for (Eigen::Index b = 0; b < dim; ++b) out.amp(b) += psi.amp(b ^ m);
            }
            break;
        case Axis::Y:
            for (int j = 0; j < nq; ++j) {
                const std::uint64_t m = qubit_mask(nq, j);
                for (Eigen::Index b = 0; b < dim; ++b)
                    out.amp(b) += ((b & m) ? kI : -kI) * psi.amp(b ^ m);
            }
            break;
        case Axis::Z:
            for (Eigen::Index b = 0; b < dim; ++b) {
                const int w = std::popcount(static_cast<std::uint64_t>(b));
                out.amp(b) = double(nq - 2 * w) * psi.amp(b);
            }
            break;
    }
    return out;
}

StateVector charge_eigenprojector_apply(const StateVector& psi, Axis axis, int eigenvalue) {
    const int nq = psi.num_qubits;
    if (eigenvalue < -nq || eigenvalue > nq || ((eigenvalue + nq) % 2) != 0)
        throw std::domain_error("eigenvalue " + std::to_string(eigenvalue) +
                                " not on the sigma^tot grid for " + std::to_string(nq) +
                                " qubits");
    const int keep_weight = (nq - eigenvalue) / 2;
    StateVector out = psi;
    const Eigen::Matrix2cd w = axis_basis_unitary(axis);
    if (axis != Axis::Z) apply_unitary_everywhere(out.amp, nq, w.adjoint());
    for (Eigen::Index b = 0; b < out.dim(); ++b)
        if (std::popcount(static_cast<std::uint64_t>(b)) != keep_weight) out.amp(b) = 0.0;
    if (axis != Axis::Z) apply_unitary_everywhere(out.amp, nq, w);
    return out;
}

StateVector heisenberg_bond_apply(const StateVector& psi, int i, int j,
                                  const std::array<double, 3>& weights) {
    check_site(psi, i);
    check_site(psi, j);
    if (i == j) throw std::domain_error("bond endpoints must differ");
    const std::uint64_t mi = qubit_mask(psi.num_qubits, i);
    const std::uint64_t mj = qubit_mask(psi.num_qubits, j);
    const double wx = weights[static_cast<int>(Axis::X)];
    const double wy = weights[static_cast<int>(Axis::Y)];
    const double wz = weights[static_cast<int>(Axis::Z)];
    const Eigen::Index dim = psi.dim();
    StateVector out(Eigen::VectorXcd(dim), psi.num_qubits);
    for (Eigen::Index b = 0; b < dim; ++b) {
        const bool equal_bits = ((b & mi) != 0) == ((b & mj) != 0);
        // sigma_z sigma_z is diagonal; sigma_x sigma_x and sigma_y sigma_y
        // both flip the pair, with a relative sign from the two i factors.
        const double zz = equal_bits ? wz : -wz;
        const double xy = equal_bits ? (wx - wy) : (wx + wy);
        out.amp(b) = zz * psi.amp(b) + xy * psi.amp(b ^ mi ^ mj);
    }
    return out;
}

StateVector global_axis_cycle(const StateVector& psi, CycleDirection dir) {
    // exp(-i (2pi/3) n.sigma/2) with n = (1,1,1)/sqrt(3):
    // conjugation cycles sigma_x -> sigma_y -> sigma_z -> sigma_x.
    Eigen::Matrix2cd u;
    u << Complex{0.5, -0.5}, Complex{-0.5, -0.5}, Complex{0.5, -0.5}, Complex{0.5, 0.5};
    if (dir == CycleDirection::Backward) u = Eigen::Matrix2cd(u.adjoint());
    StateVector out = psi;
    apply_unitary_everywhere(out.amp, psi.num_qubits, u);
    return out;
}

void apply_unitary_everywhere(Eigen::VectorXcd& amp, int num_qubits, const Eigen::Matrix2cd& u) {
    const Complex u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    const Eigen::Index dim = amp.size();
    for (int site = 0; site < num_qubits; ++site) {
        const std::uint64_t m = qubit_mask(num_qubits, site);
        for (Eigen::Index b = 0; b < dim; ++b) {
            if (b & m) continue;
            const Complex a0 = amp(b);
            const Complex a1 = amp(b | m);
            amp(b) = u00 * a0 + u01 * a1;
            amp(b | m) = u10 * a0 + u11 * a1;
        }
    }
}

std::vector<double> eigenspace_weights(const StateVector& psi, Axis axis) {
    const int nq = psi.num_qubits;
    std::vector<double> weights(nq + 1, 0.0);
    const Eigen::VectorXcd* amp = &psi.amp;
    Eigen::VectorXcd rotated;
    if (axis != Axis::Z) {
        rotated = psi.amp;
        apply_unitary_everywhere(rotated, nq, axis_basis_unitary(axis).adjoint());
        amp = &rotated;
    }
    for (Eigen::Index b = 0; b < amp->size(); ++b)
        weights[std::popcount(static_cast<std::uint64_t>(b))] += std::norm((*amp)(b));
    return weights;
}

}  // namespace natsim
