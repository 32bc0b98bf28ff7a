#include "natsim/hamiltonian.hpp"

#include "natsim/errors.hpp"

#include <cstdio>
#include <stdexcept>

namespace natsim {

std::string boundary_name(Boundary b) { return b == Boundary::Closed ? "closed" : "periodic"; }

Boundary boundary_from_name(const std::string& name) {
    if (name == "closed") return Boundary::Closed;
    if (name == "periodic") return Boundary::Periodic;
    throw ConfigError("unknown boundary condition '" + name + "'");
}

std::string ChainSpec::cache_key() const {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "N=%d n=%d J=%.17g bc=%d d=%.17g s=%d", copies,
                  sites_per_copy, coupling, static_cast<int>(boundary), isotropy, overall_sign);
    return buf;
}

namespace {

void validate(const ChainSpec& spec) {
    if (spec.copies < 1 || spec.sites_per_copy < 2)
        throw ConfigError("chain needs at least one copy of at least two qubits");
    const int nn = spec.num_qubits();
    const bool has_next_nearest =
        spec.boundary == Boundary::Periodic || nn - 2 >= 1;
    if (has_next_nearest && nn < 4)
        throw ConfigError("next-nearest-neighbor bonds require at least 4 qubits, got " +
                          std::to_string(nn));
    if (spec.overall_sign != 1 && spec.overall_sign != -1)
        throw ConfigError("overall_sign must be +1 or -1");
}

}  // namespace

HamiltonianAction::HamiltonianAction(const ChainSpec& spec) : spec_(spec) {
    validate(spec);
    const int nn = spec.num_qubits();
    const std::array<double, 3> w{1.0, 1.0, spec.isotropy};
    for (int range : {1, 2}) {
        const int count = spec.boundary == Boundary::Periodic ? nn : nn - range;
        for (int j = 0; j < count; ++j) bonds_.push_back(Bond{j, (j + range) % nn, w});
    }
}

StateVector HamiltonianAction::apply(const StateVector& psi) const {
    StateVector out(Eigen::VectorXcd::Zero(psi.dim()), psi.num_qubits);
    apply_add(psi.amp, out.amp, 1.0);
    return out;
}

void HamiltonianAction::apply_add(const Eigen::VectorXcd& in, Eigen::VectorXcd& out,
                                  double scale) const {
    const int nq = spec_.num_qubits();
    if (in.size() != (Eigen::Index{1} << nq) || out.size() != in.size())
        throw std::invalid_argument("state dimension does not match chain spec");
    const double pref = scale * prefactor();
    const Eigen::Index dim = in.size();
    for (const Bond& bond : bonds_) {
        const std::uint64_t mi = qubit_mask(nq, bond.i);
        const std::uint64_t mj = qubit_mask(nq, bond.j);
        const double wx = pref * bond.weights[0];
        const double wy = pref * bond.weights[1];
        const double wz = pref * bond.weights[2];
        for (Eigen::Index b = 0; b < dim; ++b) {
            const bool equal_bits = ((b & mi) != 0) == ((b & mj) != 0);
            const double zz = equal_bits ? wz : -wz;
            const double xy = equal_bits ? (wx - wy) : (wx + wy);
            out(b) += zz * in(b) + xy * in(b ^ mi ^ mj);
        }
    }
}

Eigen::MatrixXcd dense_hamiltonian(const ChainSpec& spec) {
    const int nq = spec.num_qubits();
    if (nq > 14)
        throw ResourceError("dense Hamiltonian guarded at 14 qubits, requested " +
                            std::to_string(nq));
    HamiltonianAction h(spec);
    const Eigen::Index dim = Eigen::Index{1} << nq;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    const double pref = h.prefactor();
    for (const Bond& bond : h.bonds()) {
        const std::uint64_t mi = qubit_mask(nq, bond.i);
        const std::uint64_t mj = qubit_mask(nq, bond.j);
        for (Eigen::Index c = 0; c < dim; ++c) {
            const bool equal_c = ((c & mi) != 0) == ((c & mj) != 0);
            m(c, c) += pref * (equal_c ? bond.weights[2] : -bond.weights[2]);
            const Eigen::Index r = c ^ mi ^ mj;
            // xy coefficient is evaluated at the row index (bits there are the
            // flipped ones).
            const bool equal_r = ((r & mi) != 0) == ((r & mj) != 0);
            m(r, c) += pref * (equal_r ? (bond.weights[0] - bond.weights[1])
                                       : (bond.weights[0] + bond.weights[1]));
        }
    }
    return m;
}

double energy_expectation(const StateVector& psi, const HamiltonianAction& h) {
    if (psi.num_qubits != h.spec().num_qubits())
        throw std::invalid_argument("state dimension does not match chain spec");
    Eigen::VectorXcd hpsi = Eigen::VectorXcd::Zero(psi.dim());
    h.apply_add(psi.amp, hpsi, 1.0);
    return psi.amp.dot(hpsi).real();
}

}  // namespace natsim
