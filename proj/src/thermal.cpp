#include "natsim/thermal.hpp"

#include "natsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace natsim {

namespace {

constexpr double kEigClamp = 1e-12;
constexpr double kSupportWeight = 1e-9;

/// Scatter the bits of `value` into the given qubit positions of a global
/// index (qubit 0 = global MSB; bit 0 of `value` = last listed qubit).
std::uint64_t scatter_bits(std::uint64_t value, const std::vector<int>& sites, int num_qubits) {
    std::uint64_t out = 0;
    for (std::size_t k = 0; k < sites.size(); ++k) {
        const std::uint64_t bit = (value >> (sites.size() - 1 - k)) & 1u;
        if (bit) out |= qubit_mask(num_qubits, sites[k]);
    }
    return out;
}

std::vector<int> complement_sites(const std::vector<int>& keep, int num_qubits) {
    std::vector<bool> kept(num_qubits, false);
    for (int s : keep) kept[s] = true;
    std::vector<int> env;
    for (int s = 0; s < num_qubits; ++s)
        if (!kept[s]) env.push_back(s);
    return env;
}

void check_keep(const std::vector<int>& keep, int num_qubits) {
    if (keep.empty()) throw std::invalid_argument("keep set must be nonempty");
    for (int s : keep)
        if (s < 0 || s >= num_qubits)
            throw std::out_of_range("kept site " + std::to_string(s) + " out of range");
    for (std::size_t k = 1; k < keep.size(); ++k)
        if (keep[k] <= keep[k - 1])
            throw std::invalid_argument("keep set must be strictly increasing");
}

void check_hermitian(const Eigen::MatrixXcd& m, const char* what) {
    if (m.rows() != m.cols() || (m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument(std::string(what) + " must be Hermitian");
}

}  // namespace

double analytic_beta(double e_tot, const ChainSpec& spec) {
    const double nn = spec.num_qubits();
    const double j2 = spec.coupling * spec.coupling;
    if (j2 == 0.0) throw std::invalid_argument("coupling must be nonzero");
    if (spec.boundary == Boundary::Closed) return -e_tot / (3.0 * (2.0 * nn - 3.0) * j2);
    return -e_tot / (6.0 * nn * j2);
}

std::array<double, 3> analytic_mu(const std::array<double, 3>& charges, double e_tot,
                                  const ChainSpec& spec) {
    const double beta = analytic_beta(e_tot, spec);
    std::array<double, 3> mu{};
    for (int a = 0; a < 3; ++a) {
        if (charges[a] == 0.0) {
            mu[a] = 0.0;
        } else if (beta == 0.0) {
            throw DegenerateParameterError(
                "zero energy with nonzero charge: first-order potentials undefined");
        } else {
            mu[a] = charges[a] / (spec.num_qubits() * beta);
        }
    }
    return mu;
}

std::vector<SmallParameter> small_parameter_report(const ThermalParams& params,
                                                   const ChainSpec& spec) {
    const double nn = spec.num_qubits();
    const double j = std::abs(spec.coupling);
    const double ab = std::abs(params.beta);
    const double mu2 = params.mu[0] * params.mu[0] + params.mu[1] * params.mu[1] +
                       params.mu[2] * params.mu[2];
    std::vector<SmallParameter> report;
    if (spec.boundary == Boundary::Closed) {
        report.push_back({"sqrt(3(2Nn-3))*|beta|*J", std::sqrt(3.0 * (2.0 * nn - 3.0)) * ab * j});
        report.push_back({"sqrt(Nn*sum_mu2)*|beta|", std::sqrt(nn * mu2) * ab});
        report.push_back({"(2/3)*|beta|*sum_mu2/J", (2.0 / 3.0) * ab * mu2 / j});
        report.push_back({"6(Nn-2)/(2Nn-3)*|beta|*J", 6.0 * (nn - 2.0) / (2.0 * nn - 3.0) * ab * j});
        report.push_back({"4(2Nn-3)/Nn*|beta|*J", 4.0 * (2.0 * nn - 3.0) / nn * ab * j});
    } else {
        report.push_back({"sqrt(6Nn)*|beta|*J", std::sqrt(6.0 * nn) * ab * j});
        report.push_back({"(2/3)*|beta|*sum_mu2/J", (2.0 / 3.0) * ab * mu2 / j});
        report.push_back({"8*|beta|*J", 8.0 * ab * j});
    }
    return report;
}

double max_small_parameter(const std::vector<SmallParameter>& report) {
    double m = 0.0;
    for (const auto& p : report) m = std::max(m, p.value);
    return m;
}

double mu_quadratic_small_parameter(const ThermalParams& params, double coupling) {
    const double mu2 = params.mu[0] * params.mu[0] + params.mu[1] * params.mu[1] +
                       params.mu[2] * params.mu[2];
    return (2.0 / 3.0) * std::abs(params.beta) * mu2 / std::abs(coupling);
}

Eigen::MatrixXcd dense_total_spin(int num_qubits, Axis axis) {
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    for (int j = 0; j < num_qubits; ++j) {
        Eigen::MatrixXcd term = Eigen::MatrixXcd::Ones(1, 1);
        for (int k = 0; k < num_qubits; ++k)
            term = kron(term, k == j ? pauli_matrix(axis) : id);
        out += term;
    }
    return out;
}

Eigen::MatrixXcd system_hamiltonian(const ChainSpec& spec, int first_site, int n_sites) {
    if (n_sites < 2 || first_site < 0 || first_site + n_sites > spec.num_qubits())
        throw std::domain_error("system window out of range");
    HamiltonianAction h(spec);
    const Eigen::Index dim = Eigen::Index{1} << n_sites;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    const double pref = h.prefactor();
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    for (const Bond& bond : h.bonds()) {
        const int li = bond.i - first_site;
        const int lj = bond.j - first_site;
        if (li < 0 || li >= n_sites || lj < 0 || lj >= n_sites) continue;
        for (Axis a : kAxes) {
            Eigen::MatrixXcd term = Eigen::MatrixXcd::Ones(1, 1);
            for (int k = 0; k < n_sites; ++k) {
                const bool hit = k == li || k == lj;
                term = kron(term, hit ? pauli_matrix(a) : id);
            }
            out += pref * bond.weights[static_cast<int>(a)] * term;
        }
    }
    return out;
}

std::string ensemble_name(EnsembleKind k) {
    switch (k) {
        case EnsembleKind::Nats: return "nats";
        case EnsembleKind::Canonical: return "canonical";
        case EnsembleKind::GrandCanonicalZ: return "grand_canonical_z";
    }
    return "?";
}

Eigen::MatrixXcd thermal_state(const Eigen::MatrixXcd& h_s,
                               const std::array<Eigen::MatrixXcd, 3>& charges,
                               const ThermalParams& params, EnsembleKind which) {
    check_hermitian(h_s, "system Hamiltonian");
    Eigen::MatrixXcd exponent = -params.beta * h_s;
    auto add_charge = [&](int a) {
        if (charges[a].rows() != h_s.rows())
            throw std::invalid_argument("charge dimension mismatch");
        check_hermitian(charges[a], "charge operator");
        exponent += params.beta * params.mu[a] * charges[a];
    };
    if (which == EnsembleKind::Nats)
        for (int a = 0; a < 3; ++a) add_charge(a);
    if (which == EnsembleKind::GrandCanonicalZ) add_charge(static_cast<int>(Axis::Z));

    const HermitianEig eig = hermitian_eig(exponent);
    const double shift = eig.eigenvalues.maxCoeff();
    Eigen::VectorXd w = (eig.eigenvalues.array() - shift).exp();
    w /= w.sum();
    Eigen::MatrixXcd rho =
        eig.eigenvectors * w.asDiagonal() * eig.eigenvectors.adjoint();
    return 0.5 * (rho + rho.adjoint());
}

Eigen::MatrixXcd partial_trace(const StateVector& psi, const std::vector<int>& keep) {
    check_keep(keep, psi.num_qubits);
    const std::vector<int> env = complement_sites(keep, psi.num_qubits);
    const Eigen::Index dk = Eigen::Index{1} << keep.size();
    const Eigen::Index de = Eigen::Index{1} << env.size();
    std::vector<std::uint64_t> kidx(dk), eidx(de);
    for (Eigen::Index a = 0; a < dk; ++a) kidx[a] = scatter_bits(a, keep, psi.num_qubits);
    for (Eigen::Index e = 0; e < de; ++e) eidx[e] = scatter_bits(e, env, psi.num_qubits);

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dk, dk);
    for (Eigen::Index a = 0; a < dk; ++a)
        for (Eigen::Index b = 0; b <= a; ++b) {
            Complex sum = 0.0;
            for (Eigen::Index e = 0; e < de; ++e)
                sum += psi.amp(kidx[a] | eidx[e]) * std::conj(psi.amp(kidx[b] | eidx[e]));
            rho(a, b) = sum;
            rho(b, a) = std::conj(sum);
        }
    return rho;
}

Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, int num_qubits,
                               const std::vector<int>& keep) {
    if (rho.rows() != rho.cols() || rho.rows() != (Eigen::Index{1} << num_qubits))
        throw std::invalid_argument("density matrix dimension mismatch");
    check_keep(keep, num_qubits);
    const std::vector<int> env = complement_sites(keep, num_qubits);
    const Eigen::Index dk = Eigen::Index{1} << keep.size();
    const Eigen::Index de = Eigen::Index{1} << env.size();
    std::vector<std::uint64_t> kidx(dk), eidx(de);
    for (Eigen::Index a = 0; a < dk; ++a) kidx[a] = scatter_bits(a, keep, num_qubits);
    for (Eigen::Index e = 0; e < de; ++e) eidx[e] = scatter_bits(e, env, num_qubits);

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
    for (Eigen::Index a = 0; a < dk; ++a)
        for (Eigen::Index b = 0; b < dk; ++b) {
            Complex sum = 0.0;
            for (Eigen::Index e = 0; e < de; ++e) sum += rho(kidx[a] | eidx[e], kidx[b] | eidx[e]);
            out(a, b) = sum;
        }
    return out;
}

double relative_entropy(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw std::invalid_argument("dimension mismatch");
    const HermitianEig er = hermitian_eig(rho);
    const HermitianEig es = hermitian_eig(sigma);

    double entropy_term = 0.0;  // Tr(rho log rho)
    for (Eigen::Index k = 0; k < er.eigenvalues.size(); ++k) {
        const double p = er.eigenvalues(k);
        if (p > kEigClamp) entropy_term += p * std::log(p);
    }

    double cross_term = 0.0;  // Tr(rho log sigma)
    for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) {
        const double q = es.eigenvalues(k);
        const double weight =
            (es.eigenvectors.col(k).adjoint() * rho * es.eigenvectors.col(k))(0).real();
        if (q < kEigClamp) {
            if (weight > kSupportWeight) return std::numeric_limits<double>::infinity();
            continue;  // negligible weight on the null direction
        }
        cross_term += weight * std::log(q);
    }
    return entropy_term - cross_term;
}

}  // namespace natsim
