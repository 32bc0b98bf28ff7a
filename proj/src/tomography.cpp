#include "natsim/tomography.hpp"

#include "natsim/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace natsim {

namespace {

void check_basis(const std::string& basis) {
    if (basis.empty()) throw std::invalid_argument("empty basis string");
    for (char c : basis)
        if (c != 'x' && c != 'y' && c != 'z')
            throw std::invalid_argument(std::string("invalid basis label '") + c + "'");
}

/// Change-of-basis unitary whose columns are the product eigenvectors;
/// column ell is the outcome-ell eigenvector (bit 0 = +1).
Eigen::MatrixXcd basis_unitary(const std::string& basis) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Ones(1, 1);
    for (char c : basis) u = kron(u, axis_basis_unitary(axis_from_char(c)));
    return u;
}

/// Sign of outcome ell at qubit position k (0 = +1 eigenstate).
inline double outcome_sign(std::uint64_t ell, int n, int k) {
    return (ell >> (n - 1 - k)) & 1u ? -1.0 : 1.0;
}

}  // namespace

std::vector<double> MeasurementRecord::frequencies() const {
    if (shots == 0) return counts;
    std::vector<double> f(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) f[k] = counts[k] / double(shots);
    return f;
}

std::vector<std::string> all_measurement_bases(int n) {
    std::vector<std::string> out{""};
    for (int k = 0; k < n; ++k) {
        std::vector<std::string> next;
        next.reserve(out.size() * 3);
        for (const auto& prefix : out)
            for (char c : {'x', 'y', 'z'}) next.push_back(prefix + c);
        out = std::move(next);
    }
    return out;
}

Eigen::MatrixXcd pauli_string_matrix(const std::string& labels) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Ones(1, 1);
    for (char c : labels) {
        if (c == 'i')
            m = kron(m, Eigen::Matrix2cd::Identity());
        else
            m = kron(m, pauli_matrix(axis_from_char(c)));
    }
    return m;
}

MeasurementRecord simulate_basis_measurement(const Eigen::MatrixXcd& rho,
                                             const std::string& basis, long long shots,
                                             std::mt19937_64& rng) {
    check_basis(basis);
    const int n = static_cast<int>(basis.size());
    const Eigen::Index dim = Eigen::Index{1} << n;
    if (rho.rows() != dim || rho.cols() != dim)
        throw std::invalid_argument("density matrix does not match basis length");
    if (shots < 0) throw std::invalid_argument("shots must be >= 0");

    const Eigen::MatrixXcd u = basis_unitary(basis);
    Eigen::VectorXd probs(dim);
    for (Eigen::Index ell = 0; ell < dim; ++ell)
        probs(ell) = std::max(0.0, (u.col(ell).adjoint() * rho * u.col(ell))(0).real());
    probs /= probs.sum();

    MeasurementRecord rec;
    rec.basis = basis;
    rec.shots = shots;
    rec.counts.assign(dim, 0.0);
    if (shots == 0) {
        for (Eigen::Index ell = 0; ell < dim; ++ell) rec.counts[ell] = probs(ell);
        return rec;
    }
    Eigen::VectorXd cdf(dim);
    std::partial_sum(probs.data(), probs.data() + dim, cdf.data());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (long long s = 0; s < shots; ++s) {
        const double r = unif(rng) * cdf(dim - 1);
        const auto it = std::upper_bound(cdf.data(), cdf.data() + dim, r);
        Eigen::Index ell = it - cdf.data();
        if (ell >= dim) ell = dim - 1;
        rec.counts[ell] += 1.0;
    }
    return rec;
}

std::map<std::string, double> expectations_from_frequencies(
    const std::vector<MeasurementRecord>& records, int n) {
    std::map<std::string, std::vector<double>> freq_by_basis;
    for (const auto& rec : records) {
        check_basis(rec.basis);
        if (static_cast<int>(rec.basis.size()) != n)
            throw std::invalid_argument("record basis length mismatch");
        freq_by_basis[rec.basis] = rec.frequencies();
    }
    for (const auto& basis : all_measurement_bases(n))
        if (!freq_by_basis.count(basis))
            throw std::invalid_argument("incomplete basis set: missing '" + basis + "'");

    // Every Pauli string over {i,x,y,z}^n except the identity; label index
    // 0=i,1=x,2=y,3=z per qubit.
    const Eigen::Index dim = Eigen::Index{1} << n;
    std::map<std::string, double> expectations;
    std::vector<int> digits(n, 0);
    const long total = static_cast<long>(std::pow(4.0, n));
    for (long code = 1; code < total; ++code) {
        long rem = code;
        for (int k = n - 1; k >= 0; --k) {
            digits[k] = rem % 4;
            rem /= 4;
        }
        std::string label(n, 'i');
        for (int k = 0; k < n; ++k) label[k] = "ixyz"[digits[k]];

        // Average the marginalized estimate over every compatible basis
        // (any axis may occupy an identity slot).
        double sum = 0.0;
        long compatible = 0;
        for (const auto& [basis, freq] : freq_by_basis) {
            bool ok = true;
            for (int k = 0; k < n; ++k)
                if (label[k] != 'i' && label[k] != basis[k]) ok = false;
            if (!ok) continue;
            double est = 0.0;
            for (Eigen::Index ell = 0; ell < dim; ++ell) {
                double sign = 1.0;
                for (int k = 0; k < n; ++k)
                    if (label[k] != 'i') sign *= outcome_sign(ell, n, k);
                est += sign * freq[ell];
            }
            sum += est;
            ++compatible;
        }
        expectations[label] = sum / double(compatible);
    }
    return expectations;
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& values) {
    const Eigen::Index n = values.size();
    std::vector<double> sorted(values.data(), values.data() + n);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        cumulative += sorted[k];
        const double candidate = (cumulative - 1.0) / double(k + 1);
        if (sorted[k] - candidate > 0.0) theta = candidate;
    }
    Eigen::VectorXd out(n);
    for (Eigen::Index k = 0; k < n; ++k) out(k) = std::max(0.0, values(k) - theta);
    return out;
}

Eigen::MatrixXcd reconstruct_state(const std::map<std::string, double>& expectations, int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& [label, value] : expectations) {
        if (static_cast<int>(label.size()) != n)
            throw std::invalid_argument("expectation label length mismatch");
        rho0 += value * pauli_string_matrix(label);
    }
    rho0 /= double(dim);

    const HermitianEig eig = hermitian_eig(0.5 * (rho0 + rho0.adjoint()));
    const Eigen::VectorXd lambda = project_to_simplex(eig.eigenvalues);
    Eigen::MatrixXcd rho =
        eig.eigenvectors * lambda.asDiagonal() * eig.eigenvectors.adjoint();
    return 0.5 * (rho + rho.adjoint());
}

std::string record_to_json_line(const MeasurementRecord& rec) {
    nlohmann::json j;
    j["basis"] = rec.basis;
    if (rec.shots == 0) {
        j["counts"] = rec.counts;
    } else {
        std::vector<long long> ints(rec.counts.size());
        for (std::size_t k = 0; k < rec.counts.size(); ++k)
            ints[k] = static_cast<long long>(std::llround(rec.counts[k]));
        j["counts"] = ints;
    }
    j["shots"] = rec.shots;
    return j.dump();
}

MeasurementRecord record_from_json_line(const std::string& line) {
    const nlohmann::json j = nlohmann::json::parse(line);
    MeasurementRecord rec;
    rec.basis = j.at("basis").get<std::string>();
    rec.counts = j.at("counts").get<std::vector<double>>();
    rec.shots = j.at("shots").get<long long>();
    check_basis(rec.basis);
    if (rec.counts.size() != (std::size_t{1} << rec.basis.size()))
        throw std::invalid_argument("counts length does not match basis");
    return rec;
}

}  // namespace natsim
