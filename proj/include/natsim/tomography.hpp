#pragma once

#include "natsim/linalg.hpp"
#include "natsim/spin_algebra.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace natsim {

// One measured Pauli-product eigenbasis. `basis` has one of 'x','y','z' per
// qubit. For shots > 0, counts are integer outcome tallies summing to shots;
// shots == 0 means exact mode and counts holds the outcome probabilities.
struct MeasurementRecord {
    std::string basis;
    std::vector<double> counts;
    long long shots = 0;

    std::vector<double> frequencies() const;
};

/// All 3^n basis strings over {x,y,z}, lexicographic.
std::vector<std::string> all_measurement_bases(int n);

/// Dense Pauli product for a string over {i,x,y,z} ('i' = identity slot).
Eigen::MatrixXcd pauli_string_matrix(const std::string& labels);

/// Samples `shots` outcomes of the given product eigenbasis from rho
/// (outcome bit 0 = +1 eigenstate, qubit 0 = most significant bit).
/// shots == 0 records the exact outcome probabilities instead.
MeasurementRecord simulate_basis_measurement(const Eigen::MatrixXcd& rho,
                                             const std::string& basis, long long shots,
                                             std::mt19937_64& rng);

/// Expectation estimates for every non-identity Pauli string over
/// {i,x,y,z}^n, obtained by marginalizing the recorded frequencies and
/// averaging over all compatible measurement bases. Needs the complete 3^n
/// basis set.
std::map<std::string, double> expectations_from_frequencies(
    const std::vector<MeasurementRecord>& records, int n);

/// Linear inversion rho0 = 2^-n sum_m <P_m> P_m followed by projection to
/// the Frobenius-nearest unit-trace PSD matrix (eigenvalue truncation and
/// shift).
Eigen::MatrixXcd reconstruct_state(const std::map<std::string, double>& expectations, int n);

/// Euclidean projection of a real vector onto the probability simplex.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& values);

std::string record_to_json_line(const MeasurementRecord& rec);
MeasurementRecord record_from_json_line(const std::string& line);

}  // namespace natsim
