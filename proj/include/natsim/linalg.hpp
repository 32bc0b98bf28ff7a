#pragma once

#include <Eigen/Dense>

#include <complex>

namespace natsim {

struct HermitianEig {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXcd eigenvectors; // columns
};

/// Eigendecomposition of a Hermitian matrix. Uses LAPACK's divide-and-conquer
/// driver when available, Eigen otherwise.
HermitianEig hermitian_eig(const Eigen::MatrixXcd& m);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// (1/2) ||rho - sigma||_1 for Hermitian arguments.
double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);

/// e^{-i E t} with the phase reduced mod 2pi in extended precision, so huge
/// E*t products do not lose the fractional phase.
std::complex<double> unit_phase(double energy, double t);

}  // namespace natsim
