#include "natsim/linalg.hpp"

#include "natsim/errors.hpp"

#include <cmath>

#ifdef NATSIM_USE_LAPACKE
#include <lapacke.h>
#endif

namespace natsim {

HermitianEig hermitian_eig(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
#ifdef NATSIM_USE_LAPACKE
    const int n = static_cast<int>(m.rows());
    HermitianEig out;
    out.eigenvectors = m;
    out.eigenvalues.resize(n);
    const int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'V', 'L', n,
        reinterpret_cast<lapack_complex_double*>(out.eigenvectors.data()), n,
        out.eigenvalues.data());
    if (info != 0)
        throw NumericalError("zheevd failed with info=" + std::to_string(info));
    return out;
#else
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
    return HermitianEig{es.eigenvalues(), es.eigenvectors()};
#endif
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
    const HermitianEig eig = hermitian_eig(rho - sigma);
    return 0.5 * eig.eigenvalues.cwiseAbs().sum();
}

std::complex<double> unit_phase(double energy, double t) {
    constexpr long double kTwoPi = 6.283185307179586476925286766559L;
    long double phase = std::fmod(static_cast<long double>(energy) * static_cast<long double>(t),
                                  kTwoPi);
    return {static_cast<double>(std::cos(phase)), static_cast<double>(-std::sin(phase))};
}

}  // namespace natsim
