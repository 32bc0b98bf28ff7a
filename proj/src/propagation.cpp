#include "natsim/propagation.hpp"

#include "natsim/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace natsim {

namespace {

std::mutex g_cache_mutex;
std::map<std::string, std::shared_ptr<const HermitianEig>>& eig_cache() {
    static std::map<std::string, std::shared_ptr<const HermitianEig>> cache;
    return cache;
}

StateVector evolve_dense(const StateVector& psi, const HamiltonianAction& h, double t,
                         int guard) {
    const int nq = h.spec().num_qubits();
    if (nq > guard)
        throw ResourceError("dense propagator guarded at " + std::to_string(guard) +
                            " qubits, requested " + std::to_string(nq));
    const auto eig = dense_eigensystem(h.spec());
    Eigen::VectorXcd coeffs = eig->eigenvectors.adjoint() * psi.amp;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k)
        coeffs(k) *= unit_phase(eig->eigenvalues(k), t);
    return StateVector(eig->eigenvectors * coeffs, psi.num_qubits);
}

}  // namespace

std::string engine_name(Engine e) { return e == Engine::DenseEig ? "dense_eig" : "krylov"; }

std::shared_ptr<const HermitianEig> dense_eigensystem(const ChainSpec& spec) {
    const std::string key = spec.cache_key();
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = eig_cache().find(key);
        if (it != eig_cache().end()) return it->second;
    }
    auto eig = std::make_shared<HermitianEig>(hermitian_eig(dense_hamiltonian(spec)));
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto [it, inserted] = eig_cache().emplace(key, std::move(eig));
    return it->second;
}

StateVector evolve(const StateVector& psi, const HamiltonianAction& h,
                   const PropagatorConfig& cfg) {
    if (psi.num_qubits != h.spec().num_qubits())
        throw std::invalid_argument("state dimension does not match chain spec");
    if (cfg.time == 0.0) return psi;
    if (cfg.engine == Engine::DenseEig)
        return evolve_dense(psi, h, cfg.time, cfg.dense_max_qubits);
    return evolve_krylov(psi, h, cfg.time, cfg.krylov_dim, cfg.step_tolerance);
}

StateVector evolve_krylov(const StateVector& psi, const HamiltonianAction& h, double t,
                          int krylov_dim, double tolerance, KrylovStats* stats) {
    if (t == 0.0) {
        if (stats) *stats = KrylovStats{};
        return psi;
    }
    const Eigen::Index dim = psi.dim();
    const int m = static_cast<int>(std::min<Eigen::Index>(std::max(krylov_dim, 2), dim));
    const double budget_rate = tolerance / std::abs(t);

    KrylovStats local;
    Eigen::VectorXcd cur = psi.amp;
    Eigen::MatrixXcd basis(dim, m + 1);
    Eigen::VectorXd alpha(m), beta(m);
    Eigen::VectorXcd hv(dim);

    double done = 0.0;
    double dt = t;  // trial step, shrunk on rejection
    const double t_end = std::abs(t);

    while (std::abs(done) < t_end * (1.0 - 1e-15)) {
        // Lanczos basis from the current vector, fully reorthogonalized.
        const double nrm = cur.norm();
        basis.col(0) = cur / nrm;
        int keff = m;
        bool happy = false;
        double beta_last = 0.0;
        for (int k = 0; k < m; ++k) {
            hv.setZero();
            h.apply_add(basis.col(k), hv, 1.0);
            alpha(k) = basis.col(k).dot(hv).real();
            hv -= alpha(k) * basis.col(k);
            if (k > 0) hv -= beta(k - 1) * basis.col(k - 1);
            for (int p = 0; p <= k; ++p) hv -= basis.col(p).dot(hv) * basis.col(p);
            beta(k) = hv.norm();
            if (beta(k) < 1e-12 * std::max(1.0, std::abs(alpha(k)))) {
                keff = k + 1;
                happy = true;
                break;
            }
            basis.col(k + 1) = hv / beta(k);
        }
        if (!happy) beta_last = beta(m - 1);

        Eigen::MatrixXd tmat = Eigen::MatrixXd::Zero(keff, keff);
        for (int k = 0; k < keff; ++k) {
            tmat(k, k) = alpha(k);
            if (k + 1 < keff) tmat(k, k + 1) = tmat(k + 1, k) = beta(k);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tmat);
        const Eigen::VectorXd& ev = small.eigenvalues();
        const Eigen::MatrixXd& q = small.eigenvectors();
        const Eigen::VectorXd q0 = q.row(0).transpose();

        double remaining = t - done;
        double step = std::abs(dt) > std::abs(remaining) ? remaining : dt;
        Eigen::VectorXcd w(keff);
        while (true) {
            Eigen::VectorXcd phased(keff);
            for (int k = 0; k < keff; ++k) phased(k) = unit_phase(ev(k), step) * q0(k);
            w = q.cast<Complex>() * phased;
            const double err = happy ? 0.0 : beta_last * std::abs(w(keff - 1));
            if (happy || err <= budget_rate * std::abs(step) || std::abs(step) < 1e-12 * t_end)
                break;
            step *= 0.5;
            ++local.halvings;
        }
        cur = nrm * (basis.leftCols(keff) * w);
        done += step;
        ++local.steps;
        local.breakdown = local.breakdown || happy;
        dt = 2.0 * step;
    }
    if (stats) *stats = local;
    return StateVector(std::move(cur), psi.num_qubits);
}

long default_echo_steps(double t) { return 3 * std::llround(std::max(1.0, t)) + 1; }

StateVector evolve_with_rotation_echo(const StateVector& psi, const HamiltonianAction& h,
                                      double t, long num_steps) {
    if (num_steps < 1) throw std::invalid_argument("num_steps must be >= 1");
    if (psi.num_qubits != h.spec().num_qubits())
        throw std::invalid_argument("state dimension does not match chain spec");
    const double dt = t / double(num_steps);
    const auto eig = dense_eigensystem(h.spec());

    // One-segment step operator; reused num_steps times.
    Eigen::VectorXcd phases(eig->eigenvalues.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k)
        phases(k) = unit_phase(eig->eigenvalues(k), dt);
    const Eigen::MatrixXcd step_op =
        eig->eigenvectors * phases.asDiagonal() * eig->eigenvectors.adjoint();

    StateVector cur = psi;
    for (long s = 0; s < num_steps; ++s) {
        cur.amp = step_op * cur.amp;
        if (s + 1 < num_steps) cur = global_axis_cycle(cur, CycleDirection::Forward);
    }
    return cur;
}

}  // namespace natsim
