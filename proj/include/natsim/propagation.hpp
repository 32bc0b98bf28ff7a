#pragma once

#include "natsim/hamiltonian.hpp"
#include "natsim/linalg.hpp"

#include <memory>

namespace natsim {

enum class Engine { DenseEig, Krylov };

std::string engine_name(Engine e);

struct PropagatorConfig {
    Engine engine = Engine::DenseEig;
    double time = 0.0;            // in 1/J units
    int krylov_dim = 40;
    double step_tolerance = 1e-10;  // total 2-norm error budget over the full time
    int dense_max_qubits = 13;      // resource guard for the dense engine
};

struct KrylovStats {
    long steps = 0;
    long halvings = 0;      // accepted after shrinking the trial step
    bool breakdown = false; // a Krylov basis terminated early (exact subspace)
};

/// Dense eigendecomposition of the chain Hamiltonian, cached per spec behind
/// a write-once map. Shared across threads; do not mutate.
std::shared_ptr<const HermitianEig> dense_eigensystem(const ChainSpec& spec);

/// e^{-i H t} |psi>. The dense engine applies exact eigenphases; the Krylov
/// engine steps a Lanczos approximation within the configured error budget.
StateVector evolve(const StateVector& psi, const HamiltonianAction& h,
                   const PropagatorConfig& cfg);

StateVector evolve_krylov(const StateVector& psi, const HamiltonianAction& h, double t,
                          int krylov_dim, double tolerance, KrylovStats* stats = nullptr);

/// Number of evolution segments used by the echo schedule for total time t:
/// 3*round(t) + 1, so the interleaved axis cycles complete in whole numbers
/// of x->y->z rounds.
long default_echo_steps(double t);

/// Splits t into num_steps segments of e^{-i H dt} with a forward global
/// axis cycle between consecutive segments. num_steps - 1 rotations total, so
/// the default schedule ends with the frame restored. Under an anisotropic H
/// the cycling symmetrizes the anisotropy over the three axes.
StateVector evolve_with_rotation_echo(const StateVector& psi, const HamiltonianAction& h,
                                      double t, long num_steps);

}  // namespace natsim
