#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "natsim/spin_algebra.hpp"
#include "test_util.hpp"

#include <random>

using namespace natsim;
using testutil::dense_site_pauli;
using testutil::dense_total_spin;

namespace {

StateVector ket(const char* bits) {
    int nq = 0;
    std::uint64_t index = 0;
    for (const char* c = bits; *c; ++c) {
        index = (index << 1) | (*c == '1');
        ++nq;
    }
    return basis_state(nq, index);
}

}  // namespace

TEST_CASE("apply_pauli eigenvalue and flip actions") {
    // |0> = |z+>
    const StateVector zp = ket("0");
    CHECK((apply_pauli(zp, Axis::Z, 0).amp - zp.amp).norm() == doctest::Approx(0.0));
    const StateVector zm = ket("1");
    CHECK((apply_pauli(zp, Axis::X, 0).amp - zm.amp).norm() == doctest::Approx(0.0));
    CHECK_THROWS_AS(apply_pauli(zp, Axis::X, 1), std::out_of_range);
    CHECK_THROWS_AS(apply_pauli(zp, Axis::X, -1), std::out_of_range);
}

TEST_CASE("apply_pauli is involutive and matches the dense oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int nq = 2 + trial % 5;
        const StateVector psi = testutil::random_state_vec(nq, rng);
        for (Axis a : kAxes) {
            const int site = trial % nq;
            const StateVector once = apply_pauli(psi, a, site);
            CHECK(once.norm() == doctest::Approx(1.0).epsilon(1e-12));
            const StateVector twice = apply_pauli(once, a, site);
            CHECK((twice.amp - psi.amp).norm() < 1e-12);
            CHECK(testutil::vec_gap(once, dense_site_pauli(nq, site, a), psi) < 1e-12);
        }
    }
}

TEST_CASE("total_spin_apply on product states and against the dense oracle") {
    const StateVector all_up = ket("0000");
    const StateVector four = total_spin_apply(all_up, Axis::Z);
    CHECK((four.amp - 4.0 * all_up.amp).norm() < 1e-12);

    const StateVector mixed = ket("01");
    CHECK(total_spin_apply(mixed, Axis::Z).amp.norm() < 1e-12);

    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const int nq = 2 + trial % 5;
        const StateVector psi = testutil::random_state_vec(nq, rng);
        for (Axis a : kAxes)
            CHECK(testutil::vec_gap(total_spin_apply(psi, a), dense_total_spin(nq, a), psi) <
                  1e-12);
    }
}

TEST_CASE("charge eigenprojectors: selection, completeness, orthogonality") {
    // (|01> + |00>)/sqrt(2), eigenvalue 0 keeps only |01>
    StateVector psi(Eigen::VectorXcd::Zero(4), 2);
    psi.amp(0) = 1.0 / std::sqrt(2.0);
    psi.amp(1) = 1.0 / std::sqrt(2.0);
    const StateVector kept = charge_eigenprojector_apply(psi, Axis::Z, 0);
    CHECK(std::abs(kept.amp(1) - psi.amp(1)) < 1e-14);
    CHECK(std::abs(kept.amp(0)) < 1e-14);

    const StateVector full = ket("0000");
    const StateVector same = charge_eigenprojector_apply(full, Axis::Z, 4);
    CHECK((same.amp - full.amp).norm() < 1e-13);

    CHECK_THROWS_AS(charge_eigenprojector_apply(psi, Axis::Z, 1), std::domain_error);
    CHECK_THROWS_AS(charge_eigenprojector_apply(psi, Axis::Z, 6), std::domain_error);

    std::mt19937_64 rng(13);
    for (int nq : {2, 3, 6, 10}) {
        const StateVector random = testutil::random_state_vec(nq, rng);
        for (Axis a : kAxes) {
            double total = 0.0;
            StateVector resolved(Eigen::VectorXcd::Zero(random.dim()), nq);
            for (int s = -nq; s <= nq; s += 2) {
                const StateVector part = charge_eigenprojector_apply(random, a, s);
                total += part.amp.squaredNorm();
                resolved.amp += part.amp;
                // idempotence
                const StateVector again = charge_eigenprojector_apply(part, a, s);
                CHECK((again.amp - part.amp).norm() < 1e-12);
                // orthogonality against one other sector
                if (s + 2 <= nq) {
                    const StateVector other = charge_eigenprojector_apply(random, a, s + 2);
                    CHECK(std::abs(part.amp.dot(other.amp)) < 1e-12);
                }
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
            CHECK((resolved.amp - random.amp).norm() < 1e-12);
        }
    }
}

TEST_CASE("projectors match dense spectral projectors at small sizes") {
    std::mt19937_64 rng(14);
    for (int nq : {2, 4, 6}) {
        const StateVector psi = testutil::random_state_vec(nq, rng);
        for (Axis a : kAxes) {
            const Eigen::MatrixXcd op = dense_total_spin(nq, a);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op);
            for (int s = -nq; s <= nq; s += 2) {
                Eigen::MatrixXcd proj =
                    Eigen::MatrixXcd::Zero(psi.dim(), psi.dim());
                for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
                    if (std::abs(es.eigenvalues()(k) - s) < 1e-8)
                        proj += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
                CHECK(testutil::vec_gap(charge_eigenprojector_apply(psi, a, s), proj, psi) <
                      1e-11);
            }
        }
    }
}

TEST_CASE("heisenberg_bond_apply: singlet, triplet, dense oracle") {
    StateVector singlet(Eigen::VectorXcd::Zero(4), 2);
    singlet.amp(1) = 1.0 / std::sqrt(2.0);
    singlet.amp(2) = -1.0 / std::sqrt(2.0);
    const StateVector bond = heisenberg_bond_apply(singlet, 0, 1, {1.0, 1.0, 1.0});
    CHECK((bond.amp + 3.0 * singlet.amp).norm() < 1e-12);

    const StateVector up = ket("00");
    const StateVector up_bond = heisenberg_bond_apply(up, 0, 1, {1.0, 1.0, 1.0});
    CHECK((up_bond.amp - up.amp).norm() < 1e-12);

    CHECK_THROWS_AS(heisenberg_bond_apply(up, 1, 1, {1.0, 1.0, 1.0}), std::domain_error);

    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 10; ++trial) {
        const StateVector psi = testutil::random_state_vec(2, rng);
        const std::array<double, 3> w{1.0, 1.0, 0.7};
        Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(4, 4);
        for (Axis a : kAxes)
            op += w[static_cast<int>(a)] *
                  testutil::kron(testutil::pauli2(a), testutil::pauli2(a));
        CHECK(testutil::vec_gap(heisenberg_bond_apply(psi, 0, 1, w), op, psi) < 1e-12);
    }
    // non-adjacent pair on 4 qubits
    const StateVector psi4 = testutil::random_state_vec(4, rng);
    Eigen::MatrixXcd op4 = Eigen::MatrixXcd::Zero(16, 16);
    for (Axis a : kAxes)
        op4 += dense_site_pauli(4, 1, a) * dense_site_pauli(4, 3, a);
    CHECK(testutil::vec_gap(heisenberg_bond_apply(psi4, 1, 3, {1, 1, 1}), op4, psi4) < 1e-12);
}

TEST_CASE("global_axis_cycle permutes the axes and has order three") {
    std::mt19937_64 rng(16);
    const StateVector psi = testutil::random_state_vec(5, rng);

    const StateVector once = global_axis_cycle(psi, CycleDirection::Forward);
    CHECK(once.norm() == doctest::Approx(1.0).epsilon(1e-12));

    // <sigma_z> after = <sigma_y> before, and cyclically
    auto expect = [](const StateVector& s, Axis a) {
        return s.amp.dot(total_spin_apply(s, a).amp).real();
    };
    CHECK(expect(once, Axis::Z) == doctest::Approx(expect(psi, Axis::Y)).epsilon(1e-10));
    CHECK(expect(once, Axis::Y) == doctest::Approx(expect(psi, Axis::X)).epsilon(1e-10));
    CHECK(expect(once, Axis::X) == doctest::Approx(expect(psi, Axis::Z)).epsilon(1e-10));

    const StateVector thrice = global_axis_cycle(
        global_axis_cycle(once, CycleDirection::Forward), CycleDirection::Forward);
    const Complex phase = psi.amp.dot(thrice.amp);
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
    CHECK((thrice.amp - phase * psi.amp).norm() < 1e-12);

    const StateVector back =
        global_axis_cycle(global_axis_cycle(psi, CycleDirection::Forward),
                          CycleDirection::Backward);
    CHECK((back.amp - psi.amp).norm() < 1e-12);
}

TEST_CASE("su(2) commutators: [s_x^tot, s_y^tot] = 2i s_z^tot per site") {
    std::mt19937_64 rng(17);
    for (int nq : {2, 4, 6}) {
        const StateVector psi = testutil::random_state_vec(nq, rng);
        for (int k = 0; k < 3; ++k) {
            const Axis a = static_cast<Axis>(k);
            const Axis b = next_axis(a);
            const Axis c = next_axis(b);
            const StateVector ab = total_spin_apply(total_spin_apply(psi, b), a);
            const StateVector ba = total_spin_apply(total_spin_apply(psi, a), b);
            const StateVector comm(ab.amp - ba.amp, nq);
            const StateVector target = total_spin_apply(psi, c);
            CHECK((comm.amp - Complex{0.0, 2.0} * target.amp).norm() < 1e-10);
        }
    }
}
