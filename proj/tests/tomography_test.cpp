#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "natsim/thermal.hpp"
#include "natsim/tomography.hpp"
#include "test_util.hpp"

#include <cmath>
#include <random>

using namespace natsim;

namespace {

Eigen::MatrixXcd nats_like_state() {
    ChainSpec spec;
    spec.copies = 3;
    const Eigen::MatrixXcd hs = system_hamiltonian(spec, 0, 2);
    const std::array<Eigen::MatrixXcd, 3> charges{dense_total_spin(2, Axis::X),
                                                  dense_total_spin(2, Axis::Y),
                                                  dense_total_spin(2, Axis::Z)};
    ThermalParams params{1.0 / 18.0, {-3.0, 0.0, 3.0}};
    return thermal_state(hs, charges, params, EnsembleKind::Nats);
}

std::vector<MeasurementRecord> measure_all(const Eigen::MatrixXcd& rho, int n, long long shots,
                                           std::mt19937_64& rng) {
    std::vector<MeasurementRecord> records;
    for (const auto& basis : all_measurement_bases(n))
        records.push_back(simulate_basis_measurement(rho, basis, shots, rng));
    return records;
}

}  // namespace

TEST_CASE("basis measurements on pure and mixed states") {
    std::mt19937_64 rng(61);
    Eigen::MatrixXcd up = Eigen::MatrixXcd::Zero(2, 2);
    up(0, 0) = 1.0;
    const MeasurementRecord rec = simulate_basis_measurement(up, "z", 1000, rng);
    CHECK(rec.counts[0] == 1000.0);
    CHECK(rec.counts[1] == 0.0);

    const Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
    const MeasurementRecord x = simulate_basis_measurement(mixed, "x", 100000, rng);
    const double sigma = std::sqrt(0.25 * 100000);
    CHECK(std::abs(x.counts[0] - 50000.0) < 3.0 * sigma);
    CHECK(x.counts[0] + x.counts[1] == 100000.0);

    CHECK_THROWS_AS(simulate_basis_measurement(mixed, "q", 10, rng), std::invalid_argument);
    CHECK_THROWS_AS(simulate_basis_measurement(mixed, "zz", 10, rng), std::invalid_argument);
}

TEST_CASE("two-qubit frequencies match the Born-rule oracle") {
    std::mt19937_64 rng(62);
    const Eigen::MatrixXcd rho = nats_like_state();
    const long long shots = 100000;
    for (const auto& basis : all_measurement_bases(2)) {
        const MeasurementRecord rec = simulate_basis_measurement(rho, basis, shots, rng);
        const MeasurementRecord exact = simulate_basis_measurement(rho, basis, 0, rng);
        double total = 0.0;
        for (int ell = 0; ell < 4; ++ell) {
            const double p = exact.counts[ell];
            const double sd = std::sqrt(std::max(p * (1 - p) * shots, 1.0));
            CHECK(std::abs(rec.counts[ell] - p * shots) < 3.5 * sd);
            total += rec.counts[ell];
        }
        CHECK(total == double(shots));
    }
}

TEST_CASE("exact frequencies invert to exact expectations") {
    std::mt19937_64 rng(63);
    const Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(4, 4) / 4.0;
    const auto flat = expectations_from_frequencies(measure_all(mixed, 2, 0, rng), 2);
    CHECK(flat.size() == 15);
    for (const auto& [label, value] : flat) CHECK(std::abs(value) < 1e-14);

    const Eigen::MatrixXcd rho = nats_like_state();
    const auto expectations = expectations_from_frequencies(measure_all(rho, 2, 0, rng), 2);
    for (const auto& [label, value] : expectations) {
        const double oracle = (pauli_string_matrix(label) * rho).trace().real();
        CHECK(value == doctest::Approx(oracle).epsilon(1e-12));
    }

    std::vector<MeasurementRecord> incomplete = measure_all(rho, 2, 0, rng);
    incomplete.pop_back();
    CHECK_THROWS_AS(expectations_from_frequencies(incomplete, 2), std::invalid_argument);
}

TEST_CASE("estimator error scales as one over sqrt(shots)") {
    std::mt19937_64 rng(64);
    const Eigen::MatrixXcd rho = nats_like_state();
    const auto truth = expectations_from_frequencies(measure_all(rho, 2, 0, rng), 2);

    std::vector<std::pair<double, double>> points;
    for (long long shots : {1000LL, 10000LL, 100000LL, 1000000LL}) {
        double err = 0.0;
        const int reps = 8;
        for (int rep = 0; rep < reps; ++rep) {
            const auto est = expectations_from_frequencies(measure_all(rho, 2, shots, rng), 2);
            double sq = 0.0;
            for (const auto& [label, value] : est) sq += std::pow(value - truth.at(label), 2);
            err += std::sqrt(sq) / reps;
        }
        points.emplace_back(double(shots), err);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : points) {
        sx += std::log(x);
        sy += std::log(y);
        sxx += std::log(x) * std::log(x);
        sxy += std::log(x) * std::log(y);
    }
    const double n = points.size();
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("simplex projection is the nearest point over a coarse grid search") {
    std::mt19937_64 rng(65);
    std::uniform_real_distribution<double> unif(-0.4, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd v(4);
        for (int k = 0; k < 4; ++k) v(k) = unif(rng);
        const Eigen::VectorXd p = project_to_simplex(v);
        CHECK(p.minCoeff() >= 0.0);
        CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
        const double best = (p - v).squaredNorm();
        const int steps = 25;
        for (int a = 0; a <= steps; ++a)
            for (int b = 0; a + b <= steps; ++b)
                for (int c = 0; a + b + c <= steps; ++c) {
                    Eigen::VectorXd g(4);
                    g << a / double(steps), b / double(steps), c / double(steps),
                        (steps - a - b - c) / double(steps);
                    CHECK((g - v).squaredNorm() >= best - 1e-9);
                }
    }
}

TEST_CASE("reconstruction is a left inverse on physical states") {
    std::mt19937_64 rng(66);
    const Eigen::MatrixXcd rho = nats_like_state();
    const auto expectations = expectations_from_frequencies(measure_all(rho, 2, 0, rng), 2);
    const Eigen::MatrixXcd recon = reconstruct_state(expectations, 2);
    CHECK(trace_distance(recon, rho) < 1e-10);

    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::MatrixXcd r = testutil::random_density_matrix(4, rng);
        const auto e = expectations_from_frequencies(measure_all(r, 2, 0, rng), 2);
        CHECK(trace_distance(reconstruct_state(e, 2), r) < 1e-10);
    }
}

TEST_CASE("projection repairs an unphysical linear inversion") {
    // expectations of a matrix with one eigenvalue at -0.01
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(4, 4);
    bad(0, 0) = 0.60;
    bad(1, 1) = 0.31;
    bad(2, 2) = 0.10;
    bad(3, 3) = -0.01;
    std::map<std::string, double> expectations;
    const char* alphabet = "ixyz";
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            if (a == 0 && b == 0) continue;
            std::string label{alphabet[a], alphabet[b]};
            expectations[label] = (pauli_string_matrix(label) * bad).trace().real();
        }
    const Eigen::MatrixXcd fixed = reconstruct_state(expectations, 2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(fixed);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    CHECK(fixed.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    // the projection shifts the negative weight onto the positive spectrum
    const Eigen::VectorXd expected = project_to_simplex(bad.diagonal().real());
    Eigen::VectorXd got = es.eigenvalues();
    std::sort(got.data(), got.data() + 4);
    Eigen::VectorXd want = expected;
    std::sort(want.data(), want.data() + 4);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("finite-shot reconstruction converges to the true state") {
    std::mt19937_64 rng(67);
    const Eigen::MatrixXcd rho = nats_like_state();
    double prev = 1e9;
    for (long long shots : {1000LL, 100000LL}) {
        double mean_dist = 0.0;
        const int reps = 5;
        for (int rep = 0; rep < reps; ++rep) {
            const auto est = expectations_from_frequencies(measure_all(rho, 2, shots, rng), 2);
            mean_dist += trace_distance(reconstruct_state(est, 2), rho) / reps;
        }
        CHECK(mean_dist < prev);
        prev = mean_dist;
    }
    CHECK(prev < 5e-3);  // 1e5 shots keeps the error well under the budget

    // averaging reconstructions over seeds beats a single noisy one
    double single = 0.0;
    Eigen::MatrixXcd mean_recon = Eigen::MatrixXcd::Zero(4, 4);
    const int seeds = 40;
    for (int s = 0; s < seeds; ++s) {
        const auto est = expectations_from_frequencies(measure_all(rho, 2, 2000, rng), 2);
        const Eigen::MatrixXcd recon = reconstruct_state(est, 2);
        if (s == 0) single = trace_distance(recon, rho);
        mean_recon += recon / double(seeds);
    }
    CHECK(trace_distance(mean_recon, rho) < single);
}

TEST_CASE("records round-trip through JSON lines") {
    std::mt19937_64 rng(68);
    const Eigen::MatrixXcd rho = nats_like_state();
    const MeasurementRecord rec = simulate_basis_measurement(rho, "xz", 5000, rng);
    const std::string line = record_to_json_line(rec);
    CHECK(line.find("\"basis\":\"xz\"") != std::string::npos);
    const MeasurementRecord back = record_from_json_line(line);
    CHECK(back.basis == rec.basis);
    CHECK(back.shots == rec.shots);
    REQUIRE(back.counts.size() == rec.counts.size());
    for (std::size_t k = 0; k < rec.counts.size(); ++k) CHECK(back.counts[k] == rec.counts[k]);

    const MeasurementRecord exact = simulate_basis_measurement(rho, "yy", 0, rng);
    const MeasurementRecord exact_back = record_from_json_line(record_to_json_line(exact));
    for (std::size_t k = 0; k < exact.counts.size(); ++k)
        CHECK(exact_back.counts[k] == doctest::Approx(exact.counts[k]).epsilon(1e-15));
}
