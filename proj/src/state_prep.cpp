#include "natsim/state_prep.hpp"

#include "natsim/errors.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace natsim {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_grid(int nn, int s, const char* what) {
    if (s < -nn || s > nn || ((s + nn) % 2) != 0)
        throw std::domain_error(std::string(what) + " " + std::to_string(s) +
                                " not on the eigenvalue grid for " + std::to_string(nn) +
                                " qubits");
}

double log_choose(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// Cumulative-probability sampling of an index from unnormalized weights.
int sample_index(const std::vector<double>& weights, std::mt19937_64& rng) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw NumericalError("all outcome weights vanish");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng) * total;
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        acc += weights[k];
        if (u < acc) return static_cast<int>(k);
    }
    // u landed in the round-off tail; return the last nonzero entry.
    for (std::size_t k = weights.size(); k-- > 0;)
        if (weights[k] > 0.0) return static_cast<int>(k);
    throw NumericalError("sampled a zero-probability branch");
}

}  // namespace

QubitLabel label_from_string(const std::string& s) {
    if (s.size() == 2 && (s[1] == '+' || s[1] == '-')) {
        const bool plus = s[1] == '+';
        switch (s[0]) {
            case 'x': return plus ? QubitLabel::XPlus : QubitLabel::XMinus;
            case 'y': return plus ? QubitLabel::YPlus : QubitLabel::YMinus;
            case 'z': return plus ? QubitLabel::ZPlus : QubitLabel::ZMinus;
        }
    }
    throw std::invalid_argument("invalid qubit label '" + s + "'");
}

std::string label_to_string(QubitLabel l) {
    switch (l) {
        case QubitLabel::XPlus: return "x+";
        case QubitLabel::XMinus: return "x-";
        case QubitLabel::YPlus: return "y+";
        case QubitLabel::YMinus: return "y-";
        case QubitLabel::ZPlus: return "z+";
        case QubitLabel::ZMinus: return "z-";
    }
    return "?";
}

Eigen::Vector2cd label_ket(QubitLabel l) {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Vector2cd v;
    switch (l) {
        case QubitLabel::XPlus: v << s, s; break;
        case QubitLabel::XMinus: v << s, -s; break;
        case QubitLabel::YPlus: v << s, kI * s; break;
        case QubitLabel::YMinus: v << s, -kI * s; break;
        case QubitLabel::ZPlus: v << 1, 0; break;
        case QubitLabel::ZMinus: v << 0, 1; break;
    }
    return v;
}

PrepPattern main_experiment_pattern(int nn) {
    if (nn < 6 || nn % 2 != 0)
        throw ConfigError("pattern needs an even qubit count >= 6, got " + std::to_string(nn));
    PrepPattern p{QubitLabel::XPlus, QubitLabel::ZPlus,  QubitLabel::XMinus,
                  QubitLabel::ZMinus, QubitLabel::XMinus, QubitLabel::ZPlus};
    while (static_cast<int>(p.size()) < nn) {
        p.push_back(QubitLabel::ZMinus);
        p.push_back(QubitLabel::ZPlus);
    }
    return p;
}

StateVector product_state(const PrepPattern& pattern) {
    const int nq = static_cast<int>(pattern.size());
    Eigen::VectorXcd amp = Eigen::VectorXcd::Ones(1);
    for (QubitLabel l : pattern) {
        const Eigen::Vector2cd ket = label_ket(l);
        Eigen::VectorXcd next(amp.size() * 2);
        for (Eigen::Index b = 0; b < amp.size(); ++b) {
            next(2 * b) = amp(b) * ket(0);
            next(2 * b + 1) = amp(b) * ket(1);
        }
        amp.swap(next);
    }
    StateVector psi(std::move(amp), nq);
    psi.normalize();
    return psi;
}

StateVector random_state(int num_qubits, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd amp(Eigen::Index{1} << num_qubits);
    for (Eigen::Index b = 0; b < amp.size(); ++b) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        amp(b) = Complex{re, im};
    }
    StateVector psi(std::move(amp), num_qubits);
    psi.normalize();
    return psi;
}

StateVector random_state(int num_qubits, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_state(num_qubits, rng);
}

double binomial_envelope(int nn, int s, int s_tilde) {
    check_grid(nn, s, "outcome");
    check_grid(nn, s_tilde, "eigenvalue");
    const int n_up = (nn + s) / 2;
    const int n_dn = nn - n_up;
    const double p_up = 0.5 * (1.0 + double(s_tilde) / nn);
    const double p_dn = 0.5 * (1.0 - double(s_tilde) / nn);
    // 0^0 == 1 at the grid edges.
    if (p_up == 0.0) return n_up == 0 ? 1.0 : 0.0;
    if (p_dn == 0.0) return n_dn == 0 ? 1.0 : 0.0;
    return std::exp(log_choose(nn, n_up) + n_up * std::log(p_up) + n_dn * std::log(p_dn));
}

double gaussian_envelope(int nn, int s, int s_tilde) {
    check_grid(nn, s, "outcome");
    check_grid(nn, s_tilde, "eigenvalue");
    const double width =
        0.5 * std::sqrt(nn * (1.0 + double(s_tilde) / nn) * (1.0 - double(s_tilde) / nn));
    // The grid spacing is 2, so (s - s_tilde)/2 counts grid steps.
    const double steps = 0.5 * (s - s_tilde);
    return std::exp(-steps * steps / (2.0 * width * width)) /
           std::sqrt(2.0 * M_PI * width * width);
}

StateVector soft_kraus_apply(const StateVector& psi, Axis axis, int s) {
    const int nq = psi.num_qubits;
    check_grid(nq, s, "outcome");
    std::vector<double> factor(nq + 1);
    for (int w = 0; w <= nq; ++w)
        factor[w] = std::sqrt(binomial_envelope(nq, s, eigenvalue_of_weight(nq, w)));
    StateVector out = psi;
    const Eigen::Matrix2cd u = axis_basis_unitary(axis);
    if (axis != Axis::Z) apply_unitary_everywhere(out.amp, nq, u.adjoint());
    for (Eigen::Index b = 0; b < out.dim(); ++b)
        out.amp(b) *= factor[std::popcount(static_cast<std::uint64_t>(b))];
    if (axis != Axis::Z) apply_unitary_everywhere(out.amp, nq, u);
    return out;
}

std::pair<SoftOutcome, StateVector> soft_measure(const StateVector& psi, Axis axis,
                                                 std::mt19937_64& rng) {
    const int nq = psi.num_qubits;
    StateVector work = psi;
    const Eigen::Matrix2cd u = axis_basis_unitary(axis);
    if (axis != Axis::Z) apply_unitary_everywhere(work.amp, nq, u.adjoint());

    std::vector<double> eigw(nq + 1, 0.0);
    for (Eigen::Index b = 0; b < work.dim(); ++b)
        eigw[std::popcount(static_cast<std::uint64_t>(b))] += std::norm(work.amp(b));

    // p(S_k) = sum_wt f(S_k, Stilde(wt)) ||P^{Stilde} psi||^2, indexed so that
    // k = (nn - S)/2.
    std::vector<double> probs(nq + 1, 0.0);
    for (int k = 0; k <= nq; ++k) {
        const int s = eigenvalue_of_weight(nq, k);
        for (int w = 0; w <= nq; ++w) {
            if (eigw[w] == 0.0) continue;
            probs[k] += binomial_envelope(nq, s, eigenvalue_of_weight(nq, w)) * eigw[w];
        }
    }
    const int k = sample_index(probs, rng);
    const int s = eigenvalue_of_weight(nq, k);

    std::vector<double> factor(nq + 1);
    for (int w = 0; w <= nq; ++w)
        factor[w] = std::sqrt(binomial_envelope(nq, s, eigenvalue_of_weight(nq, w)));
    for (Eigen::Index b = 0; b < work.dim(); ++b)
        work.amp(b) *= factor[std::popcount(static_cast<std::uint64_t>(b))];
    if (axis != Axis::Z) apply_unitary_everywhere(work.amp, nq, u);
    work.normalize();
    return {SoftOutcome{axis, s}, std::move(work)};
}

std::pair<int, StateVector> strong_measure(const StateVector& psi, Axis axis,
                                           std::mt19937_64& rng) {
    const int nq = psi.num_qubits;
    StateVector work = psi;
    const Eigen::Matrix2cd u = axis_basis_unitary(axis);
    if (axis != Axis::Z) apply_unitary_everywhere(work.amp, nq, u.adjoint());
    std::vector<double> eigw(nq + 1, 0.0);
    for (Eigen::Index b = 0; b < work.dim(); ++b)
        eigw[std::popcount(static_cast<std::uint64_t>(b))] += std::norm(work.amp(b));
    const int k = sample_index(eigw, rng);
    for (Eigen::Index b = 0; b < work.dim(); ++b)
        if (std::popcount(static_cast<std::uint64_t>(b)) != k) work.amp(b) = 0.0;
    if (axis != Axis::Z) apply_unitary_everywhere(work.amp, nq, u);
    work.normalize();
    return {eigenvalue_of_weight(nq, k), std::move(work)};
}

AmcSequenceResult amc_prep_sequence(const StateVector& psi, std::mt19937_64& rng) {
    AmcSequenceResult res;
    StateVector cur = psi;
    int slot = 0;
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
        auto [outcome, next] = soft_measure(cur, a, rng);
        res.outcomes[slot++] = outcome;
        cur = std::move(next);
    }
    res.state = std::move(cur);
    return res;
}

ChargeStats charge_statistics(const StateVector& psi) {
    ChargeStats stats;
    for (Axis a : kAxes) {
        const auto weights = eigenspace_weights(psi, a);
        double mean = 0.0, second = 0.0;
        for (int w = 0; w < static_cast<int>(weights.size()); ++w) {
            const double s = eigenvalue_of_weight(psi.num_qubits, w);
            mean += s * weights[w];
            second += s * s * weights[w];
        }
        const int i = static_cast<int>(a);
        stats.mean[i] = mean;
        stats.stddev[i] = std::sqrt(std::max(0.0, second - mean * mean));
    }
    return stats;
}

AmcParameters amc_parameters(int copies, double scale_constant) {
    if (copies < 1) throw std::invalid_argument("copies must be positive");
    AmcParameters p;
    p.eta_prime = scale_constant / std::sqrt(double(copies));
    p.delta_prime = 0.32;
    p.delta = 0.32;
    // epsilon > (c + 1) delta' = 1.28 with c = 3 charges; eta > eta'.
    p.epsilon = 1.28 + 0.01;
    p.eta = 2.0 * p.eta_prime;
    return p;
}

}  // namespace natsim
