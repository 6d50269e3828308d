#include "fockfisher/fock.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace fockfisher {

namespace {

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void check_photons(int N) {
    if (N < 0 || N > kMaxPhotons)
        throw DomainError("photon number " + std::to_string(N) + " outside [0, " +
                          std::to_string(kMaxPhotons) + "]");
}

// 2F1(-n,-p;-N;2) C(N,n) = sum_j (-1)^j C(p,j) C(N-p,n-j), an integer. The
// floating-point hypergeometric sum cancels badly beyond N ~ 15 and leaves
// rounding residue where the result is exactly zero (odd HB amplitudes).
std::int64_t kravchuk_polynomial(int N, int n, int p) {
    auto binom = [](int a, int b) -> std::int64_t {
        if (b < 0 || b > a)
            return 0;
        std::int64_t r = 1;
        for (int i = 1; i <= b; ++i)
            r = r * (a - b + i) / i;  // exact at every step
        return r;
    };
    std::int64_t sum = 0;
    for (int j = 0; j <= std::min(n, p); ++j) {
        const std::int64_t t = binom(p, j) * binom(N - p, n - j);
        sum += (j % 2 == 0) ? t : -t;
    }
    return sum;
}

}  // namespace

std::string ProbeState::label() const {
    switch (family) {
    case StateFamily::noon:
        return "noon(" + std::to_string(total_photons) + ")";
    case StateFamily::hb:
        return "hb(" + std::to_string(total_photons) + ")";
    case StateFamily::ghb:
        break;
    }
    return "ghb(" + std::to_string(input_a) + "," + std::to_string(total_photons - input_a) + ")";
}

double kravchuk_coeff(int N, int n, int p) {
    check_photons(N);
    if (n < 0 || n > N || p < 0 || p > N)
        throw DomainError("Kravchuk indices (n=" + std::to_string(n) + ", p=" + std::to_string(p) +
                          ") outside [0, " + std::to_string(N) + "]");
    const double log_prefactor =
        0.5 * (-N * std::numbers::ln2 + log_binomial(N, p) - log_binomial(N, n));
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * std::exp(log_prefactor) * static_cast<double>(kravchuk_polynomial(N, n, p));
}

ProbeState ghb_state(int N, int n) {
    check_photons(N);
    if (n < 0 || n > N)
        throw DomainError("ghb partition n=" + std::to_string(n) + " outside [0, " +
                          std::to_string(N) + "]");
    ProbeState state;
    state.total_photons = N;
    state.input_a = n;
    state.family = StateFamily::ghb;
    state.amplitudes.resize(N + 1);
    for (int p = 0; p <= N; ++p)
        state.amplitudes[p] = kravchuk_coeff(N, n, p);
    state.amplitudes.normalize();
    return state;
}

ProbeState hb_state(int N) {
    if (N < 2)
        throw DomainError("HB state needs N >= 2, got " + std::to_string(N));
    ProbeState state = ghb_state(N, N / 2);
    state.family = StateFamily::hb;
    return state;
}

ProbeState noon_state(int N) {
    check_photons(N);
    if (N < 1)
        throw DomainError("N00N state needs N >= 1");
    ProbeState state;
    state.total_photons = N;
    state.family = StateFamily::noon;
    state.amplitudes = Eigen::VectorXcd::Zero(N + 1);
    state.amplitudes[0] = state.amplitudes[N] = std::numbers::sqrt2 / 2.0;
    return state;
}

SectorUnitary balanced_bs_unitary(int M) {
    check_photons(M);
    // Generator a^dag b + b^dag a on {|m, M-m>}: couples m <-> m+1.
    Eigen::MatrixXd generator = Eigen::MatrixXd::Zero(M + 1, M + 1);
    for (int m = 0; m < M; ++m) {
        const double g = std::sqrt((m + 1.0) * (M - m));
        generator(m + 1, m) = g;
        generator(m, m + 1) = g;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(generator);
    const Eigen::MatrixXcd V = eig.eigenvectors().cast<Complex>();
    Eigen::VectorXcd phases(M + 1);
    for (int i = 0; i <= M; ++i)
        phases[i] = std::polar(1.0, -std::numbers::pi / 4.0 * eig.eigenvalues()[i]);
    return {M, V * phases.asDiagonal() * V.adjoint()};
}

Eigen::MatrixXd kravchuk_matrix(int M) {
    check_photons(M);
    Eigen::MatrixXd K(M + 1, M + 1);
    for (int n = 0; n <= M; ++n)
        for (int p = 0; p <= M; ++p)
            K(p, n) = kravchuk_coeff(M, n, p);
    return K;
}

double mode_a_number_variance(const ProbeState& state) {
    double mean = 0.0, second = 0.0;
    for (int p = 0; p <= state.total_photons; ++p) {
        const double w = std::norm(state.amplitudes[p]);
        mean += w * p;
        second += w * p * p;
    }
    return second - mean * mean;
}

}  // namespace fockfisher
