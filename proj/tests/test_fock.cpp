#include <doctest.h>

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "fockfisher/fock.hpp"

using namespace fockfisher;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

namespace {

cpp_int binom(int n, int k) {
    cpp_int r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

// Exact 2F1(-n,-p;-N;2) and the squared prefactor 2^-N C(N,n) C(N,p).
double exact_kravchuk(int N, int n, int p) {
    cpp_rational term = 1, sum = 1;
    for (int j = 0; j < std::min(n, p); ++j) {
        term *= cpp_rational(2 * (j - n) * (j - p));
        term /= cpp_rational((j - N) * (j + 1));
        sum += term;
    }
    const cpp_rational pre2 = cpp_rational(binom(N, n) * binom(N, p)) / cpp_rational(cpp_int(1) << N);
    const double mag = std::sqrt(static_cast<double>(pre2 * sum * sum));
    const int sign = (sum < 0 ? -1 : 1) * (n % 2 ? -1 : 1);
    return sum == 0 ? 0.0 : sign * mag;
}

Eigen::MatrixXd hopping(int M) {
    // a^dag b + b^dag a on {|m, M-m>}
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(M + 1, M + 1);
    for (int m = 0; m < M; ++m)
        G(m + 1, m) = G(m, m + 1) = std::sqrt((m + 1.0) * (M - m));
    return G;
}

}  // namespace

TEST_CASE("kravchuk coefficients for one photon") {
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(kravchuk_coeff(1, 0, 0) == doctest::Approx(r));
    CHECK(kravchuk_coeff(1, 0, 1) == doctest::Approx(r));
    CHECK(kravchuk_coeff(1, 1, 0) == doctest::Approx(-r));
    CHECK(kravchuk_coeff(1, 1, 1) == doctest::Approx(r));
}

TEST_CASE("kravchuk coefficients match exact rational arithmetic") {
    double worst = 0.0;
    for (int N = 0; N <= 12; ++N)
        for (int n = 0; n <= N; ++n)
            for (int p = 0; p <= N; ++p)
                worst = std::max(worst, std::abs(kravchuk_coeff(N, n, p) - exact_kravchuk(N, n, p)));
    CHECK(worst < 1e-12);
}

TEST_CASE("gHB(0,N) is binomial") {
    for (int N : {2, 5, 9}) {
        const ProbeState s = ghb_state(N, 0);
        for (int p = 0; p <= N; ++p) {
            const double expect = std::sqrt(std::pow(0.5, N) * std::tgamma(N + 1.0) /
                                            (std::tgamma(p + 1.0) * std::tgamma(N - p + 1.0)));
            CHECK(std::abs(s.amplitudes[p]) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("HB states have no odd amplitudes") {
    for (int N : {2, 4, 6, 10, 20}) {
        const ProbeState s = hb_state(N);
        for (int p = 1; p <= N; p += 2)
            CHECK(s.amplitudes[p] == Complex(0.0));
        CHECK(s.amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(hb_state(5).input_a == 2);
}

TEST_CASE("N00N state") {
    const ProbeState s = noon_state(4);
    CHECK(s.amplitudes.size() == 5);
    CHECK(s.amplitudes[0].real() == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(s.amplitudes[4].real() == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(std::abs(s.amplitudes[2]) == 0.0);
    CHECK(s.label() == "noon(4)");
}

TEST_CASE("labels and partition") {
    CHECK(ghb_state(6, 2).label() == "ghb(2,4)");
    CHECK(ghb_state(6, 2).partition() == 2);
    CHECK(hb_state(6).label() == "hb(6)");
}

TEST_CASE("kravchuk matrix is orthogonal and its columns are gHB states") {
    for (int M = 0; M <= kMaxPhotons; ++M) {
        const Eigen::MatrixXd K = kravchuk_matrix(M);
        CHECK((K.transpose() * K - Eigen::MatrixXd::Identity(M + 1, M + 1)).cwiseAbs().maxCoeff() <
              1e-10);
    }
    const Eigen::MatrixXd K = kravchuk_matrix(7);
    for (int n = 0; n <= 7; ++n)
        CHECK((K.col(n).cast<Complex>() - ghb_state(7, n).amplitudes).norm() < 1e-13);
}

TEST_CASE("beam splitter unitary equals the generator exponential") {
    for (int M = 0; M <= 12; ++M) {
        const Eigen::MatrixXcd G = hopping(M).cast<Complex>();
        const Eigen::MatrixXcd expect = (Complex(0, -M_PI / 4) * G).exp();
        const Eigen::MatrixXcd U = balanced_bs_unitary(M).matrix;
        CHECK((U - expect).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((U.adjoint() * U - Eigen::MatrixXcd::Identity(M + 1, M + 1)).cwiseAbs().maxCoeff() <
              1e-10);
    }
}

TEST_CASE("U[p][n] = (-i)^(p-n) K[p][n]") {
    const Complex mi(0, -1);
    for (int M : {1, 3, 6}) {
        const Eigen::MatrixXcd U = balanced_bs_unitary(M).matrix;
        const Eigen::MatrixXd K = kravchuk_matrix(M);
        for (int p = 0; p <= M; ++p)
            for (int n = 0; n <= M; ++n)
                CHECK(std::abs(U(p, n) - std::pow(mi, p - n) * K(p, n)) < 1e-12);
    }
}

TEST_CASE("mode-a variance") {
    CHECK(mode_a_number_variance(ghb_state(6, 0)) == doctest::Approx(1.5));
    CHECK(mode_a_number_variance(noon_state(6)) == doctest::Approx(9.0));
    CHECK(mode_a_number_variance(hb_state(6)) == doctest::Approx(6.0));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(ghb_state(4, 5), DomainError);
    CHECK_THROWS_AS(ghb_state(kMaxPhotons + 1, 0), DomainError);
    CHECK_THROWS_AS(hb_state(1), DomainError);
    CHECK_THROWS_AS(noon_state(0), DomainError);
    CHECK_THROWS_AS(kravchuk_coeff(3, 0, 4), DomainError);
}
