#pragma once

// Two-mode, fixed photon number probe states and the balanced beam splitter
// restricted to a photon-number sector.
//
// Basis convention: index p of an amplitude vector is the Fock state
// |p, N-p>, i.e. p photons in mode a (the arm that carries the phase).

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace fockfisher {

using Complex = std::complex<double>;

/// Raised for out-of-range photon numbers or partitions.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Largest N for which Kravchuk coefficients are evaluated.
inline constexpr int kMaxPhotons = 40;

enum class StateFamily { ghb, hb, noon };

struct ProbeState {
    int total_photons = 0;
    Eigen::VectorXcd amplitudes;  // length total_photons + 1
    StateFamily family = StateFamily::ghb;
    int input_a = 0;              // n for ghb/hb; 0 for noon

    /// Partition label N - 2n (meaningful for the gHB family).
    int partition() const { return total_photons - 2 * input_a; }

    /// ghb(n,N-n), hb(N) or noon(N).
    std::string label() const;
};

/// U restricted to the (M+1)-dimensional sector {|m, M-m>}.
struct SectorUnitary {
    int sector_photons = 0;
    Eigen::MatrixXcd matrix;
};

/// A_N(n,p) = (-1)^n sqrt(2^-N C(N,n) C(N,p)) 2F1(-n,-p;-N;2).
double kravchuk_coeff(int N, int n, int p);

/// Output of a balanced beam splitter fed with |n, N-n>; c_p = A_N(n,p).
ProbeState ghb_state(int N, int n);

/// Holland-Burnett state: n = N/2, and n = floor(N/2) for odd N.
ProbeState hb_state(int N);

/// (|N,0> + |0,N>)/sqrt(2).
ProbeState noon_state(int N);

/// exp[-i pi/4 (a'^dag b' + b'^dag a')] on the M-photon sector.
SectorUnitary balanced_bs_unitary(int M);

/// Real orthogonal beam splitter K[p][n] = A_M(n,p).
///
/// Related to the generator exponential by K = D^dag U D with
/// D = diag((-i)^p); column n is ghb_state(M, n).
Eigen::MatrixXd kravchuk_matrix(int M);

/// sum_p |c_p|^2 (p - <p>)^2, the variance of the photon number in mode a.
double mode_a_number_variance(const ProbeState& state);

}  // namespace fockfisher
