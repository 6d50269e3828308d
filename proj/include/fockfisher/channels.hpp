#pragma once

// Phase shift, Gaussian phase diffusion and photon loss acting on a probe
// state inside the interferometer.
//
// The output is block diagonal: block (k,l) holds the state conditioned on k
// photons lost from mode a and l from mode b, written in the basis
// {|m, M-m>} with M = N - k - l. Entry (m, m') of block (k,l) descends from
// the input coherence (p, q) = (m + k, m' + k).

#include <compare>
#include <map>
#include <vector>

#include <Eigen/Core>

#include "fockfisher/fock.hpp"

namespace fockfisher {

struct LossIndex {
    int k = 0;  // photons lost from mode a
    int l = 0;  // photons lost from mode b
    auto operator<=>(const LossIndex&) const = default;
};

struct DensityBlock {
    int photons = 0;            // M = N - k - l
    Eigen::MatrixXcd rho;       // diffused block
    Eigen::MatrixXcd coherent;  // same block without diffusion damping
};

struct BlockedDensity {
    int input_photons = 0;
    double phase = 0.0;
    double diffusion = 0.0;
    double eta_a = 1.0;
    double eta_b = 1.0;
    std::map<LossIndex, DensityBlock> blocks;

    double total_trace() const;
};

using BlockedOperator = std::map<LossIndex, Eigen::MatrixXcd>;

/// d rho / d phi and d rho / d Delta, both stored divided by a common scale.
///
/// The true derivative is exp(log_scale) times the stored block. The scale is
/// the damping exp(-Delta^2 d^2 / 2) of the lowest populated coherence order
/// d, which keeps the stored values O(1) at strong diffusion.
struct DensityDerivatives {
    BlockedOperator d_phase;
    BlockedOperator d_diffusion;
    double log_scale = 0.0;
};

/// rho_pq = c_p conj(c_q) exp(-i (p-q) phi - Delta^2 (p-q)^2 / 2), single block (0,0).
BlockedDensity apply_phase_diffusion(const ProbeState& state, double phi, double delta);

/// Gauss-Hermite evaluation of the diffusion integral over phi'.
///
/// Independent check of apply_phase_diffusion; rejects delta == 0.
BlockedDensity diffusion_integral_oracle(const ProbeState& state, double phi, double delta,
                                         int nodes);

/// Composes a further Gaussian diffusion of width delta (variances add).
BlockedDensity diffuse(const BlockedDensity& rho, double delta);

/// Fictitious-beam-splitter loss with surviving fractions eta_a, eta_b.
///
/// Blocks with zero trace are not stored.
BlockedDensity apply_loss(const BlockedDensity& rho, double eta_a, double eta_b);

/// Loss weight B^p_{kl} for an N-photon input.
double loss_weight(int N, int p, int k, int l, double eta_a, double eta_b);

/// Analytic (phi, Delta) derivatives of every block.
DensityDerivatives parameter_derivatives(const BlockedDensity& rho);

/// Full interferometer: phase, diffusion, then loss.
BlockedDensity encode(const ProbeState& state, double phi, double delta, double eta_a,
                      double eta_b);

/// How the lost photons are treated when forming the measured state.
///
/// traced: the environment is discarded; blocks with equal M are summed into
/// one photon-number sector. resolved: every (k,l) block is kept separate, as
/// if the loss record were available.
enum class EnvironmentAccess { traced, resolved };

struct Sector {
    int photons = 0;
    Eigen::MatrixXcd rho;
    Eigen::MatrixXcd d_phase;      // scaled as in DensityDerivatives
    Eigen::MatrixXcd d_diffusion;  // scaled as in DensityDerivatives
};

struct SectorModel {
    std::vector<Sector> sectors;
    double log_scale = 0.0;
};

SectorModel sector_model(const BlockedDensity& rho, const DensityDerivatives& derivatives,
                         EnvironmentAccess access = EnvironmentAccess::traced);

}  // namespace fockfisher
