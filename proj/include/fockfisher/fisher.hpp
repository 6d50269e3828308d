#pragma once

// Classical and quantum Fisher information for the parameter pair (phi, Delta),
// symmetric logarithmic derivatives, and the Holevo-Cramer-Rao bound.
//
// Parameter order is (phi, Delta) everywhere: index 0 is the phase, index 1
// the diffusion.
//
// Fisher matrices are returned divided by a common factor exp(log_scale)
// (see DensityDerivatives); ratios such as F_C / F_Q are unaffected.

#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "fockfisher/channels.hpp"
#include "fockfisher/homodyne.hpp"

namespace fockfisher {

/// F_Q has a vanishing diagonal entry; Sigma^2, Upsilon and HCR are undefined.
class SingularFisherError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr double kRankThreshold = 1e-10;
inline constexpr double kPdfFloor = 1e-12;

struct FisherPair {
    Eigen::Matrix2d classical = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d quantum = Eigen::Matrix2d::Zero();
    Eigen::Matrix2cd commutator_trace = Eigen::Matrix2cd::Zero();  // W_ij = Tr(rho [L_i, L_j])
    double sld_commutator_norm = 0.0;                              // ||[L_phi, L_Delta]||_F
    double log_scale = 0.0;

    /// exp(log_scale) * value, in extended precision so tiny values survive.
    long double absolute(double value) const;
};

/// F_C[i][j] = integral of (d_i p)(d_j p) / p, skipping cells with p < kPdfFloor.
Eigen::Matrix2d classical_fisher(const JointPdfField& field, const QuadGrid& grid);

struct SectorSlds {
    int photons = 0;
    Eigen::MatrixXcd rho;
    Eigen::MatrixXcd phase;
    Eigen::MatrixXcd diffusion;
};

struct QuantumFisher {
    Eigen::Matrix2d matrix = Eigen::Matrix2d::Zero();
    std::vector<SectorSlds> slds;
    double log_scale = 0.0;  // of matrix; the SLDs carry half of it
};

/// QFI and SLDs sector by sector from the eigenbasis of rho.
///
/// L_ab = 2 <a|d rho|b> / (lambda_a + lambda_b) where the sum exceeds
/// kRankThreshold, else 0.
QuantumFisher qfi_and_slds(const SectorModel& model);

QuantumFisher qfi_and_slds(const BlockedDensity& rho, const DensityDerivatives& derivatives,
                           EnvironmentAccess access = EnvironmentAccess::traced);

struct CommutationDiagnostics {
    Complex trace_commutator;  // Tr(rho [L_phi, L_Delta])
    double commutator_norm = 0.0;
    double log_scale = 0.0;
};

CommutationDiagnostics commutation_diagnostics(const QuantumFisher& qfi);

/// Tr(G F_Q^-1) + || sqrt(G) F_Q^-1 W F_Q^-1 sqrt(G) ||_1.
double hcr_bound(const Eigen::Matrix2d& cost, const Eigen::Matrix2d& quantum,
                 const Eigen::Matrix2cd& commutator_trace);

/// Throws SingularFisherError naming the vanishing diagonal entry.
void require_invertible(const Eigen::Matrix2d& quantum);

/// Every quantity for one encoded state measured on the given grid.
FisherPair evaluate_fisher(const BlockedDensity& rho, const QuadGrid& grid,
                           EnvironmentAccess access = EnvironmentAccess::traced);

}  // namespace fockfisher
