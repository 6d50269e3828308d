#pragma once

// Double-homodyne detection behind the interferometer: a closing balanced
// beam splitter, then the X quadrature on output a and the P quadrature on
// output b. Quadratures use hbar = 1, x = (a + a^dag)/sqrt(2).

#include <Eigen/Core>

#include "fockfisher/channels.hpp"

namespace fockfisher {

struct QuadGrid {
    double half_width = 0.0;
    int points_per_axis = 0;
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;  // composite Simpson
};

inline constexpr int kDefaultGridPoints = 801;

/// sqrt(2N + 1) + 4: classical turning point of the N-photon wavefunction
/// plus four widths.
double default_half_width(int photons);

QuadGrid make_grid(double half_width, int points_per_axis = kDefaultGridPoints);

/// make_grid(default_half_width(photons), points_per_axis).
QuadGrid default_grid(int photons, int points_per_axis = kDefaultGridPoints);

/// Outcome density over (x, pbar) and its (phi, Delta) derivatives.
///
/// Rows index x, columns index pbar. The derivative fields share the scale
/// of the DensityDerivatives they were built from: the true derivative is
/// exp(log_scale) times the stored field.
struct JointPdfField {
    Eigen::MatrixXd p;
    Eigen::MatrixXd dp_dphi;
    Eigen::MatrixXd dp_ddelta;
    double log_scale = 0.0;
    double min_raw_value = 0.0;  // smallest p before clamping
};

/// Fock-state wavefunction psi_n(x) via the normalized three-term recurrence.
double hermite_wavefunction(int n, double x);

/// Row n holds psi_n evaluated at every node.
Eigen::MatrixXd hermite_table(int max_n, const Eigen::VectorXd& nodes);

/// Integral of the field over the grid.
double integrate(const Eigen::MatrixXd& field, const QuadGrid& grid);

JointPdfField joint_pdf(const SectorModel& model, const QuadGrid& grid);

/// Convenience: forms the traced sector model first. The outcome density is
/// linear in rho, so the loss record does not change it.
JointPdfField joint_pdf(const BlockedDensity& rho, const DensityDerivatives& derivatives,
                        const QuadGrid& grid);

}  // namespace fockfisher
