#include "fockfisher/homodyne.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fockfisher/quadrature.hpp"

namespace fockfisher {

double default_half_width(int photons) { return std::sqrt(2.0 * photons + 1.0) + 4.0; }

QuadGrid make_grid(double half_width, int points_per_axis) {
    const QuadratureRule rule = simpson_rule(half_width, points_per_axis);
    QuadGrid grid;
    grid.half_width = half_width;
    grid.points_per_axis = points_per_axis;
    grid.nodes = Eigen::Map<const Eigen::VectorXd>(rule.nodes.data(), points_per_axis);
    grid.weights = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), points_per_axis);
    return grid;
}

QuadGrid default_grid(int photons, int points_per_axis) {
    return make_grid(default_half_width(photons), points_per_axis);
}

double hermite_wavefunction(int n, double x) {
    if (n < 0)
        throw std::invalid_argument("Fock index must be >= 0");
    double prev = 0.0;
    double cur = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
    for (int k = 0; k < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

Eigen::MatrixXd hermite_table(int max_n, const Eigen::VectorXd& nodes) {
    Eigen::MatrixXd table(max_n + 1, nodes.size());
    for (Eigen::Index i = 0; i < nodes.size(); ++i) {
        const double x = nodes[i];
        table(0, i) = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
        if (max_n >= 1)
            table(1, i) = std::numbers::sqrt2 * x * table(0, i);
        for (int k = 1; k < max_n; ++k)
            table(k + 1, i) = std::sqrt(2.0 / (k + 1)) * x * table(k, i) -
                              std::sqrt(static_cast<double>(k) / (k + 1)) * table(k - 1, i);
    }
    return table;
}

double integrate(const Eigen::MatrixXd& field, const QuadGrid& grid) {
    return grid.weights.dot(field * grid.weights);
}

JointPdfField joint_pdf(const SectorModel& model, const QuadGrid& grid) {
    int max_photons = 0;
    for (const Sector& s : model.sectors) {
        const auto dim = s.photons + 1;
        if (s.rho.rows() != dim || s.rho.cols() != dim || s.d_phase.rows() != dim ||
            s.d_phase.cols() != dim || s.d_diffusion.rows() != dim || s.d_diffusion.cols() != dim)
            throw std::invalid_argument("sector matrices inconsistent with photon number " +
                                        std::to_string(s.photons));
        max_photons = std::max(max_photons, s.photons);
    }

    const Eigen::Index n = grid.points_per_axis;
    const Eigen::MatrixXd psi = hermite_table(max_photons, grid.nodes);

    JointPdfField field;
    field.p = Eigen::MatrixXd::Zero(n, n);
    field.dp_dphi = Eigen::MatrixXd::Zero(n, n);
    field.dp_ddelta = Eigen::MatrixXd::Zero(n, n);
    field.log_scale = model.log_scale;

    for (const Sector& s : model.sectors) {
        const int M = s.photons;
        const Eigen::MatrixXcd K = kravchuk_matrix(M).cast<Complex>();
        const Eigen::MatrixXcd out_rho = K * s.rho * K.transpose();
        const Eigen::MatrixXcd out_dphi = K * s.d_phase * K.transpose();
        const Eigen::MatrixXcd out_ddelta = K * s.d_diffusion * K.transpose();

        // p(x, pbar) = sum_{m,m'} Re[sigma_mm' (-i)^(m'-m)] psi_m psi_m'(x) psi_{M-m} psi_{M-m'}(pbar);
        // the (-i)^n factors are the momentum-space Fock wavefunctions on output b.
        const int pairs = (M + 1) * (M + 2) / 2;
        Eigen::MatrixXd fx(n, pairs), gp(n, pairs);
        Eigen::Matrix<double, Eigen::Dynamic, 3> coeff(pairs, 3);
        int col = 0;
        for (int m = 0; m <= M; ++m) {
            for (int mp = m; mp <= M; ++mp, ++col) {
                fx.col(col) = psi.row(m).cwiseProduct(psi.row(mp)).transpose();
                gp.col(col) = psi.row(M - m).cwiseProduct(psi.row(M - mp)).transpose();
                static constexpr Complex kPhase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
                const Complex phase = kPhase[(mp - m) % 4];
                const double mult = (m == mp) ? 1.0 : 2.0;
                coeff(col, 0) = mult * (out_rho(m, mp) * phase).real();
                coeff(col, 1) = mult * (out_dphi(m, mp) * phase).real();
                coeff(col, 2) = mult * (out_ddelta(m, mp) * phase).real();
            }
        }
        field.p.noalias() += fx * coeff.col(0).asDiagonal() * gp.transpose();
        field.dp_dphi.noalias() += fx * coeff.col(1).asDiagonal() * gp.transpose();
        field.dp_ddelta.noalias() += fx * coeff.col(2).asDiagonal() * gp.transpose();
    }

    field.min_raw_value = field.p.minCoeff();
    field.p = field.p.cwiseMax(0.0);
    return field;
}

JointPdfField joint_pdf(const BlockedDensity& rho, const DensityDerivatives& derivatives,
                        const QuadGrid& grid) {
    return joint_pdf(sector_model(rho, derivatives, EnvironmentAccess::traced), grid);
}

}  // namespace fockfisher
