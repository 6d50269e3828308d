#include "fockfisher/fisher.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace fockfisher {

long double FisherPair::absolute(double value) const {
    return std::exp(static_cast<long double>(log_scale)) * static_cast<long double>(value);
}

Eigen::Matrix2d classical_fisher(const JointPdfField& field, const QuadGrid& grid) {
    const Eigen::Index n = field.p.rows();
    if (field.p.cols() != n || n != grid.points_per_axis)
        throw std::invalid_argument("pdf field does not match the quadrature grid");
    double f00 = 0.0, f01 = 0.0, f11 = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double p = field.p(i, j);
            if (p < kPdfFloor)
                continue;
            const double w = grid.weights[i] * grid.weights[j] / p;
            const double a = field.dp_dphi(i, j);
            const double b = field.dp_ddelta(i, j);
            f00 += w * a * a;
            f01 += w * a * b;
            f11 += w * b * b;
        }
    }
    Eigen::Matrix2d F;
    F << f00, f01, f01, f11;
    return F;
}

QuantumFisher qfi_and_slds(const SectorModel& model) {
    QuantumFisher out;
    out.log_scale = 2.0 * model.log_scale;
    for (const Sector& s : model.sectors) {
        const double asym = (s.rho - s.rho.adjoint()).cwiseAbs().maxCoeff();
        if (asym > 1e-12 * std::max(1.0, s.rho.cwiseAbs().maxCoeff()))
            throw std::invalid_argument("density sector with " + std::to_string(s.photons) +
                                        " photons is not Hermitian (deviation " +
                                        std::to_string(asym) + ")");

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(s.rho);
        const Eigen::MatrixXcd& V = eig.eigenvectors();
        const Eigen::VectorXd& lambda = eig.eigenvalues();
        const Eigen::MatrixXcd d[2] = {V.adjoint() * s.d_phase * V,
                                       V.adjoint() * s.d_diffusion * V};

        const auto dim = lambda.size();
        Eigen::MatrixXcd L[2] = {Eigen::MatrixXcd::Zero(dim, dim),
                                 Eigen::MatrixXcd::Zero(dim, dim)};
        for (Eigen::Index a = 0; a < dim; ++a)
            for (Eigen::Index b = 0; b < dim; ++b) {
                const double denom = lambda[a] + lambda[b];
                if (denom <= kRankThreshold)
                    continue;
                L[0](a, b) = 2.0 * d[0](a, b) / denom;
                L[1](a, b) = 2.0 * d[1](a, b) / denom;
            }
        // F_ij = Tr(d_j rho L_i) in the eigenbasis.
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                out.matrix(i, j) += (L[i].cwiseProduct(d[j].transpose())).sum().real();

        out.slds.push_back({s.photons, s.rho, V * L[0] * V.adjoint(), V * L[1] * V.adjoint()});
    }
    // Symmetrize rounding.
    out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();
    return out;
}

QuantumFisher qfi_and_slds(const BlockedDensity& rho, const DensityDerivatives& derivatives,
                           EnvironmentAccess access) {
    return qfi_and_slds(sector_model(rho, derivatives, access));
}

CommutationDiagnostics commutation_diagnostics(const QuantumFisher& qfi) {
    CommutationDiagnostics out;
    out.log_scale = qfi.log_scale;
    Complex trace = 0.0;
    double norm2 = 0.0;
    for (const SectorSlds& s : qfi.slds) {
        const Eigen::MatrixXcd comm = s.phase * s.diffusion - s.diffusion * s.phase;
        trace += (s.rho * comm).trace();
        norm2 += comm.squaredNorm();
    }
    out.trace_commutator = trace;
    out.commutator_norm = std::sqrt(norm2);
    return out;
}

void require_invertible(const Eigen::Matrix2d& quantum) {
    static constexpr const char* kNames[2] = {"F_Q[phi,phi]", "F_Q[Delta,Delta]"};
    for (int i = 0; i < 2; ++i)
        if (!(quantum(i, i) > 1e-14))
            throw SingularFisherError(std::string(kNames[i]) + " = " +
                                      std::to_string(quantum(i, i)) +
                                      " vanishes; Sigma^2, Upsilon and HCR are undefined here");
    if (!(quantum.determinant() > 0.0))
        throw SingularFisherError("F_Q is singular (non-positive determinant)");
}

double hcr_bound(const Eigen::Matrix2d& cost, const Eigen::Matrix2d& quantum,
                 const Eigen::Matrix2cd& commutator_trace) {
    require_invertible(quantum);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> geig(cost);
    if (geig.eigenvalues().minCoeff() < -1e-12)
        throw std::invalid_argument("cost matrix must be positive semidefinite");
    const Eigen::Matrix2d sqrt_cost = geig.eigenvectors() *
                                      geig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                                      geig.eigenvectors().transpose();
    const Eigen::Matrix2d inv = quantum.inverse();
    const Eigen::Matrix2cd inner = (sqrt_cost * inv).cast<Complex>() * commutator_trace *
                                   (inv * sqrt_cost).cast<Complex>();
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(inner);
    return (cost * inv).trace() + svd.singularValues().sum();
}

FisherPair evaluate_fisher(const BlockedDensity& rho, const QuadGrid& grid,
                           EnvironmentAccess access) {
    const DensityDerivatives derivatives = parameter_derivatives(rho);
    const SectorModel model = sector_model(rho, derivatives, access);

    FisherPair pair;
    pair.log_scale = 2.0 * derivatives.log_scale;
    pair.classical = classical_fisher(joint_pdf(model, grid), grid);

    const QuantumFisher qfi = qfi_and_slds(model);
    pair.quantum = qfi.matrix;
    const CommutationDiagnostics comm = commutation_diagnostics(qfi);
    pair.commutator_trace << Complex(0.0), comm.trace_commutator, -comm.trace_commutator,
        Complex(0.0);
    pair.sld_commutator_norm = comm.commutator_norm;
    return pair;
}

}  // namespace fockfisher
