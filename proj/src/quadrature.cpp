#include "fockfisher/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace fockfisher {

QuadratureRule gauss_hermite_rule(int nodes) {
    if (nodes < 1)
        throw std::invalid_argument("Gauss-Hermite rule needs at least one node");
    // Jacobi matrix of the physicists' Hermite recurrence: off-diagonal sqrt(j/2).
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(nodes, nodes);
    for (int j = 1; j < nodes; ++j)
        jacobi(j, j - 1) = jacobi(j - 1, j) = std::sqrt(j / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);

    const double mu0 = std::sqrt(std::numbers::pi);
    QuadratureRule rule;
    rule.nodes.resize(nodes);
    rule.weights.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
        rule.nodes[i] = eig.eigenvalues()[i];
        const double v0 = eig.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

QuadratureRule simpson_rule(double half_width, int points) {
    if (points < 3 || points % 2 == 0)
        throw std::invalid_argument("Simpson rule needs an odd point count >= 3, got " +
                                    std::to_string(points));
    if (!(half_width > 0.0))
        throw std::invalid_argument("Simpson rule needs a positive half width");
    QuadratureRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    const int intervals = points - 1;
    const double h = 2.0 * half_width / intervals;
    for (int i = 0; i < points; ++i) {
        // Symmetric construction keeps nodes[i] == -nodes[points-1-i] exactly.
        rule.nodes[i] = half_width * (2.0 * i - intervals) / intervals;
        double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        rule.weights[i] = w * h / 3.0;
    }
    return rule;
}

}  // namespace fockfisher
