#pragma once

#include <vector>

namespace fockfisher {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Hermite rule for the weight exp(-t^2) (Golub-Welsch).
QuadratureRule gauss_hermite_rule(int nodes);

/// Composite Simpson rule on [-half_width, half_width]; points must be odd and >= 3.
QuadratureRule simpson_rule(double half_width, int points);

}  // namespace fockfisher
