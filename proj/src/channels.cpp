#include "fockfisher/channels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fockfisher/quadrature.hpp"

namespace fockfisher {

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n)
        return 0.0;
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

void check_delta(double delta) {
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw DomainError("phase diffusion must be finite and >= 0, got " + std::to_string(delta));
}

void check_eta(double eta, const char* name) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw DomainError(std::string(name) + " must lie in [0,1], got " + std::to_string(eta));
}

Eigen::MatrixXcd phased_projector(const ProbeState& state, double phi) {
    const int N = state.total_photons;
    Eigen::VectorXcd shifted(N + 1);
    for (int p = 0; p <= N; ++p)
        shifted[p] = state.amplitudes[p] * std::polar(1.0, -phi * p);
    return shifted * shifted.adjoint();
}

void damp(Eigen::MatrixXcd& m, double delta) {
    const auto n = m.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double d = static_cast<double>(i - j);
            if (d != 0.0)
                m(i, j) *= std::exp(-0.5 * delta * delta * d * d);
        }
}

}  // namespace

double BlockedDensity::total_trace() const {
    double t = 0.0;
    for (const auto& [index, block] : blocks)
        t += block.rho.trace().real();
    return t;
}

BlockedDensity apply_phase_diffusion(const ProbeState& state, double phi, double delta) {
    check_delta(delta);
    BlockedDensity out;
    out.input_photons = state.total_photons;
    out.phase = phi;
    out.diffusion = delta;
    DensityBlock block;
    block.photons = state.total_photons;
    block.coherent = phased_projector(state, phi);
    block.rho = block.coherent;
    damp(block.rho, delta);
    out.blocks.emplace(LossIndex{0, 0}, std::move(block));
    return out;
}

BlockedDensity diffusion_integral_oracle(const ProbeState& state, double phi, double delta,
                                         int nodes) {
    if (!(delta > 0.0))
        throw DomainError("diffusion integral needs Delta > 0; use the closed form at Delta = 0");
    if (nodes < 20)
        throw DomainError("diffusion integral needs at least 20 nodes");

    // phi' = phi + sqrt(2) Delta t turns the Gaussian into exp(-t^2)/sqrt(pi).
    const QuadratureRule rule = gauss_hermite_rule(nodes);
    const Eigen::MatrixXcd input = phased_projector(state, 0.0);
    const int N = state.total_photons;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(N + 1, N + 1);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double shifted = phi + std::numbers::sqrt2 * delta * rule.nodes[i];
        Eigen::VectorXcd u(N + 1);
        for (int p = 0; p <= N; ++p)
            u[p] = std::polar(1.0, -shifted * p);
        rho += (rule.weights[i] / std::sqrt(std::numbers::pi)) *
               (u.asDiagonal() * input * u.conjugate().asDiagonal());
    }

    BlockedDensity out;
    out.input_photons = N;
    out.phase = phi;
    out.diffusion = delta;
    DensityBlock block;
    block.photons = N;
    block.coherent = phased_projector(state, phi);
    block.rho = std::move(rho);
    out.blocks.emplace(LossIndex{0, 0}, std::move(block));
    return out;
}

BlockedDensity diffuse(const BlockedDensity& rho, double delta) {
    check_delta(delta);
    BlockedDensity out = rho;
    out.diffusion = std::hypot(rho.diffusion, delta);
    for (auto& [index, block] : out.blocks) {
        // Damping is relative to the stored coherent part, so recompute from it.
        block.rho = block.coherent;
        damp(block.rho, out.diffusion);
    }
    return out;
}

double loss_weight(int N, int p, int k, int l, double eta_a, double eta_b) {
    if (k > p || l > N - p)
        return 0.0;
    return binomial(p, k) * binomial(N - p, l) * std::pow(eta_a, p - k) *
           std::pow(1.0 - eta_a, k) * std::pow(eta_b, N - p - l) * std::pow(1.0 - eta_b, l);
}

BlockedDensity apply_loss(const BlockedDensity& rho, double eta_a, double eta_b) {
    check_eta(eta_a, "eta_a");
    check_eta(eta_b, "eta_b");
    if (rho.blocks.size() != 1 || !rho.blocks.contains(LossIndex{0, 0}))
        throw DomainError("loss must act on a lossless (single-block) state");

    const int N = rho.input_photons;
    const DensityBlock& source = rho.blocks.at(LossIndex{0, 0});
    BlockedDensity out = rho;
    out.eta_a = eta_a;
    out.eta_b = eta_b;
    out.blocks.clear();

    for (int k = 0; k <= N; ++k) {
        for (int l = 0; k + l <= N; ++l) {
            const int M = N - k - l;
            Eigen::VectorXd amp(M + 1);
            for (int m = 0; m <= M; ++m)
                amp[m] = std::sqrt(loss_weight(N, m + k, k, l, eta_a, eta_b));
            DensityBlock block;
            block.photons = M;
            block.rho = amp.asDiagonal() * source.rho.block(k, k, M + 1, M + 1) * amp.asDiagonal();
            if (block.rho.trace().real() == 0.0)
                continue;
            block.coherent =
                amp.asDiagonal() * source.coherent.block(k, k, M + 1, M + 1) * amp.asDiagonal();
            out.blocks.emplace(LossIndex{k, l}, std::move(block));
        }
    }
    return out;
}

DensityDerivatives parameter_derivatives(const BlockedDensity& rho) {
    // Lowest coherence order present in any block fixes the common scale.
    int lowest = 0;
    for (const auto& [index, block] : rho.blocks) {
        const auto n = block.coherent.rows();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j)
                if (block.coherent(i, j) != Complex(0.0)) {
                    const int d = static_cast<int>(j - i);
                    if (lowest == 0 || d < lowest)
                        lowest = d;
                }
    }

    const double delta = rho.diffusion;
    DensityDerivatives out;
    out.log_scale = -0.5 * delta * delta * lowest * lowest;
    for (const auto& [index, block] : rho.blocks) {
        const auto n = block.coherent.rows();
        Eigen::MatrixXcd dphi = Eigen::MatrixXcd::Zero(n, n);
        Eigen::MatrixXcd ddelta = Eigen::MatrixXcd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i == j)
                    continue;
                const double d = static_cast<double>(i - j);
                const Complex scaled = block.coherent(i, j) *
                                       std::exp(-0.5 * delta * delta * (d * d - lowest * lowest));
                dphi(i, j) = Complex(0.0, -d) * scaled;
                ddelta(i, j) = -delta * d * d * scaled;
            }
        out.d_phase.emplace(index, std::move(dphi));
        out.d_diffusion.emplace(index, std::move(ddelta));
    }
    return out;
}

BlockedDensity encode(const ProbeState& state, double phi, double delta, double eta_a,
                      double eta_b) {
    return apply_loss(apply_phase_diffusion(state, phi, delta), eta_a, eta_b);
}

SectorModel sector_model(const BlockedDensity& rho, const DensityDerivatives& derivatives,
                         EnvironmentAccess access) {
    SectorModel model;
    model.log_scale = derivatives.log_scale;
    if (access == EnvironmentAccess::resolved) {
        for (const auto& [index, block] : rho.blocks)
            model.sectors.push_back({block.photons, block.rho, derivatives.d_phase.at(index),
                                     derivatives.d_diffusion.at(index)});
        return model;
    }

    std::map<int, Sector> merged;
    for (const auto& [index, block] : rho.blocks) {
        auto [it, inserted] = merged.try_emplace(block.photons);
        Sector& s = it->second;
        if (inserted) {
            s.photons = block.photons;
            s.rho = block.rho;
            s.d_phase = derivatives.d_phase.at(index);
            s.d_diffusion = derivatives.d_diffusion.at(index);
        } else {
            s.rho += block.rho;
            s.d_phase += derivatives.d_phase.at(index);
            s.d_diffusion += derivatives.d_diffusion.at(index);
        }
    }
    // Descending photon number: the unattenuated sector first.
    for (auto it = merged.rbegin(); it != merged.rend(); ++it)
        model.sectors.push_back(std::move(it->second));
    return model;
}

}  // namespace fockfisher
