#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "fockfisher/channels.hpp"

using namespace fockfisher;

namespace {

double max_diff(const BlockedDensity& a, const BlockedDensity& b) {
    REQUIRE(a.blocks.size() == b.blocks.size());
    double worst = 0.0;
    for (const auto& [idx, block] : a.blocks)
        worst = std::max(worst, (block.rho - b.blocks.at(idx).rho).cwiseAbs().maxCoeff());
    return worst;
}

std::vector<ProbeState> probes() {
    return {ghb_state(1, 0), ghb_state(4, 0), ghb_state(5, 2), hb_state(6), noon_state(6)};
}

}  // namespace

TEST_CASE("phase and diffusion entries") {
    const ProbeState s = ghb_state(2, 0);
    const BlockedDensity rho = apply_phase_diffusion(s, 0.3, 0.8);
    const auto& m = rho.blocks.at({0, 0}).rho;
    const Complex c0 = s.amplitudes[0], c2 = s.amplitudes[2];
    const Complex expect = c2 * std::conj(c0) * std::exp(Complex(0, -2 * 0.3)) * std::exp(-0.64 * 2);
    CHECK(std::abs(m(2, 0) - expect) < 1e-14);
    CHECK(std::abs(m(1, 1) - std::norm(s.amplitudes[1])) < 1e-14);
    CHECK_THROWS_AS(apply_phase_diffusion(s, 0.3, -0.1), DomainError);
}

TEST_CASE("closed form agrees with the diffusion integral") {
    for (const ProbeState& s : probes())
        for (double delta : {0.1, 0.5, 1.5}) {
            const BlockedDensity closed = apply_phase_diffusion(s, 0.4, delta);
            const BlockedDensity quad = diffusion_integral_oracle(s, 0.4, delta, 80);
            CHECK(max_diff(closed, quad) < 1e-10);
        }
    CHECK_THROWS_AS(diffusion_integral_oracle(ghb_state(2, 0), 0.0, 0.0, 40), DomainError);
}

TEST_CASE("diffusion widths add in quadrature") {
    const ProbeState s = hb_state(6);
    const BlockedDensity a = diffuse(diffuse(apply_phase_diffusion(s, 0.2, 0.0), 0.3), 0.4);
    CHECK(max_diff(a, apply_phase_diffusion(s, 0.2, 0.5)) < 1e-14);
}

TEST_CASE("single-photon loss split") {
    const BlockedDensity rho = encode(ghb_state(1, 0), 0.0, 0.0, 0.5, 0.5);
    CHECK(rho.blocks.size() == 3);
    CHECK(rho.blocks.at({0, 0}).rho.trace().real() == doctest::Approx(0.5));
    CHECK(rho.blocks.at({1, 0}).rho.trace().real() == doctest::Approx(0.25));
    CHECK(rho.blocks.at({0, 1}).rho.trace().real() == doctest::Approx(0.25));
    CHECK(rho.blocks.at({1, 0}).photons == 0);
}

TEST_CASE("loss weights") {
    CHECK(loss_weight(3, 2, 1, 0, 0.7, 0.9) ==
          doctest::Approx(2 * 0.7 * 0.3 * 0.9));
    CHECK(loss_weight(3, 2, 0, 2, 0.7, 0.9) == 0.0);  // only one photon in b
    // weights of each p sum to one
    for (int p = 0; p <= 5; ++p) {
        double total = 0.0;
        for (int k = 0; k <= 5; ++k)
            for (int l = 0; l <= 5; ++l)
                total += loss_weight(5, p, k, l, 0.6, 0.3);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("no loss leaves one block; full loss leaves vacuum") {
    CHECK(encode(hb_state(4), 0.3, 0.7, 1.0, 1.0).blocks.size() == 1);
    const BlockedDensity dark = encode(hb_state(4), 0.3, 0.7, 0.0, 0.0);
    CHECK(dark.blocks.size() == 3);  // p = 0, 2, 4 each leave (k,l) = (p, 4-p)
    for (const auto& [idx, b] : dark.blocks)
        CHECK(b.photons == 0);
    CHECK(dark.total_trace() == doctest::Approx(1.0));
    CHECK_THROWS_AS(encode(hb_state(4), 0.3, 0.7, 1.2, 1.0), DomainError);
}

TEST_CASE("trace preservation and positivity") {
    for (const ProbeState& s : probes())
        for (double eta_a : {1.0, 0.8, 0.5, 0.1})
            for (double eta_b : {1.0, 0.5})
                for (double delta : {0.0, 0.3, 2.0}) {
                    const BlockedDensity rho = encode(s, 1.1, delta, eta_a, eta_b);
                    CHECK(std::abs(rho.total_trace() - 1.0) < 1e-10);
                    for (const auto& [idx, b] : rho.blocks) {
                        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b.rho, Eigen::EigenvaluesOnly);
                        CHECK(es.eigenvalues().minCoeff() > -1e-10);
                        CHECK(b.photons == s.total_photons - idx.k - idx.l);
                    }
                }
}

TEST_CASE("block weights do not depend on phi or Delta") {
    const ProbeState s = ghb_state(5, 1);
    const BlockedDensity a = encode(s, 0.0, 0.1, 0.6, 0.4);
    const BlockedDensity b = encode(s, 2.0, 3.0, 0.6, 0.4);
    for (const auto& [idx, block] : a.blocks)
        CHECK(std::abs(block.rho.trace() - b.blocks.at(idx).rho.trace()) < 1e-14);
}

TEST_CASE("loss commutes with diffusion") {
    for (const ProbeState& s : probes()) {
        const BlockedDensity direct = encode(s, 0.5, 0.9, 0.7, 0.4);
        const BlockedDensity swapped =
            diffuse(apply_loss(apply_phase_diffusion(s, 0.5, 0.0), 0.7, 0.4), 0.9);
        CHECK(max_diff(direct, swapped) < 1e-14);
    }
}

TEST_CASE("analytic derivatives match finite differences") {
    const double h = 1e-5;
    for (const ProbeState& s : probes())
        for (double eta : {1.0, 0.6}) {
            const double phi = 0.7, delta = 0.9;
            const BlockedDensity rho = encode(s, phi, delta, eta, eta);
            const DensityDerivatives d = parameter_derivatives(rho);
            const double scale = std::exp(d.log_scale);
            const BlockedDensity pp = encode(s, phi + h, delta, eta, eta);
            const BlockedDensity pm = encode(s, phi - h, delta, eta, eta);
            const BlockedDensity dp = encode(s, phi, delta + h, eta, eta);
            const BlockedDensity dm = encode(s, phi, delta - h, eta, eta);
            for (const auto& [idx, b] : rho.blocks) {
                const Eigen::MatrixXcd fd_phi = (pp.blocks.at(idx).rho - pm.blocks.at(idx).rho) / (2 * h);
                const Eigen::MatrixXcd fd_del = (dp.blocks.at(idx).rho - dm.blocks.at(idx).rho) / (2 * h);
                CHECK((scale * d.d_phase.at(idx) - fd_phi).cwiseAbs().maxCoeff() < 1e-8);
                CHECK((scale * d.d_diffusion.at(idx) - fd_del).cwiseAbs().maxCoeff() < 1e-8);
            }
        }
}

TEST_CASE("derivative scale tracks the lowest coherence order") {
    // HB(4) only populates even p, so the lowest order is 2.
    const BlockedDensity rho = encode(hb_state(4), 0.1, 3.0, 1.0, 1.0);
    CHECK(parameter_derivatives(rho).log_scale == doctest::Approx(-9.0 * 4 / 2));
    const BlockedDensity noon = encode(noon_state(6), 0.1, 5.0, 1.0, 1.0);
    CHECK(parameter_derivatives(noon).log_scale == doctest::Approx(-25.0 * 36 / 2));
}

TEST_CASE("traced sectors merge equal photon numbers") {
    const BlockedDensity rho = encode(ghb_state(4, 0), 0.3, 0.5, 0.5, 0.5);
    const DensityDerivatives d = parameter_derivatives(rho);
    const SectorModel traced = sector_model(rho, d, EnvironmentAccess::traced);
    const SectorModel resolved = sector_model(rho, d, EnvironmentAccess::resolved);
    CHECK(traced.sectors.size() == 5);
    CHECK(resolved.sectors.size() == rho.blocks.size());
    for (std::size_t i = 1; i < traced.sectors.size(); ++i)
        CHECK(traced.sectors[i - 1].photons > traced.sectors[i].photons);
    double t = 0.0;
    for (const Sector& s : traced.sectors)
        t += s.rho.trace().real();
    CHECK(t == doctest::Approx(1.0));
}
