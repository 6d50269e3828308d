#include "fockfisher/cli_io.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace fockfisher {

namespace {

std::string sci(double v) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << v;
    return s.str();
}

CheckResult check(std::string name, bool ok, std::string detail) {
    return {std::move(name), ok, std::move(detail)};
}

GridSettings grid_or_default(const RunOptions& o) { return o.grid; }

CheckResult kravchuk_unitarity() {
    double worst = 0.0;
    for (int M = 0; M <= 12; ++M) {
        const Eigen::MatrixXd K = kravchuk_matrix(M);
        worst = std::max(worst, (K.transpose() * K - Eigen::MatrixXd::Identity(M + 1, M + 1))
                                    .cwiseAbs()
                                    .maxCoeff());
    }
    return check("kravchuk_unitarity", worst < 1e-10, "max |K^T K - I| = " + sci(worst));
}

CheckResult bs_unitarity() {
    double worst = 0.0;
    for (int M = 0; M <= 12; ++M) {
        const Eigen::MatrixXcd U = balanced_bs_unitary(M).matrix;
        worst = std::max(worst, (U.adjoint() * U - Eigen::MatrixXcd::Identity(M + 1, M + 1))
                                    .cwiseAbs()
                                    .maxCoeff());
    }
    return check("bs_unitarity", worst < 1e-10, "max |U^dag U - I| = " + sci(worst));
}

std::vector<ProbeState> probe_set() {
    return {ghb_state(1, 0), ghb_state(4, 0), ghb_state(6, 0), ghb_state(6, 2), hb_state(6),
            hb_state(5), noon_state(6)};
}

CheckResult channel_trace() {
    double worst = 0.0;
    for (const ProbeState& s : probe_set())
        for (double eta : {1.0, 0.7, 0.5})
            for (double delta : {0.0, 0.5, 2.0})
                worst = std::max(worst,
                                 std::abs(encode(s, 0.3, delta, eta, 1.0 - 0.5 * (1.0 - eta))
                                              .total_trace() -
                                          1.0));
    return check("channel_trace", worst < 1e-10, "max |Tr rho - 1| = " + sci(worst));
}

CheckResult block_psd() {
    double lowest = INFINITY;
    for (const ProbeState& s : probe_set())
        for (double eta : {1.0, 0.5})
            for (double delta : {0.1, 1.0, 5.0}) {
                const BlockedDensity rho = encode(s, 0.3, delta, eta, eta);
                for (const auto& [idx, block] : rho.blocks) {
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block.rho,
                                                                       Eigen::EigenvaluesOnly);
                    lowest = std::min(lowest, es.eigenvalues().minCoeff());
                }
            }
    return check("block_psd", lowest > -1e-10, "min eigenvalue = " + sci(lowest));
}

CheckResult pdf_normalization(const GridSettings& grid) {
    double worst = 0.0;
    for (const ProbeState& s : probe_set())
        for (double eta : {1.0, 0.5}) {
            const BlockedDensity rho = encode(s, 0.3, 1.0, eta, eta);
            const QuadGrid g = grid.build(s.total_photons);
            const JointPdfField f = joint_pdf(rho, parameter_derivatives(rho), g);
            worst = std::max(worst, std::abs(integrate(f.p, g) - 1.0));
        }
    return check("pdf_normalization", worst < 1e-6, "max |integral p - 1| = " + sci(worst));
}

CheckResult phi_independence(const GridSettings& grid) {
    double worst = 0.0;
    for (const ProbeState& s : {ghb_state(4, 0), hb_state(4), noon_state(4)})
        for (double eta : {1.0, 0.5}) {
            FisherPair ref;
            bool first = true;
            for (double phi : {0.0, 0.4, 1.3}) {
                const BlockedDensity rho = encode(s, phi, 1.0, eta, eta);
                const FisherPair p = evaluate_fisher(rho, grid.build(s.total_photons));
                if (first) {
                    ref = p;
                    first = false;
                    continue;
                }
                for (auto pick : {&FisherPair::classical, &FisherPair::quantum}) {
                    const Eigen::Matrix2d& a = ref.*pick;
                    const Eigen::Matrix2d& b = p.*pick;
                    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff() /
                                                std::max(1.0, a.cwiseAbs().maxCoeff()));
                }
            }
        }
    return check("phi_independence", worst < 1e-6, "max relative change = " + sci(worst));
}

CheckResult qfi_dominates(const GridSettings& grid) {
    double lowest = INFINITY;
    for (const ProbeState& s : probe_set())
        for (double eta : {1.0, 0.5})
            for (double delta : {0.3, 1.5}) {
                const BlockedDensity rho = encode(s, 0.3, delta, eta, eta);
                const FisherPair p = evaluate_fisher(rho, grid.build(s.total_photons));
                const Eigen::Matrix2d gap = p.quantum - p.classical;
                Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(gap);
                const double scale = std::max(1.0, p.quantum.cwiseAbs().maxCoeff());
                lowest = std::min(lowest, es.eigenvalues().minCoeff() / scale);
            }
    return check("qfi_dominates", lowest > -1e-8, "min eig(F_Q - F_C) = " + sci(lowest));
}

CheckResult qubit_sqb(const GridSettings& grid) {
    double worst = 0.0;
    int points = 0;
    for (double eta : {1.0, 0.5})
        for (int i = 0; i < 10; ++i) {
            const double delta = 0.05 * std::pow(100.0, i / 9.0);  // 0.05 .. 5
            ScenarioConfig c;
            c.state = StateSpec::ghb(0, 1);
            c.delta = delta;
            c.eta_a = c.eta_b = eta;
            c.grid = grid;
            worst = std::max(worst, tradeoff_upsilon(evaluate(c)));
            ++points;
        }
    return check("qubit_sqb", worst <= 1.0 + 1e-6,
                 "max Upsilon = " + format_number(worst) + " over " + std::to_string(points) +
                     " points");
}

}  // namespace

std::vector<CheckResult> run_validation(const RunOptions& options) {
    const GridSettings grid = grid_or_default(options);
    std::vector<CheckResult> out;
    auto guarded = [&](const char* name, auto&& fn) {
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            out.push_back(check(name, false, std::string("threw: ") + e.what()));
        }
    };
    guarded("kravchuk_unitarity", kravchuk_unitarity);
    guarded("bs_unitarity", bs_unitarity);
    guarded("channel_trace", channel_trace);
    guarded("block_psd", block_psd);
    guarded("pdf_normalization", [&] { return pdf_normalization(grid); });
    guarded("phi_independence", [&] { return phi_independence(grid); });
    guarded("qfi_dominates", [&] { return qfi_dominates(grid); });
    guarded("qubit_sqb", [&] { return qubit_sqb(grid); });
    return out;
}

}  // namespace fockfisher
