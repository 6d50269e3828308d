#pragma once

// Figures of merit built on the Fisher pair and the sweep drivers behind the
// Delta, photon-number and partition scans.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fockfisher/fisher.hpp"

namespace fockfisher {

struct StateSpec {
    StateFamily family = StateFamily::ghb;
    int photons = 1;
    int input_a = 0;  // n for ghb; ignored otherwise

    ProbeState build() const;
    std::string label() const;

    static StateSpec ghb(int n, int N) { return {StateFamily::ghb, N, n}; }
    static StateSpec hb(int N) { return {StateFamily::hb, N, N / 2}; }
    static StateSpec noon(int N) { return {StateFamily::noon, N, 0}; }
};

struct GridSettings {
    int points = kDefaultGridPoints;
    std::optional<double> half_width;  // default_half_width(N) when unset

    QuadGrid build(int photons) const;
};

struct ScenarioConfig {
    StateSpec state;
    double phi = 0.3;
    double delta = 1.0;
    double eta_a = 1.0;
    double eta_b = 1.0;
    GridSettings grid;
    EnvironmentAccess environment = EnvironmentAccess::traced;
};

/// Lower end of every Delta sweep; F_Q[Delta,Delta] vanishes at Delta = 0.
inline constexpr double kMinSweepDelta = 0.02;
/// Reference point for saturation and Delta_cutoff.
inline constexpr double kSaturationDelta = 8.0;
/// Normalized off-diagonal |F01| / sqrt(F00 F11) above which a point is flagged.
inline constexpr double kOffDiagonalTolerance = 1e-6;

FisherPair evaluate(const ScenarioConfig& config);

/// F_C[phi,phi]/F_Q[phi,phi] + F_C[Delta,Delta]/F_Q[Delta,Delta], or the full
/// Tr(F_C F_Q^-1) when the estimators are correlated.
double tradeoff_upsilon(const FisherPair& pair);

/// Tr(F_Q^-1) = 1/F_Q[phi,phi] + 1/F_Q[Delta,Delta], in absolute units.
long double qcr_sum(const FisherPair& pair);

/// Holevo-Cramer-Rao bound with unit cost, in absolute units.
long double hcr_unit_cost(const FisherPair& pair);

/// True when either Fisher matrix has a normalized off-diagonal above tolerance.
bool correlated_estimators(const FisherPair& pair);

/// 100 (test / baseline - 1), in percent.
double sensitivity_gain(double upsilon_test, double upsilon_baseline);

/// Smallest grid Delta from which every later point lies within tol
/// (relative) of the reference value. nullopt when no such point exists.
std::optional<double> find_delta_cutoff(std::span<const double> deltas,
                                        std::span<const double> upsilon, double reference,
                                        double tol = 1e-3);

/// Evaluates the curve on the grid plus the reference at kSaturationDelta.
std::optional<double> find_delta_cutoff(const ScenarioConfig& base,
                                        std::span<const double> deltas, double tol = 1e-3);

/// 60 log-spaced points on [0.02, 5] with the anchors 0.6, 1.2 and 5.
std::vector<double> default_delta_grid();

struct SweepRow {
    std::string label;
    int photons = 0;
    int input_a = 0;
    int partition = 0;
    double delta = 0.0;
    double eta_a = 1.0;
    double eta_b = 1.0;
    double upsilon = 0.0;
    long double sigma2 = 0.0;
    long double fc_phase = 0.0;
    long double fc_diffusion = 0.0;
    long double fq_phase = 0.0;
    long double fq_diffusion = 0.0;
    long double hcr = 0.0;
    std::string flags;
};

struct SkippedPoint {
    std::string label;
    double delta = 0.0;
    double eta_a = 1.0;
    double eta_b = 1.0;
    std::string reason;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    std::vector<SkippedPoint> skipped;
};

struct CutoffRow {
    std::string label;
    int photons = 0;
    int input_a = 0;
    int partition = 0;
    double eta_a = 1.0;
    double eta_b = 1.0;
    std::optional<double> cutoff;
};

/// Row for one scenario; throws SingularFisherError where F_Q is singular.
SweepRow make_row(const ScenarioConfig& config, const FisherPair& pair);

/// Runs every scenario (in parallel when allowed) and keeps input order.
SweepTable run_scenarios(const std::vector<ScenarioConfig>& scenarios);

/// Surviving fractions on the two arms.
struct Loss {
    double eta_a = 1.0;
    double eta_b = 1.0;
    static Loss symmetric(double eta) { return {eta, eta}; }
};

struct DeltaSweepConfig {
    std::vector<StateSpec> states;
    std::vector<Loss> losses{Loss{}};
    std::vector<double> deltas = default_delta_grid();
    double phi = 0.3;
    GridSettings grid;
};

struct PhotonSweepConfig {
    std::vector<int> families{0, 1, 2, 3, 4, 5, 6};  // k in ghb(k, N-k)
    bool include_noon = true;
    int min_photons = 1;
    int max_photons = 14;
    std::vector<Loss> losses{Loss{}};
    double delta = 5.0;
    double phi = 0.3;
    GridSettings grid;
};

struct FamilySweepConfig {
    int photons = 6;
    std::vector<Loss> losses{Loss{}};
    std::vector<double> deltas = default_delta_grid();
    double phi = 0.3;
    double cutoff_tolerance = 1e-3;
    GridSettings grid;
};

/// Upsilon and Sigma^2 against Delta for each state and eta.
SweepTable sweep_delta(const DeltaSweepConfig& config);

/// Upsilon and Sigma^2 against N at fixed Delta for ghb(k, N-k) families and N00N.
SweepTable sweep_photon_number(const PhotonSweepConfig& config);

struct FamilySweep {
    SweepTable table;
    std::vector<CutoffRow> cutoffs;
};

/// Delta sweep over all partitions ghb(n, N-n), n = 0..floor(N/2), with Delta_cutoff.
FamilySweep sweep_family(const FamilySweepConfig& config);

/// Worker count: FOCKFISHER_THREADS when set, else hardware concurrency.
unsigned worker_count();

}  // namespace fockfisher
