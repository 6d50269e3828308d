#include "fockfisher/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <variant>

namespace fockfisher {

ProbeState StateSpec::build() const {
    switch (family) {
    case StateFamily::hb:
        return hb_state(photons);
    case StateFamily::noon:
        return noon_state(photons);
    case StateFamily::ghb:
        break;
    }
    return ghb_state(photons, input_a);
}

std::string StateSpec::label() const { return build().label(); }

QuadGrid GridSettings::build(int photons) const {
    return make_grid(half_width.value_or(default_half_width(photons)), points);
}

FisherPair evaluate(const ScenarioConfig& config) {
    const ProbeState state = config.state.build();
    const BlockedDensity rho =
        encode(state, config.phi, config.delta, config.eta_a, config.eta_b);
    return evaluate_fisher(rho, config.grid.build(state.total_photons), config.environment);
}

namespace {

double normalized_offdiagonal(const Eigen::Matrix2d& F) {
    const double scale = std::sqrt(std::abs(F(0, 0) * F(1, 1)));
    if (scale == 0.0)
        return F(0, 1) == 0.0 ? 0.0 : INFINITY;
    return std::abs(F(0, 1)) / scale;
}

}  // namespace

bool correlated_estimators(const FisherPair& pair) {
    return normalized_offdiagonal(pair.classical) > kOffDiagonalTolerance ||
           normalized_offdiagonal(pair.quantum) > kOffDiagonalTolerance;
}

double tradeoff_upsilon(const FisherPair& pair) {
    require_invertible(pair.quantum);
    if (correlated_estimators(pair))
        return (pair.classical * pair.quantum.inverse()).trace();
    return pair.classical(0, 0) / pair.quantum(0, 0) + pair.classical(1, 1) / pair.quantum(1, 1);
}

long double qcr_sum(const FisherPair& pair) {
    require_invertible(pair.quantum);
    const long double inv_scale = std::exp(-static_cast<long double>(pair.log_scale));
    return inv_scale * (1.0L / pair.quantum(0, 0) + 1.0L / pair.quantum(1, 1));
}

long double hcr_unit_cost(const FisherPair& pair) {
    const double scaled = hcr_bound(Eigen::Matrix2d::Identity(), pair.quantum, pair.commutator_trace);
    return std::exp(-static_cast<long double>(pair.log_scale)) * scaled;
}

double sensitivity_gain(double upsilon_test, double upsilon_baseline) {
    if (upsilon_baseline == 0.0)
        throw std::invalid_argument("sensitivity gain against a zero baseline");
    if (!(upsilon_test > 0.0) || !(upsilon_baseline > 0.0))
        throw std::invalid_argument("sensitivity gain needs positive trade-off values");
    return 100.0 * (upsilon_test / upsilon_baseline - 1.0);
}

std::optional<double> find_delta_cutoff(std::span<const double> deltas,
                                        std::span<const double> upsilon, double reference,
                                        double tol) {
    if (deltas.size() != upsilon.size())
        throw std::invalid_argument("cutoff search: Delta and Upsilon lengths differ");
    if (!(tol > 0.0))
        throw std::invalid_argument("cutoff tolerance must be positive");
    std::optional<double> cutoff;
    // Walk down from the largest Delta while the curve stays saturated.
    for (std::size_t i = deltas.size(); i-- > 0;) {
        if (std::abs(upsilon[i] - reference) >= tol * std::abs(reference))
            break;
        cutoff = deltas[i];
    }
    return cutoff;
}

std::optional<double> find_delta_cutoff(const ScenarioConfig& base,
                                        std::span<const double> deltas, double tol) {
    std::vector<double> sorted(deltas.begin(), deltas.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> values;
    values.reserve(sorted.size());
    ScenarioConfig c = base;
    for (double d : sorted) {
        c.delta = d;
        values.push_back(tradeoff_upsilon(evaluate(c)));
    }
    c.delta = kSaturationDelta;
    const double reference = tradeoff_upsilon(evaluate(c));
    return find_delta_cutoff(sorted, values, reference, tol);
}

std::vector<double> default_delta_grid() {
    std::vector<double> grid;
    const int count = 60;
    const double lo = std::log(kMinSweepDelta), hi = std::log(5.0);
    for (int i = 0; i < count; ++i)
        grid.push_back(std::exp(lo + (hi - lo) * i / (count - 1)));
    grid.back() = 5.0;
    for (double anchor : {0.6, 1.2, 5.0})
        grid.push_back(anchor);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               grid.end());
    return grid;
}

SweepRow make_row(const ScenarioConfig& config, const FisherPair& pair) {
    SweepRow row;
    const ProbeState state = config.state.build();
    row.label = state.label();
    row.photons = state.total_photons;
    row.input_a = state.input_a;
    row.partition = state.partition();
    row.delta = config.delta;
    row.eta_a = config.eta_a;
    row.eta_b = config.eta_b;
    row.upsilon = tradeoff_upsilon(pair);
    row.sigma2 = qcr_sum(pair);
    row.hcr = hcr_unit_cost(pair);
    row.fc_phase = pair.absolute(pair.classical(0, 0));
    row.fc_diffusion = pair.absolute(pair.classical(1, 1));
    row.fq_phase = pair.absolute(pair.quantum(0, 0));
    row.fq_diffusion = pair.absolute(pair.quantum(1, 1));
    if (correlated_estimators(pair))
        row.flags = "offdiag";
    return row;
}

unsigned worker_count() {
    if (const char* env = std::getenv("FOCKFISHER_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0)
            return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SweepTable run_scenarios(const std::vector<ScenarioConfig>& scenarios) {
    using Outcome = std::variant<SweepRow, SkippedPoint>;
    std::vector<Outcome> outcomes(scenarios.size());
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++) {
            const ScenarioConfig& c = scenarios[i];
            try {
                outcomes[i] = make_row(c, evaluate(c));
            } catch (const SingularFisherError& e) {
                outcomes[i] = SkippedPoint{c.state.label(), c.delta, c.eta_a, c.eta_b, e.what()};
            }
        }
    };

    const unsigned threads =
        static_cast<unsigned>(std::min<std::size_t>(worker_count(), scenarios.size()));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(work);
    }

    SweepTable table;
    for (Outcome& o : outcomes) {
        if (auto* row = std::get_if<SweepRow>(&o))
            table.rows.push_back(std::move(*row));
        else
            table.skipped.push_back(std::get<SkippedPoint>(std::move(o)));
    }
    return table;
}

SweepTable sweep_delta(const DeltaSweepConfig& config) {
    std::vector<ScenarioConfig> scenarios;
    for (const Loss& loss : config.losses)
        for (const StateSpec& s : config.states)
            for (double d : config.deltas)
                scenarios.push_back({s, config.phi, d, loss.eta_a, loss.eta_b, config.grid});
    return run_scenarios(scenarios);
}

SweepTable sweep_photon_number(const PhotonSweepConfig& config) {
    std::vector<ScenarioConfig> scenarios;
    for (const Loss& loss : config.losses) {
        for (int k : config.families)
            for (int N = std::max(config.min_photons, std::max(k, 1)); N <= config.max_photons; ++N)
                scenarios.push_back({StateSpec::ghb(k, N), config.phi, config.delta, loss.eta_a,
                                     loss.eta_b, config.grid});
        if (config.include_noon)
            for (int N = std::max(config.min_photons, 1); N <= config.max_photons; ++N)
                scenarios.push_back({StateSpec::noon(N), config.phi, config.delta, loss.eta_a,
                                     loss.eta_b, config.grid});
    }
    return run_scenarios(scenarios);
}

FamilySweep sweep_family(const FamilySweepConfig& config) {
    std::vector<double> deltas = config.deltas;
    std::sort(deltas.begin(), deltas.end());

    std::vector<ScenarioConfig> scenarios;
    std::vector<ScenarioConfig> references;
    for (const Loss& loss : config.losses)
        for (int n = 0; n <= config.photons / 2; ++n) {
            const StateSpec s = StateSpec::ghb(n, config.photons);
            for (double d : deltas)
                scenarios.push_back({s, config.phi, d, loss.eta_a, loss.eta_b, config.grid});
            references.push_back(
                {s, config.phi, kSaturationDelta, loss.eta_a, loss.eta_b, config.grid});
        }

    FamilySweep out;
    out.table = run_scenarios(scenarios);
    const SweepTable refs = run_scenarios(references);

    for (const SweepRow& ref : refs.rows) {
        std::vector<double> ds, ups;
        for (const SweepRow& r : out.table.rows)
            if (r.label == ref.label && r.eta_a == ref.eta_a && r.eta_b == ref.eta_b) {
                ds.push_back(r.delta);
                ups.push_back(r.upsilon);
            }
        out.cutoffs.push_back({ref.label, ref.photons, ref.input_a, ref.partition, ref.eta_a,
                               ref.eta_b,
                               find_delta_cutoff(ds, ups, ref.upsilon, config.cutoff_tolerance)});
    }
    return out;
}

}  // namespace fockfisher
