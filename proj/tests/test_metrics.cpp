#include <doctest.h>

#include <cmath>

#include "fockfisher/metrics.hpp"

using namespace fockfisher;

namespace {

FisherPair pair_of(Eigen::Matrix2d fc, Eigen::Matrix2d fq, double log_scale = 0.0) {
    FisherPair p;
    p.classical = fc;
    p.quantum = fq;
    p.log_scale = log_scale;
    return p;
}

Eigen::Matrix2d diag(double a, double b) { return (Eigen::Matrix2d() << a, 0, 0, b).finished(); }

double upsilon(StateSpec s, double delta, double eta) {
    ScenarioConfig c;
    c.state = s;
    c.delta = delta;
    c.eta_a = c.eta_b = eta;
    return tradeoff_upsilon(evaluate(c));
}

}  // namespace

TEST_CASE("trade-off quantity") {
    CHECK(tradeoff_upsilon(pair_of(diag(1, 2), diag(2, 4))) == doctest::Approx(1.0));
    CHECK(tradeoff_upsilon(pair_of(diag(2, 4), diag(2, 4))) == doctest::Approx(2.0));
    // correlated: full trace of F_C F_Q^-1
    Eigen::Matrix2d fc;
    fc << 1.0, 0.5, 0.5, 1.0;
    const FisherPair p = pair_of(fc, diag(2, 2));
    CHECK(correlated_estimators(p));
    CHECK(tradeoff_upsilon(p) == doctest::Approx(1.0));
    Eigen::Matrix2d fq;
    fq << 2.0, 1.0, 1.0, 2.0;
    CHECK(tradeoff_upsilon(pair_of(fc, fq)) == doctest::Approx((fc * fq.inverse()).trace()));
    CHECK_THROWS_AS(tradeoff_upsilon(pair_of(diag(1, 0), diag(1, 0))), SingularFisherError);
}

TEST_CASE("QCR sum in absolute units") {
    CHECK(static_cast<double>(qcr_sum(pair_of(diag(1, 1), diag(4, 5)))) == doctest::Approx(0.45));
    // stored values divided by e^-900
    const long double big = qcr_sum(pair_of(diag(1, 1), diag(2, 2), -900.0));
    CHECK(static_cast<double>(std::log(big)) == doctest::Approx(900.0));
    CHECK(static_cast<double>(hcr_unit_cost(pair_of(diag(1, 1), diag(4, 5)))) ==
          doctest::Approx(0.45));
}

TEST_CASE("sensitivity gain") {
    CHECK(sensitivity_gain(1.4497, 1.0) == doctest::Approx(44.97));
    CHECK(sensitivity_gain(0.5, 0.25) == doctest::Approx(100.0));
    CHECK_THROWS(sensitivity_gain(1.0, 0.0));
}

TEST_CASE("cutoff search on synthetic curves") {
    const std::vector<double> d{0.5, 1.0, 1.5, 2.0, 2.5};
    CHECK(find_delta_cutoff(d, std::vector<double>{0.5, 0.9, 1.0, 1.0, 1.0}, 1.0).value() == 1.5);
    // a dip after the first saturated point pushes the cutoff right
    CHECK(find_delta_cutoff(d, std::vector<double>{1.0, 1.0, 0.9, 1.0, 1.0}, 1.0).value() == 2.0);
    CHECK_FALSE(find_delta_cutoff(d, std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5}, 1.0).has_value());
    CHECK(find_delta_cutoff(d, std::vector<double>{1.0, 1.0, 1.0, 1.0, 1.0005}, 1.0).value() == 0.5);
    CHECK_THROWS(find_delta_cutoff(d, std::vector<double>{1.0}, 1.0));
}

TEST_CASE("default Delta grid") {
    const std::vector<double> g = default_delta_grid();
    CHECK(g.front() == doctest::Approx(0.02));
    CHECK(g.back() == 5.0);
    CHECK(std::is_sorted(g.begin(), g.end()));
    for (double anchor : {0.6, 1.2})
        CHECK(std::find(g.begin(), g.end(), anchor) != g.end());
    CHECK(g.size() == 62);
}

TEST_CASE("QCR ceiling and qubit bound over a sweep") {
    DeltaSweepConfig c;
    c.states = {StateSpec::ghb(0, 1), StateSpec::ghb(0, 4), StateSpec::hb(4), StateSpec::noon(4),
                StateSpec::ghb(1, 4)};
    c.losses = {Loss::symmetric(1.0), Loss::symmetric(0.5), Loss{0.9, 0.4}};
    c.deltas = {0.05, 0.3, 1.0, 2.5, 5.0};
    const SweepTable t = sweep_delta(c);
    CHECK(t.rows.size() == 75);
    CHECK(t.skipped.empty());
    for (const SweepRow& r : t.rows) {
        CHECK(r.upsilon <= 2.0 + 1e-9);
        if (r.photons == 1)
            CHECK(r.upsilon <= 1.0 + 1e-6);
    }
}

TEST_CASE("violation grows with N for ghb(0,N)") {
    double prev = 0.0;
    for (int N = 2; N <= 6; ++N) {
        const double u = upsilon(StateSpec::ghb(0, N), 5.0, 1.0);
        CHECK(u > prev);
        prev = u;
    }
}

TEST_CASE("partition dominance at N = 6") {
    for (double eta : {1.0, 0.5}) {
        const double top = upsilon(StateSpec::ghb(0, 6), 5.0, eta);
        for (int n = 1; n <= 5; ++n)
            CHECK(upsilon(StateSpec::ghb(n, 6), 5.0, eta) < top);
        // |6,0> is the mirror image of |0,6>
        CHECK(upsilon(StateSpec::ghb(6, 6), 5.0, eta) == doctest::Approx(top).epsilon(1e-9));
    }
}

TEST_CASE("singular points are skipped, not fatal") {
    DeltaSweepConfig c;
    c.states = {StateSpec::ghb(0, 2)};
    c.deltas = {0.0, 1.0};
    const SweepTable t = sweep_delta(c);
    CHECK(t.rows.size() == 1);
    REQUIRE(t.skipped.size() == 1);
    CHECK(t.skipped[0].delta == 0.0);
    CHECK(t.skipped[0].reason.find("F_Q[Delta,Delta]") != std::string::npos);
}

TEST_CASE("photon sweep layout") {
    PhotonSweepConfig c;
    c.families = {0, 3};
    c.max_photons = 5;
    c.grid.points = 201;
    const SweepTable t = sweep_photon_number(c);
    // k=0: N=1..5, k=3: N=3..5, noon: N=1..5
    CHECK(t.rows.size() == 13);
    CHECK(t.rows.front().label == "ghb(0,1)");
    CHECK(t.rows.back().label == "noon(5)");
}

TEST_CASE("family sweep reports a cutoff per partition") {
    FamilySweepConfig c;
    c.photons = 4;
    c.deltas = {0.5, 1.0, 2.0, 3.0, 4.0, 5.0};
    c.grid.points = 301;
    const FamilySweep f = sweep_family(c);
    REQUIRE(f.cutoffs.size() == 3);
    CHECK(f.table.rows.size() == 18);
    for (const CutoffRow& r : f.cutoffs) {
        REQUIRE(r.cutoff.has_value());
        CHECK(*r.cutoff <= 5.0);
    }
}

TEST_CASE("results do not depend on the worker count") {
    DeltaSweepConfig c;
    c.states = {StateSpec::ghb(0, 3), StateSpec::noon(3)};
    c.deltas = {0.4, 1.4};
    c.grid.points = 101;
    setenv("FOCKFISHER_THREADS", "1", 1);
    const SweepTable a = sweep_delta(c);
    setenv("FOCKFISHER_THREADS", "3", 1);
    CHECK(worker_count() == 3);
    const SweepTable b = sweep_delta(c);
    unsetenv("FOCKFISHER_THREADS");
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].label == b.rows[i].label);
        CHECK(a.rows[i].upsilon == b.rows[i].upsilon);
        CHECK(a.rows[i].sigma2 == b.rows[i].sigma2);
    }
}
