#include "dcflow/caseio.hpp"
#include "dcflow/energy.hpp"
#include "dcflow/harness.hpp"
#include "dcflow/monotone.hpp"
#include "dcflow/zbus.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "testutil.hpp"

#include <random>
#include <sstream>

using namespace dcflow;
using namespace testutil;

namespace {
const SolveOptions kOpts;

SolveOptions energy_opts() {
    SolveOptions o;
    o.tol = kEnergyDefaultTol;
    return o;
}
} // namespace

TEST_CASE("closed-form roots of the two-bus scenarios") {
    auto roots = oracle_single_pbus(derive(two_bus_a()));
    REQUIRE(roots.size() == 1); // the negative root is rejected
    CHECK(roots[0] == doctest::Approx(kRootA).epsilon(1e-12));

    roots = oracle_single_pbus(derive(two_bus_b()));
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(kRootB).epsilon(1e-12));

    roots = oracle_single_pbus(derive(two_bus_c()));
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(kRootC).epsilon(1e-12));

    roots = oracle_single_pbus(derive(two_bus_d()));
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(kRootD).epsilon(1e-12));
}

TEST_CASE("the quadratic oracle reports missing positive roots") {
    const DerivedModel m = derive(two_bus(2.0, 1.0, 0.0, 1.0)); // c=1, k=0, p=2
    CHECK_THROWS_WITH_AS(oracle_single_pbus(m), doctest::Contains("NoPositiveRoot"),
                         std::runtime_error);
}

TEST_CASE("multistart Newton finds exactly the positive roots") {
    const DerivedModel a = derive(two_bus_a());
    const auto roots = oracle_multistart(a, 100, 123);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0](0) == doctest::Approx(kRootA).epsilon(1e-9));

    Network lin = two_bus_a();
    lin.buses[1].zip.p0 = 0.0;
    const DerivedModel ml = derive(lin);
    const auto lin_roots = oracle_multistart(ml, 50, 7);
    REQUIRE(lin_roots.size() == 1);
    CHECK(lin_roots[0](0) == doctest::Approx(ml.d(0)).epsilon(1e-9));
}

TEST_CASE("every solver output appears in the multistart root set") {
    // three-bus chain with mixed generation and load
    Network net;
    net.buses.push_back(Bus::constant_voltage(0, 1.0));
    net.buses.push_back(Bus::zip_bus(1, {0.0, -0.5, 0.0}));
    net.buses.push_back(Bus::zip_bus(2, {0.2, 0.8, 0.1}));
    net.lines.push_back({0, 1, 8.0});
    net.lines.push_back({1, 2, 6.0});
    const DerivedModel m = derive(net);
    const auto roots = oracle_multistart(m, 200, 99);
    REQUIRE(!roots.empty());

    auto appears = [&](const Vec& v) {
        for (const Vec& r : roots)
            if ((r - v).lpNorm<Eigen::Infinity>() < 1e-5) return true;
        return false;
    };
    const ZbusSolve zb = solve_zbus(m, net.band, kOpts);
    if (zb.result.status == SolveStatus::Converged) CHECK(appears(zb.result.v));
    const SolveResult mono = solve_monotone(m, net.band, kOpts);
    if (mono.status == SolveStatus::Converged) CHECK(appears(mono.v));
    const SolveResult en = solve_energy(m, net.band, energy_opts());
    if (en.status == SolveStatus::Converged) CHECK(appears(en.v));
}

TEST_CASE("generator: smallest tree and meshed chord counts") {
    const Network two = generate_network(NetKind::Radial, 2, 1);
    CHECK(two.lines.size() == 1);
    CHECK_NOTHROW(validate(two));

    const Network meshed = generate_network(NetKind::Meshed, 8, 7);
    CHECK(meshed.lines.size() == 9); // 7 tree edges + ceil(8/4) chords
    CHECK_NOTHROW(validate(meshed));
}

TEST_CASE("generator determinism") {
    const Network x = generate_network(NetKind::Meshed, 15, 42);
    const Network y = generate_network(NetKind::Meshed, 15, 42);
    CHECK(case_to_json(x).dump() == case_to_json(y).dump());
    const Network z = generate_network(NetKind::Meshed, 15, 43);
    CHECK(case_to_json(x).dump() != case_to_json(z).dump());
}

TEST_CASE("method success honours each method's claim") {
    SolveResult r;
    r.status = SolveStatus::Converged;
    r.in_band = false;
    CHECK(method_succeeded(r, Method::ZBus));
    CHECK(method_succeeded(r, Method::EnergyFunction));
    CHECK_FALSE(method_succeeded(r, Method::Monotone));
    r.in_band = true;
    CHECK(method_succeeded(r, Method::Monotone));
    r.status = SolveStatus::Diverged;
    CHECK_FALSE(method_succeeded(r, Method::ZBus));
}

TEST_CASE("monte carlo rejects broken configs") {
    McConfig cfg;
    cfg.trials = 0;
    CHECK_THROWS_AS(run_monte_carlo(two_bus_a(), cfg), std::invalid_argument);
    cfg.trials = 1;
    cfg.iz_scale_range = {-1.0, 2.0};
    CHECK_THROWS_AS(run_monte_carlo(two_bus_a(), cfg), std::invalid_argument);
}

TEST_CASE("a degenerate single trial reproduces the light-generation scenario") {
    McConfig cfg;
    cfg.trials = 1;
    cfg.seed = 11;
    cfg.p_scale_range = {1.0, 1.0};
    cfg.iz_scale_range = {1.0, 1.0};
    const McSummary s = run_monte_carlo(two_bus_a(), cfg);
    CHECK(s.trials == 1);
    CHECK(s.agree_count == 1);
    CHECK(s.fail_count == 0);
    CHECK(s.contraction.cond_true_success == 1);
    CHECK(s.monotone_pair.cond_true_success == 1);
    CHECK(s.local_convexity.cond_true_success == 1);
    CHECK(s.worst_disagreement < 1e-5);
}

TEST_CASE("monte carlo is deterministic per seed") {
    McConfig cfg;
    cfg.trials = 24;
    cfg.seed = 5;
    cfg.p_scale_range = {-2.0, 2.0};
    cfg.iz_scale_range = {0.0, 2.0};
    const Network base = generate_network(NetKind::Radial, 6, 8);
    const auto s1 = run_monte_carlo(base, cfg);
    const auto s2 = run_monte_carlo(base, cfg);
    CHECK(mc_summary_to_json(s1).dump() == mc_summary_to_json(s2).dump());

    std::ostringstream csv1, csv2;
    cfg.trial_csv = &csv1;
    run_monte_carlo(base, cfg);
    cfg.trial_csv = &csv2;
    run_monte_carlo(base, cfg);
    CHECK(csv1.str() == csv2.str());
    CHECK(csv1.str().rfind("trial,", 0) == 0);
}

TEST_CASE("mild loading study on a small feeder") {
    McConfig cfg;
    cfg.trials = 400;
    cfg.seed = 1;
    cfg.p_scale_range = {0.0, 2.0};
    cfg.iz_scale_range = {0.0, 2.0};
    const Network base = generate_network(NetKind::Radial, 10, 3);
    const McSummary s = run_monte_carlo(base, cfg);
    CHECK(s.agree_count + s.fail_count == s.trials);
    CHECK(s.agree_count >= static_cast<int>(0.9 * s.trials));
    // the feasibility certificate is sound: no trial may fail under it
    CHECK(s.contraction.cond_true_fail == 0);
}

TEST_CASE("condition soundness under randomized loading") {
    // scaled copies of a meshed network: whenever the certificates hold, the
    // certified method must deliver
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> pscale(-3.0, 3.0);
    std::uniform_real_distribution<double> izscale(0.0, 3.0);
    const Network base = generate_network(NetKind::Meshed, 10, 13);
    int feasible_seen = 0;
    for (int rep = 0; rep < 60; ++rep) {
        Network net = base;
        for (Bus& b : net.buses)
            if (b.type == BusType::Zip) {
                b.zip.p0 *= pscale(rng);
                b.zip.i0 *= izscale(rng);
                b.zip.g0 *= izscale(rng);
            }
        const DerivedModel m = derive(net);
        const BallAnalysis ball = contraction_analysis(m, net.band, net.q);
        if (!ball.feasible) continue;
        ++feasible_seen;
        const ZbusSolve zb = solve_zbus(m, net.band, kOpts);
        REQUIRE(zb.result.status == SolveStatus::Converged);
        CHECK(vector_norm(zb.result.v - m.d, m.q) <= *ball.r_under + 1e-9);
    }
    CHECK(feasible_seen >= 10);
}
