#include <doctest.h>

#include <cmath>
#include <set>

#include "swarmsim/errors.hpp"
#include "swarmsim/harness.hpp"

using namespace swarmsim;
using doctest::Approx;

namespace {

ScenarioConfig scenario(const std::string& alg, SchedulerKind k, std::size_t robots = 2) {
    ScenarioConfig c;
    c.algorithm.id = alg;
    c.scheduler.kind = k;
    c.robots = robots;
    c.seed = 77;
    c.runs = 200;
    return c;
}

}  // namespace

TEST_CASE("placements") {
    RandomStream rng(1);
    PlacementRule pair;
    for (int i = 0; i < 1000; ++i) {
        const auto p = sample_positions(pair, 2, rng);
        CHECK(p[0] == Point2{0, 0});
        CHECK(distance(p[0], p[1]) == Approx(1.0).epsilon(1e-15));
    }

    PlacementRule box;
    box.kind = PlacementKind::UniformBox;
    box.box = {0, 0, 2, 1};
    for (int i = 0; i < 1000; ++i)
        for (Point2 p : sample_positions(box, 5, rng)) {
            CHECK((p.x >= 0 && p.x <= 2 && p.y >= 0 && p.y <= 1));
        }

    PlacementRule fixed;
    fixed.kind = PlacementKind::FixedPairPlusRandom;
    const auto f = sample_positions(fixed, 3, rng);
    CHECK(f[0] == Point2{-0.5, 0});
    CHECK(f[1] == Point2{0.5, 0});

    PlacementRule grid;
    grid.kind = PlacementKind::GridSweep;
    grid.box = {0, 0, 1, 1};
    grid.grid_nx = 2;
    grid.grid_ny = 2;
    std::set<std::pair<double, double>> cells;
    for (std::uint64_t k = 0; k < 4; ++k) {
        const auto g = sample_positions(grid, 3, rng, k);
        cells.insert({g[2].x, g[2].y});
    }
    CHECK(cells == std::set<std::pair<double, double>>{{0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}});

    PlacementRule exp;
    exp.kind = PlacementKind::Explicit;
    exp.points = {{1, 2}, {3, 4}};
    CHECK(sample_positions(exp, 2, rng) == exp.points);
}

TEST_CASE("initial network") {
    auto c = scenario("fec", SchedulerKind::ASYNC);
    const auto a = make_algorithm(resolved_algorithm_config(c));
    RandomStream rng(2);
    const auto net = sample_initial(c, *a, rng);
    REQUIRE(net.size() == 2);
    CHECK(net[0].name == 1);
    CHECK(net[1].name == 2);
    CHECK(net[0].color == kWhite);
    CHECK(net[0].phase == Phase::Idle);

    c.frames = FrameMode::Identity;
    for (const auto& r : sample_initial(c, *a, rng)) {
        CHECK(r.frame.rotation() == 0.0);
        CHECK_FALSE(r.frame.reflect());
    }
}

TEST_CASE("fuel baseline") {
    const std::vector<Point2> pair{{0, 0}, {3, 4}};
    CHECK(fuel_baseline(pair) == 5.0);
    const std::vector<Point2> tri{{0, 0}, {3, 0}, {0, 3}};
    CHECK(fuel_baseline(tri) == Approx(std::sqrt(2.0) + 2 * std::sqrt(5.0)));
}

TEST_CASE("midpoint under FSYNC spends exactly one unit of fuel") {
    auto c = scenario("midpoint", SchedulerKind::FSYNC);
    c.frames = FrameMode::Identity;
    const auto b = run_batch(c, 1);
    CHECK(b.stats.verdicts.at("VICTORY:gathering") == c.runs);
    CHECK(b.stats.min_fuel == Approx(1.0).epsilon(1e-12));
    CHECK(b.stats.max_fuel == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("midpoint under SSYNC is defeated by a witness") {
    auto c = scenario("midpoint", SchedulerKind::SSYNC);
    std::uint64_t defeats = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const auto o = run_single(c, derive_seed(c.seed, i));
        if (o.verdict.kind == VerdictKind::Defeat) {
            ++defeats;
            REQUIRE(o.verdict.witness);
            CHECK(o.verdict.witness->t0 < o.verdict.witness->t1);
            CHECK(o.schedule.size() == o.verdict.witness->t1);
        }
    }
    CHECK(defeats > 0);
}

TEST_CASE("multiplicity midpoint under FSYNC wins at step 2") {
    auto c = scenario("midpoint_multiplicity", SchedulerKind::FSYNC);
    c.frames = FrameMode::Identity;
    for (std::uint64_t i = 0; i < 50; ++i) {
        const auto o = run_single(c, derive_seed(c.seed, i));
        CHECK(o.verdict.kind == VerdictKind::Victory);
        CHECK(o.verdict.reason == VerdictReason::Gathering);
        CHECK(o.steps == 2);
    }
}

TEST_CASE("random frames only perturb frame-invariant runs by rounding") {
    for (const char* id : {"midpoint", "cog", "fec"}) {
        for (auto k : {SchedulerKind::FSYNC, SchedulerKind::SSYNC, SchedulerKind::ASYNC}) {
            auto c = scenario(id, k, std::string(id) == "cog" ? 4 : 2);
            if (c.robots > 2) c.placement.kind = PlacementKind::UniformBox;
            c.termination.cycle_detection = CycleDetection::Off;
            c.termination.max_iterations = 40;
            for (std::uint64_t i = 0; i < 20; ++i) {
                std::vector<std::vector<Point2>> paths[2];
                for (int f = 0; f < 2; ++f) {
                    c.frames = f ? FrameMode::Identity : FrameMode::Random;
                    RunHooks h;
                    h.on_step = [&](const Simulation& sim, const StepRecord&) {
                        std::vector<Point2> snap;
                        for (const auto& r : sim.network()) snap.push_back(r.position);
                        paths[f].push_back(snap);
                    };
                    run_single(c, derive_seed(c.seed, i), h);
                }
                const std::size_t steps = std::min(paths[0].size(), paths[1].size());
                for (std::size_t t = 0; t < steps; ++t)
                    for (std::size_t r = 0; r < c.robots; ++r)
                        CHECK(distance(paths[0][t][r], paths[1][t][r]) <= 1e-9);
            }
        }
    }
}

TEST_CASE("FEC never wins a gathering verdict") {
    for (auto k : {SchedulerKind::FSYNC, SchedulerKind::SSYNC, SchedulerKind::ASYNC}) {
        auto c = scenario("fec", k);
        const auto b = run_batch(c, 1);
        CHECK(b.stats.verdicts.count("VICTORY:gathering") == 0);
        CHECK(b.stats.max_fuel <= 1.0 + 1e-9);
    }
}

TEST_CASE("batches do not depend on the worker count") {
    auto c = scenario("cog", SchedulerKind::ASYNC, 4);
    c.placement.kind = PlacementKind::UniformBox;
    c.vision.kind = VisionErrorKind::Absolute;
    c.vision.err = 0.01;
    c.runs = 100;
    const auto one = run_batch(c, 1, true);
    const auto four = run_batch(c, 4, true);
    CHECK(one.stats.avg_fuel == four.stats.avg_fuel);
    CHECK(one.stats.min_fuel == four.stats.min_fuel);
    CHECK(one.stats.verdicts == four.stats.verdicts);
    REQUIRE(one.outcomes.size() == four.outcomes.size());
    for (std::size_t i = 0; i < one.outcomes.size(); ++i) {
        CHECK(one.outcomes[i].run_index == i);
        CHECK(one.outcomes[i].total_traveled == four.outcomes[i].total_traveled);
    }
}

TEST_CASE("nothing to run") {
    auto c = scenario("cog", SchedulerKind::ASYNC);
    c.runs = 0;
    CHECK_THROWS(run_batch(c, 1));
}

TEST_CASE("configuration validation") {
    auto c = scenario("midpoint", SchedulerKind::FSYNC, 3);
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = scenario("teleport", SchedulerKind::FSYNC);
    CHECK_THROWS_AS(c.validate(), RegistryError);
    c = scenario("cog", SchedulerKind::FSYNC);
    c.vision.kind = VisionErrorKind::Absolute;
    c.vision.err = -1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = scenario("cog", SchedulerKind::FSYNC);
    c.version = 99;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = scenario("cog", SchedulerKind::FSYNC);
    c.placement.kind = PlacementKind::Explicit;
    c.placement.points = {{0, 0}, {0, 0}};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.placement.points = {{0, 0}, {1, 0}};
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("election without error is always valid") {
    auto c = scenario("reliable_election", SchedulerKind::FSYNC, 3);
    c.placement.kind = PlacementKind::FixedPairPlusRandom;
    const auto s = election_experiment(c, 5000);
    CHECK(s.points == 5000);
    CHECK(s.valid == 5000);
}

TEST_CASE("election points are matched across nb_tries") {
    auto c = scenario("reliable_election", SchedulerKind::FSYNC, 3);
    c.placement.kind = PlacementKind::FixedPairPlusRandom;
    c.vision.kind = VisionErrorKind::Absolute;
    c.vision.err = 0.01;
    std::vector<ElectionPoint> a, b;
    election_experiment(c, 500, [&](const ElectionPoint& p) { a.push_back(p); });
    c.algorithm.election.nb_tries = 3;
    election_experiment(c, 500, [&](const ElectionPoint& p) { b.push_back(p); });
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].position == b[i].position);
        // retries only ever turn silent errors into detected ones
        if (a[i].cls == ElectionClass::Valid) CHECK(b[i].cls != ElectionClass::UndetectedError);
    }
    const auto par = election_experiment(c, 500, {}, 3);
    ElectionSummary seq;
    for (const auto& p : b) {
        ++seq.points;
        if (p.cls == ElectionClass::Valid) ++seq.valid;
        if (p.cls == ElectionClass::DetectedPossibleError) ++seq.detected;
        if (p.cls == ElectionClass::UndetectedError) ++seq.undetected;
    }
    CHECK(par.valid == seq.valid);
    CHECK(par.undetected == seq.undetected);
}

TEST_CASE("float pathology attempts") {
    // Exact halving gathers when the gap is a power of two.
    auto exact = float_pathology_attempt(0.0, 2.0, true);
    CHECK_FALSE(exact.float_stuck);
    CHECK(exact.r1 == exact.r2);

    // A stuck attempt ends with the two robots on adjacent doubles.
    const auto res = float_pathology_experiment(2000, 5);
    CHECK(res.attempts == 2000);
    CHECK(res.stuck_mover_r1 > 0);
    RandomStream rng(derive_seed(5, 0));
    for (int i = 0; i < 200; ++i) {
        const double x1 = rng.uniform(0, 1), x2 = rng.uniform(2, 3);
        for (bool m : {true, false}) {
            const auto a = float_pathology_attempt(x1, x2, m);
            if (a.float_stuck) {
                CHECK(std::nextafter(a.r1.x, a.r2.x) == a.r2.x);
            } else {
                CHECK(a.r1 == a.r2);
            }
        }
    }
}

TEST_CASE("witness replay") {
    auto c = scenario("midpoint", SchedulerKind::SSYNC);
    for (std::uint64_t i = 0; i < 50; ++i) {
        const std::uint64_t seed = derive_seed(c.seed, i);
        const auto o = run_single(c, seed);
        if (o.verdict.kind != VerdictKind::Defeat) continue;
        WitnessFile w{c, seed, *o.verdict.witness, o.schedule};
        const auto rep = replay_witness(w, 3);
        CHECK(rep.reproduced);
        CHECK(rep.loops_confirmed == 3);
        CHECK_FALSE(rep.gathered_during_loop);
    }
}

TEST_CASE("cycle detection defaults") {
    auto c = scenario("midpoint", SchedulerKind::SSYNC);
    CHECK(cycle_detection_enabled(c, *make_algorithm(c.algorithm)));
    c = scenario("fec", SchedulerKind::SSYNC);
    CHECK_FALSE(cycle_detection_enabled(c, *make_algorithm(c.algorithm)));
    c.termination.cycle_detection = CycleDetection::On;
    CHECK(cycle_detection_enabled(c, *make_algorithm(c.algorithm)));
}
