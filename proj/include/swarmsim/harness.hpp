#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "swarmsim/algorithms.hpp"
#include "swarmsim/error_models.hpp"
#include "swarmsim/geometry.hpp"
#include "swarmsim/random.hpp"
#include "swarmsim/robot.hpp"
#include "swarmsim/scheduler.hpp"
#include "swarmsim/termination.hpp"

namespace swarmsim {

inline constexpr int kConfigVersion = 1;

struct Box {
    double xmin = -1.0;
    double ymin = -1.0;
    double xmax = 1.0;
    double ymax = 1.0;
};

enum class PlacementKind { UnitCirclePair, UniformBox, FixedPairPlusRandom, GridSweep, Explicit };

std::string_view to_string(PlacementKind k);
PlacementKind placement_kind_from_string(std::string_view s);

/// Initial positions. FixedPairPlusRandom and GridSweep pin r1 = (-0.5, 0)
/// and r2 = (0.5, 0); GridSweep puts r3 on cell (index mod nx*ny) of a
/// regular grid over `box` and draws any further robots in `extra_box`.
struct PlacementRule {
    PlacementKind kind = PlacementKind::UnitCirclePair;
    Box box{-1.5, -1.5, 1.5, 1.5};
    std::size_t grid_nx = 1000;
    std::size_t grid_ny = 1000;
    Box extra_box{-1.5, -1.5, 1.5, 1.5};
    std::vector<Point2> points;
};

enum class FrameMode { Random, Identity };

/// Whether repeated input sets end a run. Auto: on for gathering
/// algorithms, off for convergence algorithms (whose fuel runs are measured
/// to convergence under the randomized scheduler).
enum class CycleDetection { Auto, On, Off };

struct TerminationConfig {
    std::uint64_t max_iterations = 10000;
    ConvergenceThresholds convergence;
    double divergence_factor = 10.0;
    CycleDetection cycle_detection = CycleDetection::Auto;
    // A gathering defeat is reported only after the cycle's schedule
    // segment, replayed this many times on a copy of the run, keeps
    // returning to the repeated key without gathering. 0 reports at once.
    int defeat_confirmations = 3;
};

struct ScenarioConfig {
    int version = kConfigVersion;
    AlgorithmConfig algorithm;
    std::size_t robots = 2;
    SchedulerConfig scheduler;
    VisionErrorSpec vision;
    CompassErrorSpec compass;
    FrameMode frames = FrameMode::Random;
    bool redraw_frames_per_look = false;
    PlacementRule placement;
    TerminationConfig termination;
    std::uint64_t seed = 0;
    std::uint64_t runs = 1000;
    std::optional<double> budget_seconds;

    /// Throws ConfigError describing the first problem found.
    void validate() const;
};

/// Positions only.
std::vector<Point2> sample_positions(const PlacementRule& rule, std::size_t n, RandomStream& rng,
                                     std::uint64_t point_index = 0);

/// Full initial network: positions per the rule, frames, colours, compass
/// offsets and (for DrawAt::Init) per-pair error draws.
std::vector<RobotState> sample_initial(const ScenarioConfig& config, const Algorithm& algorithm,
                                       RandomStream& rng, std::uint64_t point_index = 0);

/// The algorithm configuration with scenario-level settings folded in (the
/// election algorithms learn the vision model from the scenario).
AlgorithmConfig resolved_algorithm_config(const ScenarioConfig& config);

/// Fuel unit: initial distance for pairs, sum of distances to the initial
/// centre of gravity otherwise.
double fuel_baseline(std::span<const Point2> initial);

enum class ElectionClass { Valid, DetectedPossibleError, UndetectedError };

std::string_view to_string(ElectionClass c);
ElectionClass election_class_from_string(std::string_view s);

struct RunOutcome {
    std::uint64_t run_index = 0;
    std::uint64_t run_seed = 0;
    Verdict verdict;
    std::vector<double> traveled;
    double total_traveled = 0.0;
    double baseline = 0.0;
    double normalized_fuel = 0.0;
    std::uint64_t steps = 0;
    std::optional<ElectionClass> election_class;
    /// Scheduler decisions as activation bitmasks (bit i = robot i), kept
    /// so defeats can be written out as replayable witnesses.
    std::vector<std::uint64_t> schedule;
};

struct RunHooks {
    std::function<void(const Simulation&, const StepRecord&)> on_step;
};

/// Deterministic in (config, run_seed). Hooks may run concurrently when
/// called from run_batch.
RunOutcome run_single(const ScenarioConfig& config, std::uint64_t run_seed, const RunHooks& hooks = {});

struct AggregateStats {
    std::uint64_t runs = 0;
    std::uint64_t fuel_runs = 0;  // runs contributing to the fuel columns
    double min_fuel = 0.0;
    double max_fuel = 0.0;
    double avg_fuel = 0.0;
    double divergence_fraction = 0.0;
    double avg_steps = 0.0;
    std::map<std::string, std::uint64_t> verdicts;  // "VICTORY:convergence" -> count
    std::map<std::string, double> election_fractions;
    std::uint64_t master_seed = 0;
    double wall_seconds = 0.0;
};

struct BatchResult {
    AggregateStats stats;
    std::vector<RunOutcome> outcomes;  // index order; filled when keep_outcomes
};

/// Runs config.runs runs (or as many as fit in budget_seconds) over
/// `parallelism` workers. Run i uses derive_seed(config.seed, i), so the
/// statistics do not depend on the worker count. Throws ContractViolation
/// when nothing would run.
BatchResult run_batch(const ScenarioConfig& config, unsigned parallelism, bool keep_outcomes = false,
                      const RunHooks& hooks = {});

// ---------------------------------------------------------------------------
// Named experiments

struct ElectionPoint {
    std::uint64_t index = 0;
    Point2 position;  // the last (randomly placed) robot
    ElectionClass cls = ElectionClass::Valid;
    std::vector<std::size_t> leaders;  // per robot, network index; kNoRobot when none
};

struct ElectionSummary {
    std::uint64_t points = 0;
    std::uint64_t valid = 0;
    std::uint64_t detected = 0;
    std::uint64_t undetected = 0;

    double fraction(ElectionClass c) const;
};

/// One election round per point: every robot looks with its own
/// independent perception errors and computes. Point k reuses the same
/// placement and perception draws whatever nb_tries is, so classifications
/// for different nb_tries are matched.
ElectionSummary election_experiment(const ScenarioConfig& config, std::uint64_t points,
                                    const std::function<void(const ElectionPoint&)>& sink = {},
                                    unsigned parallelism = 1);

struct CurvePoint {
    int nb_tries = 0;
    ElectionSummary summary;
};

std::vector<CurvePoint> election_curve(const ScenarioConfig& config, int max_tries, std::uint64_t points,
                                       unsigned parallelism = 1);

struct PathologyResult {
    std::uint64_t attempts = 0;
    std::uint64_t stuck_mover_r1 = 0;
    std::uint64_t stuck_mover_r2 = 0;
    double fraction_mover_r1() const { return attempts ? double(stuck_mover_r1) / attempts : 0.0; }
    double fraction_mover_r2() const { return attempts ? double(stuck_mover_r2) / attempts : 0.0; }
};

/// r1 = (U[0,1], 0), r2 = (U[2,3], 0); one robot repeatedly moves to the
/// midpoint while the other stays. Counts runs ending in a float-stuck
/// convergence defeat instead of exact gathering.
PathologyResult float_pathology_experiment(std::uint64_t attempts, std::uint64_t seed,
                                           unsigned parallelism = 1);

/// Outcome of one pathology attempt; exposed for tests.
struct PathologyAttempt {
    bool float_stuck = false;
    std::uint64_t steps = 0;
    Point2 r1;
    Point2 r2;
};
PathologyAttempt float_pathology_attempt(double r1x, double r2x, bool mover_is_r1);

// ---------------------------------------------------------------------------
// Witness replay

struct WitnessFile {
    ScenarioConfig config;
    std::uint64_t run_seed = 0;
    Witness witness;
    std::vector<std::uint64_t> schedule;  // steps 1..t1
};

struct ReplayReport {
    bool reproduced = false;        // keys at t0 and t1 match after replay
    int loops_confirmed = 0;        // cycle repetitions returning to the t0 key
    bool gathered_during_loop = false;
    std::vector<TraceRecord> trace;
};

/// Replays steps 1..t1, then repeats the (t0, t1] segment `repetitions`
/// times, checking the joint key returns to its t0 value each time.
ReplayReport replay_witness(const WitnessFile& file, int repetitions = 3);

/// Resolved cycle detection for a config.
bool cycle_detection_enabled(const ScenarioConfig& config, const Algorithm& algorithm);

}  // namespace swarmsim
