#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "swarmsim/algorithms.hpp"
#include "swarmsim/error_models.hpp"
#include "swarmsim/random.hpp"
#include "swarmsim/robot.hpp"

namespace swarmsim {

enum class SchedulerKind { FSYNC, SSYNC, ASYNC };

std::string_view to_string(SchedulerKind k);
SchedulerKind scheduler_kind_from_string(std::string_view s);

struct SchedulerConfig {
    SchedulerKind kind = SchedulerKind::ASYNC;
    Rigidity rigidity;
    AsyncPerception async_perception = AsyncPerception::Initial;
    NonRigidAdversary non_rigid_adversary = NonRigidAdversary::Uniform;

    /// Throws ConfigError when non-rigid with delta <= 0.
    void validate() const;
};

enum class Operation : std::uint8_t { Look, Compute, Move };

struct StepRecord {
    std::uint64_t step = 0;
    std::vector<std::size_t> activated;  // network indices
    std::vector<std::pair<std::size_t, Operation>> operations;  // execution order
    std::vector<double> traveled;  // per robot, this step only
};

/// The robots the scheduler hands the next step to. FSYNC: everyone;
/// SSYNC: a nonempty subset running one full cycle; ASYNC: exactly one
/// robot running its next phase.
struct ScheduleDecision {
    std::vector<std::size_t> robots;
};

/// Per-run random streams, split so that a scripted schedule replays with
/// identical perception and motion randomness.
struct RunStreams {
    RandomStream schedule;
    RandomStream perception;
    RandomStream motion;
    RandomStream compute;

    static RunStreams from_seed(std::uint64_t run_seed);
};

struct PerceptionSettings {
    VisionErrorSpec vision;
    bool redraw_frames_per_look = false;
};

/// One network driven by one algorithm under one scheduler. Copyable, so a
/// run can be forked for exhaustive expansion.
class Simulation {
public:
    Simulation(std::vector<RobotState> network, const Algorithm& algorithm, SchedulerConfig scheduler,
               PerceptionSettings perception, RunStreams streams);

    /// Random decision per the scheduler kind, then apply() it.
    StepRecord step();
    ScheduleDecision draw_decision();
    StepRecord apply(const ScheduleDecision& decision);

    const std::vector<RobotState>& network() const { return network_; }
    std::vector<RobotState>& mutable_network() { return network_; }
    const Algorithm& algorithm() const { return *algorithm_; }
    const SchedulerConfig& scheduler() const { return scheduler_; }
    const PerceptionSettings& perception() const { return perception_; }
    std::uint64_t steps() const { return steps_; }
    const std::vector<double>& cumulative_traveled() const { return traveled_; }
    double total_traveled() const;

    /// Set when a COMPUTE in the latest step asked to move but the global
    /// target rounded back onto the robot's own position.
    bool stuck_in_last_step() const { return stuck_last_step_; }
    /// Set when some robot moved a nonzero distance in the latest step.
    bool moved_in_last_step() const { return moved_last_step_; }

    // Single phases, exposed for tests and scripted experiments.
    void look(std::size_t i);
    void compute(std::size_t i);
    double move(std::size_t i);

private:
    std::vector<RobotState> network_;
    const Algorithm* algorithm_;
    SchedulerConfig scheduler_;
    PerceptionSettings perception_;
    RunStreams streams_;
    std::uint64_t steps_ = 0;
    std::vector<double> traveled_;
    bool stuck_last_step_ = false;
    bool moved_last_step_ = false;
};

/// Uniform nonempty subset of {0..n-1}.
std::vector<std::size_t> draw_nonempty_subset(std::size_t n, RandomStream& rng);

inline std::size_t default_fairness_window(std::size_t n) { return 10 * n * 3; }

/// True iff no robot went more than `window` consecutive steps without
/// being activated.
bool fairness_guard(std::span<const StepRecord> trace, std::size_t n, std::size_t window);

}  // namespace swarmsim
