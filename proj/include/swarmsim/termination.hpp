#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "swarmsim/algorithms.hpp"
#include "swarmsim/robot.hpp"
#include "swarmsim/scheduler.hpp"

namespace swarmsim {

struct TraceRecord {
    std::uint64_t step = 0;
    InputSetKey joint;
    double max_distance = 0.0;
    bool gathered = false;
    bool stuck = false;  // a move rounded back onto its own start
    std::vector<double> traveled;  // cumulative, per robot
};

/// Append-only record of the algorithm-relevant state after every step,
/// with an index so repeated joint keys are found in O(1).
class ExecutionTrace {
public:
    void append(TraceRecord record);

    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const TraceRecord& back() const { return records_.back(); }
    const TraceRecord& operator[](std::size_t i) const { return records_[i]; }
    std::span<const TraceRecord> records() const { return records_; }

    /// Positions (not steps) of the earliest / latest earlier occurrence of
    /// the newest record's key, if any.
    std::optional<std::size_t> first_occurrence_of_back() const;
    std::optional<std::size_t> previous_occurrence_of_back() const;
    /// Position of the earlier record with the same key as the newest one
    /// and the smallest positive inter-robot distance.
    std::optional<std::size_t> min_positive_occurrence_of_back() const;

    /// Latest position holding a non-gathered / stuck record, if any.
    std::optional<std::size_t> last_non_gathered() const { return last_non_gathered_; }
    std::optional<std::size_t> last_stuck() const { return last_stuck_; }

private:
    struct KeyIndex {
        std::size_t first = 0;
        std::size_t last = 0;
        std::optional<std::size_t> min_positive;
    };
    std::vector<TraceRecord> records_;
    std::unordered_map<std::string, KeyIndex> index_;
    // state of the newest key before the newest record was indexed
    std::optional<KeyIndex> back_prior_;
    std::optional<std::size_t> last_non_gathered_;
    std::optional<std::size_t> last_stuck_;
};

/// Per-robot input set, tagged with the robot's phase (and, once
/// computed, whether a real move is pending). Idle robots are keyed by an
/// error-free view of the current configuration.
InputSetKey robot_key(std::span<const RobotState> network, std::size_t i, const Algorithm& algorithm);

/// Per-robot keys concatenated in name order.
InputSetKey joint_key(std::span<const RobotState> network, const Algorithm& algorithm);

double max_pairwise_distance(std::span<const RobotState> network);
bool is_gathered(std::span<const RobotState> network);

/// Appends one record describing `sim` after its latest step.
void record(ExecutionTrace& trace, const Simulation& sim);

struct Witness {
    std::uint64_t t0 = 0;  // steps, t0 < t1, equal joint keys
    std::uint64_t t1 = 0;
    bool float_stuck = false;
};

/// The newest record repeats the key of an earlier record t0 and some
/// record after t0 is not gathered.
std::optional<Witness> gathering_defeat(const ExecutionTrace& trace);

struct VictoryCheck {
    bool victory = false;
    bool downgraded = false;  // infinite key space: convergence criterion used instead
};

struct ConvergenceThresholds {
    double absolute = 1e-10;
    double relative = 1e-10;
};

/// Current record gathered, its key seen before with only gathered records
/// since, and no scheduler choice from the current state ever leaves
/// gathered configurations (exhaustive, keyed by joint key, at most
/// `max_states` states).
VictoryCheck gathering_victory(const ExecutionTrace& trace, const Simulation& sim,
                               ConvergenceThresholds thresholds = {},
                               std::size_t max_states = 4096);

/// Repeated key with 0 < d(t0) <= d(t1).
std::optional<Witness> convergence_defeat(const ExecutionTrace& trace);

/// Max pairwise distance below max(absolute, relative x farthest robot
/// from the origin); exact coincidence always counts.
bool convergence_reached(std::span<const RobotState> network, ConvergenceThresholds thresholds = {});

/// Current max pairwise distance at least `factor` times the initial one.
bool divergence_detected(const ExecutionTrace& trace, double initial_distance, double factor = 10.0);
bool divergence_detected(double current_distance, double initial_distance, double factor = 10.0);

enum class VerdictKind { Victory, Defeat, Timeout };
enum class VerdictReason { None, Gathering, Convergence, Divergence, Election };

struct Verdict {
    VerdictKind kind = VerdictKind::Timeout;
    VerdictReason reason = VerdictReason::None;
    std::optional<Witness> witness;
};

std::string_view to_string(VerdictKind k);
std::string_view to_string(VerdictReason r);
VerdictKind verdict_kind_from_string(std::string_view s);
VerdictReason verdict_reason_from_string(std::string_view s);

}  // namespace swarmsim
