#include "swarmsim/scheduler.hpp"

#include <numeric>
#include <string>

#include "swarmsim/errors.hpp"

namespace swarmsim {

std::string_view to_string(SchedulerKind k) {
    switch (k) {
        case SchedulerKind::FSYNC: return "FSYNC";
        case SchedulerKind::SSYNC: return "SSYNC";
        case SchedulerKind::ASYNC: return "ASYNC";
    }
    return "ASYNC";
}

SchedulerKind scheduler_kind_from_string(std::string_view s) {
    if (s == "FSYNC" || s == "fsync") return SchedulerKind::FSYNC;
    if (s == "SSYNC" || s == "ssync") return SchedulerKind::SSYNC;
    if (s == "ASYNC" || s == "async") return SchedulerKind::ASYNC;
    throw ConfigError("unknown scheduler '" + std::string(s) + "'");
}

void SchedulerConfig::validate() const {
    if (!rigidity.rigid && !(rigidity.delta > 0.0))
        throw ConfigError("non-rigid motion needs delta > 0");
}

RunStreams RunStreams::from_seed(std::uint64_t run_seed) {
    return {RandomStream(derive_seed(run_seed, 0, StreamId::Schedule)),
            RandomStream(derive_seed(run_seed, 0, StreamId::Perception)),
            RandomStream(derive_seed(run_seed, 0, StreamId::Motion)),
            RandomStream(derive_seed(run_seed, 0, StreamId::Compute))};
}

Simulation::Simulation(std::vector<RobotState> network, const Algorithm& algorithm,
                       SchedulerConfig scheduler, PerceptionSettings perception, RunStreams streams)
    : network_(std::move(network)),
      algorithm_(&algorithm),
      scheduler_(scheduler),
      perception_(perception),
      streams_(std::move(streams)),
      traveled_(network_.size(), 0.0) {
    if (network_.empty()) throw ContractViolation("simulation needs at least one robot");
    scheduler_.validate();
}

double Simulation::total_traveled() const {
    return std::accumulate(traveled_.begin(), traveled_.end(), 0.0);
}

std::vector<std::size_t> draw_nonempty_subset(std::size_t n, RandomStream& rng) {
    std::vector<std::size_t> out;
    if (n < 64) {
        // one draw over the 2^n - 1 nonempty masks
        const std::uint64_t mask = 1 + rng.below((std::uint64_t{1} << n) - 1);
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) out.push_back(i);
        return out;
    }
    do {
        out.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (rng.bernoulli(0.5)) out.push_back(i);
    } while (out.empty());
    return out;
}

ScheduleDecision Simulation::draw_decision() {
    const std::size_t n = network_.size();
    ScheduleDecision d;
    switch (scheduler_.kind) {
        case SchedulerKind::FSYNC:
            d.robots.resize(n);
            std::iota(d.robots.begin(), d.robots.end(), std::size_t{0});
            break;
        case SchedulerKind::SSYNC:
            d.robots = draw_nonempty_subset(n, streams_.schedule);
            break;
        case SchedulerKind::ASYNC:
            d.robots.push_back(static_cast<std::size_t>(streams_.schedule.below(n)));
            break;
    }
    return d;
}

StepRecord Simulation::step() { return apply(draw_decision()); }

StepRecord Simulation::apply(const ScheduleDecision& decision) {
    StepRecord rec;
    rec.step = ++steps_;
    rec.activated = decision.robots;
    rec.traveled.assign(network_.size(), 0.0);
    rec.operations.reserve(3 * decision.robots.size());
    stuck_last_step_ = false;
    moved_last_step_ = false;

    for (std::size_t i : decision.robots)
        if (i >= network_.size()) throw ContractViolation("schedule names a robot outside the network");

    if (scheduler_.kind == SchedulerKind::ASYNC) {
        if (decision.robots.size() != 1) throw ContractViolation("ASYNC activates exactly one robot");
        const std::size_t i = decision.robots.front();
        switch (network_[i].phase) {
            case Phase::Idle:
                look(i);
                rec.operations.emplace_back(i, Operation::Look);
                break;
            case Phase::Looked:
                compute(i);
                rec.operations.emplace_back(i, Operation::Compute);
                break;
            case Phase::Computed:
            case Phase::Moving:
                rec.traveled[i] = move(i);
                rec.operations.emplace_back(i, Operation::Move);
                break;
        }
        return rec;
    }

    // FSYNC / SSYNC: synchronized sub-phases over the activated set.
    for (std::size_t i : decision.robots) {
        look(i);
        rec.operations.emplace_back(i, Operation::Look);
    }
    for (std::size_t i : decision.robots) {
        compute(i);
        rec.operations.emplace_back(i, Operation::Compute);
    }
    for (std::size_t i : decision.robots) {
        rec.traveled[i] = move(i);
        rec.operations.emplace_back(i, Operation::Move);
    }
    return rec;
}

void Simulation::look(std::size_t i) {
    RobotState& r = network_[i];
    if (perception_.redraw_frames_per_look) {
        const double rotation = streams_.perception.uniform(0.0, kTwoPi);
        const bool reflect = streams_.perception.bernoulli(0.5);
        r.frame = LocalFrame(rotation, reflect);
    }
    swarmsim::look(network_, i, perception_.vision, scheduler_.async_perception, streams_.perception);
}

void Simulation::compute(std::size_t i) {
    RobotState& r = network_[i];
    if (r.phase != Phase::Looked) throw ContractViolation("COMPUTE requires a LOOK first");
    const LocalFrame frame = r.frame.with_origin(r.position);

    ComputeInput in;
    in.my_color = r.color;
    in.snapshot = r.snapshot;
    // Global north as this robot's compass reports it.
    const Point2 north = direction_to_local(frame.rotated(r.compass.current_offset), {0.0, 1.0});
    in.north = std::atan2(north.y, north.x);

    const ComputeOutput out = algorithm_->compute(in, streams_.compute);

    r.position_at_move_start = r.position;
    r.target = from_local(frame, out.target);
    if (!(out.target.x == 0.0 && out.target.y == 0.0) && r.target == r.position) stuck_last_step_ = true;
    if (out.new_color) r.color = out.new_color;
    r.scrambled = out.wants_random_move;
    if (out.leader_choice) {
        r.leader = *out.leader_choice == kSelf ? i : r.snapshot_sources.at(*out.leader_choice);
    } else {
        r.leader = kNoRobot;
    }
    r.phase = Phase::Computed;
}

double Simulation::move(std::size_t i) {
    const double d = advance_move(network_[i], scheduler_.rigidity, scheduler_.non_rigid_adversary,
                                  streams_.motion);
    traveled_[i] += d;
    if (d > 0.0) moved_last_step_ = true;
    return d;
}

bool fairness_guard(std::span<const StepRecord> trace, std::size_t n, std::size_t window) {
    std::vector<std::size_t> idle(n, 0);
    std::vector<char> hit(n);
    for (const auto& rec : trace) {
        std::fill(hit.begin(), hit.end(), 0);
        for (std::size_t i : rec.activated)
            if (i < n) hit[i] = 1;
        for (std::size_t i = 0; i < n; ++i) {
            idle[i] = hit[i] ? 0 : idle[i] + 1;
            if (idle[i] > window) return false;
        }
    }
    return true;
}

}  // namespace swarmsim
