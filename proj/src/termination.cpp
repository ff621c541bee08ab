#include "swarmsim/termination.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <unordered_set>

#include "swarmsim/errors.hpp"

namespace swarmsim {

void ExecutionTrace::append(TraceRecord rec) {
    if (!records_.empty() && rec.step <= records_.back().step)
        throw ContractViolation("trace steps must be strictly increasing");
    const std::size_t pos = records_.size();
    const double d = rec.max_distance;
    if (!rec.gathered) last_non_gathered_ = pos;
    if (rec.stuck) last_stuck_ = pos;

    auto [it, inserted] = index_.try_emplace(rec.joint.bytes);
    KeyIndex& idx = it->second;
    if (inserted) {
        back_prior_.reset();
        idx.first = idx.last = pos;
        if (d > 0.0) idx.min_positive = pos;
    } else {
        back_prior_ = idx;
        idx.last = pos;
        if (d > 0.0 && (!idx.min_positive || d < records_[*idx.min_positive].max_distance))
            idx.min_positive = pos;
    }
    records_.push_back(std::move(rec));
}

std::optional<std::size_t> ExecutionTrace::first_occurrence_of_back() const {
    if (!back_prior_) return std::nullopt;
    return back_prior_->first;
}

std::optional<std::size_t> ExecutionTrace::previous_occurrence_of_back() const {
    if (!back_prior_) return std::nullopt;
    return back_prior_->last;
}

std::optional<std::size_t> ExecutionTrace::min_positive_occurrence_of_back() const {
    if (!back_prior_) return std::nullopt;
    return back_prior_->min_positive;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    char buf[sizeof v];
    std::memcpy(buf, &v, sizeof v);
    out.append(buf, sizeof v);
}

}  // namespace

InputSetKey robot_key(std::span<const RobotState> network, std::size_t i, const Algorithm& algorithm) {
    const RobotState& r = network[i];
    InputSetKey key;
    ComputeInput in;
    in.my_color = r.color;
    char tag = 'I';
    Snapshot view;
    if (r.phase == Phase::Idle) {
        // Initial-position perception with no error draws no randomness.
        thread_local RandomStream unused;
        view = build_snapshot(r, i, network, VisionErrorSpec{}, AsyncPerception::Initial, unused);
        in.snapshot = view;
    } else {
        in.snapshot = r.snapshot;
        tag = r.phase == Phase::Looked ? 'L' : 'C';
    }
    key = algorithm.input_set(in);
    key.bytes.push_back(tag);
    if (tag == 'C') key.bytes.push_back(r.target == r.position ? 'S' : 'M');
    return key;
}

InputSetKey joint_key(std::span<const RobotState> network, const Algorithm& algorithm) {
    std::vector<std::size_t> order(network.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return network[a].name < network[b].name; });
    InputSetKey joint;
    for (std::size_t i : order) {
        const InputSetKey k = robot_key(network, i, algorithm);
        put_u32(joint.bytes, static_cast<std::uint32_t>(k.bytes.size()));
        joint.bytes += k.bytes;
    }
    return joint;
}

double max_pairwise_distance(std::span<const RobotState> network) {
    double best = 0.0;
    for (std::size_t i = 0; i < network.size(); ++i)
        for (std::size_t j = i + 1; j < network.size(); ++j)
            best = std::max(best, distance(network[i].position, network[j].position));
    return best;
}

bool is_gathered(std::span<const RobotState> network) {
    return std::all_of(network.begin(), network.end(),
                       [&](const RobotState& r) { return r.position == network.front().position; });
}

void record(ExecutionTrace& trace, const Simulation& sim) {
    TraceRecord rec;
    rec.step = sim.steps();
    rec.joint = joint_key(sim.network(), sim.algorithm());
    rec.max_distance = max_pairwise_distance(sim.network());
    rec.gathered = is_gathered(sim.network());
    rec.stuck = sim.stuck_in_last_step();
    rec.traveled = sim.cumulative_traveled();
    trace.append(std::move(rec));
}

std::optional<Witness> gathering_defeat(const ExecutionTrace& trace) {
    const auto t0 = trace.first_occurrence_of_back();
    if (!t0) return std::nullopt;
    const auto ng = trace.last_non_gathered();
    if (!ng || *ng <= *t0) return std::nullopt;
    return Witness{trace[*t0].step, trace.back().step, false};
}

namespace {

std::vector<ScheduleDecision> all_decisions(SchedulerKind kind, std::size_t n) {
    std::vector<ScheduleDecision> out;
    switch (kind) {
        case SchedulerKind::FSYNC: {
            ScheduleDecision d;
            for (std::size_t i = 0; i < n; ++i) d.robots.push_back(i);
            out.push_back(std::move(d));
            break;
        }
        case SchedulerKind::SSYNC:
            if (n >= 20) throw ContractViolation("SSYNC expansion limited to fewer than 20 robots");
            for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
                ScheduleDecision d;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask >> i & 1) d.robots.push_back(i);
                out.push_back(std::move(d));
            }
            break;
        case SchedulerKind::ASYNC:
            for (std::size_t i = 0; i < n; ++i) out.push_back({{i}});
            break;
    }
    return out;
}

}  // namespace

VictoryCheck gathering_victory(const ExecutionTrace& trace, const Simulation& sim,
                               ConvergenceThresholds thresholds, std::size_t max_states) {
    const Algorithm& alg = sim.algorithm();
    if (alg.problem() != Problem::Gathering) return {};
    if (!alg.finite_key_space()) return {convergence_reached(sim.network(), thresholds), true};
    if (trace.empty() || !trace.back().gathered) return {};
    const auto prev = trace.previous_occurrence_of_back();
    if (!prev) return {};
    const auto ng = trace.last_non_gathered();
    if (ng && *ng >= *prev) return {};

    const auto decisions = all_decisions(sim.scheduler().kind, sim.network().size());
    std::unordered_set<std::string> seen{trace.back().joint.bytes};
    std::deque<Simulation> frontier{sim};
    while (!frontier.empty()) {
        const Simulation current = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& d : decisions) {
            Simulation next = current;
            next.apply(d);
            if (!is_gathered(next.network())) return {};
            auto key = joint_key(next.network(), alg);
            if (seen.insert(std::move(key.bytes)).second) {
                if (seen.size() > max_states) return {};
                frontier.push_back(std::move(next));
            }
        }
    }
    return {true, false};
}

std::optional<Witness> convergence_defeat(const ExecutionTrace& trace) {
    if (trace.empty()) return std::nullopt;
    const auto t0 = trace.min_positive_occurrence_of_back();
    if (!t0) return std::nullopt;
    const double d0 = trace[*t0].max_distance;
    const double d1 = trace.back().max_distance;
    if (!(d0 > 0.0 && d0 <= d1)) return std::nullopt;
    const auto stuck = trace.last_stuck();
    const bool float_stuck = stuck && *stuck > *t0;
    return Witness{trace[*t0].step, trace.back().step, float_stuck};
}

bool convergence_reached(std::span<const RobotState> network, ConvergenceThresholds t) {
    const double spread = max_pairwise_distance(network);
    if (spread == 0.0) return true;
    double far = 0.0;
    for (const auto& r : network) far = std::max(far, r.position.norm());
    return spread < std::max(t.absolute, far * t.relative);
}

bool divergence_detected(double current, double initial, double factor) {
    return current >= factor * initial;
}

bool divergence_detected(const ExecutionTrace& trace, double initial, double factor) {
    if (trace.empty()) return false;
    return divergence_detected(trace.back().max_distance, initial, factor);
}

std::string_view to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::Victory: return "VICTORY";
        case VerdictKind::Defeat: return "DEFEAT";
        case VerdictKind::Timeout: return "TIMEOUT";
    }
    return "TIMEOUT";
}

std::string_view to_string(VerdictReason r) {
    switch (r) {
        case VerdictReason::None: return "none";
        case VerdictReason::Gathering: return "gathering";
        case VerdictReason::Convergence: return "convergence";
        case VerdictReason::Divergence: return "divergence";
        case VerdictReason::Election: return "election";
    }
    return "none";
}

VerdictKind verdict_kind_from_string(std::string_view s) {
    if (s == "VICTORY") return VerdictKind::Victory;
    if (s == "DEFEAT") return VerdictKind::Defeat;
    if (s == "TIMEOUT") return VerdictKind::Timeout;
    throw ConfigError("unknown verdict '" + std::string(s) + "'");
}

VerdictReason verdict_reason_from_string(std::string_view s) {
    if (s == "none") return VerdictReason::None;
    if (s == "gathering") return VerdictReason::Gathering;
    if (s == "convergence") return VerdictReason::Convergence;
    if (s == "divergence") return VerdictReason::Divergence;
    if (s == "election") return VerdictReason::Election;
    throw ConfigError("unknown verdict reason '" + std::string(s) + "'");
}

}  // namespace swarmsim
