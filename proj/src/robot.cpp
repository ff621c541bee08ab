#include "swarmsim/robot.hpp"

#include <algorithm>

#include "swarmsim/errors.hpp"

namespace swarmsim {

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::Idle: return "IDLE";
        case Phase::Looked: return "LOOKED";
        case Phase::Computed: return "COMPUTED";
        case Phase::Moving: return "MOVING";
    }
    return "IDLE";
}

bool in_transit(const RobotState& r) {
    return r.phase == Phase::Computed || r.phase == Phase::Moving;
}

Snapshot build_snapshot(const RobotState& observer, std::size_t observer_index,
                        std::span<const RobotState> network, const VisionErrorSpec& vision,
                        AsyncPerception mode, RandomStream& rng,
                        std::vector<std::size_t>* sources) {
    const LocalFrame frame = observer.frame.with_origin(observer.position);
    Snapshot snap;
    snap.reserve(network.size() - 1);
    if (sources) {
        sources->clear();
        sources->reserve(network.size() - 1);
    }
    for (std::size_t i = 0; i < network.size(); ++i) {
        if (i == observer_index) continue;
        const RobotState& r = network[i];
        Point2 seen = r.position;
        if (in_transit(r)) {
            if (mode == AsyncPerception::Initial) {
                seen = r.position_at_move_start;
            } else {
                const double t = rng.uniform01();
                seen = r.position_at_move_start + (r.target - r.position_at_move_start) * t;
            }
        }
        Point2 rel = to_local(frame, seen);
        if (vision.draw_at == DrawAt::Init && i < observer.fixed_errors.size())
            rel = apply_error(rel, vision, observer.fixed_errors[i]);
        else
            rel = perturb(rel, vision, rng);
        snap.push_back({rel, r.color});
        if (sources) sources->push_back(i);
    }
    return snap;
}

void look(std::span<RobotState> network, std::size_t observer_index, const VisionErrorSpec& vision,
          AsyncPerception mode, RandomStream& rng) {
    RobotState& observer = network[observer_index];
    if (observer.phase != Phase::Idle)
        throw ContractViolation("LOOK requires an idle robot");
    refresh_compass(observer.compass, rng);
    observer.snapshot = build_snapshot(observer, observer_index, network, vision, mode, rng,
                                       &observer.snapshot_sources);
    observer.phase = Phase::Looked;
}

double advance_move(RobotState& robot, Rigidity rigidity, NonRigidAdversary adversary,
                    RandomStream& rng) {
    if (robot.phase != Phase::Computed && robot.phase != Phase::Moving)
        throw ContractViolation("MOVE requires a computed target");
    robot.phase = Phase::Moving;
    const Point2 start = robot.position;
    const double d = distance(start, robot.target);
    if (d > 0.0) {
        if (rigidity.rigid) {
            robot.position = robot.target;
        } else {
            const double floor = std::min(rigidity.delta, d);
            const double stop = adversary == NonRigidAdversary::MinStop ? floor
                                                                        : rng.uniform(floor, d);
            robot.position = stop >= d ? robot.target : start + (robot.target - start) * (stop / d);
        }
    }
    robot.phase = Phase::Idle;
    robot.snapshot.clear();
    robot.snapshot_sources.clear();
    return distance(start, robot.position);
}

}  // namespace swarmsim
