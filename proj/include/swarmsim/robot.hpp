#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "swarmsim/error_models.hpp"
#include "swarmsim/geometry.hpp"
#include "swarmsim/random.hpp"

namespace swarmsim {

struct Color {
    std::uint8_t index = 0;
    friend constexpr bool operator==(Color, Color) = default;
};

inline constexpr Color kWhite{0};
inline constexpr Color kBlack{1};

enum class Phase : std::uint8_t { Idle, Looked, Computed, Moving };

std::string_view to_string(Phase p);

struct PerceivedRobot {
    Point2 relative_position;  // observer's local frame, observer at origin
    std::optional<Color> color;
};

using Snapshot = std::vector<PerceivedRobot>;

inline constexpr std::size_t kNoRobot = std::numeric_limits<std::size_t>::max();

struct RobotState {
    // Scheduler bookkeeping only; never handed to a COMPUTE function.
    std::uint64_t name = 0;

    Point2 position;
    Point2 position_at_move_start;
    Point2 target;
    Phase phase = Phase::Idle;
    std::optional<Color> color;
    LocalFrame frame;  // orientation and handedness; origin refreshed at each LOOK
    CompassErrorSpec compass;

    Snapshot snapshot;
    // Network index of each snapshot entry (scheduler-only, used to report
    // leader choices and compute cycle keys).
    std::vector<std::size_t> snapshot_sources;
    // Per-observed-robot error draws for DrawAt::Init, indexed by network index.
    std::vector<ErrorDraw> fixed_errors;

    // Outcome of the latest COMPUTE.
    std::size_t leader = kNoRobot;
    bool scrambled = false;
};

/// How a LOOK perceives a robot whose move is under way.
enum class AsyncPerception { Initial, Uniform };

/// True when `r` has committed to a move it has not finished. With atomic
/// MOVE steps that is the window between COMPUTE and MOVE.
bool in_transit(const RobotState& r);

/// Builds `observer`'s view of every other robot in `network`.
/// `observer_index` is the observer's position in `network`; the returned
/// sources vector is filled with the network index of each entry.
Snapshot build_snapshot(const RobotState& observer, std::size_t observer_index,
                        std::span<const RobotState> network, const VisionErrorSpec& vision,
                        AsyncPerception mode, RandomStream& rng,
                        std::vector<std::size_t>* sources = nullptr);

/// LOOK: fills the observer's snapshot and moves it to Phase::Looked.
void look(std::span<RobotState> network, std::size_t observer_index,
          const VisionErrorSpec& vision, AsyncPerception mode, RandomStream& rng);

struct Rigidity {
    bool rigid = true;
    double delta = 0.0;  // minimum traversal when !rigid
};

enum class NonRigidAdversary { Uniform, MinStop };

/// MOVE: straight-line motion toward the target. Returns the length travelled.
double advance_move(RobotState& robot, Rigidity rigidity, NonRigidAdversary adversary,
                    RandomStream& rng);

}  // namespace swarmsim
