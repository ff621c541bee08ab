#pragma once

#include <string_view>

#include "swarmsim/geometry.hpp"
#include "swarmsim/random.hpp"

namespace swarmsim {

enum class VisionErrorKind { None, Absolute, Relative, AbsRel };

/// When per-robot error draws happen: once per run, or at every LOOK for
/// every perceived robot.
enum class DrawAt { Init, EveryLook };

struct VisionErrorSpec {
    VisionErrorKind kind = VisionErrorKind::None;
    double err = 0.0;        // absolute model radius
    double err_dist = 0.0;   // relative: fraction; abs_rel: plane units
    double err_angle = 0.0;  // radians
    DrawAt draw_at = DrawAt::EveryLook;

    bool is_identity() const;
};

/// One realization of the random quantities of a vision error model.
/// Absolute: radius in [0, err], angle in [0, 2π). Relative / AbsRel:
/// radius in [-err_dist, err_dist], angle in [-err_angle, err_angle].
struct ErrorDraw {
    double radius = 0.0;
    double angle = 0.0;
};

ErrorDraw draw_error(const VisionErrorSpec& spec, RandomStream& rng);

/// Applies a fixed draw to an observer-centred position. A perturbed polar
/// radius below zero is clamped to zero.
Point2 apply_error(Point2 relative_position, const VisionErrorSpec& spec, ErrorDraw draw);

/// draw_error + apply_error. Kind None consumes no randomness.
Point2 perturb(Point2 relative_position, const VisionErrorSpec& spec, RandomStream& rng);

enum class CompassErrorKind { None, Static, Dynamic };

struct CompassErrorSpec {
    CompassErrorKind kind = CompassErrorKind::None;
    double max_error = 0.0;
    double current_offset = 0.0;
};

/// Static compasses draw their offset once here; others reset to zero.
void initialize_compass(CompassErrorSpec& compass, RandomStream& rng);
/// Dynamic compasses redraw their offset; called at the start of each LOOK.
void refresh_compass(CompassErrorSpec& compass, RandomStream& rng);

std::string_view to_string(VisionErrorKind kind);
VisionErrorKind vision_kind_from_string(std::string_view s);
std::string_view to_string(CompassErrorKind kind);
CompassErrorKind compass_kind_from_string(std::string_view s);
std::string_view to_string(DrawAt d);
DrawAt draw_at_from_string(std::string_view s);

}  // namespace swarmsim
