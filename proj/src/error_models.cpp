#include "swarmsim/error_models.hpp"

#include <algorithm>
#include <string>

#include "swarmsim/errors.hpp"

namespace swarmsim {

bool VisionErrorSpec::is_identity() const {
    switch (kind) {
        case VisionErrorKind::None: return true;
        case VisionErrorKind::Absolute: return err == 0.0;
        case VisionErrorKind::Relative:
        case VisionErrorKind::AbsRel: return err_dist == 0.0 && err_angle == 0.0;
    }
    return true;
}

ErrorDraw draw_error(const VisionErrorSpec& spec, RandomStream& rng) {
    switch (spec.kind) {
        case VisionErrorKind::None:
            return {};
        case VisionErrorKind::Absolute:
            return {rng.uniform(0.0, spec.err), rng.uniform(0.0, kTwoPi)};
        case VisionErrorKind::Relative:
        case VisionErrorKind::AbsRel:
            return {rng.uniform(-spec.err_dist, spec.err_dist),
                    rng.uniform(-spec.err_angle, spec.err_angle)};
    }
    return {};
}

Point2 apply_error(Point2 p, const VisionErrorSpec& spec, ErrorDraw draw) {
    switch (spec.kind) {
        case VisionErrorKind::None:
            return p;
        case VisionErrorKind::Absolute:
            if (draw.radius == 0.0) return p;
            return {p.x + draw.radius * std::cos(draw.angle), p.y + draw.radius * std::sin(draw.angle)};
        case VisionErrorKind::Relative:
        case VisionErrorKind::AbsRel: {
            if (draw.radius == 0.0 && draw.angle == 0.0) return p;
            const double r = p.norm();
            const double theta = std::atan2(p.y, p.x) + draw.angle;
            const double rr = spec.kind == VisionErrorKind::Relative ? r + r * draw.radius
                                                                     : r + draw.radius;
            const double clamped = std::max(rr, 0.0);
            return {clamped * std::cos(theta), clamped * std::sin(theta)};
        }
    }
    return p;
}

Point2 perturb(Point2 p, const VisionErrorSpec& spec, RandomStream& rng) {
    if (spec.kind == VisionErrorKind::None) return p;
    return apply_error(p, spec, draw_error(spec, rng));
}

void initialize_compass(CompassErrorSpec& c, RandomStream& rng) {
    c.current_offset = c.kind == CompassErrorKind::None ? 0.0
                                                        : rng.uniform(-c.max_error, c.max_error);
}

void refresh_compass(CompassErrorSpec& c, RandomStream& rng) {
    if (c.kind == CompassErrorKind::Dynamic) c.current_offset = rng.uniform(-c.max_error, c.max_error);
}

std::string_view to_string(VisionErrorKind k) {
    switch (k) {
        case VisionErrorKind::None: return "none";
        case VisionErrorKind::Absolute: return "absolute";
        case VisionErrorKind::Relative: return "relative";
        case VisionErrorKind::AbsRel: return "abs_rel";
    }
    return "none";
}

VisionErrorKind vision_kind_from_string(std::string_view s) {
    if (s == "none") return VisionErrorKind::None;
    if (s == "absolute") return VisionErrorKind::Absolute;
    if (s == "relative") return VisionErrorKind::Relative;
    if (s == "abs_rel" || s == "abs-rel") return VisionErrorKind::AbsRel;
    throw ConfigError("unknown vision error kind '" + std::string(s) + "'");
}

std::string_view to_string(CompassErrorKind k) {
    switch (k) {
        case CompassErrorKind::None: return "none";
        case CompassErrorKind::Static: return "static";
        case CompassErrorKind::Dynamic: return "dynamic";
    }
    return "none";
}

CompassErrorKind compass_kind_from_string(std::string_view s) {
    if (s == "none") return CompassErrorKind::None;
    if (s == "static") return CompassErrorKind::Static;
    if (s == "dynamic") return CompassErrorKind::Dynamic;
    throw ConfigError("unknown compass kind '" + std::string(s) + "'");
}

std::string_view to_string(DrawAt d) {
    return d == DrawAt::Init ? "init" : "every_look";
}

DrawAt draw_at_from_string(std::string_view s) {
    if (s == "init") return DrawAt::Init;
    if (s == "every_look") return DrawAt::EveryLook;
    throw ConfigError("unknown draw_at '" + std::string(s) + "'");
}

}  // namespace swarmsim
