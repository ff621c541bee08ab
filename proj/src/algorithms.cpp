#include "swarmsim/algorithms.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <string>
#include <utility>

#include "swarmsim/errors.hpp"

namespace swarmsim {

std::string_view to_string(Problem p) {
    switch (p) {
        case Problem::Gathering: return "gathering";
        case Problem::Convergence: return "convergence";
        case Problem::Election: return "election";
    }
    return "gathering";
}

bool perceives_gathered(std::span<const PerceivedRobot> snapshot) {
    return std::all_of(snapshot.begin(), snapshot.end(), [](const PerceivedRobot& r) {
        return r.relative_position.x == 0.0 && r.relative_position.y == 0.0;
    });
}

namespace {

void require_size(std::span<const PerceivedRobot> snapshot, std::size_t n, const char* who) {
    if (snapshot.size() != n)
        throw ConfigError(std::string(who) + ": expected " + std::to_string(n + 1) +
                          " robots, saw " + std::to_string(snapshot.size() + 1));
}

std::vector<Point2> with_self(std::span<const PerceivedRobot> snapshot) {
    std::vector<Point2> pts;
    pts.reserve(snapshot.size() + 1);
    pts.push_back({0.0, 0.0});
    for (const auto& r : snapshot) pts.push_back(r.relative_position);
    return pts;
}

void put_byte(std::string& out, std::uint8_t b) { out.push_back(static_cast<char>(b)); }

std::int64_t quantize(double v, double quantum) {
    constexpr double kLimit = 9.0e18;
    const double q = std::round(v / quantum);
    if (!(q < kLimit)) return std::numeric_limits<std::int64_t>::max();
    if (!(q > -kLimit)) return std::numeric_limits<std::int64_t>::min();
    return static_cast<std::int64_t>(q);
}

void put_i64(std::string& out, std::int64_t v) {
    char buf[sizeof v];
    std::memcpy(buf, &v, sizeof v);
    out.append(buf, sizeof v);
}

std::vector<std::pair<std::int64_t, std::int64_t>> quantized(std::span<const PerceivedRobot> snapshot,
                                                             double quantum) {
    std::vector<std::pair<std::int64_t, std::int64_t>> q;
    q.reserve(snapshot.size());
    for (const auto& r : snapshot)
        q.emplace_back(quantize(r.relative_position.x, quantum), quantize(r.relative_position.y, quantum));
    return q;
}

bool nearly_equal(double a, double b, double eps) {
    return eps == 0.0 ? a == b : std::abs(a - b) <= eps;
}

std::optional<std::size_t> to_snapshot_index(std::optional<std::size_t> network_index) {
    if (!network_index) return std::nullopt;
    return *network_index == 0 ? kSelf : *network_index - 1;
}

void require_distinct(std::span<const Point2> positions) {
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            if (positions[i] == positions[j])
                throw DegenerateConfiguration("election: coincident robots");
}

}  // namespace

ComputeOutput compute_midpoint(std::span<const PerceivedRobot> snapshot) {
    require_size(snapshot, 1, "midpoint");
    const Point2 other = snapshot.front().relative_position;
    return {{other.x / 2.0, other.y / 2.0}, std::nullopt, std::nullopt, false};
}

ComputeOutput compute_midpoint_multiplicity(std::span<const PerceivedRobot> snapshot, bool gathered) {
    require_size(snapshot, 1, "midpoint_multiplicity");
    if (gathered) return {};
    return compute_midpoint(snapshot);
}

ComputeOutput compute_cog(std::span<const PerceivedRobot> snapshot) {
    const auto pts = with_self(snapshot);
    return {centroid(pts), std::nullopt, std::nullopt, false};
}

ComputeOutput compute_geometric_median_target(std::span<const PerceivedRobot> snapshot,
                                              double tolerance) {
    const auto pts = with_self(snapshot);
    return {geometric_median(pts, tolerance), std::nullopt, std::nullopt, false};
}

ComputeOutput compute_fec(Color my_color, const PerceivedRobot& other) {
    const Color seen = other.color.value_or(kWhite);
    ComputeOutput out;
    if (my_color == kWhite) {
        out.new_color = kBlack;
        if (seen == kWhite) out.target = other.relative_position / 2.0;
    } else if (seen == kBlack) {
        out.new_color = kWhite;
    } else {
        out.new_color = kBlack;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Elections

std::optional<std::size_t> geoleader_3(std::span<const Point2> p, double eps) {
    if (p.size() != 3) throw ContractViolation("geoleader_3 needs exactly three robots");
    if (cross(p[1] - p[0], p[2] - p[0]) == 0.0)
        throw DegenerateConfiguration("3-robot election: collinear or coincident robots");
    const auto a = interior_angles(p[0], p[1], p[2]);
    for (std::size_t i = 0; i < 3; ++i) {
        const double mine = a[i];
        const double o1 = a[(i + 1) % 3];
        const double o2 = a[(i + 2) % 3];
        const bool strictly_smallest = mine < o1 && mine < o2 && !nearly_equal(mine, o1, eps) &&
                                       !nearly_equal(mine, o2, eps);
        if (strictly_smallest) return i;
    }
    for (std::size_t i = 0; i < 3; ++i) {
        const double mine = a[i];
        const double o1 = a[(i + 1) % 3];
        const double o2 = a[(i + 2) % 3];
        if (nearly_equal(o1, o2, eps) && !nearly_equal(mine, o1, eps)) return i;
    }
    return std::nullopt;
}

namespace {

struct CenterDistances {
    Point2 center;
    std::vector<double> d;
};

CenterDistances sec_distances(std::span<const Point2> p) {
    const Circle sec = smallest_enclosing_circle(p);
    CenterDistances out{sec.center, {}};
    out.d.reserve(p.size());
    for (const auto& q : p) out.d.push_back(distance(q, sec.center));
    return out;
}

}  // namespace

std::optional<std::size_t> geoleader_n(std::span<const Point2> p, double eps) {
    if (p.size() < 4) throw ContractViolation("geoleader_n needs at least four robots");
    require_distinct(p);
    const auto cd = sec_distances(p);
    const auto it = std::min_element(cd.d.begin(), cd.d.end());
    const double best = *it;
    std::size_t ties = 0;
    for (double d : cd.d)
        if (nearly_equal(d, best, eps)) ++ties;
    if (ties != 1) return std::nullopt;
    return static_cast<std::size_t>(it - cd.d.begin());
}

std::optional<std::size_t> geoleader(std::span<const Point2> positions, double eps) {
    if (positions.size() == 3) return geoleader_3(positions, eps);
    if (positions.size() >= 4) return geoleader_n(positions, eps);
    throw ContractViolation("election needs at least three robots");
}

ComputeOutput elect_leader_3(std::span<const Point2> p, std::size_t self, RandomStream& rng,
                             const ElectionParams& params) {
    ComputeOutput out;
    out.target = p[self];
    if (const auto leader = geoleader_3(p, params.epsilon)) {
        out.leader_choice = *leader;
        return out;
    }
    // All three angles equal.
    if (rng.bernoulli(1.0 / 3.0)) {
        const Point2 a = p[(self + 1) % 3];
        const Point2 b = p[(self + 2) % 3];
        const Point2 side = b - a;
        const double len = side.norm();
        const double shortest = std::min({len, distance(p[self], a), distance(p[self], b)});
        const double step = params.symmetry_break_step.value_or(0.1 * shortest);
        Point2 normal{-side.y / len, side.x / len};
        if (dot(normal, p[self] - a) < 0.0) normal = normal * -1.0;
        out.target = p[self] + normal * step;
    }
    return out;
}

ComputeOutput elect_leader_n(std::span<const Point2> p, std::size_t self, RandomStream& rng,
                             const ElectionParams& params) {
    if (p.size() < 4) throw ContractViolation("elect_leader_n needs at least four robots");
    require_distinct(p);
    ComputeOutput out;
    out.target = p[self];
    const auto cd = sec_distances(p);
    const double best = *std::min_element(cd.d.begin(), cd.d.end());
    std::size_t ties = 0;
    std::size_t argmin = 0;
    for (std::size_t k = 0; k < cd.d.size(); ++k) {
        if (nearly_equal(cd.d[k], best, params.epsilon)) {
            ++ties;
            argmin = k;
        }
    }
    if (ties == 1) {
        out.leader_choice = argmin;
        return out;
    }
    if (nearly_equal(cd.d[self], best, params.epsilon)) {
        const double prob = 1.0 / static_cast<double>(p.size());
        if (rng.bernoulli(prob)) out.target = p[self] + (cd.center - p[self]) * prob;
    }
    return out;
}

ComputeOutput reliable_election(std::span<const Point2> net, const ReliableElectionParams& params,
                                RandomStream& rng) {
    ComputeOutput plain = net.size() == 3 ? elect_leader_3(net, 0, rng, params.election)
                                          : elect_leader_n(net, 0, rng, params.election);
    if (!plain.leader_choice || params.vision.is_identity()) return plain;
    const std::size_t leader = *plain.leader_choice;

    std::vector<Point2> virt(net.size());
    const auto& vision = params.vision;
    for (int attempt = 0; attempt < params.nb_tries; ++attempt) {
        for (std::size_t v = 0; v < net.size(); ++v) {
            // Virtual observer v: its own position is misjudged, then it sees
            // everyone else through the same error model.
            const Point2 observer = perturb(net[v], vision, rng);
            for (std::size_t j = 0; j < net.size(); ++j) {
                virt[j] = j == v ? observer
                                 : observer + perturb(net[j] - observer, vision, rng);
            }
            std::optional<std::size_t> seen;
            try {
                seen = geoleader(virt, params.election.epsilon);
            } catch (const DegenerateConfiguration&) {
                seen.reset();
            }
            if (seen != leader) {
                const double radius = params.scramble_radius.value_or(
                    10.0 * (vision.kind == VisionErrorKind::Absolute ? vision.err : vision.err_dist));
                const double angle = rng.uniform(0.0, kTwoPi);
                const double length = radius * rng.uniform01_open_closed();
                ComputeOutput moved;
                moved.target = net[0] + Point2{std::cos(angle), std::sin(angle)} * length;
                moved.wants_random_move = true;
                return moved;
            }
        }
    }
    return plain;
}

// ---------------------------------------------------------------------------
// Registry

namespace {

class MidpointAlgorithm final : public Algorithm {
public:
    std::string_view id() const override { return "midpoint"; }
    Problem problem() const override { return Problem::Gathering; }
    bool finite_key_space() const override { return true; }
    void validate_network_size(std::size_t n) const override {
        if (n != 2) throw ConfigError("midpoint needs exactly 2 robots");
    }
    ComputeOutput compute(const ComputeInput& in, RandomStream&) const override {
        return compute_midpoint(in.snapshot);
    }
    // Disoriented robots learn nothing from the configuration.
    InputSetKey input_set(const ComputeInput&) const override { return {}; }
};

class MidpointMultiplicityAlgorithm final : public Algorithm {
public:
    std::string_view id() const override { return "midpoint_multiplicity"; }
    Problem problem() const override { return Problem::Gathering; }
    bool finite_key_space() const override { return true; }
    void validate_network_size(std::size_t n) const override {
        if (n != 2) throw ConfigError("midpoint_multiplicity needs exactly 2 robots");
    }
    ComputeOutput compute(const ComputeInput& in, RandomStream&) const override {
        return compute_midpoint_multiplicity(in.snapshot, perceives_gathered(in.snapshot));
    }
    InputSetKey input_set(const ComputeInput& in) const override {
        return {perceives_gathered(in.snapshot) ? "g" : "n"};
    }
};

class ConfigurationKeyed : public Algorithm {
public:
    explicit ConfigurationKeyed(double quantum) : quantum_(quantum) {}
    bool finite_key_space() const override { return false; }
    void validate_network_size(std::size_t n) const override {
        if (n < 2) throw ConfigError(std::string(id()) + " needs at least 2 robots");
    }
    InputSetKey input_set(const ComputeInput& in) const override {
        InputSetKey key;
        for (const auto& [x, y] : quantized(in.snapshot, quantum_)) {
            put_i64(key.bytes, x);
            put_i64(key.bytes, y);
        }
        return key;
    }

protected:
    double quantum_;
};

class CogAlgorithm final : public ConfigurationKeyed {
public:
    using ConfigurationKeyed::ConfigurationKeyed;
    std::string_view id() const override { return "cog"; }
    Problem problem() const override { return Problem::Convergence; }
    ComputeOutput compute(const ComputeInput& in, RandomStream&) const override {
        return compute_cog(in.snapshot);
    }
};

class MedianAlgorithm final : public ConfigurationKeyed {
public:
    MedianAlgorithm(double quantum, double tolerance) : ConfigurationKeyed(quantum), tolerance_(tolerance) {}
    std::string_view id() const override { return "geometric_median"; }
    Problem problem() const override { return Problem::Convergence; }
    ComputeOutput compute(const ComputeInput& in, RandomStream&) const override {
        return compute_geometric_median_target(in.snapshot, tolerance_);
    }

private:
    double tolerance_;
};

class FecAlgorithm final : public Algorithm {
public:
    explicit FecAlgorithm(Color start) : start_(start) {}
    std::string_view id() const override { return "fec"; }
    Problem problem() const override { return Problem::Convergence; }
    int palette() const override { return 2; }
    bool finite_key_space() const override { return true; }
    void validate_network_size(std::size_t n) const override {
        if (n != 2) throw ConfigError("fec needs exactly 2 robots");
    }
    std::optional<Color> initial_color() const override { return start_; }
    ComputeOutput compute(const ComputeInput& in, RandomStream&) const override {
        require_size(in.snapshot, 1, "fec");
        return compute_fec(in.my_color.value_or(kWhite), in.snapshot.front());
    }
    InputSetKey input_set(const ComputeInput& in) const override {
        InputSetKey key;
        put_byte(key.bytes, in.my_color.value_or(kWhite).index);
        put_byte(key.bytes, in.snapshot.empty() ? 0xFF : in.snapshot.front().color.value_or(kWhite).index);
        return key;
    }

private:
    Color start_;
};

class LuminousTableAlgorithm final : public Algorithm {
public:
    explicit LuminousTableAlgorithm(const AlgorithmConfig& c)
        : palette_(c.palette), rows_(c.luminous_table), problem_(c.luminous_problem) {
        if (palette_ <= 0 || palette_ > 255) throw ConfigError("luminous: palette must be in 1..255");
        for (const auto& r : rows_)
            if (r.mine >= palette_ || r.seen >= palette_ || r.next >= palette_)
                throw ConfigError("luminous: colour index outside the palette");
    }
    std::string_view id() const override { return "luminous"; }
    Problem problem() const override { return problem_; }
    int palette() const override { return palette_; }
    bool finite_key_space() const override { return true; }
    void validate_network_size(std::size_t n) const override {
        if (n != 2) throw ConfigError("luminous tables drive exactly 2 robots");
    }
    std::optional<Color> initial_color() const override { return Color{0}; }
    ComputeOutput compute(const ComputeInput& in, RandomStream&) const override {
        require_size(in.snapshot, 1, "luminous");
        const Color mine = in.my_color.value_or(Color{0});
        const auto& other = in.snapshot.front();
        const Color seen = other.color.value_or(Color{0});
        ComputeOutput out;
        for (const auto& r : rows_) {
            if (r.mine != mine.index || r.seen != seen.index) continue;
            out.new_color = Color{r.next};
            using T = AlgorithmConfig::LuminousRow::Target;
            if (r.target == T::Midpoint) out.target = other.relative_position / 2.0;
            else if (r.target == T::Other) out.target = other.relative_position;
            return out;
        }
        return out;  // no matching row: stay, keep colour
    }
    InputSetKey input_set(const ComputeInput& in) const override {
        InputSetKey key;
        put_byte(key.bytes, in.my_color.value_or(Color{0}).index);
        put_byte(key.bytes, in.snapshot.empty() ? 0xFF : in.snapshot.front().color.value_or(Color{0}).index);
        return key;
    }

private:
    int palette_;
    std::vector<AlgorithmConfig::LuminousRow> rows_;
    Problem problem_;
};

class ElectionAlgorithm final : public Algorithm {
public:
    ElectionAlgorithm(ReliableElectionParams params, double quantum, bool reliable)
        : params_(std::move(params)), quantum_(quantum), reliable_(reliable) {}
    std::string_view id() const override { return reliable_ ? "reliable_election" : "election"; }
    Problem problem() const override { return Problem::Election; }
    bool finite_key_space() const override { return false; }
    void validate_network_size(std::size_t n) const override {
        if (n < 3) throw ConfigError("leader election needs at least 3 robots");
    }
    ComputeOutput compute(const ComputeInput& in, RandomStream& rng) const override {
        const auto net = with_self(in.snapshot);
        ComputeOutput out;
        if (reliable_) out = reliable_election(net, params_, rng);
        else if (net.size() == 3) out = elect_leader_3(net, 0, rng, params_.election);
        else out = elect_leader_n(net, 0, rng, params_.election);
        out.leader_choice = to_snapshot_index(out.leader_choice);
        return out;
    }
    InputSetKey input_set(const ComputeInput& in) const override {
        auto q = quantized(in.snapshot, quantum_);
        q.emplace_back(0, 0);
        std::sort(q.begin(), q.end());
        InputSetKey key;
        for (const auto& [x, y] : q) {
            put_i64(key.bytes, x);
            put_i64(key.bytes, y);
        }
        return key;
    }

private:
    ReliableElectionParams params_;
    double quantum_;
    bool reliable_;
};

}  // namespace

std::unique_ptr<Algorithm> make_algorithm(const AlgorithmConfig& c) {
    if (c.id == "midpoint") return std::make_unique<MidpointAlgorithm>();
    if (c.id == "midpoint_multiplicity") return std::make_unique<MidpointMultiplicityAlgorithm>();
    if (c.id == "cog") return std::make_unique<CogAlgorithm>(c.cycle_quantum);
    if (c.id == "geometric_median") return std::make_unique<MedianAlgorithm>(c.cycle_quantum, c.median_tolerance);
    if (c.id == "fec") return std::make_unique<FecAlgorithm>(c.fec_initial_color);
    if (c.id == "election") return std::make_unique<ElectionAlgorithm>(c.election, c.cycle_quantum, false);
    if (c.id == "reliable_election") return std::make_unique<ElectionAlgorithm>(c.election, c.cycle_quantum, true);
    if (c.id == "luminous") return std::make_unique<LuminousTableAlgorithm>(c);
    throw RegistryError("unknown algorithm '" + c.id + "'");
}

std::vector<std::string> registered_algorithms() {
    return {"midpoint", "midpoint_multiplicity", "cog", "geometric_median",
            "fec", "election", "reliable_election", "luminous"};
}

InputSetKey input_set_of(const AlgorithmConfig& config, const ComputeInput& in) {
    return make_algorithm(config)->input_set(in);
}

}  // namespace swarmsim
