#include "swarmsim/config_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "swarmsim/errors.hpp"

namespace swarmsim {

namespace {

// Reads one JSON object, remembering which keys were consumed so that
// leftovers (typos, stale fields) can be reported.
class Fields {
public:
    Fields(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(where("") + " must be an object");
    }

    const Json* find(const char* key) {
        used_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    template <class T>
    void get(const char* key, T& out) {
        if (const Json* v = find(key)) {
            try {
                out = v->get<T>();
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError(where(key) + ": " + e.what());
            }
        }
    }

    template <class T>
    void get(const char* key, std::optional<T>& out) {
        if (const Json* v = find(key)) {
            if (v->is_null()) {
                out.reset();
                return;
            }
            T value{};
            get(key, value);
            out = value;
        }
    }

    template <class Parse>
    void get_enum(const char* key, Parse parse) {
        if (const Json* v = find(key)) {
            if (!v->is_string()) throw ConfigError(where(key) + " must be a string");
            parse(v->get<std::string>());
        }
    }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!used_.count(it.key())) throw ConfigError("unknown field " + where(it.key().c_str()));
    }

    std::string where(const char* key) const {
        if (!*key) return path_.empty() ? "config" : path_;
        return path_.empty() ? key : path_ + "." + key;
    }

private:
    const Json& obj_;
    std::string path_;
    std::set<std::string> used_;
};

Json box_json(const Box& b) { return Json::array({b.xmin, b.ymin, b.xmax, b.ymax}); }

Box box_from(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 4) throw ConfigError(where + " must be [xmin, ymin, xmax, ymax]");
    try {
        return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

std::string_view to_string(AsyncPerception m) { return m == AsyncPerception::Initial ? "initial" : "uniform"; }

AsyncPerception async_perception_from_string(std::string_view s) {
    if (s == "initial") return AsyncPerception::Initial;
    if (s == "uniform") return AsyncPerception::Uniform;
    throw ConfigError("unknown async_perception '" + std::string(s) + "'");
}

std::string_view to_string(NonRigidAdversary a) { return a == NonRigidAdversary::Uniform ? "uniform" : "min_stop"; }

NonRigidAdversary adversary_from_string(std::string_view s) {
    if (s == "uniform") return NonRigidAdversary::Uniform;
    if (s == "min_stop") return NonRigidAdversary::MinStop;
    throw ConfigError("unknown non_rigid_adversary '" + std::string(s) + "'");
}

std::string_view to_string(CycleDetection c) {
    switch (c) {
        case CycleDetection::Auto: return "auto";
        case CycleDetection::On: return "on";
        case CycleDetection::Off: return "off";
    }
    return "auto";
}

CycleDetection cycle_detection_from_string(std::string_view s) {
    if (s == "auto") return CycleDetection::Auto;
    if (s == "on") return CycleDetection::On;
    if (s == "off") return CycleDetection::Off;
    throw ConfigError("unknown cycle_detection '" + std::string(s) + "'");
}

Problem problem_from_string(std::string_view s) {
    if (s == "gathering") return Problem::Gathering;
    if (s == "convergence") return Problem::Convergence;
    if (s == "election") return Problem::Election;
    throw ConfigError("unknown problem '" + std::string(s) + "'");
}

using LuminousTarget = AlgorithmConfig::LuminousRow::Target;

std::string_view to_string(LuminousTarget t) {
    switch (t) {
        case LuminousTarget::Self: return "self";
        case LuminousTarget::Midpoint: return "midpoint";
        case LuminousTarget::Other: return "other";
    }
    return "self";
}

LuminousTarget luminous_target_from_string(std::string_view s) {
    if (s == "self") return LuminousTarget::Self;
    if (s == "midpoint") return LuminousTarget::Midpoint;
    if (s == "other") return LuminousTarget::Other;
    throw ConfigError("unknown luminous target '" + std::string(s) + "'");
}

Color color_from_string(std::string_view s) {
    if (s == "white") return kWhite;
    if (s == "black") return kBlack;
    throw ConfigError("unknown colour '" + std::string(s) + "'");
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json to_json(const ScenarioConfig& c) {
    const AlgorithmConfig& a = c.algorithm;
    Json luminous_rows = Json::array();
    for (const auto& row : a.luminous_table)
        luminous_rows.push_back({{"mine", row.mine}, {"seen", row.seen}, {"next", row.next},
                                 {"target", to_string(row.target)}});
    Json points = Json::array();
    for (const auto& p : c.placement.points) points.push_back(Json::array({p.x, p.y}));

    Json j;
    j["version"] = c.version;
    j["algorithm"] = {
        {"id", a.id},
        {"median_tolerance", a.median_tolerance},
        {"cycle_quantum", a.cycle_quantum},
        {"fec_initial_color", a.fec_initial_color == kBlack ? "black" : "white"},
        {"election",
         {{"nb_tries", a.election.nb_tries},
          {"symmetry_break_step", optional_json(a.election.election.symmetry_break_step)},
          {"epsilon", a.election.election.epsilon},
          {"scramble_radius", optional_json(a.election.scramble_radius)}}},
        {"luminous",
         {{"palette", a.palette}, {"problem", to_string(a.luminous_problem)}, {"table", luminous_rows}}},
    };
    j["robots"] = c.robots;
    j["scheduler"] = {{"kind", to_string(c.scheduler.kind)},
                      {"rigid", c.scheduler.rigidity.rigid},
                      {"delta", c.scheduler.rigidity.delta},
                      {"async_perception", to_string(c.scheduler.async_perception)},
                      {"non_rigid_adversary", to_string(c.scheduler.non_rigid_adversary)}};
    j["vision"] = {{"kind", to_string(c.vision.kind)},
                   {"err", c.vision.err},
                   {"err_dist", c.vision.err_dist},
                   {"err_angle", c.vision.err_angle},
                   {"draw_at", to_string(c.vision.draw_at)}};
    j["compass"] = {{"kind", to_string(c.compass.kind)}, {"max_error", c.compass.max_error}};
    j["frames"] = c.frames == FrameMode::Random ? "random" : "identity";
    j["redraw_frames_per_look"] = c.redraw_frames_per_look;
    j["placement"] = {{"kind", to_string(c.placement.kind)},
                      {"box", box_json(c.placement.box)},
                      {"grid", Json::array({c.placement.grid_nx, c.placement.grid_ny})},
                      {"extra_box", box_json(c.placement.extra_box)},
                      {"points", points}};
    j["termination"] = {{"max_iterations", c.termination.max_iterations},
                        {"convergence_abs", c.termination.convergence.absolute},
                        {"convergence_rel", c.termination.convergence.relative},
                        {"divergence_factor", c.termination.divergence_factor},
                        {"cycle_detection", to_string(c.termination.cycle_detection)},
                        {"defeat_confirmations", c.termination.defeat_confirmations}};
    j["seed"] = c.seed;
    j["runs"] = c.runs;
    j["budget_seconds"] = optional_json(c.budget_seconds);
    return j;
}

ScenarioConfig scenario_from_json(const Json& doc) {
    ScenarioConfig c;
    Fields top(doc, "");
    top.get("version", c.version);

    if (const Json* aj = top.find("algorithm")) {
        AlgorithmConfig& a = c.algorithm;
        Fields f(*aj, "algorithm");
        f.get("id", a.id);
        f.get("median_tolerance", a.median_tolerance);
        f.get("cycle_quantum", a.cycle_quantum);
        f.get_enum("fec_initial_color", [&](const std::string& s) { a.fec_initial_color = color_from_string(s); });
        if (const Json* ej = f.find("election")) {
            Fields e(*ej, "algorithm.election");
            e.get("nb_tries", a.election.nb_tries);
            e.get("symmetry_break_step", a.election.election.symmetry_break_step);
            e.get("epsilon", a.election.election.epsilon);
            e.get("scramble_radius", a.election.scramble_radius);
            e.finish();
        }
        if (const Json* lj = f.find("luminous")) {
            Fields l(*lj, "algorithm.luminous");
            l.get("palette", a.palette);
            l.get_enum("problem", [&](const std::string& s) { a.luminous_problem = problem_from_string(s); });
            if (const Json* tj = l.find("table")) {
                if (!tj->is_array()) throw ConfigError("algorithm.luminous.table must be an array");
                a.luminous_table.clear();
                for (const auto& rj : *tj) {
                    Fields r(rj, "algorithm.luminous.table[]");
                    AlgorithmConfig::LuminousRow row;
                    r.get("mine", row.mine);
                    r.get("seen", row.seen);
                    r.get("next", row.next);
                    r.get_enum("target", [&](const std::string& s) { row.target = luminous_target_from_string(s); });
                    r.finish();
                    a.luminous_table.push_back(row);
                }
            }
            l.finish();
        }
        f.finish();
    }

    top.get("robots", c.robots);

    if (const Json* sj = top.find("scheduler")) {
        Fields f(*sj, "scheduler");
        f.get_enum("kind", [&](const std::string& s) { c.scheduler.kind = scheduler_kind_from_string(s); });
        f.get("rigid", c.scheduler.rigidity.rigid);
        f.get("delta", c.scheduler.rigidity.delta);
        f.get_enum("async_perception",
                   [&](const std::string& s) { c.scheduler.async_perception = async_perception_from_string(s); });
        f.get_enum("non_rigid_adversary",
                   [&](const std::string& s) { c.scheduler.non_rigid_adversary = adversary_from_string(s); });
        f.finish();
    }

    if (const Json* vj = top.find("vision")) {
        Fields f(*vj, "vision");
        f.get_enum("kind", [&](const std::string& s) { c.vision.kind = vision_kind_from_string(s); });
        f.get("err", c.vision.err);
        f.get("err_dist", c.vision.err_dist);
        f.get("err_angle", c.vision.err_angle);
        f.get_enum("draw_at", [&](const std::string& s) { c.vision.draw_at = draw_at_from_string(s); });
        f.finish();
    }

    if (const Json* cj = top.find("compass")) {
        Fields f(*cj, "compass");
        f.get_enum("kind", [&](const std::string& s) { c.compass.kind = compass_kind_from_string(s); });
        f.get("max_error", c.compass.max_error);
        f.finish();
    }

    top.get_enum("frames", [&](const std::string& s) {
        if (s == "random")
            c.frames = FrameMode::Random;
        else if (s == "identity")
            c.frames = FrameMode::Identity;
        else
            throw ConfigError("unknown frames mode '" + s + "'");
    });
    top.get("redraw_frames_per_look", c.redraw_frames_per_look);

    if (const Json* pj = top.find("placement")) {
        Fields f(*pj, "placement");
        f.get_enum("kind", [&](const std::string& s) { c.placement.kind = placement_kind_from_string(s); });
        if (const Json* b = f.find("box")) c.placement.box = box_from(*b, "placement.box");
        if (const Json* b = f.find("extra_box")) c.placement.extra_box = box_from(*b, "placement.extra_box");
        if (const Json* g = f.find("grid")) {
            if (!g->is_array() || g->size() != 2) throw ConfigError("placement.grid must be [nx, ny]");
            c.placement.grid_nx = (*g)[0].get<std::size_t>();
            c.placement.grid_ny = (*g)[1].get<std::size_t>();
        }
        if (const Json* pts = f.find("points")) {
            if (!pts->is_array()) throw ConfigError("placement.points must be an array");
            c.placement.points.clear();
            for (const auto& p : *pts) {
                if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                    throw ConfigError("placement.points entries must be [x, y]");
                c.placement.points.push_back({p[0].get<double>(), p[1].get<double>()});
            }
        }
        f.finish();
    }

    if (const Json* tj = top.find("termination")) {
        Fields f(*tj, "termination");
        f.get("max_iterations", c.termination.max_iterations);
        f.get("convergence_abs", c.termination.convergence.absolute);
        f.get("convergence_rel", c.termination.convergence.relative);
        f.get("divergence_factor", c.termination.divergence_factor);
        f.get_enum("cycle_detection",
                   [&](const std::string& s) { c.termination.cycle_detection = cycle_detection_from_string(s); });
        f.get("defeat_confirmations", c.termination.defeat_confirmations);
        f.finish();
    }

    top.get("seed", c.seed);
    top.get("runs", c.runs);
    top.get("budget_seconds", c.budget_seconds);
    top.finish();
    return c;
}

void apply_override(Json& doc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
    const std::string path(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));

    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    Json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError("override path '" + path + "' has an empty segment");
        if (node->is_null()) *node = Json::object();
        if (node->is_array()) {
            std::size_t idx = 0;
            const auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), idx);
            if (ec != std::errc{} || p != key.data() + key.size() || idx >= node->size())
                throw ConfigError("override path '" + path + "' indexes past an array");
            node = &(*node)[idx];
        } else if (node->is_object()) {
            node = &(*node)[key];
        } else {
            throw ConfigError("override path '" + path + "' descends into a scalar");
        }
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    *node = std::move(value);
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    Json doc = Json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("'" + path + "' is not valid JSON");
    return doc;
}

Json to_json(const RunOutcome& o) {
    Json j;
    j["run_seed"] = o.run_seed;
    j["verdict"] = to_string(o.verdict.kind);
    j["reason"] = to_string(o.verdict.reason);
    j["steps"] = o.steps;
    j["traveled"] = o.traveled;
    j["total_traveled"] = o.total_traveled;
    j["baseline"] = o.baseline;
    j["normalized_fuel"] = o.normalized_fuel;
    j["election_class"] = o.election_class ? Json(to_string(*o.election_class)) : Json(nullptr);
    if (o.verdict.witness)
        j["witness"] = {{"t0", o.verdict.witness->t0},
                        {"t1", o.verdict.witness->t1},
                        {"float_stuck", o.verdict.witness->float_stuck}};
    else
        j["witness"] = nullptr;
    return j;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_real(double v) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    if (ec != std::errc{}) throw ContractViolation("number formatting failed");
    return std::string(buf.data(), end);
}

double parse_real(std::string_view s) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ConfigError("not a number: '" + std::string(s) + "'");
    return v;
}

std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ConfigError("not an unsigned integer: '" + std::string(s) + "'");
    return v;
}

std::string join_csv(const CsvRow& row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += row[i];
    }
    return out;
}

CsvRow split_csv(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    CsvRow out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

namespace {

constexpr std::array<std::pair<const char*, const char*>, 8> kVerdictColumns{{
    {"victory_gathering", "VICTORY:gathering"},
    {"victory_convergence", "VICTORY:convergence"},
    {"victory_election", "VICTORY:election"},
    {"defeat_gathering", "DEFEAT:gathering"},
    {"defeat_convergence", "DEFEAT:convergence"},
    {"defeat_divergence", "DEFEAT:divergence"},
    {"defeat_election", "DEFEAT:election"},
    {"timeout", "TIMEOUT"},
}};

constexpr std::array<const char*, 3> kClassColumns{"valid", "detected_possible_error", "undetected_error"};

void expect_width(const CsvRow& row, std::size_t n, const char* what) {
    if (row.size() != n)
        throw ConfigError(std::string(what) + " row has " + std::to_string(row.size()) + " fields, expected " +
                          std::to_string(n));
}

std::string u64(std::uint64_t v) { return std::to_string(v); }

std::string leader_cell(std::size_t l) { return l == kNoRobot ? "none" : std::to_string(l + 1); }

std::size_t leader_from_cell(std::string_view s) {
    if (s == "none") return kNoRobot;
    const std::uint64_t name = parse_u64(s);
    if (name == 0) throw ConfigError("leader names start at 1");
    return static_cast<std::size_t>(name - 1);
}

}  // namespace

CsvRow aggregate_csv_header() {
    CsvRow h{"master_seed", "runs", "fuel_runs", "min_fuel", "max_fuel", "avg_fuel", "divergence_fraction", "avg_steps"};
    for (const auto& [col, label] : kVerdictColumns) h.emplace_back(col);
    for (const char* c : kClassColumns) h.push_back(std::string("fraction_") + c);
    h.emplace_back("wall_seconds");
    return h;
}

CsvRow to_csv(const AggregateStats& s) {
    CsvRow r{u64(s.master_seed),      u64(s.runs),          u64(s.fuel_runs),
             format_real(s.min_fuel), format_real(s.max_fuel), format_real(s.avg_fuel),
             format_real(s.divergence_fraction), format_real(s.avg_steps)};
    std::uint64_t listed = 0;
    for (const auto& [col, label] : kVerdictColumns) {
        const auto it = s.verdicts.find(label);
        const std::uint64_t n = it == s.verdicts.end() ? 0 : it->second;
        listed += n;
        r.push_back(u64(n));
    }
    if (listed != s.runs) throw ContractViolation("verdict histogram does not cover every run");
    for (const char* c : kClassColumns) {
        const auto it = s.election_fractions.find(c);
        r.push_back(format_real(it == s.election_fractions.end() ? 0.0 : it->second));
    }
    r.push_back(format_real(s.wall_seconds));
    return r;
}

AggregateStats aggregate_from_csv(const CsvRow& r) {
    expect_width(r, aggregate_csv_header().size(), "aggregate");
    AggregateStats s;
    s.master_seed = parse_u64(r[0]);
    s.runs = parse_u64(r[1]);
    s.fuel_runs = parse_u64(r[2]);
    s.min_fuel = parse_real(r[3]);
    s.max_fuel = parse_real(r[4]);
    s.avg_fuel = parse_real(r[5]);
    s.divergence_fraction = parse_real(r[6]);
    s.avg_steps = parse_real(r[7]);
    std::size_t k = 8;
    for (const auto& [col, label] : kVerdictColumns) {
        const std::uint64_t n = parse_u64(r[k++]);
        if (n) s.verdicts[label] = n;
    }
    for (const char* c : kClassColumns) {
        const double f = parse_real(r[k++]);
        if (f != 0.0) s.election_fractions[c] = f;
    }
    s.wall_seconds = parse_real(r[k]);
    return s;
}

CsvRow run_csv_header() {
    return {"run_index", "run_seed", "verdict", "reason", "steps", "total_traveled", "baseline",
            "normalized_fuel", "election_class", "t0", "t1", "float_stuck"};
}

CsvRow to_csv(const RunOutcome& o) {
    const auto& w = o.verdict.witness;
    return {u64(o.run_index),
            u64(o.run_seed),
            std::string(to_string(o.verdict.kind)),
            std::string(to_string(o.verdict.reason)),
            u64(o.steps),
            format_real(o.total_traveled),
            format_real(o.baseline),
            format_real(o.normalized_fuel),
            o.election_class ? std::string(to_string(*o.election_class)) : std::string(),
            w ? u64(w->t0) : std::string(),
            w ? u64(w->t1) : std::string(),
            w ? (w->float_stuck ? "1" : "0") : std::string()};
}

RunOutcome run_from_csv(const CsvRow& r) {
    expect_width(r, run_csv_header().size(), "run");
    RunOutcome o;
    o.run_index = parse_u64(r[0]);
    o.run_seed = parse_u64(r[1]);
    o.verdict.kind = verdict_kind_from_string(r[2]);
    o.verdict.reason = verdict_reason_from_string(r[3]);
    o.steps = parse_u64(r[4]);
    o.total_traveled = parse_real(r[5]);
    o.baseline = parse_real(r[6]);
    o.normalized_fuel = parse_real(r[7]);
    if (!r[8].empty()) o.election_class = election_class_from_string(r[8]);
    if (!r[9].empty()) o.verdict.witness = Witness{parse_u64(r[9]), parse_u64(r[10]), r[11] == "1"};
    return o;
}

CsvRow scatter_csv_header(std::size_t robots) {
    CsvRow h{"index", "x", "y", "class"};
    for (std::size_t i = 0; i < robots; ++i) h.push_back("leader_r" + std::to_string(i + 1));
    return h;
}

CsvRow to_csv(const ElectionPoint& p) {
    CsvRow r{u64(p.index), format_real(p.position.x), format_real(p.position.y), std::string(to_string(p.cls))};
    for (std::size_t l : p.leaders) r.push_back(leader_cell(l));
    return r;
}

ElectionPoint scatter_from_csv(const CsvRow& r) {
    if (r.size() < 4) throw ConfigError("scatter row is too short");
    ElectionPoint p;
    p.index = parse_u64(r[0]);
    p.position = {parse_real(r[1]), parse_real(r[2])};
    p.cls = election_class_from_string(r[3]);
    for (std::size_t i = 4; i < r.size(); ++i) p.leaders.push_back(leader_from_cell(r[i]));
    return p;
}

CsvRow curve_csv_header() {
    return {"nb_tries", "points", "valid", "detected_possible_error", "undetected_error", "undetected_fraction"};
}

CsvRow to_csv(const CurvePoint& c) {
    const auto& s = c.summary;
    return {std::to_string(c.nb_tries), u64(s.points),     u64(s.valid),
            u64(s.detected),           u64(s.undetected), format_real(s.fraction(ElectionClass::UndetectedError))};
}

CurvePoint curve_from_csv(const CsvRow& r) {
    expect_width(r, curve_csv_header().size(), "curve");
    CurvePoint c;
    c.nb_tries = static_cast<int>(parse_u64(r[0]));
    c.summary.points = parse_u64(r[1]);
    c.summary.valid = parse_u64(r[2]);
    c.summary.detected = parse_u64(r[3]);
    c.summary.undetected = parse_u64(r[4]);
    return c;
}

CsvRow pathology_csv_header() {
    return {"attempts", "stuck_mover_r1", "stuck_mover_r2", "fraction_mover_r1", "fraction_mover_r2"};
}

CsvRow to_csv(const PathologyResult& p) {
    return {u64(p.attempts), u64(p.stuck_mover_r1), u64(p.stuck_mover_r2), format_real(p.fraction_mover_r1()),
            format_real(p.fraction_mover_r2())};
}

CsvRow trace_csv_header(std::size_t robots) {
    CsvRow h{"step", "max_distance", "gathered", "stuck", "joint_key"};
    for (std::size_t i = 0; i < robots; ++i) h.push_back("traveled_r" + std::to_string(i + 1));
    return h;
}

CsvRow to_csv(const TraceRecord& t) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string key;
    key.reserve(2 * t.joint.bytes.size());
    for (unsigned char b : t.joint.bytes) {
        key += kHex[b >> 4];
        key += kHex[b & 15];
    }
    CsvRow r{u64(t.step), format_real(t.max_distance), t.gathered ? "1" : "0", t.stuck ? "1" : "0", key};
    for (double d : t.traveled) r.push_back(format_real(d));
    return r;
}

// ---------------------------------------------------------------------------
// Witness files

void write_witness(std::ostream& out, const WitnessFile& f) {
    Json header;
    header["type"] = "witness";
    header["version"] = kConfigVersion;
    header["config"] = to_json(f.config);
    header["run_seed"] = f.run_seed;
    header["t0"] = f.witness.t0;
    header["t1"] = f.witness.t1;
    header["float_stuck"] = f.witness.float_stuck;
    out << header.dump() << '\n';
    for (std::size_t s = 0; s < f.schedule.size(); ++s) {
        Json robots = Json::array();
        for (std::size_t i = 0; i < 64; ++i)
            if (f.schedule[s] >> i & 1) robots.push_back(i);
        Json line;
        line["type"] = "step";
        line["step"] = s + 1;
        line["robots"] = std::move(robots);
        out << line.dump() << '\n';
    }
}

WitnessFile read_witness(std::istream& in) {
    WitnessFile f;
    std::string line;
    bool have_header = false;
    std::uint64_t expected_step = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw ConfigError("witness line is not a JSON object");
        const std::string type = j.value("type", "");
        try {
            if (type == "witness") {
                if (j.at("version").get<int>() != kConfigVersion) throw ConfigError("unsupported witness version");
                f.config = scenario_from_json(j.at("config"));
                f.run_seed = j.at("run_seed").get<std::uint64_t>();
                f.witness.t0 = j.at("t0").get<std::uint64_t>();
                f.witness.t1 = j.at("t1").get<std::uint64_t>();
                f.witness.float_stuck = j.at("float_stuck").get<bool>();
                have_header = true;
            } else if (type == "step") {
                if (!have_header) throw ConfigError("witness step before header");
                if (j.at("step").get<std::uint64_t>() != expected_step++)
                    throw ConfigError("witness steps must be consecutive from 1");
                std::uint64_t mask = 0;
                for (const auto& r : j.at("robots")) {
                    const auto i = r.get<std::size_t>();
                    if (i >= 64) throw ConfigError("witness robot index out of range");
                    mask |= std::uint64_t{1} << i;
                }
                f.schedule.push_back(mask);
            } else {
                throw ConfigError("unknown witness record type '" + type + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("malformed witness record: ") + e.what());
        }
    }
    if (!have_header) throw ConfigError("witness file has no header");
    return f;
}

}  // namespace swarmsim
