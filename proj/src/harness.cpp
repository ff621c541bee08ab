#include "swarmsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "swarmsim/errors.hpp"

namespace swarmsim {

std::string_view to_string(PlacementKind k) {
    switch (k) {
        case PlacementKind::UnitCirclePair: return "unit_circle_pair";
        case PlacementKind::UniformBox: return "uniform_box";
        case PlacementKind::FixedPairPlusRandom: return "fixed_pair_plus_random";
        case PlacementKind::GridSweep: return "grid_sweep";
        case PlacementKind::Explicit: return "explicit";
    }
    return "explicit";
}

PlacementKind placement_kind_from_string(std::string_view s) {
    if (s == "unit_circle_pair") return PlacementKind::UnitCirclePair;
    if (s == "uniform_box") return PlacementKind::UniformBox;
    if (s == "fixed_pair_plus_random") return PlacementKind::FixedPairPlusRandom;
    if (s == "grid_sweep") return PlacementKind::GridSweep;
    if (s == "explicit") return PlacementKind::Explicit;
    throw ConfigError("unknown placement '" + std::string(s) + "'");
}

std::string_view to_string(ElectionClass c) {
    switch (c) {
        case ElectionClass::Valid: return "valid";
        case ElectionClass::DetectedPossibleError: return "detected_possible_error";
        case ElectionClass::UndetectedError: return "undetected_error";
    }
    return "valid";
}

ElectionClass election_class_from_string(std::string_view s) {
    if (s == "valid") return ElectionClass::Valid;
    if (s == "detected_possible_error") return ElectionClass::DetectedPossibleError;
    if (s == "undetected_error") return ElectionClass::UndetectedError;
    throw ConfigError("unknown election class '" + std::string(s) + "'");
}

namespace {

void check_box(const Box& b, const char* what) {
    if (!(b.xmin < b.xmax && b.ymin < b.ymax) || !std::isfinite(b.xmin) || !std::isfinite(b.xmax) ||
        !std::isfinite(b.ymin) || !std::isfinite(b.ymax))
        throw ConfigError(std::string(what) + " must be a nonempty finite box");
}

}  // namespace

void ScenarioConfig::validate() const {
    if (version != kConfigVersion)
        throw ConfigError("unsupported config version " + std::to_string(version));
    if (robots < 1) throw ConfigError("robots must be at least 1");
    scheduler.validate();

    const auto alg = make_algorithm(resolved_algorithm_config(*this));
    alg->validate_network_size(robots);

    if (vision.err < 0.0 || vision.err_dist < 0.0 || vision.err_angle < 0.0)
        throw ConfigError("vision error magnitudes must be nonnegative");
    if (compass.max_error < 0.0) throw ConfigError("compass max_error must be nonnegative");

    switch (placement.kind) {
        case PlacementKind::UnitCirclePair:
            if (robots != 2) throw ConfigError("unit_circle_pair places exactly 2 robots");
            break;
        case PlacementKind::UniformBox:
            check_box(placement.box, "placement box");
            break;
        case PlacementKind::FixedPairPlusRandom:
            if (robots < 3) throw ConfigError("fixed_pair_plus_random needs at least 3 robots");
            check_box(placement.box, "placement box");
            break;
        case PlacementKind::GridSweep:
            if (robots < 3) throw ConfigError("grid_sweep needs at least 3 robots");
            if (placement.grid_nx == 0 || placement.grid_ny == 0) throw ConfigError("grid must be nonempty");
            check_box(placement.box, "placement box");
            if (robots > 3) check_box(placement.extra_box, "placement extra_box");
            break;
        case PlacementKind::Explicit:
            if (placement.points.size() != robots)
                throw ConfigError("explicit placement lists " + std::to_string(placement.points.size()) +
                                  " points for " + std::to_string(robots) + " robots");
            for (std::size_t i = 0; i < robots; ++i)
                for (std::size_t j = i + 1; j < robots; ++j)
                    if (placement.points[i] == placement.points[j])
                        throw ConfigError("explicit placement repeats a position");
            break;
    }

    if (termination.max_iterations == 0) throw ConfigError("max_iterations must be positive");
    if (!(termination.divergence_factor > 1.0)) throw ConfigError("divergence_factor must exceed 1");
    if (termination.defeat_confirmations < 0) throw ConfigError("defeat_confirmations must be nonnegative");
    if (termination.convergence.absolute < 0.0 || termination.convergence.relative < 0.0)
        throw ConfigError("convergence thresholds must be nonnegative");
    if (budget_seconds && !(*budget_seconds > 0.0)) throw ConfigError("budget must be positive");
    if (runs == 0 && !budget_seconds) throw ConfigError("a batch needs a run count or a budget");
}

AlgorithmConfig resolved_algorithm_config(const ScenarioConfig& config) {
    AlgorithmConfig c = config.algorithm;
    c.election.vision = config.vision;
    return c;
}

namespace {

Point2 uniform_in(const Box& b, RandomStream& rng) {
    const double x = rng.uniform(b.xmin, b.xmax);
    const double y = rng.uniform(b.ymin, b.ymax);
    return {x, y};
}

bool collides(std::span<const Point2> placed, Point2 p) {
    return std::find(placed.begin(), placed.end(), p) != placed.end();
}

void fill_uniform(std::vector<Point2>& out, std::size_t n, const Box& b, RandomStream& rng) {
    while (out.size() < n) {
        const Point2 p = uniform_in(b, rng);
        if (!collides(out, p)) out.push_back(p);
    }
}

}  // namespace

std::vector<Point2> sample_positions(const PlacementRule& rule, std::size_t n, RandomStream& rng,
                                     std::uint64_t point_index) {
    std::vector<Point2> out;
    out.reserve(n);
    switch (rule.kind) {
        case PlacementKind::UnitCirclePair: {
            if (n != 2) throw ConfigError("unit_circle_pair places exactly 2 robots");
            const double a = rng.uniform(0.0, kTwoPi);
            out.push_back({0.0, 0.0});
            out.push_back({std::cos(a), std::sin(a)});
            break;
        }
        case PlacementKind::UniformBox:
            fill_uniform(out, n, rule.box, rng);
            break;
        case PlacementKind::FixedPairPlusRandom:
            if (n < 3) throw ConfigError("fixed_pair_plus_random needs at least 3 robots");
            out.push_back({-0.5, 0.0});
            out.push_back({0.5, 0.0});
            fill_uniform(out, n, rule.box, rng);
            break;
        case PlacementKind::GridSweep: {
            if (n < 3) throw ConfigError("grid_sweep needs at least 3 robots");
            out.push_back({-0.5, 0.0});
            out.push_back({0.5, 0.0});
            const std::uint64_t cells = std::uint64_t(rule.grid_nx) * rule.grid_ny;
            const std::uint64_t cell = point_index % cells;
            const double ix = double(cell % rule.grid_nx) + 0.5;
            const double iy = double(cell / rule.grid_nx) + 0.5;
            const Point2 p{rule.box.xmin + ix * (rule.box.xmax - rule.box.xmin) / double(rule.grid_nx),
                           rule.box.ymin + iy * (rule.box.ymax - rule.box.ymin) / double(rule.grid_ny)};
            if (collides(out, p)) throw ConfigError("grid cell centre coincides with a fixed robot");
            out.push_back(p);
            fill_uniform(out, n, rule.extra_box, rng);
            break;
        }
        case PlacementKind::Explicit:
            if (rule.points.size() != n)
                throw ConfigError("explicit placement arity does not match the robot count");
            out = rule.points;
            break;
    }
    return out;
}

std::vector<RobotState> sample_initial(const ScenarioConfig& config, const Algorithm& algorithm,
                                       RandomStream& rng, std::uint64_t point_index) {
    const std::size_t n = config.robots;
    const std::vector<Point2> positions = sample_positions(config.placement, n, rng, point_index);
    const bool fixed = config.vision.draw_at == DrawAt::Init && !config.vision.is_identity();

    std::vector<RobotState> network(n);
    for (std::size_t i = 0; i < n; ++i) {
        RobotState& r = network[i];
        r.name = i + 1;
        r.position = r.position_at_move_start = r.target = positions[i];
        r.color = algorithm.initial_color();
        if (config.frames == FrameMode::Random) {
            const double rotation = rng.uniform(0.0, kTwoPi);
            const bool reflect = rng.bernoulli(0.5);
            r.frame = LocalFrame(rotation, reflect);
        }
        r.compass = config.compass;
        initialize_compass(r.compass, rng);
        if (fixed) {
            r.fixed_errors.resize(n);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) r.fixed_errors[j] = draw_error(config.vision, rng);
        }
    }
    return network;
}

double fuel_baseline(std::span<const Point2> initial) {
    if (initial.size() < 2) return 0.0;
    if (initial.size() == 2) return distance(initial[0], initial[1]);
    return sum_of_distances(initial, centroid(initial));
}

bool cycle_detection_enabled(const ScenarioConfig& config, const Algorithm& algorithm) {
    switch (config.termination.cycle_detection) {
        case CycleDetection::On: return true;
        case CycleDetection::Off: return false;
        case CycleDetection::Auto: return algorithm.problem() == Problem::Gathering;
    }
    return true;
}

namespace {

std::uint64_t to_mask(const ScheduleDecision& d) {
    std::uint64_t m = 0;
    for (std::size_t i : d.robots) m |= std::uint64_t{1} << i;
    return m;
}

ScheduleDecision from_mask(std::uint64_t mask, std::size_t n) {
    ScheduleDecision d;
    for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) d.robots.push_back(i);
    if (mask >> n) throw ContractViolation("schedule mask names a robot outside the network");
    return d;
}

std::vector<Point2> positions_of(std::span<const RobotState> network) {
    std::vector<Point2> out;
    out.reserve(network.size());
    for (const auto& r : network) out.push_back(r.position);
    return out;
}

// Tracks, per robot, the leader it settled on after its latest LOOK, as
// long as nobody has moved since that LOOK.
class ElectionTracker {
public:
    explicit ElectionTracker(std::size_t n) : look_epoch_(n, 0), decided_(n, kNoRobot) {}

    void observe(const Simulation& sim, const StepRecord& step) {
        for (const auto& [i, op] : step.operations) {
            const RobotState& r = sim.network()[i];
            if (op == Operation::Look) {
                look_epoch_[i] = epoch_;
                decided_[i] = kNoRobot;
            } else if (op == Operation::Compute) {
                if (r.scrambled) scrambled_ = true;
                const bool stays = r.target == r.position && !r.scrambled;
                decided_[i] = stays && look_epoch_[i] == epoch_ ? r.leader : kNoRobot;
            }
        }
        if (sim.moved_in_last_step()) {
            ++epoch_;
            std::fill(decided_.begin(), decided_.end(), kNoRobot);
        }
    }

    // Verdict once every robot is idle with a current decision.
    std::optional<Verdict> verdict(const Simulation& sim) const {
        const auto& net = sim.network();
        for (std::size_t i = 0; i < net.size(); ++i)
            if (net[i].phase != Phase::Idle || decided_[i] == kNoRobot) return std::nullopt;
        const bool agree = std::all_of(decided_.begin(), decided_.end(),
                                       [&](std::size_t l) { return l == decided_.front(); });
        Verdict v;
        v.kind = agree ? VerdictKind::Victory : VerdictKind::Defeat;
        v.reason = VerdictReason::Election;
        return v;
    }

    bool ever_scrambled() const { return scrambled_; }

private:
    std::uint64_t epoch_ = 0;
    std::vector<std::uint64_t> look_epoch_;
    std::vector<std::size_t> decided_;
    bool scrambled_ = false;
};

// Replays the decisions of steps t0+1..t1 on a copy of the run. True when
// every repetition ends on the key of t0 without passing through a
// gathered configuration.
bool confirm_gathering_loop(const Simulation& sim, std::span<const ScheduleDecision> decisions,
                            const Witness& w, int repetitions) {
    Simulation fork = sim;
    const InputSetKey key = joint_key(fork.network(), fork.algorithm());
    for (int rep = 0; rep < repetitions; ++rep) {
        for (std::uint64_t s = w.t0; s < w.t1; ++s) {
            fork.apply(decisions[s]);
            if (is_gathered(fork.network())) return false;
        }
        if (joint_key(fork.network(), fork.algorithm()) != key) return false;
    }
    return true;
}

}  // namespace

RunOutcome run_single(const ScenarioConfig& config, std::uint64_t run_seed, const RunHooks& hooks) {
    const auto alg = make_algorithm(resolved_algorithm_config(config));
    alg->validate_network_size(config.robots);

    RandomStream placement(derive_seed(run_seed, 0, StreamId::Placement));
    std::vector<RobotState> network = sample_initial(config, *alg, placement);
    const std::vector<Point2> initial = positions_of(network);
    const std::size_t n = network.size();

    RunOutcome out;
    out.run_seed = run_seed;
    out.baseline = fuel_baseline(initial);
    double initial_spread = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) initial_spread = std::max(initial_spread, distance(initial[i], initial[j]));

    Simulation sim(std::move(network), *alg, config.scheduler,
                   PerceptionSettings{config.vision, config.redraw_frames_per_look},
                   RunStreams::from_seed(run_seed));

    const Problem problem = alg->problem();
    const bool cycles = cycle_detection_enabled(config, *alg);
    const bool keep_schedule = n <= 64;
    const ConvergenceThresholds thresholds = config.termination.convergence;
    ExecutionTrace trace;
    ElectionTracker election(n);
    std::vector<ScheduleDecision> decisions;
    const bool confirm = cycles && problem == Problem::Gathering && config.termination.defeat_confirmations > 0;

    std::optional<Verdict> verdict;
    while (!verdict && sim.steps() < config.termination.max_iterations) {
        const ScheduleDecision decision = sim.draw_decision();
        if (keep_schedule) out.schedule.push_back(to_mask(decision));
        if (confirm) decisions.push_back(decision);
        const StepRecord step = sim.apply(decision);
        if (hooks.on_step) hooks.on_step(sim, step);

        if (problem == Problem::Election) {
            election.observe(sim, step);
            verdict = election.verdict(sim);
            continue;
        }

        record(trace, sim);
        if (problem == Problem::Gathering) {
            if (cycles) {
                auto w = gathering_defeat(trace);
                if (w && confirm) {
                    const int reps = config.termination.defeat_confirmations;
                    if (!confirm_gathering_loop(sim, decisions, *w, reps)) {
                        // the shortest candidate loop ends at the latest earlier occurrence
                        const auto prev = trace.previous_occurrence_of_back();
                        const auto ng = trace.last_non_gathered();
                        std::optional<Witness> shorter;
                        if (prev && ng && *ng > *prev) shorter = Witness{trace[*prev].step, trace.back().step, false};
                        if (shorter && shorter->t0 != w->t0 && confirm_gathering_loop(sim, decisions, *shorter, reps))
                            w = shorter;
                        else
                            w.reset();
                    }
                }
                if (w) {
                    verdict = Verdict{VerdictKind::Defeat, VerdictReason::Gathering, w};
                    break;
                }
            }
            const VictoryCheck v = gathering_victory(trace, sim, thresholds);
            if (v.victory)
                verdict = Verdict{VerdictKind::Victory,
                                  v.downgraded ? VerdictReason::Convergence : VerdictReason::Gathering, {}};
        } else {
            if (convergence_reached(sim.network(), thresholds)) {
                verdict = Verdict{VerdictKind::Victory, VerdictReason::Convergence, {}};
            } else if (divergence_detected(trace, initial_spread, config.termination.divergence_factor)) {
                verdict = Verdict{VerdictKind::Defeat, VerdictReason::Divergence, {}};
            } else if (cycles) {
                if (auto w = convergence_defeat(trace))
                    verdict = Verdict{VerdictKind::Defeat, VerdictReason::Convergence, w};
            }
        }
    }

    out.verdict = verdict.value_or(Verdict{});
    out.steps = sim.steps();
    out.traveled = sim.cumulative_traveled();
    out.total_traveled = sim.total_traveled();
    out.normalized_fuel = out.baseline > 0.0 ? out.total_traveled / out.baseline : 0.0;
    if (problem == Problem::Election && out.verdict.kind != VerdictKind::Timeout) {
        if (out.verdict.kind == VerdictKind::Defeat)
            out.election_class = ElectionClass::UndetectedError;
        else
            out.election_class = election.ever_scrambled() ? ElectionClass::DetectedPossibleError
                                                           : ElectionClass::Valid;
    }
    if (!out.verdict.witness) out.schedule.clear();
    return out;
}

// ---------------------------------------------------------------------------
// Batches

namespace {

std::string verdict_label(const Verdict& v) {
    std::string s(to_string(v.kind));
    if (v.kind != VerdictKind::Timeout) {
        s += ':';
        s += to_string(v.reason);
    }
    return s;
}

template <class Work>
void run_workers(unsigned parallelism, Work&& work) {
    if (parallelism <= 1) {
        work();
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < parallelism; ++w)
        pool.emplace_back([&] {
            try {
                work();
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

unsigned resolve_parallelism(unsigned p) {
    if (p == 0) p = std::max(1u, std::thread::hardware_concurrency());
    return p;
}

}  // namespace

BatchResult run_batch(const ScenarioConfig& config, unsigned parallelism, bool keep_outcomes,
                      const RunHooks& hooks) {
    const std::uint64_t cap = config.runs == 0 ? std::numeric_limits<std::uint64_t>::max() : config.runs;
    if (config.runs == 0 && !config.budget_seconds)
        throw ConfigError("batch would run zero runs: set runs or a budget");
    config.validate();
    parallelism = resolve_parallelism(parallelism);

    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    const auto deadline =
        config.budget_seconds
            ? start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*config.budget_seconds))
            : Clock::time_point::max();

    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> expired{false};
    std::mutex merge_mutex;
    std::vector<RunOutcome> all;

    run_workers(parallelism, [&] {
        std::vector<RunOutcome> mine;
        while (true) {
            if (config.budget_seconds && (expired.load() || Clock::now() >= deadline)) {
                expired = true;
                break;
            }
            const std::uint64_t i = next.fetch_add(1);
            if (i >= cap) break;
            RunOutcome o = run_single(config, derive_seed(config.seed, i), hooks);
            o.run_index = i;
            if (!keep_outcomes) {
                o.traveled.clear();
                o.traveled.shrink_to_fit();
                o.schedule.clear();
                o.schedule.shrink_to_fit();
            }
            mine.push_back(std::move(o));
        }
        std::lock_guard lock(merge_mutex);
        all.insert(all.end(), std::make_move_iterator(mine.begin()), std::make_move_iterator(mine.end()));
    });

    // Index order makes every floating-point sum independent of scheduling.
    std::sort(all.begin(), all.end(), [](const RunOutcome& a, const RunOutcome& b) { return a.run_index < b.run_index; });
    if (all.empty()) throw ConfigError("batch finished without completing any run");

    AggregateStats s;
    s.master_seed = config.seed;
    s.runs = all.size();
    double fuel_sum = 0.0;
    double steps_sum = 0.0;
    std::uint64_t diverged = 0;
    std::map<std::string, std::uint64_t> classes;
    std::uint64_t classified = 0;
    for (const auto& o : all) {
        ++s.verdicts[verdict_label(o.verdict)];
        steps_sum += double(o.steps);
        if (o.verdict.reason == VerdictReason::Divergence) ++diverged;
        if (o.election_class) {
            ++classes[std::string(to_string(*o.election_class))];
            ++classified;
        }
        if (o.verdict.kind == VerdictKind::Timeout) continue;
        if (s.fuel_runs == 0) {
            s.min_fuel = s.max_fuel = o.normalized_fuel;
        } else {
            s.min_fuel = std::min(s.min_fuel, o.normalized_fuel);
            s.max_fuel = std::max(s.max_fuel, o.normalized_fuel);
        }
        fuel_sum += o.normalized_fuel;
        ++s.fuel_runs;
    }
    if (s.fuel_runs) s.avg_fuel = std::clamp(fuel_sum / double(s.fuel_runs), s.min_fuel, s.max_fuel);
    s.avg_steps = steps_sum / double(s.runs);
    s.divergence_fraction = double(diverged) / double(s.runs);
    for (const auto& [name, count] : classes) s.election_fractions[name] = double(count) / double(classified);
    s.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();

    BatchResult result;
    result.stats = std::move(s);
    if (keep_outcomes) result.outcomes = std::move(all);
    return result;
}

// ---------------------------------------------------------------------------
// Election experiments

double ElectionSummary::fraction(ElectionClass c) const {
    if (points == 0) return 0.0;
    switch (c) {
        case ElectionClass::Valid: return double(valid) / double(points);
        case ElectionClass::DetectedPossibleError: return double(detected) / double(points);
        case ElectionClass::UndetectedError: return double(undetected) / double(points);
    }
    return 0.0;
}

namespace {

ElectionPoint election_point(const ScenarioConfig& config, const Algorithm& alg, std::uint64_t k) {
    const std::uint64_t seed = derive_seed(config.seed, k);
    RandomStream placement(derive_seed(seed, 0, StreamId::Placement));
    std::vector<RobotState> network = sample_initial(config, alg, placement, k);
    const std::size_t n = network.size();

    SchedulerConfig sched = config.scheduler;
    sched.kind = SchedulerKind::FSYNC;
    Simulation sim(std::move(network), alg, sched, PerceptionSettings{config.vision, config.redraw_frames_per_look},
                   RunStreams::from_seed(seed));
    for (std::size_t i = 0; i < n; ++i) sim.look(i);
    for (std::size_t i = 0; i < n; ++i) sim.compute(i);

    ElectionPoint p;
    p.index = k;
    p.position = sim.network().back().position;
    bool any_moved = false;
    for (const auto& r : sim.network()) {
        const bool moved = r.scrambled || r.target != r.position;
        any_moved = any_moved || moved;
        p.leaders.push_back(r.leader);
    }
    const bool agree =
        std::all_of(p.leaders.begin(), p.leaders.end(), [&](std::size_t l) { return l == p.leaders.front(); });
    p.cls = any_moved ? ElectionClass::DetectedPossibleError
                      : agree ? ElectionClass::Valid : ElectionClass::UndetectedError;
    return p;
}

void tally(ElectionSummary& s, ElectionClass c) {
    ++s.points;
    switch (c) {
        case ElectionClass::Valid: ++s.valid; break;
        case ElectionClass::DetectedPossibleError: ++s.detected; break;
        case ElectionClass::UndetectedError: ++s.undetected; break;
    }
}

}  // namespace

ElectionSummary election_experiment(const ScenarioConfig& config, std::uint64_t points,
                                    const std::function<void(const ElectionPoint&)>& sink,
                                    unsigned parallelism) {
    const auto alg = make_algorithm(resolved_algorithm_config(config));
    if (alg->problem() != Problem::Election)
        throw ConfigError("election experiments need an election algorithm");
    alg->validate_network_size(config.robots);
    if (points == 0) throw ConfigError("election experiment needs at least one point");

    ElectionSummary total;
    if (sink) {
        // The sink sees points in index order.
        for (std::uint64_t k = 0; k < points; ++k) {
            const ElectionPoint p = election_point(config, *alg, k);
            tally(total, p.cls);
            sink(p);
        }
        return total;
    }

    std::atomic<std::uint64_t> next{0};
    std::mutex merge_mutex;
    constexpr std::uint64_t kChunk = 1024;
    run_workers(resolve_parallelism(parallelism), [&] {
        ElectionSummary mine;
        while (true) {
            const std::uint64_t begin = next.fetch_add(kChunk);
            if (begin >= points) break;
            const std::uint64_t end = std::min(points, begin + kChunk);
            for (std::uint64_t k = begin; k < end; ++k) tally(mine, election_point(config, *alg, k).cls);
        }
        std::lock_guard lock(merge_mutex);
        total.points += mine.points;
        total.valid += mine.valid;
        total.detected += mine.detected;
        total.undetected += mine.undetected;
    });
    return total;
}

std::vector<CurvePoint> election_curve(const ScenarioConfig& config, int max_tries, std::uint64_t points,
                                       unsigned parallelism) {
    if (max_tries < 0) throw ConfigError("max_tries must be nonnegative");
    std::vector<CurvePoint> out;
    ScenarioConfig c = config;
    for (int t = 0; t <= max_tries; ++t) {
        c.algorithm.election.nb_tries = t;
        out.push_back({t, election_experiment(c, points, {}, parallelism)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Float pathology

PathologyAttempt float_pathology_attempt(double r1x, double r2x, bool mover_is_r1) {
    static const auto alg = make_algorithm(AlgorithmConfig{});
    std::vector<RobotState> network(2);
    network[0].name = 1;
    network[1].name = 2;
    network[0].position = network[0].position_at_move_start = network[0].target = {r1x, 0.0};
    network[1].position = network[1].position_at_move_start = network[1].target = {r2x, 0.0};

    SchedulerConfig sched;
    sched.kind = SchedulerKind::SSYNC;
    Simulation sim(std::move(network), *alg, sched, PerceptionSettings{}, RunStreams::from_seed(0));
    const ScheduleDecision mover{{mover_is_r1 ? std::size_t{0} : std::size_t{1}}};

    PathologyAttempt out;
    ExecutionTrace trace;
    constexpr std::uint64_t kMaxSteps = 10000;
    while (sim.steps() < kMaxSteps) {
        sim.apply(mover);
        record(trace, sim);
        if (trace.back().gathered) break;
        if (auto w = convergence_defeat(trace)) {
            out.float_stuck = w->float_stuck;
            break;
        }
    }
    out.steps = sim.steps();
    out.r1 = sim.network()[0].position;
    out.r2 = sim.network()[1].position;
    return out;
}

PathologyResult float_pathology_experiment(std::uint64_t attempts, std::uint64_t seed, unsigned parallelism) {
    if (attempts == 0) throw ConfigError("pathology experiment needs at least one attempt");
    PathologyResult total;
    total.attempts = attempts;
    std::atomic<std::uint64_t> next{0};
    std::mutex merge_mutex;
    constexpr std::uint64_t kChunk = 4096;
    run_workers(resolve_parallelism(parallelism), [&] {
        std::uint64_t s1 = 0, s2 = 0;
        while (true) {
            const std::uint64_t begin = next.fetch_add(kChunk);
            if (begin >= attempts) break;
            const std::uint64_t end = std::min(attempts, begin + kChunk);
            for (std::uint64_t k = begin; k < end; ++k) {
                RandomStream rng(derive_seed(seed, k));
                const double r1x = rng.uniform(0.0, 1.0);
                const double r2x = rng.uniform(2.0, 3.0);
                s1 += float_pathology_attempt(r1x, r2x, true).float_stuck;
                s2 += float_pathology_attempt(r1x, r2x, false).float_stuck;
            }
        }
        std::lock_guard lock(merge_mutex);
        total.stuck_mover_r1 += s1;
        total.stuck_mover_r2 += s2;
    });
    return total;
}

// ---------------------------------------------------------------------------
// Witness replay

ReplayReport replay_witness(const WitnessFile& file, int repetitions) {
    const ScenarioConfig& config = file.config;
    const auto alg = make_algorithm(resolved_algorithm_config(config));
    const Witness& w = file.witness;
    if (!(w.t0 < w.t1) || file.schedule.size() < w.t1)
        throw ConfigError("witness schedule does not cover steps 1..t1");

    RandomStream placement(derive_seed(file.run_seed, 0, StreamId::Placement));
    std::vector<RobotState> network = sample_initial(config, *alg, placement);
    const std::size_t n = network.size();
    Simulation sim(std::move(network), *alg, config.scheduler,
                   PerceptionSettings{config.vision, config.redraw_frames_per_look},
                   RunStreams::from_seed(file.run_seed));

    ReplayReport report;
    ExecutionTrace trace;
    auto advance = [&](std::uint64_t mask) {
        sim.apply(from_mask(mask, n));
        record(trace, sim);
    };
    for (std::uint64_t s = 0; s < w.t1; ++s) advance(file.schedule[s]);
    const InputSetKey key_t0 = trace[w.t0 - 1].joint;
    report.reproduced = trace[w.t1 - 1].joint == key_t0;

    for (int rep = 0; rep < repetitions; ++rep) {
        for (std::uint64_t s = w.t0; s < w.t1; ++s) {
            advance(file.schedule[s]);
            if (trace.back().gathered) report.gathered_during_loop = true;
        }
        if (trace.back().joint == key_t0) ++report.loops_confirmed;
    }
    report.trace.assign(trace.records().begin(), trace.records().end());
    return report;
}

}  // namespace swarmsim
