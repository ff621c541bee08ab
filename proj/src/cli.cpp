#include "swarmsim/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "swarmsim/config_io.hpp"
#include "swarmsim/errors.hpp"
#include "swarmsim/harness.hpp"

namespace swarmsim {

namespace {

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    unsigned parallelism = 0;
    bool print_config = false;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
    cmd.add_option("--config", o.config_path, "Scenario JSON file");
    cmd.add_option("--set", o.overrides, "Override a config field: path.to.field=value")->take_all();
    cmd.add_option("--seed", o.seed, "Master seed (falls back to the config, then SWARMSIM_SEED)");
    cmd.add_option("--parallelism", o.parallelism, "Worker threads (default: logical CPUs)");
    cmd.add_flag("--print-config", o.print_config, "Print the resolved config as JSON and exit");
}

ScenarioConfig resolve_config(const CommonOptions& o) {
    Json doc = o.config_path.empty() ? Json::object() : load_json_file(o.config_path);
    for (const auto& s : o.overrides) apply_override(doc, s);
    const bool has_seed = doc.is_object() && doc.contains("seed");
    ScenarioConfig c = scenario_from_json(doc);
    if (o.seed) {
        c.seed = *o.seed;
    } else if (!has_seed) {
        if (const char* env = std::getenv("SWARMSIM_SEED"); env && *env) c.seed = parse_u64(env);
    }
    return c;
}

unsigned parallelism_of(const CommonOptions& o) {
    return o.parallelism ? o.parallelism : std::max(1u, std::thread::hardware_concurrency());
}

void print_csv(std::ostream& out, const CsvRow& row) { out << join_csv(row) << '\n'; }

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    return f;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monte-Carlo simulator for oblivious mobile robots", "swarmsim"};
    app.require_subcommand(1);

    CommonOptions common;

    auto* run = app.add_subcommand("run", "One seeded run; prints the outcome as JSON");
    add_common(*run, common);
    std::uint64_t run_index = 0;
    std::string witness_out;
    run->add_option("--index", run_index, "Run index within the batch (seed = derive(master, index))");
    run->add_option("--witness-out", witness_out, "Write the defeat witness schedule here");

    auto* bench = app.add_subcommand("bench", "Batch of runs; prints one aggregate CSV row");
    add_common(*bench, common);
    std::optional<std::uint64_t> runs;
    std::optional<double> budget;
    std::string per_run_path, witness_dir;
    std::size_t max_witnesses = 100;
    bench->add_option("--runs", runs, "Number of runs");
    bench->add_option("--budget", budget, "Wall-clock budget in seconds");
    bench->add_option("--per-run", per_run_path, "Also write one CSV row per run here");
    bench->add_option("--witness-dir", witness_dir, "Write defeat witnesses into this directory");
    bench->add_option("--max-witnesses", max_witnesses, "Cap on witness files written");

    auto* scatter = app.add_subcommand("scatter", "Election map: one CSV row per placement point");
    add_common(*scatter, common);
    std::optional<double> err_value;
    std::uint64_t points = 10000;
    std::optional<int> nb_tries;
    std::optional<int> curve_max;
    scatter->add_option("--err", err_value, "Absolute vision error radius");
    scatter->add_option("--points", points, "Number of placement points");
    scatter->add_option("--nb-tries", nb_tries, "Re-perturbation tries of the reliable election");
    scatter->add_option("--curve", curve_max, "Emit the class counts for nb_tries = 0..N instead of a map");

    auto* pathology = app.add_subcommand("pathology", "Adjacent-float midpoint experiment");
    add_common(*pathology, common);
    std::uint64_t attempts = 1000000;
    pathology->add_option("--attempts", attempts, "Attempts per mover case");

    auto* replay = app.add_subcommand("replay", "Re-execute a witness schedule file; prints the trace CSV");
    std::string witness_path;
    int repetitions = 3;
    replay->add_option("witness", witness_path, "Witness file")->required();
    replay->add_option("--repetitions", repetitions, "Times to repeat the cycle segment");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitConfigError;
    }

    try {
        if (replay->parsed()) {
            std::ifstream in(witness_path);
            if (!in) throw ConfigError("cannot open '" + witness_path + "'");
            const WitnessFile file = read_witness(in);
            const ReplayReport report = replay_witness(file, repetitions);
            print_csv(out, trace_csv_header(file.config.robots));
            for (const auto& rec : report.trace) print_csv(out, to_csv(rec));
            err << "reproduced=" << report.reproduced << " loops_confirmed=" << report.loops_confirmed
                << " gathered_during_loop=" << report.gathered_during_loop << '\n';
            return kExitOk;
        }

        ScenarioConfig config = resolve_config(common);
        if (bench->parsed()) {
            if (runs) config.runs = *runs;
            if (budget) {
                config.budget_seconds = *budget;
                if (!runs) config.runs = 0;
            }
        }
        if (scatter->parsed()) {
            if (err_value) {
                if (config.vision.kind == VisionErrorKind::None) config.vision.kind = VisionErrorKind::Absolute;
                config.vision.err = *err_value;
            }
            if (nb_tries) config.algorithm.election.nb_tries = *nb_tries;
        }
        if (common.print_config) {
            out << to_json(config).dump(2) << '\n';
            return kExitOk;
        }
        if (!pathology->parsed()) config.validate();

        if (run->parsed()) {
            RunOutcome o = run_single(config, derive_seed(config.seed, run_index));
            o.run_index = run_index;
            Json j = to_json(o);
            j["run_index"] = run_index;
            j["master_seed"] = config.seed;
            out << j.dump(2) << '\n';
            if (!witness_out.empty() && o.verdict.witness) {
                auto f = open_output(witness_out);
                write_witness(f, {config, o.run_seed, *o.verdict.witness, o.schedule});
            }
            return kExitOk;
        }

        if (bench->parsed()) {
            const bool keep = !per_run_path.empty() || !witness_dir.empty();
            const BatchResult result = run_batch(config, parallelism_of(common), keep);
            print_csv(out, aggregate_csv_header());
            print_csv(out, to_csv(result.stats));
            if (!per_run_path.empty()) {
                auto f = open_output(per_run_path);
                print_csv(f, run_csv_header());
                for (const auto& o : result.outcomes) print_csv(f, to_csv(o));
            }
            if (!witness_dir.empty()) {
                std::filesystem::create_directories(witness_dir);
                std::size_t written = 0;
                for (const auto& o : result.outcomes) {
                    if (!o.verdict.witness || o.schedule.empty() || written >= max_witnesses) continue;
                    auto f = open_output((std::filesystem::path(witness_dir) /
                                          ("witness_" + std::to_string(o.run_index) + ".ndjson"))
                                             .string());
                    write_witness(f, {config, o.run_seed, *o.verdict.witness, o.schedule});
                    ++written;
                }
            }
            return kExitOk;
        }

        if (scatter->parsed()) {
            if (curve_max) {
                print_csv(out, curve_csv_header());
                for (const auto& c : election_curve(config, *curve_max, points, parallelism_of(common)))
                    print_csv(out, to_csv(c));
                return kExitOk;
            }
            print_csv(out, scatter_csv_header(config.robots));
            election_experiment(config, points, [&](const ElectionPoint& p) { print_csv(out, to_csv(p)); });
            return kExitOk;
        }

        if (pathology->parsed()) {
            const PathologyResult r = float_pathology_experiment(attempts, config.seed, parallelism_of(common));
            print_csv(out, pathology_csv_header());
            print_csv(out, to_csv(r));
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const RegistryError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternalError;
    }
    err << "internal error: no subcommand handled\n";
    return kExitInternalError;
}

}  // namespace swarmsim
