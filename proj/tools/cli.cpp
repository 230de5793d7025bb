#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "dso/dso.hpp"

namespace dso::cli {

namespace {

// Independent seeded runs, optionally on several threads. Results are ordered
// by run index whatever the completion order.
std::vector<RunRecord> execute_runs(const Problem& problem, const DsoConfig& cfg, std::uint64_t seed, std::size_t runs,
                                    std::size_t threads)
{
    cfg.validate();
    std::vector<RunRecord> records(runs);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(runs);
    auto worker = [&] {
        for (auto i = next++; i < runs; i = next++) {
            try {
                records[i] = run(problem, cfg, seed + i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto pool = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(runs, 1));
    if (pool == 1) {
        worker();
    } else {
        std::vector<std::jthread> workers;
        for (std::size_t t = 0; t < pool; ++t) {
            workers.emplace_back(worker);
        }
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return records;
}

std::vector<double> errors_of(const std::vector<RunRecord>& records)
{
    std::vector<double> e;
    e.reserve(records.size());
    for (const auto& r : records) {
        e.push_back(r.best_error);
    }
    return e;
}

void print_stats_table_header(std::ostream& out)
{
    out << std::left << std::setw(12) << "function" << std::right << std::setw(11) << "Min" << std::setw(11) << "Median"
        << std::setw(11) << "Max" << std::setw(11) << "Mean" << std::setw(11) << "Std.Dev" << std::setw(7) << "SR"
        << '\n';
}

void print_stats_row(std::ostream& out, std::string_view name, const RunStats& s)
{
    char sr[16];
    std::snprintf(sr, sizeof sr, "%.3f", s.success_rate);
    out << std::left << std::setw(12) << name << std::right << std::setw(11) << format_error(s.min) << std::setw(11)
        << format_error(s.median) << std::setw(11) << format_error(s.max) << std::setw(11) << format_error(s.mean)
        << std::setw(11) << format_error(s.std) << std::setw(7) << sr << '\n';
}

template <typename Writer>
void write_output(const std::string& path, Writer&& write)
{
    std::ostringstream ss;
    write(ss);
    write_file_atomic(path, ss.str());
}

Problem load_problem(const RunOptions& opts)
{
    auto problem = make_problem(opts.function, opts.dim, opts.problem_seed);
    if (!opts.shift_in.empty()) {
        std::ifstream in(opts.shift_in);
        if (!in) {
            throw Error("cannot open shift file '" + opts.shift_in + "'");
        }
        auto shift = read_vector(in);
        if (static_cast<std::size_t>(shift.size()) != opts.dim) {
            throw ConfigError("shift file has " + std::to_string(shift.size()) + " values, expected " +
                              std::to_string(opts.dim));
        }
        problem = Problem(problem.function(), problem.lb(), problem.ub(), std::move(shift), problem.bias());
    }
    return problem;
}

// Algorithm parameters shared by `run` and `suite`.
void add_config_options(CLI::App& app, DsoConfig& cfg)
{
    app.add_option("--budget", cfg.budget, "Total objective evaluations shared by all teams")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--teams", cfg.teams, "Number of teams")->capture_default_str();
    app.add_option("--drones", cfg.drones, "Drones per team")->capture_default_str();
    app.add_option("--c1", cfg.constants.c1, "Constant C1 (rand/1 scale factor)")->capture_default_str();
    app.add_option("--c2", cfg.constants.c2, "Constant C2")->capture_default_str();
    app.add_option("--c3", cfg.constants.c3, "Constant C3")->capture_default_str();
    app.add_option("--w", cfg.replaced_per_update, "Firmware replaced per update")->capture_default_str();
    app.add_option("--max-stagnation", cfg.max_stagnation, "Iterations without improvement before soft selection")
        ->capture_default_str();
    app.add_option("--p-acc", cfg.p_acc, "Probability of accepting a worse trial when stagnated")
        ->capture_default_str();
    app.add_option("--s-min", cfg.tree_size.min, "Exclusive lower bound on firmware size")->capture_default_str();
    app.add_option("--s-max", cfg.tree_size.max, "Exclusive upper bound on firmware size")->capture_default_str();
    app.add_option("--p-best", cfg.p_best, "Fraction of best solutions forming the p-best set")
        ->capture_default_str();
    app.add_option("--cr-min", cfg.cr_min, "Lower end of the CR draw")->capture_default_str();
    app.add_option("--cr-max", cfg.cr_max, "Upper end of the CR draw")->capture_default_str();
    app.add_option("--update-period", cfg.update_period, "Iterations between firmware updates")
        ->capture_default_str();
    app.add_option("--max-iterations", cfg.max_iterations, "Iteration cap");
    app.add_option("--success-threshold", cfg.success_threshold, "Stop once the error drops below this")
        ->capture_default_str();
}

// Splices `key=value` lines of a --config file into the argument list as
// flags, skipping keys already given on the command line so flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args)
{
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty()) {
        return rest;
    }
    auto given = [&](const std::string& key) {
        return std::ranges::any_of(rest, [&](const std::string& a) { return a == "--" + key || a.rfind("--" + key + "=", 0) == 0; });
    };
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_file(path);
    } catch (const CLI::FileError&) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    for (const auto& item : items) {
        const auto key = item.name;
        if (key.empty() || key == "++" || key == "--" || given(key)) {
            continue;
        }
        rest.push_back("--" + key);
        rest.insert(rest.end(), item.inputs.begin(), item.inputs.end());
    }
    return rest;
}

} // namespace

int cmd_run(const RunOptions& opts, std::ostream& out)
{
    const auto problem = load_problem(opts);
    if (!opts.shift_out.empty()) {
        write_output(opts.shift_out, [&](std::ostream& os) { write_vector(os, problem.shift()); });
    }
    const auto records = execute_runs(problem, opts.config, opts.seed, opts.runs, opts.threads);

    write_output(opts.out, [&](std::ostream& os) { write_runs_csv(os, records, opts.config.success_threshold); });
    if (!opts.trace.empty()) {
        write_output(opts.trace, [&](std::ostream& os) { write_trace_csv(os, records); });
    }
    if (!opts.firmware_log.empty()) {
        write_output(opts.firmware_log, [&](std::ostream& os) { write_firmware_log(os, records); });
    }

    const auto errors = errors_of(records);
    print_stats_table_header(out);
    print_stats_row(out, problem.name(), descriptive(errors, opts.config.success_threshold));
    return 0;
}

int cmd_suite(const SuiteOptions& opts, std::ostream& out)
{
    std::vector<Function> functions;
    if (opts.functions.empty()) {
        functions.assign(all_functions().begin(), all_functions().end());
    } else {
        for (const auto& name : opts.functions) {
            functions.push_back(function_from_name(name));
        }
    }

    std::ostringstream summary;
    std::vector<RunRecord> all;
    write_summary_header(summary);
    print_stats_table_header(out);
    for (auto f : functions) {
        const auto problem = make_problem(f, opts.dim, opts.problem_seed);
        auto records = execute_runs(problem, opts.config, opts.seed, opts.runs, opts.threads);
        const auto stats = descriptive(errors_of(records), opts.config.success_threshold);
        write_summary_row(summary, problem.name(), opts.dim, stats);
        print_stats_row(out, problem.name(), stats);
        all.insert(all.end(), std::make_move_iterator(records.begin()), std::make_move_iterator(records.end()));
    }

    if (!opts.out.empty()) {
        write_file_atomic(opts.out, summary.str());
    }
    if (!opts.runs_out.empty()) {
        write_output(opts.runs_out, [&](std::ostream& os) { write_runs_csv(os, all, opts.config.success_threshold); });
    }
    return 0;
}

int cmd_compare(const CompareOptions& opts, std::ostream& out)
{
    const auto matrix = read_comparison_matrix(opts.fixture);
    const auto fr = friedman(matrix);
    const auto control = matrix.row(opts.control);

    char line[160];
    out << "methods=" << matrix.methods().size() << " functions=" << matrix.functions().size() << '\n';
    std::snprintf(line, sizeof line, "friedman chi2=%.4f df=%zu p=%.3E\n", fr.chi2, fr.df, fr.p_value);
    out << line;
    std::snprintf(line, sizeof line, "friedman (no tie correction) chi2=%.4f df=%zu p=%.3E\n", fr.chi2_plain, fr.df,
                  fr.p_value_plain);
    out << line;
    out << "control=" << opts.control << '\n';
    for (const auto& m : matrix.methods()) {
        if (m == opts.control) {
            continue;
        }
        out << m << ' ' << wtl(control, matrix.row(m)).str() << '\n';
    }
    return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Drone Squadron Optimization: runs, benchmark suites and rank comparisons", "dso"};
    app.require_subcommand(1);

    // Already consumed by expand_config; declared so it shows in --help.
    std::string config_path;

    RunOptions run_opts;
    auto* run = app.add_subcommand("run", "Independent seeded runs on one benchmark function");
    run->add_option("--config", config_path, "Key-value configuration file (flags take precedence)");
    run->add_option("--function", run_opts.function, "Benchmark function")
        ->required()
        ->check(CLI::IsMember(std::vector<std::string>{"sphere", "schwefel12", "elliptic", "rosenbrock", "rastrigin",
                                                       "ackley", "griewank"}));
    run->add_option("--dim", run_opts.dim, "Problem dimension")->check(CLI::PositiveNumber)->capture_default_str();
    run->add_option("--runs", run_opts.runs, "Number of runs")->check(CLI::PositiveNumber)->capture_default_str();
    run->add_option("--seed", run_opts.seed, "Base seed; run i uses seed + i")->capture_default_str();
    run->add_option("--problem-seed", run_opts.problem_seed, "Seed of the shift vector")->capture_default_str();
    run->add_option("--threads", run_opts.threads, "Concurrent runs")->capture_default_str();
    run->add_option("--out", run_opts.out, "Runs CSV path")->required();
    run->add_option("--trace", run_opts.trace, "Per-iteration trace CSV path");
    run->add_option("--firmware-log", run_opts.firmware_log, "Firmware replacement log path");
    run->add_option("--shift-in", run_opts.shift_in, "Read the shift vector from this file");
    run->add_option("--shift-out", run_opts.shift_out, "Write the shift vector to this file");
    add_config_options(*run, run_opts.config);

    SuiteOptions suite_opts;
    auto* suite = app.add_subcommand("suite", "Descriptive statistics over every benchmark function");
    suite->add_option("--config", config_path, "Key-value configuration file (flags take precedence)");
    suite->add_option("--functions", suite_opts.functions, "Subset of functions (default: all)")->delimiter(',');
    suite->add_option("--dim", suite_opts.dim, "Problem dimension")->check(CLI::PositiveNumber)->capture_default_str();
    suite->add_option("--runs", suite_opts.runs, "Runs per function")->check(CLI::PositiveNumber)->capture_default_str();
    suite->add_option("--seed", suite_opts.seed, "Base seed; run i uses seed + i")->capture_default_str();
    suite->add_option("--problem-seed", suite_opts.problem_seed, "Seed of the shift vectors")->capture_default_str();
    suite->add_option("--threads", suite_opts.threads, "Concurrent runs")->capture_default_str();
    suite->add_option("--out", suite_opts.out, "Summary CSV path");
    suite->add_option("--runs-out", suite_opts.runs_out, "Runs CSV path for every function");
    add_config_options(*suite, suite_opts.config);

    CompareOptions cmp_opts;
    auto* compare = app.add_subcommand("compare", "Friedman statistic and W/T/L against a control method");
    compare->add_option("--fixture", cmp_opts.fixture, "Average-error matrix (methods x functions)")->required();
    compare->add_option("--control", cmp_opts.control, "Control method")->capture_default_str();

    try {
        const auto expanded = expand_config(args);
        std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
        app.parse(reversed);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            return cmd_run(run_opts, out);
        }
        if (*suite) {
            return cmd_suite(suite_opts, out);
        }
        return cmd_compare(cmp_opts, out);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace dso::cli
