// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: dso_acceptance [output-dir]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "dso/dso.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// best_error column of a runs CSV
std::vector<double> read_errors(const fs::path& p)
{
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<double> out;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) {
            cells.push_back(c);
        }
        out.push_back(std::stod(cells.at(7)));
    }
    return out;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Campaign {
    std::vector<double> errors;
    std::vector<double> seconds;
    std::vector<fs::path> traces;
};

// Ten seeded runs (seeds 42..51) at the default settings, one cmd_run per
// seed so each run is timed on its own.
Campaign campaign(const std::string& function, const fs::path& dir)
{
    Campaign c;
    for (std::uint64_t i = 0; i < 10; ++i) {
        dso::cli::RunOptions opts;
        opts.function = function;
        opts.dim = 10;
        opts.runs = 1;
        opts.seed = 42 + i;
        opts.config.budget = 100000;
        opts.config.teams = 4;
        opts.config.drones = 25;
        const auto stem = function + "_seed" + std::to_string(opts.seed);
        opts.out = (dir / (stem + ".runs.csv")).string();
        opts.trace = (dir / (stem + ".trace.csv")).string();
        std::ostringstream sink;
        const auto t0 = Clock::now();
        if (dso::cli::cmd_run(opts, sink) != 0) {
            throw std::runtime_error("cmd_run failed for " + stem);
        }
        c.seconds.push_back(seconds_since(t0));
        const auto e = read_errors(opts.out);
        c.errors.insert(c.errors.end(), e.begin(), e.end());
        c.traces.emplace_back(opts.trace);
    }
    return c;
}

std::string summary(const Campaign& c)
{
    return "median=" + fmt("%.3E", median(c.errors)) + " max=" +
           fmt("%.3E", *std::max_element(c.errors.begin(), c.errors.end())) +
           " slowest_run=" + fmt("%.2f", *std::max_element(c.seconds.begin(), c.seconds.end())) + "s";
}

const std::string kFixture = std::string(DSO_DATA_DIR) + "/cec2005_d10_avg_error.csv";

} // namespace

int main(int argc, char** argv)
{
    const fs::path dir = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "dso_acceptance";
    fs::create_directories(dir);

    std::map<std::string, Campaign> campaigns;
    auto get = [&](const std::string& fn) -> const Campaign& {
        auto it = campaigns.find(fn);
        if (it == campaigns.end()) {
            it = campaigns.emplace(fn, campaign(fn, dir)).first;
        }
        return it->second;
    };

    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;

    criteria.emplace_back("C1 sphere D=10 converges", [&] {
        const auto& c = get("sphere");
        const auto hits = std::count_if(c.errors.begin(), c.errors.end(), [](double e) { return e <= 1e-9; });
        const bool fast = std::all_of(c.seconds.begin(), c.seconds.end(), [](double s) { return s <= 120.0; });
        const bool ok = hits >= 8 && median(c.errors) <= 1e-9 && fast;
        return Outcome{ok, "runs<=1e-9: " + std::to_string(hits) + "/10 " + summary(c)};
    });

    criteria.emplace_back("C2 schwefel12 D=10 median <= 1e-3", [&] {
        const auto& c = get("schwefel12");
        return Outcome{median(c.errors) <= 1e-3, summary(c)};
    });

    criteria.emplace_back("C3 rastrigin D=10 median <= 10", [&] {
        const auto& c = get("rastrigin");
        return Outcome{median(c.errors) <= 10.0, summary(c)};
    });

    criteria.emplace_back("C4 Friedman on the comparison fixture", [&] {
        const auto t0 = Clock::now();
        const auto fr = dso::friedman(dso::read_comparison_matrix(kFixture));
        const double secs = seconds_since(t0);
        const bool ok = fr.df == 11 && std::abs(fr.chi2 - 20.6765) <= 0.5 && std::abs(fr.p_value - 3.688e-2) <= 0.01 &&
                        secs < 1.0;
        return Outcome{ok, "chi2=" + fmt("%.4f", fr.chi2) + " df=" + std::to_string(fr.df) + " p=" +
                               fmt("%.4E", fr.p_value) + " time=" + fmt("%.4f", secs) + "s"};
    });

    criteria.emplace_back("C5 W/T/L triples vs control", [&] {
        const auto m = dso::read_comparison_matrix(kFixture);
        const std::map<std::string, std::string> expected{
            {"BLX-GL50", "3/3/4"},  {"BLX-MA", "6/2/2"}, {"CoEVO", "5/3/2"},    {"DE", "3/3/4"},
            {"DMS-L-PSO", "1/2/7"}, {"EDA", "3/3/4"},    {"G-CMA-ES", "0/3/7"}, {"K-PCX", "4/2/4"},
            {"L-CMA-ES", "3/2/5"},  {"L-SaDE", "2/2/6"}, {"SPC-PNX", "5/3/2"},
        };
        std::size_t matched = 0;
        std::string mismatches;
        const auto control = m.row("DSO");
        for (const auto& [name, want] : expected) {
            const auto got = dso::wtl(control, m.row(name)).str();
            if (got == want) {
                ++matched;
            } else {
                mismatches += " " + name + "=" + got;
            }
        }
        return Outcome{matched == expected.size(),
                       std::to_string(matched) + "/" + std::to_string(expected.size()) + " exact" + mismatches};
    });

    criteria.emplace_back("C6 firmware rules under mutation and updates", [&] {
        std::size_t valid = 0;
        std::size_t total = 0;
        for (const auto& base : {dso::rand1_firmware(), dso::mvns_step_firmware()}) {
            for (std::uint64_t seed = 0; seed < 1000; ++seed) {
                dso::Random rng(seed);
                const auto v = dso::mutate_variant(base, rng);
                ++total;
                valid += dso::validate_variant(v, base).empty() && dso::parse_firmware(dso::serialize(v)).same_tree(v);
            }
        }
        dso::DsoConfig cfg;
        auto teams = dso::initial_teams(cfg, 10);
        dso::Random rng(2005);
        std::size_t intact = 0;
        for (std::size_t it = 1; it <= 1000; ++it) {
            std::vector<double> q(teams.size());
            for (auto& x : q) {
                x = rng.uniform(1.0, 5.0);
            }
            dso::update_firmware(teams, q, cfg, rng, it);
            intact += teams[0].firmware.fixed() && teams[0].firmware.same_tree(dso::rand1_firmware());
        }
        return Outcome{valid == total && intact == 1000, "valid variants " + std::to_string(valid) + "/" +
                                                             std::to_string(total) + ", fixed intact " +
                                                             std::to_string(intact) + "/1000 cycles"};
    });

    criteria.emplace_back("C7 violation vs naive loop", [&] {
        dso::Random rng(7);
        std::size_t equal = 0;
        for (int k = 0; k < 10000; ++k) {
            const auto d = static_cast<Eigen::Index>(1 + rng.index(20));
            dso::Vector lb(d);
            dso::Vector ub(d);
            dso::Vector row(d);
            for (Eigen::Index j = 0; j < d; ++j) {
                lb[j] = rng.uniform(-100, 50);
                ub[j] = lb[j] + rng.uniform(0, 100);
                row[j] = rng.uniform(-200, 200);
            }
            double naive = 0.0;
            for (Eigen::Index j = 0; j < d; ++j) {
                if (row[j] > ub[j]) {
                    naive += row[j] - ub[j];
                } else if (row[j] < lb[j]) {
                    naive += lb[j] - row[j];
                }
            }
            equal += dso::violation(row, lb, ub) == naive;
        }
        return Outcome{equal == 10000, std::to_string(equal) + "/10000 rows exactly equal"};
    });

    criteria.emplace_back("C8 cmd_run is byte-deterministic", [&] {
        std::vector<std::string> runs;
        std::vector<std::string> traces;
        for (int rep = 0; rep < 2; ++rep) {
            dso::cli::RunOptions opts;
            opts.function = "rastrigin";
            opts.dim = 10;
            opts.runs = 3;
            opts.seed = 42;
            opts.config.budget = 20000;
            opts.out = (dir / ("det" + std::to_string(rep) + ".runs.csv")).string();
            opts.trace = (dir / ("det" + std::to_string(rep) + ".trace.csv")).string();
            std::ostringstream sink;
            if (dso::cli::cmd_run(opts, sink) != 0) {
                return Outcome{false, "cmd_run failed"};
            }
            runs.push_back(slurp(opts.out));
            traces.push_back(slurp(opts.trace));
        }
        const bool ok = runs[0] == runs[1] && traces[0] == traces[1] && !runs[0].empty() && !traces[0].empty();
        return Outcome{ok, "runs " + std::to_string(runs[0].size()) + " bytes, trace " +
                               std::to_string(traces[0].size()) + " bytes, identical=" + (ok ? "yes" : "no")};
    });

    criteria.emplace_back("C9 GBOFV traces never increase", [&] {
        std::size_t files = 0;
        std::size_t rows = 0;
        std::size_t rises = 0;
        for (const auto& fn : {"sphere", "schwefel12", "rastrigin"}) {
            for (const auto& path : get(fn).traces) {
                std::ifstream in(path);
                const auto pts = dso::read_trace_csv(in);
                ++files;
                rows += pts.size();
                for (std::size_t i = 1; i < pts.size(); ++i) {
                    if (pts[i].run_id == pts[i - 1].run_id && pts[i].gbofv > pts[i - 1].gbofv) {
                        ++rises;
                    }
                }
            }
        }
        return Outcome{rises == 0 && files == 30 && rows > 0, std::to_string(files) + " trace files, " +
                                                                  std::to_string(rows) + " rows, " +
                                                                  std::to_string(rises) + " increases"};
    });

    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << " | " << o.detail << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
