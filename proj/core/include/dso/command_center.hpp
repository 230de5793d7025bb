#ifndef DSO_COMMAND_CENTER_HPP
#define DSO_COMMAND_CENTER_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dso/config.hpp"
#include "dso/problem.hpp"
#include "dso/random.hpp"
#include "dso/squadron.hpp"
#include "dso/types.hpp"

namespace dso {

// Scan teams * drones uniform points and keep the best `drones` as the
// current best set. Throws ConfigError when the budget cannot cover the scan.
SquadronState initialize(const Problem& problem, const DsoConfig& cfg, Random& rng);

struct SelectionOutcome {
    std::size_t improved = 0;      // indices that improved the global best
    std::size_t soft_accepted = 0; // worse trials taken under stagnation
};

// Hard selection per drone index over the best trial of all teams, global
// best tracking and stagnation counters. When nothing improved the global
// best, stagnated indices (counter >= max_stagnation) other than the elite
// index accept their best trial with probability p_acc.
SelectionOutcome select_and_update(SquadronState& state, std::span<const TrialBatch> batches, const DsoConfig& cfg,
                                   Random& rng);

// drones x teams objective values -> drones x teams ranks, 1 = best, ties averaged.
Eigen::MatrixXd rank_teams(const Eigen::MatrixXd& tmofv);

// Mean rank per team plus the team's violation sum scaled by the largest sum
// (so the violation term lies in [0, 1]). Lower is better.
std::vector<double> team_quality(const Eigen::MatrixXd& ranks, std::span<const double> violation_sums);

// Teams 0, 2, ... start with rand/1 and 1, 3, ... with MVNS+Step; team 0's
// rand/1 is the fixed perturbation.
std::vector<Team> initial_teams(const DsoConfig& cfg, std::size_t dim);

struct Replacement {
    std::size_t iteration = 0;
    std::size_t team = 0;   // receiving team
    std::size_t source = 0; // team whose firmware was varied
    std::string old_text;
    std::string new_text;
};

// Replace the w worst non-fixed teams (never one of the w best) with variants
// of the w best teams' firmware, worst paired with best. Returns an empty log
// when no team is replaceable.
std::vector<Replacement> update_firmware(std::vector<Team>& teams, std::span<const double> qualities,
                                         const DsoConfig& cfg, Random& rng, std::size_t iteration);

enum class StopReason { Budget, MaxIterations, Success };
std::string_view to_string(StopReason r);

struct TraceRow {
    std::size_t iteration = 0;
    std::size_t evals = 0;
    double gbofv = 0.0;
    std::vector<double> qualities; // empty for the initialization row
    bool firmware_changed = false;
};

struct RunRecord {
    std::uint64_t seed = 0;
    std::string function;
    std::size_t dim = 0;
    std::size_t budget = 0;
    std::size_t evals_used = 0;
    std::size_t iterations = 0;
    double best_value = 0.0;
    double best_error = 0.0;
    Vector best;
    StopReason stop = StopReason::Budget;
    std::vector<TraceRow> trace; // row 0 is the initialization
    std::vector<Replacement> replacements;
    std::vector<std::string> final_firmware;

    bool success(double threshold) const { return best_error < threshold; }
};

// Full optimization loop until the budget, max_iterations or the success
// threshold on the error is reached. Deterministic for a given seed.
RunRecord run(const Problem& problem, const DsoConfig& cfg, std::uint64_t seed);

} // namespace dso

#endif
