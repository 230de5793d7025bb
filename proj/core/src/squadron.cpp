#include "dso/squadron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dso/evaluate.hpp"

namespace dso {

std::size_t SquadronState::elite_index() const
{
    Eigen::Index best = 0;
    cbofv.minCoeff(&best);
    return static_cast<std::size_t>(best);
}

Team::Team(std::size_t id_, Firmware fw, std::size_t drones, std::size_t dim)
    : id(id_), firmware(std::move(fw)),
      prev_tmc(Matrix::Zero(static_cast<Eigen::Index>(drones), static_cast<Eigen::Index>(dim)))
{
}

void Team::install(Firmware fw)
{
    firmware = std::move(fw);
    prev_tmc.setZero();
    rank_history.clear();
    violation_history.clear();
}

TrialBatch generate_trials(Team& team, const SquadronState& state, const PBestModel& pbest, const Problem& problem,
                           const DsoConfig& cfg, Random& rng, std::size_t budget_left)
{
    const auto n = state.cbc.rows();
    const auto d = state.cbc.cols();
    const Vector interval = problem.ub() - problem.lb();

    TrialBatch batch;
    batch.tmc.resize(n, d);
    batch.tmofv = Vector::Constant(n, std::numeric_limits<double>::infinity());
    batch.violations = Vector::Zero(n);
    std::vector<bool> scan(static_cast<std::size_t>(n), false);
    const auto perms = draw_permutations(permutation_slots(team.firmware), static_cast<std::size_t>(n), rng);

    for (Eigen::Index i = 0; i < n; ++i) {
        const EvalContext ctx{state.cbc, state.gbc, team.prev_tmc, problem.lb(),
                              problem.ub(), interval, pbest,         cfg.constants,
                              static_cast<std::size_t>(i), perms};
        const Vector current = state.cbc.row(i).transpose();

        auto trial = evaluate_checked(team.firmware, ctx, rng);
        if (!trial) {
            ++batch.faults;
            batch.tmc.row(i) = current.transpose();
            continue;
        }

        const auto rec = static_cast<Recombination>(rng.index(kRecombinationCount));
        const double cr = rng.uniform(cfg.cr_min, cfg.cr_max);
        const Vector mixed = recombine(*trial, current, rec, cr, rng);
        ++batch.recombinations[static_cast<std::size_t>(rec)];

        batch.violations[i] = violation(mixed, problem.lb(), problem.ub());

        const auto cor = static_cast<Correction>(rng.index(kCorrectionCount));
        batch.tmc.row(i) = correct_bounds(mixed, problem.lb(), problem.ub(), cor, rng).transpose();
        ++batch.corrections[static_cast<std::size_t>(cor)];

        scan[static_cast<std::size_t>(i)] = true;
    }

    // All draws are done; scanning order cannot change the result.
    for (Eigen::Index i = 0; i < n && batch.evals_used < budget_left; ++i) {
        if (!scan[static_cast<std::size_t>(i)]) {
            continue;
        }
        const double value = problem(batch.tmc.row(i).transpose());
        batch.tmofv[i] = std::isnan(value) ? std::numeric_limits<double>::infinity() : value;
        ++batch.evals_used;
    }

    team.prev_tmc = batch.tmc;
    return batch;
}

} // namespace dso
