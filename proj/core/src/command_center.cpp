#include "dso/command_center.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dso/movement.hpp"

namespace dso {

SquadronState initialize(const Problem& problem, const DsoConfig& cfg, Random& rng)
{
    const std::size_t scans = cfg.teams * cfg.drones;
    if (cfg.budget < scans) {
        throw ConfigError("budget " + std::to_string(cfg.budget) + " cannot cover the initial scan of " +
                          std::to_string(scans) + " points");
    }
    const auto d = static_cast<Eigen::Index>(problem.dim());
    Matrix points(static_cast<Eigen::Index>(scans), d);
    Vector values(static_cast<Eigen::Index>(scans));
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            points(i, j) = rng.uniform(problem.lb()[j], problem.ub()[j]);
        }
        values[i] = problem(points.row(i).transpose());
    }

    std::vector<std::size_t> order(scans);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[static_cast<Eigen::Index>(a)] < values[static_cast<Eigen::Index>(b)];
    });

    SquadronState state;
    const auto n = static_cast<Eigen::Index>(cfg.drones);
    state.cbc.resize(n, d);
    state.cbofv.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto src = static_cast<Eigen::Index>(order[static_cast<std::size_t>(i)]);
        state.cbc.row(i) = points.row(src);
        state.cbofv[i] = values[src];
    }
    state.gbc = state.cbc.row(0).transpose();
    state.gbofv = state.cbofv[0];
    state.stagnation.assign(cfg.drones, 0);
    state.evals_used = scans;
    return state;
}

SelectionOutcome select_and_update(SquadronState& state, std::span<const TrialBatch> batches, const DsoConfig& cfg,
                                   Random& rng)
{
    SelectionOutcome out;
    const auto n = state.cbc.rows();
    std::vector<std::size_t> best_team(static_cast<std::size_t>(n), 0);
    std::vector<bool> improved_here(static_cast<std::size_t>(n), false);

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        std::size_t best = 0;
        for (std::size_t t = 1; t < batches.size(); ++t) {
            if (batches[t].tmofv[i] < batches[best].tmofv[i]) {
                best = t;
            }
        }
        best_team[idx] = best;
        const double value = batches[best].tmofv[i];
        if (value < state.cbofv[i]) {
            state.cbofv[i] = value;
            state.cbc.row(i) = batches[best].tmc.row(i);
            state.stagnation[idx] = 0;
            improved_here[idx] = true;
            if (value < state.gbofv) {
                ++out.improved;
                state.gbofv = value;
                state.gbc = batches[best].tmc.row(i).transpose();
            }
        } else {
            ++state.stagnation[idx];
        }
    }

    if (out.improved == 0) {
        const auto elite = state.elite_index();
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            if (improved_here[idx] || idx == elite || state.stagnation[idx] < cfg.max_stagnation) {
                continue;
            }
            const auto& batch = batches[best_team[idx]];
            if (!std::isfinite(batch.tmofv[i])) {
                continue;
            }
            if (rng.uniform() < cfg.p_acc) {
                state.cbofv[i] = batch.tmofv[i];
                state.cbc.row(i) = batch.tmc.row(i);
                ++out.soft_accepted;
            }
        }
    }
    return out;
}

Eigen::MatrixXd rank_teams(const Eigen::MatrixXd& tmofv)
{
    Eigen::MatrixXd ranks(tmofv.rows(), tmofv.cols());
    const auto t = static_cast<std::size_t>(tmofv.cols());
    std::vector<std::size_t> order(t);
    for (Eigen::Index r = 0; r < tmofv.rows(); ++r) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return tmofv(r, static_cast<Eigen::Index>(a)) < tmofv(r, static_cast<Eigen::Index>(b));
        });
        std::size_t k = 0;
        while (k < t) {
            auto end = k + 1;
            const double v = tmofv(r, static_cast<Eigen::Index>(order[k]));
            while (end < t && tmofv(r, static_cast<Eigen::Index>(order[end])) == v) {
                ++end;
            }
            // positions k..end-1 share the average of ranks k+1..end
            const double avg = 0.5 * static_cast<double>(k + 1 + end);
            for (auto m = k; m < end; ++m) {
                ranks(r, static_cast<Eigen::Index>(order[m])) = avg;
            }
            k = end;
        }
    }
    return ranks;
}

std::vector<double> team_quality(const Eigen::MatrixXd& ranks, std::span<const double> violation_sums)
{
    const auto t = static_cast<std::size_t>(ranks.cols());
    std::vector<double> q(t);
    const double worst = violation_sums.empty() ? 0.0 : *std::max_element(violation_sums.begin(), violation_sums.end());
    for (std::size_t k = 0; k < t; ++k) {
        const auto col = static_cast<Eigen::Index>(k);
        const double v = violation_sums[k];
        double norm = 0.0;
        if (std::isinf(worst)) {
            norm = std::isinf(v) ? 1.0 : 0.0;
        } else if (worst > 0.0) {
            norm = v / worst;
        }
        q[k] = ranks.col(col).mean() + norm;
    }
    return q;
}

std::vector<Team> initial_teams(const DsoConfig& cfg, std::size_t dim)
{
    std::vector<Team> teams;
    teams.reserve(cfg.teams);
    for (std::size_t k = 0; k < cfg.teams; ++k) {
        auto fw = k % 2 == 0 ? rand1_firmware() : mvns_step_firmware();
        if (k == 0) {
            fw.set_fixed(true);
        }
        teams.emplace_back(k, std::move(fw), cfg.drones, dim);
    }
    return teams;
}

std::vector<Replacement> update_firmware(std::vector<Team>& teams, std::span<const double> qualities,
                                         const DsoConfig& cfg, Random& rng, std::size_t iteration)
{
    std::vector<std::size_t> order(teams.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return qualities[a] < qualities[b]; });

    const auto w = std::min(cfg.replaced_per_update, teams.size());
    const std::vector<std::size_t> donors(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(w));

    std::vector<std::size_t> targets;
    for (auto it = order.rbegin(); it != order.rend() && targets.size() < w; ++it) {
        const auto k = *it;
        if (teams[k].firmware.fixed() || std::find(donors.begin(), donors.end(), k) != donors.end()) {
            continue;
        }
        targets.push_back(k);
    }

    std::vector<Replacement> log;
    const auto opts = cfg.mutation();
    for (std::size_t i = 0; i < targets.size(); ++i) {
        auto& target = teams[targets[i]];
        const auto& source = teams[donors[i]];
        auto variant = mutate_variant(source.firmware, rng, opts);
        log.push_back({iteration, target.id, source.id, serialize(target.firmware), serialize(variant)});
        target.install(std::move(variant));
    }
    return log;
}

std::string_view to_string(StopReason r)
{
    switch (r) {
    case StopReason::Budget: return "budget";
    case StopReason::MaxIterations: return "max_iterations";
    case StopReason::Success: return "success";
    }
    return "?";
}

RunRecord run(const Problem& problem, const DsoConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    Random rng(seed);

    RunRecord rec;
    rec.seed = seed;
    rec.function = std::string(problem.name());
    rec.dim = problem.dim();
    rec.budget = cfg.budget;

    auto state = initialize(problem, cfg, rng);
    auto teams = initial_teams(cfg, problem.dim());
    const Vector interval = problem.ub() - problem.lb();
    rec.trace.push_back({0, state.evals_used, state.gbofv, {}, false});

    auto error = [&] { return state.gbofv - problem.bias(); };
    std::vector<TrialBatch> batches(teams.size());
    Eigen::MatrixXd tmofv(static_cast<Eigen::Index>(cfg.drones), static_cast<Eigen::Index>(teams.size()));
    std::vector<double> violation_sums(teams.size());

    for (;;) {
        if (error() < cfg.success_threshold) {
            rec.stop = StopReason::Success;
            break;
        }
        if (state.evals_used >= cfg.budget) {
            rec.stop = StopReason::Budget;
            break;
        }
        if (state.iteration >= cfg.max_iterations) {
            rec.stop = StopReason::MaxIterations;
            break;
        }

        const auto pbest = make_pbest_model(state.cbc, state.cbofv, interval, cfg.p_best);
        for (std::size_t k = 0; k < teams.size(); ++k) {
            const auto left = cfg.budget - state.evals_used;
            batches[k] = generate_trials(teams[k], state, pbest, problem, cfg, rng, left);
            state.evals_used += batches[k].evals_used;
        }

        select_and_update(state, batches, cfg, rng);

        for (std::size_t k = 0; k < teams.size(); ++k) {
            tmofv.col(static_cast<Eigen::Index>(k)) = batches[k].tmofv;
            violation_sums[k] = batches[k].violation_sum();
        }
        const auto ranks = rank_teams(tmofv);
        const auto quality = team_quality(ranks, violation_sums);
        for (std::size_t k = 0; k < teams.size(); ++k) {
            teams[k].rank_history.push_back(ranks.col(static_cast<Eigen::Index>(k)).mean());
            teams[k].violation_history.push_back(violation_sums[k]);
        }

        ++state.iteration;
        bool changed = false;
        if (state.iteration % cfg.update_period == 0) {
            auto log = update_firmware(teams, quality, cfg, rng, state.iteration);
            changed = !log.empty();
            rec.replacements.insert(rec.replacements.end(), std::make_move_iterator(log.begin()),
                                    std::make_move_iterator(log.end()));
        }
        rec.trace.push_back({state.iteration, state.evals_used, state.gbofv, quality, changed});
    }

    rec.evals_used = state.evals_used;
    rec.iterations = state.iteration;
    rec.best_value = state.gbofv;
    rec.best_error = error();
    rec.best = state.gbc;
    for (const auto& team : teams) {
        rec.final_firmware.push_back(serialize(team.firmware));
    }
    return rec;
}

} // namespace dso
