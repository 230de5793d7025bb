#ifndef DSO_SQUADRON_HPP
#define DSO_SQUADRON_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "dso/config.hpp"
#include "dso/firmware.hpp"
#include "dso/movement.hpp"
#include "dso/problem.hpp"
#include "dso/random.hpp"
#include "dso/types.hpp"

namespace dso {

// Shared search state owned by the command center.
struct SquadronState {
    Matrix cbc;   // N x D current best coordinates, one row per drone index
    Vector cbofv; // N current best objective values
    Vector gbc;
    double gbofv = 0.0;
    std::vector<std::size_t> stagnation; // consecutive iterations without improvement, per index
    std::size_t iteration = 0;
    std::size_t evals_used = 0;

    std::size_t drones() const { return static_cast<std::size_t>(cbc.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(cbc.cols()); }
    // Index currently holding the global best (first on ties).
    std::size_t elite_index() const;
};

struct Team {
    Team(std::size_t id, Firmware fw, std::size_t drones, std::size_t dim);

    std::size_t id;
    Firmware firmware;
    Matrix prev_tmc;
    std::vector<double> rank_history;      // mean rank per iteration
    std::vector<double> violation_history; // summed violation per iteration

    // New firmware: zero the previous trials and drop the histories.
    void install(Firmware fw);
};

struct TrialBatch {
    Matrix tmc;        // N x D, inside the box
    Vector tmofv;      // +inf for faulted or unscanned drones
    Vector violations; // measured before correction
    std::size_t evals_used = 0;
    std::size_t faults = 0;
    std::array<std::size_t, kRecombinationCount> recombinations{};
    std::array<std::size_t, kCorrectionCount> corrections{};

    double violation_sum() const { return violations.sum(); }
};

// Move every drone of `team` once: evaluate the firmware, recombine with the
// drone's current best, record the violation, correct into the box and scan.
// At most `budget_left` objective calls are made; drones beyond it keep
// TmOFV = +inf. Updates team.prev_tmc.
TrialBatch generate_trials(Team& team, const SquadronState& state, const PBestModel& pbest, const Problem& problem,
                           const DsoConfig& cfg, Random& rng, std::size_t budget_left);

} // namespace dso

#endif
