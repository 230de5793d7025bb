#ifndef DSO_EVALUATE_HPP
#define DSO_EVALUATE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dso/firmware.hpp"
#include "dso/movement.hpp"
#include "dso/random.hpp"
#include "dso/types.hpp"

namespace dso {

struct Constants {
    double c1 = 0.5;
    double c2 = 0.4;
    double c3 = 0.9;
};

// Everything a drone can read while executing its team's firmware.
struct EvalContext {
    const Matrix& cbc;      // N x D current best coordinates
    const Vector& gbc;      // global best
    const Matrix& prev_tmc; // this team's previous trial coordinates, zero before the first move
    const Vector& lb;
    const Vector& ub;
    const Vector& interval; // ub - lb
    const PBestModel& pbest;
    Constants constants;
    std::size_t drone = 0;
    // One row permutation per PermCBC occurrence (prefix order), shared by the
    // whole team batch. Occurrences without a permutation draw a uniform row.
    std::span<const std::vector<std::size_t>> permutations = {};
};

// Number of PermCBC nodes in `f`.
std::size_t permutation_slots(const Firmware& f);

// Independent uniform permutations of 0..n-1 (Fisher-Yates), one per slot.
std::vector<std::vector<std::size_t>> draw_permutations(std::size_t slots, std::size_t n, Random& rng);

// a / b, or a where |b| < 1e-12.
double protected_div(double a, double b);
Eigen::ArrayXd protected_div(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b);

// Departure + Offset for one drone, element-wise, scalars broadcast over D.
// Stochastic terminals draw from `rng` in prefix order, once per occurrence.
// May contain NaN or Inf; see evaluate_checked.
Vector evaluate(const Firmware& f, const EvalContext& ctx, Random& rng);

// nullopt when any component of the result is not finite.
std::optional<Vector> evaluate_checked(const Firmware& f, const EvalContext& ctx, Random& rng);

} // namespace dso

#endif
