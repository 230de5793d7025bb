#ifndef DSO_MOVEMENT_HPP
#define DSO_MOVEMENT_HPP

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dso/random.hpp"
#include "dso/types.hpp"

namespace dso {

// Total out-of-box magnitude of `row`: sum of |row_j - UB_j| over row_j > UB_j
// plus |LB_j - row_j| over row_j < LB_j.
double violation(const Vector& row, const Vector& lb, const Vector& ub);

enum class Correction { Clamp, Reflect, Resample };
inline constexpr std::size_t kCorrectionCount = 3;

// Returns a copy of `row` inside [lb, ub]. Reflect mirrors about the violated
// bound and clamps if still outside; Resample redraws violated components only.
Vector correct_bounds(const Vector& row, const Vector& lb, const Vector& ub, Correction method, Random& rng);

enum class Recombination { None, Binomial, Exponential };
inline constexpr std::size_t kRecombinationCount = 3;

// Mix a trial vector with the drone's current best. At least one component of
// `trial` always survives Binomial and Exponential.
Vector recombine(const Vector& trial, const Vector& current, Recombination method, double cr, Random& rng);

std::string_view to_string(Correction c);
std::string_view to_string(Recombination r);

// LB + UB - row.
Vector opposition(const Vector& row, const Vector& lb, const Vector& ub);

// Indices of the best max(2, ceil(fraction * N)) rows by objective value,
// best first; ties keep index order.
std::vector<std::size_t> pbest_indices(const Vector& values, double fraction);

// CMA-ES style log weights ln(mu0 + 0.5) - ln(i), i = 1..mu0, normalized to sum 1.
std::vector<double> log_weights(std::size_t mu0);
// 1 / sum(w_i^2) for weights normalized to sum 1.
double effective_mass(std::span<const double> weights);

// Per-iteration summary of the p-best set consumed by the MVNS, PBestCBC and
// Step terminals.
struct PBestModel {
    std::vector<std::size_t> members;
    Vector mean;
    Matrix chol; // lower Cholesky factor of the regularized covariance
    double sigma = 0.0;
};

PBestModel make_pbest_model(const Matrix& cbc, const Vector& cbofv, const Vector& interval, double fraction);

// sigma = 0.04 * mu_eff * ||mean of p-best rows||, mu0 = max(2, round(fraction * N)).
double step_sigma(const Matrix& cbc, const Vector& cbofv, double fraction);

// One draw of the multivariate normal described by `model`.
Vector mvns_sample(const PBestModel& model, Random& rng);
Vector mvns_sample(const Matrix& cbc, const Vector& cbofv, const Vector& interval, double fraction, Random& rng);

// One drone's row of the step matrix: sigma * g_j * interval_j * u with
// u ~ U(0, 0.5) drawn first, then g_j ~ G(0,1) per component.
Vector step_offset(double sigma, const Vector& interval, Random& rng);

} // namespace dso

#endif
