#ifndef DSO_PROBLEM_HPP
#define DSO_PROBLEM_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "dso/types.hpp"

namespace dso {

enum class Function { Sphere, Schwefel12, Elliptic, Rosenbrock, Rastrigin, Ackley, Griewank };

std::span<const Function> all_functions();
std::string_view function_name(Function f);
// Throws ConfigError for unknown names.
Function function_from_name(std::string_view name);

// Unshifted base functions, minimum 0 at z = 0 (rosenbrock: at z = 0 after its
// internal +1 offset).
double base_value(Function f, const Vector& z);

// A shifted box-constrained test objective: f(M (x - o)) + bias.
class Problem {
public:
    Problem(Function fn, Vector lb, Vector ub, Vector shift, double bias = 0.0);

    Function function() const { return fn_; }
    std::string_view name() const { return function_name(fn_); }
    std::size_t dim() const { return static_cast<std::size_t>(shift_.size()); }
    const Vector& lb() const { return lb_; }
    const Vector& ub() const { return ub_; }
    const Vector& shift() const { return shift_; }
    double bias() const { return bias_; }

    // Optional linear transform applied after shifting (e.g. official rotation data).
    void set_transform(Matrix m);
    const std::optional<Matrix>& transform() const { return transform_; }

    // Out-of-bounds points are evaluated as-is.
    double operator()(const Vector& x) const;
    double error(const Vector& x) const { return (*this)(x) - bias_; }

private:
    Function fn_;
    Vector lb_;
    Vector ub_;
    Vector shift_;
    double bias_;
    std::optional<Matrix> transform_;
};

std::pair<double, double> canonical_bounds(Function f);

// Canonical bounds; shift drawn from `seed` uniformly in the central 80% of the box.
Problem make_problem(Function f, std::size_t dim, std::uint64_t seed);
Problem make_problem(std::string_view name, std::size_t dim, std::uint64_t seed);

// Plain-text vector: whitespace-separated values, round-trip exact.
void write_vector(std::ostream& os, const Vector& v);
Vector read_vector(std::istream& is);

} // namespace dso

#endif
