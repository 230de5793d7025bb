#include "dso/problem.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <vector>

#include "dso/random.hpp"

namespace dso {

namespace {

constexpr std::array kFunctions{Function::Sphere,    Function::Schwefel12, Function::Elliptic, Function::Rosenbrock,
                                Function::Rastrigin, Function::Ackley,     Function::Griewank};

double sphere(const Vector& z) { return z.squaredNorm(); }

double schwefel12(const Vector& z)
{
    double total = 0.0;
    double partial = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        partial += z[i];
        total += partial * partial;
    }
    return total;
}

double elliptic(const Vector& z)
{
    const auto d = z.size();
    double total = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        const double e = d > 1 ? static_cast<double>(i) / static_cast<double>(d - 1) : 0.0;
        total += std::pow(1e6, e) * z[i] * z[i];
    }
    return total;
}

double rosenbrock(const Vector& z)
{
    double total = 0.0;
    for (Eigen::Index i = 0; i + 1 < z.size(); ++i) {
        const double a = z[i] + 1.0;
        const double b = z[i + 1] + 1.0;
        total += 100.0 * (a * a - b) * (a * a - b) + (a - 1.0) * (a - 1.0);
    }
    return total;
}

double rastrigin(const Vector& z)
{
    double total = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        total += z[i] * z[i] + 10.0 * (1.0 - std::cos(2.0 * std::numbers::pi * z[i]));
    }
    return total;
}

double ackley(const Vector& z)
{
    const auto d = static_cast<double>(z.size());
    double sq = 0.0;
    double cs = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        sq += z[i] * z[i];
        cs += std::cos(2.0 * std::numbers::pi * z[i]);
    }
    const double e = std::exp(1.0);
    return (20.0 - 20.0 * std::exp(-0.2 * std::sqrt(sq / d))) + (e - std::exp(cs / d));
}

double griewank(const Vector& z)
{
    double sum = 0.0;
    double prod = 1.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        sum += z[i] * z[i];
        prod *= std::cos(z[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return sum / 4000.0 + (1.0 - prod);
}

} // namespace

std::span<const Function> all_functions() { return kFunctions; }

std::string_view function_name(Function f)
{
    switch (f) {
    case Function::Sphere: return "sphere";
    case Function::Schwefel12: return "schwefel12";
    case Function::Elliptic: return "elliptic";
    case Function::Rosenbrock: return "rosenbrock";
    case Function::Rastrigin: return "rastrigin";
    case Function::Ackley: return "ackley";
    case Function::Griewank: return "griewank";
    }
    return "?";
}

Function function_from_name(std::string_view name)
{
    for (auto f : kFunctions) {
        if (function_name(f) == name) {
            return f;
        }
    }
    throw ConfigError("unknown function '" + std::string(name) + "'");
}

double base_value(Function f, const Vector& z)
{
    switch (f) {
    case Function::Sphere: return sphere(z);
    case Function::Schwefel12: return schwefel12(z);
    case Function::Elliptic: return elliptic(z);
    case Function::Rosenbrock: return rosenbrock(z);
    case Function::Rastrigin: return rastrigin(z);
    case Function::Ackley: return ackley(z);
    case Function::Griewank: return griewank(z);
    }
    return 0.0;
}

Problem::Problem(Function fn, Vector lb, Vector ub, Vector shift, double bias)
    : fn_(fn), lb_(std::move(lb)), ub_(std::move(ub)), shift_(std::move(shift)), bias_(bias)
{
    if (lb_.size() == 0 || lb_.size() != ub_.size() || lb_.size() != shift_.size()) {
        throw ConfigError("problem bounds and shift must share a positive dimension");
    }
    if (!(lb_.array() < ub_.array()).all()) {
        throw ConfigError("problem requires LB < UB component-wise");
    }
}

void Problem::set_transform(Matrix m)
{
    if (m.rows() != shift_.size() || m.cols() != shift_.size()) {
        throw ConfigError("transform must be D x D");
    }
    transform_ = std::move(m);
}

double Problem::operator()(const Vector& x) const
{
    Vector z = x - shift_;
    if (transform_) {
        z = *transform_ * z;
    }
    return base_value(fn_, z) + bias_;
}

std::pair<double, double> canonical_bounds(Function f)
{
    switch (f) {
    case Function::Rastrigin: return {-5.0, 5.0};
    case Function::Ackley: return {-32.0, 32.0};
    case Function::Griewank: return {-600.0, 600.0};
    default: return {-100.0, 100.0};
    }
}

Problem make_problem(Function f, std::size_t dim, std::uint64_t seed)
{
    if (dim == 0) {
        throw ConfigError("dimension must be positive");
    }
    const auto [lo, hi] = canonical_bounds(f);
    const auto d = static_cast<Eigen::Index>(dim);
    Vector lb = Vector::Constant(d, lo);
    Vector ub = Vector::Constant(d, hi);
    Random rng(seed);
    Vector shift(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        shift[j] = lo + (0.1 + 0.8 * rng.uniform()) * (hi - lo);
    }
    return Problem(f, std::move(lb), std::move(ub), std::move(shift));
}

Problem make_problem(std::string_view name, std::size_t dim, std::uint64_t seed)
{
    return make_problem(function_from_name(name), dim, seed);
}

void write_vector(std::ostream& os, const Vector& v)
{
    const auto old = os.precision(17);
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        os << (j ? " " : "") << v[j];
    }
    os << '\n';
    os.precision(old);
}

Vector read_vector(std::istream& is)
{
    std::vector<double> values;
    double x = 0.0;
    while (is >> x) {
        values.push_back(x);
    }
    if (!is.eof()) {
        throw Error("malformed vector text");
    }
    return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

} // namespace dso
