#ifndef DSO_STATS_HPP
#define DSO_STATS_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dso/types.hpp"

namespace dso {

inline constexpr double kErrorFloor = 1e-9;

struct RunStats {
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double std = 0.0; // sample standard deviation, 0 for a single run
    double success_rate = 0.0;
    std::size_t runs = 0;
};

// Order statistics and success rate (error < threshold). Throws on empty input.
RunStats descriptive(std::span<const double> errors, double threshold = kErrorFloor);

// max(x, floor); averages below the reporting floor are shown as the floor.
inline double floor_error(double x, double floor = kErrorFloor) { return x < floor ? floor : x; }
// "%.3E", e.g. 1.000E-09.
std::string format_error(double x);

// methods x functions matrix of average errors, floored at kErrorFloor on construction.
class ComparisonMatrix {
public:
    ComparisonMatrix(std::vector<std::string> methods, std::vector<std::string> functions, Eigen::MatrixXd averages);

    const std::vector<std::string>& methods() const { return methods_; }
    const std::vector<std::string>& functions() const { return functions_; }
    const Eigen::MatrixXd& averages() const { return averages_; }
    std::size_t method_index(const std::string& name) const; // throws if absent
    Vector row(const std::string& method) const;

private:
    std::vector<std::string> methods_;
    std::vector<std::string> functions_;
    Eigen::MatrixXd averages_;
};

// Delimited text: header "method,<f1>,<f2>,..." then one row per method.
// Commas, semicolons, tabs or spaces are accepted as delimiters.
ComparisonMatrix read_comparison_matrix(std::istream& is);
ComparisonMatrix read_comparison_matrix(const std::string& path);

// Average ranks (1 = lowest value) within each column of a methods x functions
// matrix; ties share the mean of their positions.
Eigen::MatrixXd rank_within_functions(const Eigen::MatrixXd& averages);

struct FriedmanResult {
    double chi2 = 0.0;       // tie-corrected
    double chi2_plain = 0.0; // without tie correction
    std::size_t df = 0;
    double p_value = 1.0;       // from chi2
    double p_value_plain = 1.0; // from chi2_plain
    Vector rank_sums;           // per method
};

// Throws with fewer than 2 methods or 2 functions.
FriedmanResult friedman(const ComparisonMatrix& m);
FriedmanResult friedman(const Eigen::MatrixXd& averages);

// Upper tail of the chi-square distribution.
double chi2_sf(double x, double df);

struct WinTieLoss {
    std::size_t wins = 0;
    std::size_t ties = 0;
    std::size_t losses = 0;
    std::string str() const;
};

// Per function: win when control < other. Throws on length mismatch.
WinTieLoss wtl(const Vector& control, const Vector& other);

} // namespace dso

#endif
