#include "dso/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace dso {

RunStats descriptive(std::span<const double> errors, double threshold)
{
    if (errors.empty()) {
        throw Error("descriptive statistics need at least one run");
    }
    std::vector<double> v(errors.begin(), errors.end());
    std::sort(v.begin(), v.end());
    const auto n = v.size();

    RunStats s;
    s.runs = n;
    s.min = v.front();
    s.max = v.back();
    s.median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    if (n > 1) {
        double sq = 0.0;
        for (double x : v) {
            sq += (x - s.mean) * (x - s.mean);
        }
        s.std = std::sqrt(sq / static_cast<double>(n - 1));
    }
    const auto ok = std::count_if(v.begin(), v.end(), [&](double x) { return x < threshold; });
    s.success_rate = static_cast<double>(ok) / static_cast<double>(n);
    return s;
}

std::string format_error(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3E", x);
    return buf;
}

ComparisonMatrix::ComparisonMatrix(std::vector<std::string> methods, std::vector<std::string> functions,
                                   Eigen::MatrixXd averages)
    : methods_(std::move(methods)), functions_(std::move(functions)), averages_(std::move(averages))
{
    if (static_cast<std::size_t>(averages_.rows()) != methods_.size() ||
        static_cast<std::size_t>(averages_.cols()) != functions_.size()) {
        throw Error("comparison matrix shape does not match its labels");
    }
    averages_ = averages_.cwiseMax(kErrorFloor);
}

std::size_t ComparisonMatrix::method_index(const std::string& name) const
{
    auto it = std::find(methods_.begin(), methods_.end(), name);
    if (it == methods_.end()) {
        throw Error("unknown method '" + name + "'");
    }
    return static_cast<std::size_t>(it - methods_.begin());
}

Vector ComparisonMatrix::row(const std::string& method) const
{
    return averages_.row(static_cast<Eigen::Index>(method_index(method))).transpose();
}

namespace {

std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    bool pending = false;
    for (char c : line) {
        if (c == ',' || c == ';' || c == '\t' || c == ' ' || c == '\r') {
            if (pending) {
                out.push_back(cur);
                cur.clear();
                pending = false;
            }
            continue;
        }
        cur += c;
        pending = true;
    }
    if (pending) {
        out.push_back(cur);
    }
    return out;
}

} // namespace

ComparisonMatrix read_comparison_matrix(std::istream& is)
{
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(is, line)) {
        auto fields = split_fields(line);
        if (fields.empty() || fields.front().starts_with('#')) {
            continue;
        }
        rows.push_back(std::move(fields));
    }
    if (rows.size() < 2 || rows.front().size() < 2) {
        throw Error("fixture needs a header and at least one method row");
    }
    std::vector<std::string> functions(rows.front().begin() + 1, rows.front().end());
    std::vector<std::string> methods;
    Eigen::MatrixXd avg(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(functions.size()));
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r];
        if (f.size() != functions.size() + 1) {
            throw Error("fixture row " + std::to_string(r + 1) + " has " + std::to_string(f.size() - 1) +
                        " values, expected " + std::to_string(functions.size()));
        }
        methods.push_back(f[0]);
        for (std::size_t c = 1; c < f.size(); ++c) {
            std::size_t used = 0;
            double value = 0.0;
            try {
                value = std::stod(f[c], &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != f[c].size() || !std::isfinite(value)) {
                throw Error("fixture value '" + f[c] + "' in row " + std::to_string(r + 1) + " is not a number");
            }
            avg(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c - 1)) = value;
        }
    }
    return ComparisonMatrix(std::move(methods), std::move(functions), std::move(avg));
}

ComparisonMatrix read_comparison_matrix(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open fixture '" + path + "'");
    }
    return read_comparison_matrix(in);
}

Eigen::MatrixXd rank_within_functions(const Eigen::MatrixXd& averages)
{
    const auto k = static_cast<std::size_t>(averages.rows());
    Eigen::MatrixXd ranks(averages.rows(), averages.cols());
    std::vector<std::size_t> order(k);
    for (Eigen::Index c = 0; c < averages.cols(); ++c) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return averages(static_cast<Eigen::Index>(a), c) < averages(static_cast<Eigen::Index>(b), c);
        });
        for (std::size_t i = 0; i < k;) {
            auto j = i + 1;
            while (j < k && averages(static_cast<Eigen::Index>(order[j]), c) ==
                                averages(static_cast<Eigen::Index>(order[i]), c)) {
                ++j;
            }
            const double avg = 0.5 * static_cast<double>(i + 1 + j);
            for (auto m = i; m < j; ++m) {
                ranks(static_cast<Eigen::Index>(order[m]), c) = avg;
            }
            i = j;
        }
    }
    return ranks;
}

double chi2_sf(double x, double df)
{
    if (x <= 0.0) {
        return 1.0;
    }
    return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

FriedmanResult friedman(const Eigen::MatrixXd& averages)
{
    const auto k = static_cast<double>(averages.rows()); // methods
    const auto n = static_cast<double>(averages.cols()); // functions (blocks)
    if (averages.rows() < 2 || averages.cols() < 2) {
        throw Error("Friedman test needs at least 2 methods and 2 functions");
    }
    const auto ranks = rank_within_functions(averages);

    FriedmanResult r;
    r.df = static_cast<std::size_t>(averages.rows() - 1);
    r.rank_sums = ranks.rowwise().sum();
    r.chi2_plain = 12.0 / (n * k * (k + 1.0)) * r.rank_sums.squaredNorm() - 3.0 * n * (k + 1.0);

    // Tie correction: 1 - sum(t^3 - t) / (n k (k^2 - 1)) over tie groups.
    double ties = 0.0;
    for (Eigen::Index c = 0; c < averages.cols(); ++c) {
        std::vector<double> col(averages.col(c).data(), averages.col(c).data() + averages.rows());
        std::sort(col.begin(), col.end());
        for (std::size_t i = 0; i < col.size();) {
            auto j = i + 1;
            while (j < col.size() && col[j] == col[i]) {
                ++j;
            }
            const auto t = static_cast<double>(j - i);
            ties += t * t * t - t;
            i = j;
        }
    }
    const double correction = 1.0 - ties / (n * k * (k * k - 1.0));
    if (correction <= 0.0) {
        r.chi2 = 0.0;
        r.chi2_plain = 0.0;
    } else {
        r.chi2_plain = std::max(0.0, r.chi2_plain);
        r.chi2 = r.chi2_plain / correction;
    }
    r.p_value = chi2_sf(r.chi2, static_cast<double>(r.df));
    r.p_value_plain = chi2_sf(r.chi2_plain, static_cast<double>(r.df));
    return r;
}

FriedmanResult friedman(const ComparisonMatrix& m) { return friedman(m.averages()); }

std::string WinTieLoss::str() const
{
    return std::to_string(wins) + "/" + std::to_string(ties) + "/" + std::to_string(losses);
}

WinTieLoss wtl(const Vector& control, const Vector& other)
{
    if (control.size() != other.size()) {
        throw Error("W/T/L needs equal-length rows");
    }
    WinTieLoss out;
    for (Eigen::Index j = 0; j < control.size(); ++j) {
        if (control[j] < other[j]) {
            ++out.wins;
        } else if (control[j] == other[j]) {
            ++out.ties;
        } else {
            ++out.losses;
        }
    }
    return out;
}

} // namespace dso
