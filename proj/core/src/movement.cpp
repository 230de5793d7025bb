#include "dso/movement.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dso {

double violation(const Vector& row, const Vector& lb, const Vector& ub)
{
    double total = 0.0;
    for (Eigen::Index j = 0; j < row.size(); ++j) {
        if (row[j] > ub[j]) {
            total += std::abs(row[j] - ub[j]);
        } else if (row[j] < lb[j]) {
            total += std::abs(lb[j] - row[j]);
        }
    }
    return total;
}

Vector correct_bounds(const Vector& row, const Vector& lb, const Vector& ub, Correction method, Random& rng)
{
    Vector out = row;
    for (Eigen::Index j = 0; j < out.size(); ++j) {
        const double x = out[j];
        if (x >= lb[j] && x <= ub[j]) {
            continue;
        }
        switch (method) {
        case Correction::Clamp:
            out[j] = std::clamp(x, lb[j], ub[j]);
            break;
        case Correction::Reflect:
            out[j] = std::clamp(x > ub[j] ? 2.0 * ub[j] - x : 2.0 * lb[j] - x, lb[j], ub[j]);
            break;
        case Correction::Resample:
            out[j] = std::min(rng.uniform(lb[j], ub[j]), ub[j]);
            break;
        }
    }
    return out;
}

Vector recombine(const Vector& trial, const Vector& current, Recombination method, double cr, Random& rng)
{
    const auto d = static_cast<std::size_t>(trial.size());
    switch (method) {
    case Recombination::None:
        return trial;
    case Recombination::Binomial: {
        Vector out = current;
        const auto jrand = rng.index(d);
        for (std::size_t j = 0; j < d; ++j) {
            if (rng.uniform() < cr || j == jrand) {
                out[static_cast<Eigen::Index>(j)] = trial[static_cast<Eigen::Index>(j)];
            }
        }
        return out;
    }
    case Recombination::Exponential: {
        Vector out = current;
        auto j = rng.index(d);
        std::size_t length = 0;
        do {
            out[static_cast<Eigen::Index>(j)] = trial[static_cast<Eigen::Index>(j)];
            j = (j + 1) % d;
            ++length;
        } while (length < d && rng.uniform() < cr);
        return out;
    }
    }
    return trial;
}

std::string_view to_string(Correction c)
{
    switch (c) {
    case Correction::Clamp: return "clamp";
    case Correction::Reflect: return "reflect";
    case Correction::Resample: return "resample";
    }
    return "?";
}

std::string_view to_string(Recombination r)
{
    switch (r) {
    case Recombination::None: return "none";
    case Recombination::Binomial: return "binomial";
    case Recombination::Exponential: return "exponential";
    }
    return "?";
}

Vector opposition(const Vector& row, const Vector& lb, const Vector& ub) { return lb + ub - row; }

std::vector<std::size_t> pbest_indices(const Vector& values, double fraction)
{
    const auto n = static_cast<std::size_t>(values.size());
    auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    count = std::min(n, std::max<std::size_t>(2, count));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[static_cast<Eigen::Index>(a)] < values[static_cast<Eigen::Index>(b)];
    });
    order.resize(count);
    return order;
}

std::vector<double> log_weights(std::size_t mu0)
{
    std::vector<double> w(mu0);
    const double top = std::log(static_cast<double>(mu0) + 0.5);
    for (std::size_t i = 0; i < mu0; ++i) {
        w[i] = top - std::log(static_cast<double>(i + 1));
    }
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) {
        x /= sum;
    }
    return w;
}

double effective_mass(std::span<const double> weights)
{
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    double sq = 0.0;
    for (double x : weights) {
        sq += (x / sum) * (x / sum);
    }
    return 1.0 / sq;
}

namespace {

Vector mean_of_rows(const Matrix& cbc, const std::vector<std::size_t>& rows)
{
    Vector mean = Vector::Zero(cbc.cols());
    for (auto i : rows) {
        mean += cbc.row(static_cast<Eigen::Index>(i)).transpose();
    }
    return mean / static_cast<double>(rows.size());
}

} // namespace

double step_sigma(const Matrix& cbc, const Vector& cbofv, double fraction)
{
    const auto n = static_cast<double>(cbc.rows());
    const auto mu0 = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(fraction * n)));
    const auto mu_eff = effective_mass(log_weights(mu0));
    const auto mean = mean_of_rows(cbc, pbest_indices(cbofv, fraction));
    return 0.04 * mu_eff * mean.norm();
}

PBestModel make_pbest_model(const Matrix& cbc, const Vector& cbofv, const Vector& interval, double fraction)
{
    PBestModel model;
    model.members = pbest_indices(cbofv, fraction);
    model.mean = mean_of_rows(cbc, model.members);

    const auto d = cbc.cols();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (auto i : model.members) {
        const Vector diff = cbc.row(static_cast<Eigen::Index>(i)).transpose() - model.mean;
        cov.noalias() += diff * diff.transpose();
    }
    cov /= static_cast<double>(model.members.size() - 1);
    const double scale = interval.size() > 0 ? interval.mean() : 1.0;
    cov.diagonal().array() += 1e-12 * scale * scale;

    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success) {
        model.chol = llt.matrixL();
    } else {
        // Not reachable for finite input once regularized; keep a diagonal factor.
        model.chol = cov.diagonal().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    }
    model.sigma = step_sigma(cbc, cbofv, fraction);
    return model;
}

Vector mvns_sample(const PBestModel& model, Random& rng)
{
    Vector z(model.mean.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) {
        z[j] = rng.normal();
    }
    return model.mean + model.chol * z;
}

Vector mvns_sample(const Matrix& cbc, const Vector& cbofv, const Vector& interval, double fraction, Random& rng)
{
    return mvns_sample(make_pbest_model(cbc, cbofv, interval, fraction), rng);
}

Vector step_offset(double sigma, const Vector& interval, Random& rng)
{
    const double u = rng.uniform(0.0, 0.5);
    Vector out(interval.size());
    for (Eigen::Index j = 0; j < out.size(); ++j) {
        out[j] = sigma * rng.normal() * interval[j] * u;
    }
    return out;
}

} // namespace dso
