#include "dso/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dso {

namespace {

class Interpreter {
public:
    Interpreter(std::span<const Symbol> nodes, const EvalContext& ctx, Random& rng)
        : nodes_(nodes), ctx_(ctx), rng_(rng), dim_(ctx.lb.size())
    {
    }

    Eigen::ArrayXd next()
    {
        const auto s = nodes_[pos_++];
        switch (s) {
        case Symbol::Plus: {
            auto a = next();
            return a + next();
        }
        case Symbol::Sub: {
            auto a = next();
            return a - next();
        }
        case Symbol::Times: {
            auto a = next();
            return a * next();
        }
        case Symbol::PDiv: {
            auto a = next();
            return protected_div(a, next());
        }
        case Symbol::Avg2: {
            auto a = next();
            return 0.5 * (a + next());
        }
        case Symbol::Abs:
            return next().abs();
        case Symbol::Neg:
            return -next();
        case Symbol::CBCd:
            return row(ctx_.cbc, ctx_.drone);
        case Symbol::PermCBC: {
            const auto slot = perm_slot_++;
            if (slot < ctx_.permutations.size()) {
                return row(ctx_.cbc, ctx_.permutations[slot][ctx_.drone]);
            }
            return row(ctx_.cbc, rng_.index(static_cast<std::size_t>(ctx_.cbc.rows())));
        }
        case Symbol::PBestCBC: {
            const auto& members = ctx_.pbest.members;
            return row(ctx_.cbc, members[rng_.index(members.size())]);
        }
        case Symbol::MVNS:
            return mvns_sample(ctx_.pbest, rng_).array();
        case Symbol::OppCBC:
            return opposition(row(ctx_.cbc, ctx_.drone).matrix(), ctx_.lb, ctx_.ub).array();
        case Symbol::GBC:
            return ctx_.gbc.array();
        case Symbol::Shift:
            return row(ctx_.prev_tmc, ctx_.drone) - row(ctx_.cbc, ctx_.drone);
        case Symbol::Step:
            return step_offset(ctx_.pbest.sigma, ctx_.interval, rng_).array();
        case Symbol::MatInterval:
            return ctx_.interval.array();
        case Symbol::C1:
            return scalar(ctx_.constants.c1);
        case Symbol::C2:
            return scalar(ctx_.constants.c2);
        case Symbol::C3:
            return scalar(ctx_.constants.c3);
        case Symbol::U01:
            return scalar(rng_.uniform());
        case Symbol::U051:
            return scalar(rng_.uniform(0.5, 1.0));
        case Symbol::G01:
            return scalar(rng_.normal());
        case Symbol::AbsG0501:
            return scalar(std::abs(rng_.normal(0.5, 0.1)));
        case Symbol::AbsG0001:
            return scalar(std::abs(rng_.normal(0.0, 0.01)));
        }
        throw Error("unhandled symbol");
    }

private:
    static Eigen::ArrayXd row(const Matrix& m, std::size_t i)
    {
        return m.row(static_cast<Eigen::Index>(i)).transpose().array();
    }

    Eigen::ArrayXd scalar(double v) const { return Eigen::ArrayXd::Constant(dim_, v); }

    std::span<const Symbol> nodes_;
    const EvalContext& ctx_;
    Random& rng_;
    Eigen::Index dim_;
    std::size_t pos_ = 0;
    std::size_t perm_slot_ = 0;
};

} // namespace

double protected_div(double a, double b) { return std::abs(b) < 1e-12 ? a : a / b; }

Eigen::ArrayXd protected_div(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b)
{
    return (b.abs() < 1e-12).select(a, a / b);
}

std::size_t permutation_slots(const Firmware& f)
{
    return static_cast<std::size_t>(std::ranges::count(f.nodes(), Symbol::PermCBC));
}

std::vector<std::vector<std::size_t>> draw_permutations(std::size_t slots, std::size_t n, Random& rng)
{
    std::vector<std::vector<std::size_t>> out(slots, std::vector<std::size_t>(n));
    for (auto& perm : out) {
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = n; i > 1; --i) {
            std::swap(perm[i - 1], perm[rng.index(i)]);
        }
    }
    return out;
}

Vector evaluate(const Firmware& f, const EvalContext& ctx, Random& rng)
{
    Interpreter interp(f.nodes(), ctx, rng);
    return interp.next().matrix();
}

std::optional<Vector> evaluate_checked(const Firmware& f, const EvalContext& ctx, Random& rng)
{
    auto v = evaluate(f, ctx, rng);
    if (!v.allFinite()) {
        return std::nullopt;
    }
    return v;
}

} // namespace dso
