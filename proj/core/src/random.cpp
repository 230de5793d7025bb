#include "dso/random.hpp"

#include <cmath>
#include <numbers>

namespace dso {

double Random::normal()
{
    const double u1 = 1.0 - uniform(); // (0,1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Random::index(std::size_t n)
{
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
}

} // namespace dso
