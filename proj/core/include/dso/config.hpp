#ifndef DSO_CONFIG_HPP
#define DSO_CONFIG_HPP

#include <cstddef>
#include <limits>

#include "dso/evaluate.hpp"
#include "dso/firmware.hpp"

namespace dso {

// Run and evolutionary parameters. Defaults are the reference configuration
// for 10-dimensional problems.
struct DsoConfig {
    std::size_t teams = 4;
    std::size_t drones = 25; // per team
    Constants constants{0.5, 0.4, 0.9};
    std::size_t replaced_per_update = 1; // w
    std::size_t max_stagnation = 50;
    double p_acc = 0.10;
    SizeBounds tree_size{5, 20};
    double p_best = 0.25;
    double cr_min = 0.4;
    double cr_max = 0.9;
    std::size_t update_period = 1; // iterations between firmware updates
    std::size_t budget = 100000;
    std::size_t max_iterations = std::numeric_limits<std::size_t>::max();
    double success_threshold = 1e-9;
    GrowOptions grow{};

    // Throws ConfigError on the first inconsistent field.
    void validate() const;

    MutationOptions mutation() const { return {tree_size, grow, 50}; }
};

} // namespace dso

#endif
