#include "dso/config.hpp"

#include <string>

#include "dso/types.hpp"

namespace dso {

void DsoConfig::validate() const
{
    auto require = [](bool ok, const std::string& what) {
        if (!ok) {
            throw ConfigError(what);
        }
    };
    require(teams >= 2, "teams must be at least 2");
    require(drones >= 4, "drones per team must be at least 4");
    require(replaced_per_update >= 1 && replaced_per_update < teams, "w must satisfy 1 <= w < teams");
    require(p_acc > 0.0 && p_acc < 1.0, "p_acc must lie in (0, 1)");
    require(p_best > 0.0 && p_best <= 1.0, "p_best must lie in (0, 1]");
    require(cr_min >= 0.0 && cr_min <= cr_max && cr_max <= 1.0, "CR range must satisfy 0 <= min <= max <= 1");
    require(tree_size.min >= 2 && tree_size.max >= tree_size.min + 2,
            "tree size bounds must leave at least one legal size above 2");
    require(grow.max_depth >= 1, "grow depth must be positive");
    require(update_period >= 1, "firmware update period must be positive");
    require(budget >= teams * drones, "budget must cover the initial scan of teams * drones points");
    require(max_stagnation >= 1, "max_stagnation must be positive");
    require(success_threshold >= 0.0, "success threshold must be non-negative");
}

} // namespace dso
