#ifndef DSO_DSO_HPP
#define DSO_DSO_HPP

#include "dso/command_center.hpp"
#include "dso/config.hpp"
#include "dso/evaluate.hpp"
#include "dso/firmware.hpp"
#include "dso/movement.hpp"
#include "dso/problem.hpp"
#include "dso/random.hpp"
#include "dso/record_io.hpp"
#include "dso/squadron.hpp"
#include "dso/stats.hpp"
#include "dso/types.hpp"

#endif
