#ifndef DSO_TOOLS_CLI_HPP
#define DSO_TOOLS_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dso/config.hpp"

namespace dso::cli {

struct RunOptions {
    std::string function;
    std::size_t dim = 10;
    std::size_t runs = 1;
    std::uint64_t seed = 42;          // run i uses seed + i
    std::uint64_t problem_seed = 2005; // shift vector
    std::size_t threads = 1;
    std::string out;          // runs CSV
    std::string trace;        // optional trace CSV
    std::string firmware_log; // optional replacement log
    std::string shift_in;     // optional plain-text shift vector
    std::string shift_out;
    DsoConfig config;
};

struct SuiteOptions {
    std::vector<std::string> functions; // empty = all
    std::size_t dim = 10;
    std::size_t runs = 10;
    std::uint64_t seed = 42;
    std::uint64_t problem_seed = 2005;
    std::size_t threads = 1;
    std::string out; // summary CSV
    std::string runs_out;
    DsoConfig config;
};

struct CompareOptions {
    std::string fixture;
    std::string control = "DSO";
};

int cmd_run(const RunOptions& opts, std::ostream& out);
int cmd_suite(const SuiteOptions& opts, std::ostream& out);
int cmd_compare(const CompareOptions& opts, std::ostream& out);

// Entry point shared by the executable and the tests. `args` excludes the
// program name. Returns the process exit code: 0 ok, 1 runtime failure,
// 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dso::cli

#endif
