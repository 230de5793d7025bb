#ifndef DSO_RECORD_IO_HPP
#define DSO_RECORD_IO_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dso/command_center.hpp"
#include "dso/stats.hpp"

namespace dso {

// Column layouts are stable; tests pin them against golden text.
inline constexpr std::string_view kRunsHeader =
    "run_id,seed,function,dim,budget,evals_used,iterations,best_error,success";
inline constexpr std::string_view kTraceHeader = "run_id,iteration,evals,gbofv,team_qualities,firmware_changed";
inline constexpr std::string_view kSummaryHeader = "function,dim,runs,min,median,max,mean,std_dev,sr";

std::string format_double(double x); // "%.10E"

void write_runs_csv(std::ostream& os, std::span<const RunRecord> runs, double threshold);
void write_trace_csv(std::ostream& os, std::span<const RunRecord> runs);
// One line per replacement: "run=<id> iteration=<i> team=<k> source=<j> <s-expression>".
void write_firmware_log(std::ostream& os, std::span<const RunRecord> runs);
void write_summary_header(std::ostream& os);
void write_summary_row(std::ostream& os, std::string_view function, std::size_t dim, const RunStats& s);

struct TracePoint {
    std::size_t run_id = 0;
    std::size_t iteration = 0;
    std::size_t evals = 0;
    double gbofv = 0.0;
};
// Reads back the first four columns of a trace CSV.
std::vector<TracePoint> read_trace_csv(std::istream& is);

// Writes to "<path>.tmp" and renames over `path`; the target is never left truncated.
void write_file_atomic(const std::string& path, std::string_view content);

} // namespace dso

#endif
