#include "dso/record_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace dso {

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10E", x);
    return buf;
}

void write_runs_csv(std::ostream& os, std::span<const RunRecord> runs, double threshold)
{
    os << kRunsHeader << '\n';
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        os << i << ',' << r.seed << ',' << r.function << ',' << r.dim << ',' << r.budget << ',' << r.evals_used << ','
           << r.iterations << ',' << format_double(r.best_error) << ',' << (r.success(threshold) ? 1 : 0) << '\n';
    }
}

void write_trace_csv(std::ostream& os, std::span<const RunRecord> runs)
{
    os << kTraceHeader << '\n';
    for (std::size_t i = 0; i < runs.size(); ++i) {
        for (const auto& row : runs[i].trace) {
            os << i << ',' << row.iteration << ',' << row.evals << ',' << format_double(row.gbofv) << ',';
            for (std::size_t k = 0; k < row.qualities.size(); ++k) {
                os << (k ? ";" : "") << format_double(row.qualities[k]);
            }
            os << ',' << (row.firmware_changed ? 1 : 0) << '\n';
        }
    }
}

void write_firmware_log(std::ostream& os, std::span<const RunRecord> runs)
{
    for (std::size_t i = 0; i < runs.size(); ++i) {
        for (const auto& rep : runs[i].replacements) {
            os << "run=" << i << " iteration=" << rep.iteration << " team=" << rep.team << " source=" << rep.source
               << ' ' << rep.new_text << '\n';
        }
    }
}

void write_summary_header(std::ostream& os) { os << kSummaryHeader << '\n'; }

void write_summary_row(std::ostream& os, std::string_view function, std::size_t dim, const RunStats& s)
{
    char sr[32];
    std::snprintf(sr, sizeof sr, "%.3f", s.success_rate);
    os << function << ',' << dim << ',' << s.runs << ',' << format_error(s.min) << ',' << format_error(s.median) << ','
       << format_error(s.max) << ',' << format_error(s.mean) << ',' << format_error(s.std) << ',' << sr << '\n';
}

std::vector<TracePoint> read_trace_csv(std::istream& is)
{
    std::vector<TracePoint> out;
    std::string line;
    if (!std::getline(is, line) || line != kTraceHeader) {
        throw Error("trace CSV header mismatch");
    }
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream ss(line);
        TracePoint p;
        char comma = 0;
        std::string gbofv;
        ss >> p.run_id >> comma >> p.iteration >> comma >> p.evals >> comma;
        std::getline(ss, gbofv, ',');
        if (!ss) {
            throw Error("malformed trace line: " + line);
        }
        p.gbofv = std::stod(gbofv);
        out.push_back(p);
    }
    return out;
}

void write_file_atomic(const std::string& path, std::string_view content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write '" + path + "'");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error("failed writing '" + path + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot move output into place at '" + path + "'");
    }
}

} // namespace dso
