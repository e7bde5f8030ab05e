#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flexkit/solvers.hpp"

namespace flexkit {

struct TraceCsvOptions {
    // Reference objective value; when present together with per-row
    // objectives, the objective_gap column is f(z^k) - f_star.
    std::optional<double> f_star;
    // Wall-clock is nondeterministic, so the column is left empty unless
    // timing is explicitly requested; traces then stay byte-identical across
    // repeated runs with the same seed.
    bool include_timing = false;
};

extern const char* const kTraceCsvHeader;

std::string format_double(double v);  // 17 significant digits

void write_trace_csv(const IterationTrace& trace, const std::string& path,
                     const TraceCsvOptions& options = {});

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);

}  // namespace flexkit
