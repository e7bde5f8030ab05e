#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flexkit/core.hpp"
#include "flexkit/problem.hpp"

namespace flexkit {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Labeled data in the form required by the logistic model: the stored matrix K
// has rows -b_i * a_i^T for the parsed samples (a_i, b_i).
struct LabeledSparseData {
    std::size_t samples = 0;
    std::size_t features = 0;
    SparseMatrix K;
    std::vector<int> labels;  // each +1 or -1
};

// Parses LIBSVM text "<label> <idx>:<val> ...". Labels {+1,-1} are taken as
// is and {1,0} maps 0 to -1. Indices are 1-based in the file and must be
// strictly increasing within a line. The feature count is the maximum index
// seen unless n_features overrides it.
LabeledSparseData parse_libsvm(std::istream& in,
                               std::optional<std::size_t> n_features = std::nullopt);
LabeledSparseData parse_libsvm_file(const std::string& path,
                                    std::optional<std::size_t> n_features = std::nullopt);

// Sparse logistic regression as a monotone inclusion:
//   F(x) = K^T sigma(K x),  g = lambda ||.||_1,  L_F = ||K||^2 / 4,
// with the objective sum_i log(1 + exp([Kx]_i)) + lambda ||x||_1 exposed for
// gap reporting.
ProblemInstance load_logistic(const std::string& path, double lambda);
ProblemInstance make_logistic_instance(LabeledSparseData data, double lambda);

}  // namespace flexkit
