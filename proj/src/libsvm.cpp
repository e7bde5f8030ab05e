#include "flexkit/libsvm.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>

#include "flexkit/spectral.hpp"

namespace flexkit {

namespace {

int parse_label(const std::string& tok, std::size_t line_no) {
    if (tok == "+1" || tok == "1") return 1;
    if (tok == "-1") return -1;
    if (tok == "0") return -1;
    throw ParseError(line_no, "unsupported label '" + tok + "' (expected +1, -1, 1 or 0)");
}

double parse_value(const std::string& tok, std::size_t line_no) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v)) {
        throw ParseError(line_no, "malformed value '" + tok + "'");
    }
    return v;
}

long parse_index(const std::string& tok, std::size_t line_no) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const long idx = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0') {
        throw ParseError(line_no, "malformed index '" + tok + "'");
    }
    if (idx <= 0) throw ParseError(line_no, "nonpositive feature index " + std::to_string(idx));
    return idx;
}

}  // namespace

LabeledSparseData parse_libsvm(std::istream& in, std::optional<std::size_t> n_features) {
    std::vector<std::size_t> offsets{0};
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    std::vector<int> labels;
    std::size_t max_index = 0;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;  // blank line
        const int label = parse_label(tok, line_no);

        long prev_idx = 0;
        while (ls >> tok) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 >= tok.size()) {
                throw ParseError(line_no, "malformed token '" + tok + "' (expected idx:val)");
            }
            const long idx = parse_index(tok.substr(0, colon), line_no);
            if (idx <= prev_idx) {
                throw ParseError(line_no, "feature indices must be strictly increasing");
            }
            prev_idx = idx;
            const double v = parse_value(tok.substr(colon + 1), line_no);
            cols.push_back(static_cast<std::size_t>(idx - 1));
            // Row of K is -b_i a_i^T.
            vals.push_back(-static_cast<double>(label) * v);
            max_index = std::max(max_index, static_cast<std::size_t>(idx));
        }
        labels.push_back(label);
        offsets.push_back(vals.size());
    }

    if (labels.empty()) throw ParseError(line_no, "no samples found");

    std::size_t features = n_features.value_or(max_index);
    if (features < max_index) {
        throw ParseError(line_no, "n_features override smaller than max index seen");
    }

    LabeledSparseData out;
    out.samples = labels.size();
    out.features = features;
    out.K = SparseMatrix(out.samples, features, std::move(offsets), std::move(cols),
                         std::move(vals));
    out.labels = std::move(labels);
    return out;
}

LabeledSparseData parse_libsvm_file(const std::string& path,
                                    std::optional<std::size_t> n_features) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open LIBSVM file: " + path);
    return parse_libsvm(in, n_features);
}

namespace {

double logistic(double u) {
    return u >= 0.0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u));
}

// log(1 + exp(u)) without overflow.
double log1pexp(double u) {
    return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

}  // namespace

ProblemInstance make_logistic_instance(LabeledSparseData data, double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("load_logistic: lambda must be >= 0");
    auto shared = std::make_shared<LabeledSparseData>(std::move(data));

    ProblemInstance inst;
    inst.dimension = shared->features;
    inst.F = [shared](const Point& x) {
        Point u = matvec(shared->K, x);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = logistic(u[i]);
        return matvec_transpose(shared->K, u);
    };
    inst.prox = L1Prox{lambda};
    const double knorm = spectral_norm_checked(shared->K);
    inst.lipschitz = knorm * knorm / 4.0;
    inst.objective = [shared, lambda](const Point& x) {
        Point u = matvec(shared->K, x);
        double f = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) f += log1pexp(u[i]);
        for (std::size_t i = 0; i < x.size(); ++i) f += lambda * std::abs(x[i]);
        return f;
    };
    return inst;
}

ProblemInstance load_logistic(const std::string& path, double lambda) {
    return make_logistic_instance(parse_libsvm_file(path), lambda);
}

}  // namespace flexkit
