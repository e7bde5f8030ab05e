#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "flexkit/rational.hpp"

namespace flexkit {

struct AssertionRecord {
    std::string name;
    std::string expected;
    std::string computed;
    bool pass = false;
};

struct CounterexampleReport {
    std::string title;
    std::vector<AssertionRecord> assertions;
    bool monotonicity_violated = false;  // V_1 > V_0 reproduced exactly
    bool all_pass() const;
};

// Two Tseng steps on the 4-dimensional boxed bilinear instance, in exact
// rational arithmetic; checks the reference iterates and that V_1 > V_0.
CounterexampleReport verify_tseng_counterexample();

// Two resolvent-extragradient steps on the 2-dimensional skew instance, in
// exact rational arithmetic, plus a float check that the iteration matrix has
// spectral radius about 1.132596.
CounterexampleReport verify_resolvent_counterexample();

// Rate-comparison quotients as functions of x = gamma L_F in (0,1):
//   first : (1/3) sqrt(2 (1 - x^2) / (sqrt(5 - 4 x^2) - 1))
//   second: sqrt(2 (1 - x) / ((sqrt(5 - 4 x^2) - 1) (3 + 2 x^2))).
// Both are < 1 on the whole interval. Throws std::domain_error outside (0,1).
std::pair<double, double> rate_quotients(double x);

void print_report(const CounterexampleReport& report, std::ostream& os);
// One line per assertion: name,expected,computed,pass
void write_verdict_file(const std::vector<CounterexampleReport>& reports,
                        const std::string& path);

}  // namespace flexkit
