// metrics.hpp
// Exhaustive MC2 verification (constructive witnesses cross-checked against
// an independent divisor scan), the counting-function ratio series, the
// coverage upper bound that can certify a non-complement, and the B(x)/x
// trend report.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mulcomp/constructions.hpp"
#include "mulcomp/set_kit.hpp"

namespace mulcomp {

enum class VerifyMethod { Witness, DivisorScan, Both };

struct WitnessFailure {
    uint64_t n = 0; // the integer whose witness was invalid
    uint64_t a = 0; // what decompose returned
    uint64_t b = 0;
};

struct VerificationReport {
    ComplementPair pair; // what was verified
    uint64_t x = 0;
    VerifyMethod method = VerifyMethod::Both;
    std::vector<uint64_t> missing;                // divisor scan: unrepresentable n
    std::vector<WitnessFailure> witness_failures; // witness path: invalid decompositions
    std::optional<bool> methods_agree;            // Both only: per-n agreement

    bool verified() const {
        return missing.empty() && witness_failures.empty() && methods_agree.value_or(true);
    }
};

// Witness method applies pair.decompose to every n <= x and validates both
// memberships; the divisor scan marks, for every b in B, the multiples a*b
// with a in A. Both runs the two and compares them n by n.
VerificationReport verify_mc2(const ComplementPair& pair, uint64_t x, VerifyMethod method,
                              const FactorTable& t, unsigned threads = 1);

struct RatioPoint {
    uint64_t x = 0;
    uint64_t a_count = 0;
    uint64_t b_count = 0;
    double r1 = 0;            // A(x)B(x)/x
    std::optional<double> r2; // max * log min / x, absent when min < 2
    std::optional<double> r3; // max * sqrt(log min) / x, absent when min < 2
    double r4 = 0;            // max / (x / sqrt(log x))
};

struct RatioSeries {
    std::vector<RatioPoint> points;
};

RatioSeries ratio_series(const ComplementPair& pair, const std::vector<uint64_t>& checkpoints,
                         const FactorTable& t, unsigned threads = 1);

enum class CoverageSide { A, B };

// sum_{s < threshold, s in S} Other(x/s) + sum_{s >= threshold, s in S, s <= x} x/s
// where S is the chosen side's set and Other the opposite counting function.
// An upper bound on the number of representable n <= x; a value < x
// certifies the pair is not MC2 at x.
double coverage_upper_bound(const ComplementPair& pair, uint64_t x, uint64_t threshold,
                            CoverageSide side, const FactorTable& t);

struct TrendReport {
    std::vector<uint64_t> checkpoints;
    std::vector<double> ratios; // count/x per checkpoint
    bool strictly_decreasing = false;
    bool heuristic = true; // a trend over checkpoints, never a limit claim
};

// Requires >= 4 checkpoints spanning >= 3 decades.
TrendReport little_o_trend(const CountingSeries& series);

} // namespace mulcomp
