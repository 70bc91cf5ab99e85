// constructions.hpp
// The explicit complement-pair constructions: the squarefree/odd-valuation
// split over a prime set Q, the interval schedule with tower-growing M_k/N_k,
// the recursively thinned prime set R with its A_k bound checks, and the
// finite-B parity-split pair.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mulcomp/set_kit.hpp"

namespace mulcomp {

// -------------------------------------------------------------------
// Target function f for the schedule / thinned-set constructions.
// -------------------------------------------------------------------
class TargetFunction {
public:
    enum class Kind { Identity, XOverLogLogLog, Constant };

    TargetFunction() : kind_(Kind::Identity) {}
    static TargetFunction identity();
    static TargetFunction x_over_logx_loglogx();
    static TargetFunction constant(double c);

    Kind kind() const { return kind_; }
    double constant_value() const { return c_; }

    double operator()(double x) const;
    // Smallest integer argument the formula is defined (and positive) at.
    uint64_t domain_min() const;
    std::string name() const;

    bool operator==(const TargetFunction& o) const {
        return kind_ == o.kind_ && (kind_ != Kind::Constant || c_ == o.c_);
    }

private:
    Kind kind_;
    double c_ = 0;
};

// -------------------------------------------------------------------
// ComplementPair: an (A, B) candidate plus a constructive rule mapping
// each n to a factorization n = a*b with a in A, b in B.
// -------------------------------------------------------------------
struct ComplementPair {
    enum class Rule { None, OddValuationSplit, SmallPrimeParitySplit };

    IntSet a_desc;
    IntSet b_desc;
    Rule rule = Rule::None;
    PrimeSet rule_q;    // OddValuationSplit
    uint32_t rule_k = 0; // SmallPrimeParitySplit

    bool has_witness() const { return rule != Rule::None; }

    // The constructive witness (a, b) with a*b = n. Requires a rule.
    std::pair<uint64_t, uint64_t> decompose(uint64_t n, const FactorTable& t) const;
};

// A = squarefree-over-Q, B = squarefree-part-avoids-Q, witness splits off
// the odd-valuation Q-part. A valid complement pair for every Q.
ComplementPair lemma_q_pair(PrimeSet q);

// A = even valuation at the first k primes, B = the 2^k squarefree
// products of the first k primes, witness splits off the odd-parity part.
ComplementPair vegeseset_pair(uint32_t k);

// prod over V of (1 - 1/p), V = largest prime factors of the members of a
// finite B: a lower bound on liminf A(x)/x for any complement A of B.
double vegeseset_lower_bound(const IntSet& b_desc, const FactorTable& t);

// -------------------------------------------------------------------
// Interval schedule (M_k, N_k): M_k above the primorial of N_{k-1} and
// with f(M_k) > k*2^{N_{k-1}}; N_k the first point where the reciprocal
// prime sum over (M_k, N_k] reaches 1.
// -------------------------------------------------------------------
struct ScheduleEntry {
    uint32_t k = 0;
    uint64_t m = 0;                 // 0 when undetermined
    uint64_t n = 0;                 // 0 when undetermined
    bool certified = false;
    double reciprocal_sum = 0;      // over (m, n], certified entries only
    std::string binding_constraint; // why certification failed, uncertified only
    // Witness A(M_k)/f(M_k) and its proven cap 2^{pi(N_{k-1})}/f(M_k).
    double a_ratio = 0;
    double ratio_bound = 0;
};

struct IntervalSchedule {
    TargetFunction f;
    uint64_t cap = 0;
    std::vector<ScheduleEntry> entries;

    // Q induced by the certified prefix, as an Intervals descriptor.
    PrimeSet certified_q() const;
    size_t certified_count() const;
};

IntervalSchedule liminffx_schedule(const TargetFunction& f, uint32_t k_max, uint64_t cap,
                                   const FactorTable& t);

// -------------------------------------------------------------------
// Recursive R set and its thinning.
// -------------------------------------------------------------------
struct RSetResult {
    std::vector<uint64_t> r; // included primes, ascending
    TargetFunction f;
    double c1 = 0;
    uint64_t x_min = 0;
    uint64_t x_max = 0;
    // Smallest stride N0 whose thinned subsequence keeps every window
    // [sqrt(x), x], x <= x_max, below c1*log2/2. Empty if none was found
    // up to n0_search_limit. Certified up to x_max only.
    std::optional<uint64_t> n0;
    uint64_t n0_search_limit = 0;

    // Thinned(Explicit(R), N0). Requires n0.
    PrimeSet q() const;
};

// Runs the inclusion rule R(p-1)+1 <= f(p)/exp((2/c1)*sum_{n<p} chi_R(n)/n)
// over the primes of [x_min, x_max] in order, then searches for N0.
RSetResult limsupfxyes_build(const TargetFunction& f, double c1, uint64_t x_min,
                             uint64_t x_max, const FactorTable& t,
                             uint64_t n0_search_limit = 100000);

// Exact counts A_k(x) of squarefree n <= x with exactly k prime factors,
// all in Q, against the bound
//   e^{1/c1} f(x) T^{k-1} / ((k-1)! e^T),  T = (2/c1) sum_{n<x} chi_Q(n)/n.
struct AkfxRow {
    uint32_t k = 0;
    uint64_t count = 0;
    double bound = 0;
    bool pass = false;
};
std::vector<AkfxRow> akfx_check(const PrimeSet& q, const TargetFunction& f, double c1,
                                uint64_t x, uint32_t k_max, const FactorTable& t);

} // namespace mulcomp
