// set_kit.hpp
// Describable integer sets with membership, counting functions A(x),
// enumeration, and reciprocal sums. Every A and B handled by the library
// is one of these descriptors; membership is always decided through a
// FactorTable.

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mulcomp/arith_core.hpp"

namespace mulcomp {

// First k primes 2, 3, 5, ... (k independent of any FactorTable).
std::vector<uint64_t> first_k_primes(uint32_t k);

// p_1 .. p_64 as a flat table, for callers that must not allocate.
const uint64_t* small_primes_table(); // 64 entries

// -------------------------------------------------------------------
// PrimeSet: a describable set of primes Q.
// -------------------------------------------------------------------
class PrimeSet {
public:
    enum class Kind {
        AllPrimes, // every prime
        Explicit,  // strictly increasing list
        Intervals, // union of half-open (M, N], disjoint, increasing
        Residue,   // p = r (mod m)
        Thinned,   // every n0-th element of a base set, ascending
    };

    PrimeSet() : kind_(Kind::AllPrimes) {}

    static PrimeSet all_primes();
    static PrimeSet explicit_list(std::vector<uint64_t> primes);
    static PrimeSet intervals(std::vector<std::pair<uint64_t, uint64_t>> ivals);
    static PrimeSet residue(uint64_t modulus, uint64_t rem);
    static PrimeSet thinned(PrimeSet base, uint64_t n0);

    Kind kind() const { return kind_; }
    const std::vector<uint64_t>& explicit_primes() const { return list_; }
    const std::vector<std::pair<uint64_t, uint64_t>>& interval_bounds() const { return ivals_; }
    uint64_t modulus() const { return modulus_; }
    uint64_t rem() const { return rem_; }
    const PrimeSet& base() const { return *base_; }
    uint64_t n0() const { return n0_; }

    // Membership for prime p (callers pass primes only).
    bool contains(uint64_t p, const FactorTable& t) const;

    // Members <= x, ascending.
    std::vector<uint64_t> list_up_to(uint64_t x, const FactorTable& t) const;

    // sum of 1/q over members q with q < x (strict).
    double reciprocal_sum_below(uint64_t x, const FactorTable& t) const;

    bool operator==(const PrimeSet& o) const;

private:
    Kind kind_;
    std::vector<uint64_t> list_;
    std::vector<std::pair<uint64_t, uint64_t>> ivals_;
    uint64_t modulus_ = 0, rem_ = 0;
    std::shared_ptr<const PrimeSet> base_;
    uint64_t n0_ = 0;

    // Thinned membership needs the ranked base; cache the selected
    // members once per (descriptor, capacity). Shared across copies.
    // Readers take the lock-free view; rebuilds (rare: once per table
    // capacity) go through the mutex and retain superseded snapshots so
    // concurrent readers never lose their vector.
    struct ThinCache {
        std::mutex mu;
        std::atomic<uint64_t> built_to{0};
        std::atomic<const std::vector<uint64_t>*> view{nullptr};
        std::vector<std::unique_ptr<const std::vector<uint64_t>>> retained;
    };
    std::shared_ptr<ThinCache> thin_cache_;
    const std::vector<uint64_t>& thinned_members(uint64_t up_to, const FactorTable& t) const;
};

// -------------------------------------------------------------------
// IntSet: a describable set of positive integers.
// -------------------------------------------------------------------
class IntSet {
public:
    enum class Kind {
        All,                   // every positive integer
        Explicit,              // finite list
        SquarefreeOverQ,       // n squarefree, every prime factor in Q (1 included)
        SquarefreePartAvoidsQ, // squarefree part of n has no prime factor in Q
        EvenValuationFirstK,   // v_{p_i}(n) even for the first k primes
        SquarefreeOverFirstK,  // the 2^k squarefree products of the first k primes
    };

    IntSet() : kind_(Kind::All) {}

    static IntSet all();
    static IntSet explicit_list(std::vector<uint64_t> members);
    static IntSet squarefree_over(PrimeSet q);
    static IntSet squarefree_part_avoids(PrimeSet q);
    static IntSet even_valuation_first_k(uint32_t k);
    static IntSet squarefree_over_first_k(uint32_t k);

    Kind kind() const { return kind_; }
    const PrimeSet& q() const { return q_; }
    uint32_t k() const { return k_; }
    const std::vector<uint64_t>& explicit_members() const { return list_; }

    bool member(uint64_t n, const FactorTable& t) const;

    // Cardinality when the set is finite (Explicit or SquarefreeOverFirstK).
    std::optional<uint64_t> finite_size() const;

    // Members <= x ascending, without scanning [1,x]; only for finite kinds.
    std::vector<uint64_t> enumerate_finite(uint64_t x) const;

    bool operator==(const IntSet& o) const;

private:
    Kind kind_;
    PrimeSet q_;
    uint32_t k_ = 0;
    std::vector<uint64_t> list_;
};

inline bool member(const IntSet& d, uint64_t n, const FactorTable& t) { return d.member(n, t); }

// |{n <= x : member(d, n)}| by streaming scan.
uint64_t count(const IntSet& d, uint64_t x, const FactorTable& t, unsigned threads = 1);

struct CountingSeries {
    IntSet descriptor;
    std::vector<uint64_t> checkpoints;
    std::vector<uint64_t> counts;
};

// Counts at every checkpoint in one pass. Checkpoints must be strictly
// increasing and within capacity.
CountingSeries counting_series(const IntSet& d, const std::vector<uint64_t>& checkpoints,
                               const FactorTable& t, unsigned threads = 1);

// direct = sum over members a <= N of 1/a;
// abel   = sum_{n<N} A(n)/(n(n+1)) + A(N)/N.
// The two agree up to floating error (the identity is exact).
struct AbelSums {
    double direct;
    double abel;
};
AbelSums reciprocal_sum_abel(const IntSet& d, uint64_t n, const FactorTable& t);

// Membership bitmap for [0, x]: bit n set iff member(d, n). Chunks are
// split on 64-bit boundaries, so the result does not depend on the
// thread count.
std::vector<uint64_t> membership_bitmap(const IntSet& d, uint64_t x, const FactorTable& t,
                                        unsigned threads = 1);
inline bool bitmap_test(const std::vector<uint64_t>& bm, uint64_t n) {
    return (bm[n >> 6] >> (n & 63)) & 1u;
}

} // namespace mulcomp
