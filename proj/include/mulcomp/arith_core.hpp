// arith_core.hpp
// Sieve-backed integer arithmetic: smallest-prime-factor table, factorization,
// valuations, squarefree parts, prime enumeration, prime reciprocal sums and
// Mertens products. Everything else in the library factors integers through
// the FactorTable built here.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mulcomp {

// Thrown when a build would exceed the configured memory budget.
class resource_limit_error : public std::runtime_error {
public:
    explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// -------------------------------------------------------------------
// Compensated (Kahan-Neumaier) accumulator. All reciprocal sums and
// products-of-logs in the library go through this; the tolerance
// contracts elsewhere assume it.
// -------------------------------------------------------------------
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Factorization {
    uint64_t n = 1;
    // (prime, exponent) with strictly increasing primes, exponents >= 1.
    // n = 1 has an empty list.
    std::vector<std::pair<uint64_t, uint32_t>> factors;
};

// -------------------------------------------------------------------
// FactorTable: spf[n] = smallest prime factor of n for 2 <= n <= capacity.
// Built segment by segment (default segment 2^22 entries) so the hot
// working set stays cache-sized; the finished table is immutable and
// safe to share across threads.
// -------------------------------------------------------------------
class FactorTable {
public:
    // capacity >= 2. Throws resource_limit_error if the spf array would
    // exceed budget_bytes.
    static FactorTable build(uint64_t capacity,
                             uint64_t budget_bytes = default_budget_bytes,
                             unsigned threads = 1);

    uint64_t capacity() const { return capacity_; }

    // Smallest prime factor of n, 2 <= n <= capacity.
    uint32_t spf(uint64_t n) const {
        check_range(n);
        if (n < 2) throw std::out_of_range("spf: n must be >= 2");
        return spf_[n];
    }

    bool is_prime(uint64_t n) const {
        check_range(n);
        return n >= 2 && spf_[n] == n;
    }

    static constexpr uint64_t default_budget_bytes = uint64_t(3) << 30;
    static constexpr uint64_t segment_size = uint64_t(1) << 22;

    void check_range(uint64_t n) const {
        if (n > capacity_)
            throw std::out_of_range("FactorTable: n=" + std::to_string(n) +
                                    " exceeds capacity " + std::to_string(capacity_));
    }

private:
    FactorTable(uint64_t capacity, std::vector<uint32_t> spf)
        : capacity_(capacity), spf_(std::move(spf)) {}

    uint64_t capacity_;
    std::vector<uint32_t> spf_;
};

// -------------------------------------------------------------------
// Operations over the table
// -------------------------------------------------------------------

// Full factorization; n = 1 yields an empty factor list. 1 <= n <= capacity.
Factorization factorize(uint64_t n, const FactorTable& t);

// Largest v with p^v | n. p must be prime.
uint32_t valuation(uint64_t n, uint64_t p, const FactorTable& t);

// Product of the primes dividing n to an odd power; n / result is a
// perfect square and the result is squarefree.
uint64_t squarefree_part(uint64_t n, const FactorTable& t);

// All primes p with lo <= p <= hi, ascending. 1 <= lo <= hi <= capacity.
std::vector<uint64_t> primes_in(uint64_t lo, uint64_t hi, const FactorTable& t);

// Sum of 1/p over primes p with lo < p <= hi (half-open on the left).
double prime_reciprocal_sum(uint64_t lo, uint64_t hi, const FactorTable& t);

// prod_{p < y} (1 - 1/p), 2 <= y <= capacity. Strictly decreasing in y
// at prime steps.
double mertens_product(uint64_t y, const FactorTable& t);

} // namespace mulcomp
