#include "mulcomp/arith_core.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace mulcomp {

namespace {

// Sieve one segment [lo, hi] of the spf array. base_primes are all primes
// <= sqrt(capacity), ascending; first-touch wins, so ascending order makes
// the recorded factor the smallest one.
void sieve_segment(std::vector<uint32_t>& spf, uint64_t lo, uint64_t hi,
                   const std::vector<uint32_t>& base_primes) {
    for (uint32_t p : base_primes) {
        uint64_t pp = uint64_t(p) * p;
        if (pp > hi) break;
        uint64_t start = std::max(pp, ((lo + p - 1) / p) * uint64_t(p));
        for (uint64_t m = start; m <= hi; m += p) {
            if (spf[m] == 0) spf[m] = p;
        }
    }
    for (uint64_t n = lo; n <= hi; ++n) {
        if (spf[n] == 0) spf[n] = uint32_t(n); // no factor <= sqrt(cap): prime
    }
}

} // namespace

FactorTable FactorTable::build(uint64_t capacity, uint64_t budget_bytes, unsigned threads) {
    if (capacity < 2) throw std::invalid_argument("FactorTable: capacity must be >= 2");
    if (capacity >= (uint64_t(1) << 32))
        throw std::invalid_argument("FactorTable: capacity must fit 32-bit spf entries");
    uint64_t bytes = (capacity + 1) * sizeof(uint32_t);
    if (bytes > budget_bytes)
        throw resource_limit_error("FactorTable: " + std::to_string(bytes) +
                                   " bytes exceeds budget " + std::to_string(budget_bytes));

    std::vector<uint32_t> spf(capacity + 1, 0);

    // Base part [2, sqrt(capacity)] by the plain sieve.
    uint64_t root = uint64_t(std::sqrt(double(capacity)));
    while ((root + 1) * (root + 1) <= capacity) ++root;
    while (root * root > capacity) --root;
    uint64_t base_hi = std::min(capacity, std::max<uint64_t>(root, 2));
    for (uint64_t p = 2; p <= base_hi; ++p) {
        if (spf[p] != 0) continue;
        spf[p] = uint32_t(p);
        for (uint64_t m = p * p; m <= base_hi; m += p)
            if (spf[m] == 0) spf[m] = uint32_t(p);
    }
    std::vector<uint32_t> base_primes;
    for (uint64_t p = 2; p <= base_hi; ++p)
        if (spf[p] == p) base_primes.push_back(uint32_t(p));

    if (base_hi >= capacity) return FactorTable(capacity, std::move(spf));

    // Remaining range in fixed-size segments; segments are disjoint, so
    // they can go to worker threads without synchronization.
    uint64_t lo0 = base_hi + 1;
    uint64_t n_segments = (capacity - lo0) / segment_size + 1;
    auto run = [&](uint64_t seg_begin, uint64_t seg_end) {
        for (uint64_t s = seg_begin; s < seg_end; ++s) {
            uint64_t lo = lo0 + s * segment_size;
            uint64_t hi = std::min(capacity, lo + segment_size - 1);
            sieve_segment(spf, lo, hi, base_primes);
        }
    };
    if (threads <= 1 || n_segments <= 1) {
        run(0, n_segments);
    } else {
        unsigned n_workers = std::min<uint64_t>(threads, n_segments);
        std::vector<std::thread> workers;
        uint64_t chunk = (n_segments + n_workers - 1) / n_workers;
        for (unsigned w = 0; w < n_workers; ++w) {
            uint64_t b = w * chunk, e = std::min(n_segments, b + chunk);
            if (b >= e) break;
            workers.emplace_back(run, b, e);
        }
        for (auto& th : workers) th.join();
    }
    return FactorTable(capacity, std::move(spf));
}

Factorization factorize(uint64_t n, const FactorTable& t) {
    if (n < 1) throw std::out_of_range("factorize: n must be positive");
    t.check_range(n);
    Factorization f;
    f.n = n;
    while (n > 1) {
        uint64_t p = t.spf(n);
        uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.factors.emplace_back(p, e);
    }
    return f;
}

uint32_t valuation(uint64_t n, uint64_t p, const FactorTable& t) {
    if (n < 1) throw std::out_of_range("valuation: n must be positive");
    t.check_range(n);
    if (p > t.capacity() || !t.is_prime(p))
        throw std::invalid_argument("valuation: p=" + std::to_string(p) + " is not prime");
    uint32_t v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

uint64_t squarefree_part(uint64_t n, const FactorTable& t) {
    if (n < 1) throw std::out_of_range("squarefree_part: n must be positive");
    t.check_range(n);
    uint64_t m = 1;
    while (n > 1) {
        uint64_t p = t.spf(n);
        uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e & 1u) m *= p;
    }
    return m;
}

std::vector<uint64_t> primes_in(uint64_t lo, uint64_t hi, const FactorTable& t) {
    if (lo < 1 || lo > hi) throw std::out_of_range("primes_in: need 1 <= lo <= hi");
    t.check_range(hi);
    std::vector<uint64_t> ps;
    for (uint64_t n = std::max<uint64_t>(lo, 2); n <= hi; ++n)
        if (t.is_prime(n)) ps.push_back(n);
    return ps;
}

double prime_reciprocal_sum(uint64_t lo, uint64_t hi, const FactorTable& t) {
    if (lo < 1 || lo > hi) throw std::out_of_range("prime_reciprocal_sum: need 1 <= lo <= hi");
    t.check_range(hi);
    CompensatedSum s;
    for (uint64_t n = std::max<uint64_t>(lo + 1, 2); n <= hi; ++n)
        if (t.is_prime(n)) s.add(1.0 / double(n));
    return s.value();
}

double mertens_product(uint64_t y, const FactorTable& t) {
    if (y < 2) throw std::out_of_range("mertens_product: need y >= 2");
    t.check_range(y);
    // Accumulate log(1-1/p) compensated, then exponentiate; keeps long
    // products accurate near the e^{-gamma}/log y scale.
    CompensatedSum logs;
    for (uint64_t p = 2; p < y; ++p)
        if (t.is_prime(p)) logs.add(std::log1p(-1.0 / double(p)));
    return std::exp(logs.value());
}

} // namespace mulcomp
