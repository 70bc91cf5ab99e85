#include "mulcomp/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace mulcomp {

// -------------------------------------------------------------------
// TargetFunction
// -------------------------------------------------------------------

TargetFunction TargetFunction::identity() {
    TargetFunction f;
    f.kind_ = Kind::Identity;
    return f;
}

TargetFunction TargetFunction::x_over_logx_loglogx() {
    TargetFunction f;
    f.kind_ = Kind::XOverLogLogLog;
    return f;
}

TargetFunction TargetFunction::constant(double c) {
    if (c < 0) throw std::invalid_argument("TargetFunction: constant must be >= 0");
    TargetFunction f;
    f.kind_ = Kind::Constant;
    f.c_ = c;
    return f;
}

double TargetFunction::operator()(double x) const {
    switch (kind_) {
        case Kind::Identity: return x;
        case Kind::XOverLogLogLog: return x / (std::log(x) * std::log(std::log(x)));
        case Kind::Constant: return c_;
    }
    return 0;
}

uint64_t TargetFunction::domain_min() const {
    switch (kind_) {
        case Kind::Identity: return 1;
        case Kind::XOverLogLogLog: return 3; // needs log log x > 0, i.e. x > e
        case Kind::Constant: return 1;
    }
    return 1;
}

std::string TargetFunction::name() const {
    switch (kind_) {
        case Kind::Identity: return "x";
        case Kind::XOverLogLogLog: return "x/logx-loglogx";
        case Kind::Constant: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.12g", c_);
            return buf;
        }
    }
    return "";
}

// -------------------------------------------------------------------
// Pairs
// -------------------------------------------------------------------

std::pair<uint64_t, uint64_t> ComplementPair::decompose(uint64_t n, const FactorTable& t) const {
    if (n < 1) throw std::out_of_range("decompose: n must be positive");
    t.check_range(n);
    switch (rule) {
        case Rule::None:
            throw std::invalid_argument("decompose: pair has no constructive rule");
        case Rule::OddValuationSplit: {
            // a = product of primes in Q dividing n to an odd power.
            uint64_t a = 1, m = n;
            while (m > 1) {
                uint64_t p = t.spf(m);
                uint32_t e = 0;
                while (m % p == 0) {
                    m /= p;
                    ++e;
                }
                if ((e & 1u) && rule_q.contains(p, t)) a *= p;
            }
            return {a, n / a};
        }
        case Rule::SmallPrimeParitySplit: {
            // b = product of the first-k primes dividing n to an odd power.
            uint64_t b = 1, m = n;
            const uint64_t* ps = small_primes_table(); // rule_k <= 63
            for (uint32_t i = 0; i < rule_k; ++i) {
                uint64_t p = ps[i];
                if (p > m) break;
                uint32_t e = 0;
                while (m % p == 0) {
                    m /= p;
                    ++e;
                }
                if (e & 1u) b *= p;
            }
            return {n / b, b};
        }
    }
    return {1, n};
}

ComplementPair lemma_q_pair(PrimeSet q) {
    ComplementPair pair;
    pair.a_desc = IntSet::squarefree_over(q);
    pair.b_desc = IntSet::squarefree_part_avoids(q);
    pair.rule = ComplementPair::Rule::OddValuationSplit;
    pair.rule_q = std::move(q);
    return pair;
}

ComplementPair vegeseset_pair(uint32_t k) {
    if (k < 1) throw std::invalid_argument("vegeseset_pair: k must be >= 1");
    ComplementPair pair;
    pair.a_desc = IntSet::even_valuation_first_k(k);
    pair.b_desc = IntSet::squarefree_over_first_k(k);
    pair.rule = ComplementPair::Rule::SmallPrimeParitySplit;
    pair.rule_k = k;
    return pair;
}

double vegeseset_lower_bound(const IntSet& b_desc, const FactorTable& t) {
    std::vector<uint64_t> v; // largest prime factors, deduplicated
    if (b_desc.kind() == IntSet::Kind::SquarefreeOverFirstK) {
        v = first_k_primes(b_desc.k());
    } else if (b_desc.kind() == IntSet::Kind::Explicit) {
        for (uint64_t m : b_desc.explicit_members()) {
            if (m < 2) continue;
            auto f = factorize(m, t);
            v.push_back(f.factors.back().first);
        }
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    } else {
        throw std::invalid_argument("vegeseset_lower_bound: B must be a finite set");
    }
    double prod = 1.0;
    for (uint64_t p : v) prod *= 1.0 - 1.0 / double(p);
    return prod;
}

// -------------------------------------------------------------------
// Interval schedule
// -------------------------------------------------------------------

namespace {

// Smallest integer M >= lo with f(M) > threshold, or nullopt if none
// exists below `horizon`. f is monotone nondecreasing for the kinds we
// accept, so a doubling+bisect search is exact.
std::optional<uint64_t> first_above(const TargetFunction& f, double threshold, uint64_t lo,
                                    uint64_t horizon) {
    lo = std::max(lo, f.domain_min());
    if (lo > horizon) return std::nullopt;
    if (f(double(lo)) > threshold) return lo;
    uint64_t hi = lo;
    while (f(double(hi)) <= threshold) {
        if (hi >= horizon) return std::nullopt;
        hi = std::min(horizon, hi * 2 + 1);
    }
    // invariant: f(lo) <= threshold < f(hi)
    while (hi - lo > 1) {
        uint64_t mid = lo + (hi - lo) / 2;
        if (f(double(mid)) > threshold)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace

PrimeSet IntervalSchedule::certified_q() const {
    std::vector<std::pair<uint64_t, uint64_t>> ivals;
    for (const auto& e : entries) {
        if (!e.certified) break;
        ivals.emplace_back(e.m, e.n);
    }
    return PrimeSet::intervals(std::move(ivals));
}

size_t IntervalSchedule::certified_count() const {
    size_t c = 0;
    for (const auto& e : entries) {
        if (!e.certified) break;
        ++c;
    }
    return c;
}

IntervalSchedule liminffx_schedule(const TargetFunction& f, uint32_t k_max, uint64_t cap,
                                   const FactorTable& t) {
    if (k_max < 1) throw std::invalid_argument("liminffx_schedule: k_max must be >= 1");
    uint64_t scan_cap = std::min(cap, t.capacity());

    IntervalSchedule sched;
    sched.f = f;
    sched.cap = cap;

    uint64_t prev_m = 1, prev_n = 0; // N_0 = 0: empty primorial, pi = 0
    bool blocked = false;
    for (uint32_t k = 1; k <= k_max; ++k) {
        ScheduleEntry e;
        e.k = k;
        if (blocked) {
            e.binding_constraint = "depends on uncertified entry " + std::to_string(k - 1);
            sched.entries.push_back(std::move(e));
            continue;
        }

        // Lower bound on M_k: above the primorial of N_{k-1} and above M_{k-1}.
        __uint128_t primorial = 1;
        bool primorial_overflow = false;
        if (prev_n >= 2) {
            for (uint64_t p : primes_in(2, prev_n, t)) {
                primorial *= p;
                if (primorial > (__uint128_t(1) << 63)) {
                    primorial_overflow = true;
                    break;
                }
            }
        }
        if (primorial_overflow) {
            e.binding_constraint =
                "M" + std::to_string(k) + " > primorial(" + std::to_string(prev_n) + ") > 2^63";
            sched.entries.push_back(std::move(e));
            blocked = true;
            continue;
        }
        uint64_t lower = std::max<uint64_t>(uint64_t(primorial) + 1, prev_m + 1);

        // f(M_k) must exceed k * 2^{N_{k-1}}.
        double threshold = std::ldexp(double(k), int(std::min<uint64_t>(prev_n, 1000)));
        auto m_star = first_above(f, threshold, lower, uint64_t(1) << 62);
        if (!m_star) {
            e.binding_constraint = "f(M" + std::to_string(k) + ") never exceeds " +
                                   std::to_string(threshold);
            sched.entries.push_back(std::move(e));
            blocked = true;
            continue;
        }
        if (*m_star > scan_cap) {
            e.binding_constraint =
                "M" + std::to_string(k) + " > " + std::to_string(*m_star - 1);
            sched.entries.push_back(std::move(e));
            blocked = true;
            continue;
        }
        e.m = *m_star;

        // Smallest N with sum_{(M_k, N]} 1/p >= 1.
        CompensatedSum sum;
        uint64_t n_k = 0;
        for (uint64_t p = e.m + 1; p <= scan_cap; ++p) {
            if (!t.is_prime(p)) continue;
            sum.add(1.0 / double(p));
            if (sum.value() >= 1.0) {
                n_k = p;
                break;
            }
        }
        if (n_k == 0) {
            e.binding_constraint = "N" + std::to_string(k) + " > " + std::to_string(scan_cap);
            sched.entries.push_back(std::move(e));
            blocked = true;
            continue;
        }
        e.n = n_k;
        e.certified = true;
        e.reciprocal_sum = sum.value();

        // Witness: A over the previous intervals counted at M_k, versus the
        // proven cap 2^{pi(N_{k-1})}/f(M_k).
        std::vector<std::pair<uint64_t, uint64_t>> prefix;
        for (const auto& prev : sched.entries)
            if (prev.certified) prefix.emplace_back(prev.m, prev.n);
        IntSet a_prev = IntSet::squarefree_over(PrimeSet::intervals(std::move(prefix)));
        uint64_t a_count = count(a_prev, e.m, t);
        double fm = f(double(e.m));
        uint64_t pi_prev = prev_n >= 2 ? primes_in(2, prev_n, t).size() : 0;
        e.a_ratio = double(a_count) / fm;
        e.ratio_bound = std::ldexp(1.0, int(pi_prev)) / fm;

        prev_m = e.m;
        prev_n = e.n;
        sched.entries.push_back(std::move(e));
    }
    return sched;
}

// -------------------------------------------------------------------
// R set construction
// -------------------------------------------------------------------

PrimeSet RSetResult::q() const {
    if (!n0) throw std::invalid_argument("RSetResult: N0 undetermined, no Q available");
    return PrimeSet::thinned(PrimeSet::explicit_list(r), *n0);
}

RSetResult limsupfxyes_build(const TargetFunction& f, double c1, uint64_t x_min,
                             uint64_t x_max, const FactorTable& t, uint64_t n0_search_limit) {
    if (!(c1 > 0)) throw std::invalid_argument("limsupfxyes_build: c1 must be positive");
    t.check_range(x_max);

    RSetResult res;
    res.f = f;
    res.c1 = c1;
    res.x_min = std::max(x_min, f.domain_min());
    res.x_max = x_max;
    res.n0_search_limit = n0_search_limit;

    // Sequential inclusion rule; each decision feeds the reciprocal sum
    // seen by all later primes.
    CompensatedSum chi_sum; // sum_{n<p} chi_R(n)/n
    for (uint64_t p = std::max<uint64_t>(res.x_min, 2); p <= x_max; ++p) {
        if (!t.is_prime(p)) continue;
        double rhs = f(double(p)) / std::exp((2.0 / c1) * chi_sum.value());
        if (double(res.r.size()) + 1.0 <= rhs) {
            res.r.push_back(p);
            chi_sum.add(1.0 / double(p));
        }
    }

    // Smallest N0 whose thinned subsequence keeps every window
    // [sqrt(x), x] below c1*log(2)/2 for x <= x_max. The window sum can
    // only peak right after a selected prime enters, so checking at the
    // selected primes covers all x.
    double threshold = c1 * std::log(2.0) / 2.0;
    for (uint64_t n0 = 1; n0 <= n0_search_limit; ++n0) {
        std::vector<uint64_t> sel;
        for (size_t i = n0 - 1; i < res.r.size(); i += n0) sel.push_back(res.r[i]);
        bool ok = true;
        size_t lo = 0;
        double window = 0;
        for (size_t j = 0; j < sel.size() && ok; ++j) {
            window += 1.0 / double(sel[j]);
            // drop elements below sqrt(x) for x = sel[j]
            while (lo < j && double(sel[lo]) * double(sel[lo]) < double(sel[j])) {
                window -= 1.0 / double(sel[lo]);
                ++lo;
            }
            if (window >= threshold) ok = false;
        }
        if (ok) {
            res.n0 = n0;
            break;
        }
    }
    return res;
}

// -------------------------------------------------------------------
// A_k bound check
// -------------------------------------------------------------------

std::vector<AkfxRow> akfx_check(const PrimeSet& q, const TargetFunction& f, double c1,
                                uint64_t x, uint32_t k_max, const FactorTable& t) {
    if (!(c1 > 0)) throw std::invalid_argument("akfx_check: c1 must be positive");
    if (k_max < 1) throw std::invalid_argument("akfx_check: k_max must be >= 1");
    t.check_range(x);

    std::vector<uint64_t> counts(k_max + 1, 0);
    for (uint64_t n = 2; n <= x; ++n) {
        uint64_t m = n;
        uint32_t k = 0;
        bool in_a = true;
        while (m > 1) {
            uint64_t p = t.spf(m);
            m /= p;
            if (m % p == 0 || !q.contains(p, t)) { // not squarefree over Q
                in_a = false;
                break;
            }
            ++k;
        }
        if (in_a && k >= 1 && k <= k_max) ++counts[k];
    }

    double big_t = (2.0 / c1) * q.reciprocal_sum_below(x, t);
    double e_inv_c1 = std::exp(1.0 / c1);
    double fx = f(double(x));

    std::vector<AkfxRow> rows;
    double t_pow = 1.0;      // T^{k-1}
    double factorial = 1.0;  // (k-1)!
    for (uint32_t k = 1; k <= k_max; ++k) {
        if (k > 1) {
            t_pow *= big_t;
            factorial *= double(k - 1);
        }
        AkfxRow row;
        row.k = k;
        row.count = counts[k];
        row.bound = e_inv_c1 * fx * t_pow / (factorial * std::exp(big_t));
        row.pass = double(row.count) <= row.bound;
        rows.push_back(row);
    }
    return rows;
}

} // namespace mulcomp
