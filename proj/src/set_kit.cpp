#include "mulcomp/set_kit.hpp"

#include <algorithm>
#include <thread>

namespace mulcomp {

namespace {
// p_1 .. p_64, enough for every k the finite constructions use without
// touching a sieve.
constexpr uint64_t kSmallPrimes[64] = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,
    59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131,
    137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
    227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311};
} // namespace

const uint64_t* small_primes_table() { return kSmallPrimes; }

std::vector<uint64_t> first_k_primes(uint32_t k) {
    std::vector<uint64_t> ps;
    ps.reserve(k);
    for (uint32_t i = 0; i < k && i < 64; ++i) ps.push_back(kSmallPrimes[i]);
    uint64_t n = ps.empty() ? 2 : ps.back() + 1;
    while (ps.size() < k) {
        bool prime = true;
        for (uint64_t p : ps) {
            if (p * p > n) break;
            if (n % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) ps.push_back(n);
        ++n;
    }
    return ps;
}

// -------------------------------------------------------------------
// PrimeSet
// -------------------------------------------------------------------

PrimeSet PrimeSet::all_primes() { return PrimeSet(); }

PrimeSet PrimeSet::explicit_list(std::vector<uint64_t> primes) {
    for (size_t i = 0; i + 1 < primes.size(); ++i)
        if (primes[i] >= primes[i + 1])
            throw std::invalid_argument("PrimeSet: explicit list must be strictly increasing");
    PrimeSet s;
    s.kind_ = Kind::Explicit;
    s.list_ = std::move(primes);
    return s;
}

PrimeSet PrimeSet::intervals(std::vector<std::pair<uint64_t, uint64_t>> ivals) {
    for (size_t i = 0; i < ivals.size(); ++i) {
        if (ivals[i].first >= ivals[i].second)
            throw std::invalid_argument("PrimeSet: interval (M,N] needs M < N");
        if (i > 0 && ivals[i - 1].second >= ivals[i].first)
            throw std::invalid_argument("PrimeSet: intervals must be disjoint and increasing");
    }
    PrimeSet s;
    s.kind_ = Kind::Intervals;
    s.ivals_ = std::move(ivals);
    return s;
}

PrimeSet PrimeSet::residue(uint64_t modulus, uint64_t rem) {
    if (modulus < 1) throw std::invalid_argument("PrimeSet: modulus must be >= 1");
    PrimeSet s;
    s.kind_ = Kind::Residue;
    s.modulus_ = modulus;
    s.rem_ = rem % modulus;
    return s;
}

PrimeSet PrimeSet::thinned(PrimeSet base, uint64_t n0) {
    if (n0 < 1) throw std::invalid_argument("PrimeSet: thinning stride must be >= 1");
    PrimeSet s;
    s.kind_ = Kind::Thinned;
    s.base_ = std::make_shared<const PrimeSet>(std::move(base));
    s.n0_ = n0;
    s.thin_cache_ = std::make_shared<ThinCache>();
    return s;
}

const std::vector<uint64_t>& PrimeSet::thinned_members(uint64_t up_to, const FactorTable& t) const {
    ThinCache& cache = *thin_cache_;
    if (cache.built_to.load(std::memory_order_acquire) >= up_to)
        return *cache.view.load(std::memory_order_acquire);

    std::lock_guard<std::mutex> lock(cache.mu);
    if (cache.built_to.load(std::memory_order_relaxed) < up_to) {
        std::vector<uint64_t> base_members = base_->list_up_to(up_to, t);
        std::vector<uint64_t> sel;
        for (size_t i = n0_ - 1; i < base_members.size(); i += n0_)
            sel.push_back(base_members[i]);
        cache.retained.push_back(std::make_unique<const std::vector<uint64_t>>(std::move(sel)));
        cache.view.store(cache.retained.back().get(), std::memory_order_release);
        cache.built_to.store(up_to, std::memory_order_release);
    }
    return *cache.view.load(std::memory_order_relaxed);
}

bool PrimeSet::contains(uint64_t p, const FactorTable& t) const {
    switch (kind_) {
        case Kind::AllPrimes:
            return true;
        case Kind::Explicit:
            return std::binary_search(list_.begin(), list_.end(), p);
        case Kind::Intervals:
            for (const auto& [m, n] : ivals_)
                if (p > m && p <= n) return true;
            return false;
        case Kind::Residue:
            return p % modulus_ == rem_;
        case Kind::Thinned: {
            const auto& mem = thinned_members(t.capacity(), t);
            return std::binary_search(mem.begin(), mem.end(), p);
        }
    }
    return false;
}

std::vector<uint64_t> PrimeSet::list_up_to(uint64_t x, const FactorTable& t) const {
    if (x < 2) return {};
    switch (kind_) {
        case Kind::AllPrimes:
            return primes_in(1, x, t);
        case Kind::Explicit: {
            std::vector<uint64_t> out;
            for (uint64_t p : list_) {
                if (p > x) break;
                out.push_back(p);
            }
            return out;
        }
        case Kind::Intervals: {
            std::vector<uint64_t> out;
            for (const auto& [m, n] : ivals_) {
                if (m >= x) break;
                for (uint64_t p : primes_in(m + 1, std::min(n, x), t)) out.push_back(p);
            }
            return out;
        }
        case Kind::Residue: {
            std::vector<uint64_t> out;
            for (uint64_t p : primes_in(1, x, t))
                if (p % modulus_ == rem_) out.push_back(p);
            return out;
        }
        case Kind::Thinned: {
            auto mem = thinned_members(x, t);
            while (!mem.empty() && mem.back() > x) mem.pop_back();
            return mem;
        }
    }
    return {};
}

double PrimeSet::reciprocal_sum_below(uint64_t x, const FactorTable& t) const {
    if (x <= 2) return 0.0;
    CompensatedSum s;
    for (uint64_t q : list_up_to(x - 1, t)) s.add(1.0 / double(q));
    return s.value();
}

bool PrimeSet::operator==(const PrimeSet& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
        case Kind::AllPrimes: return true;
        case Kind::Explicit: return list_ == o.list_;
        case Kind::Intervals: return ivals_ == o.ivals_;
        case Kind::Residue: return modulus_ == o.modulus_ && rem_ == o.rem_;
        case Kind::Thinned: return n0_ == o.n0_ && *base_ == *o.base_;
    }
    return false;
}

// -------------------------------------------------------------------
// IntSet
// -------------------------------------------------------------------

IntSet IntSet::all() { return IntSet(); }

IntSet IntSet::explicit_list(std::vector<uint64_t> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (!members.empty() && members.front() < 1)
        throw std::invalid_argument("IntSet: members must be positive");
    IntSet s;
    s.kind_ = Kind::Explicit;
    s.list_ = std::move(members);
    return s;
}

IntSet IntSet::squarefree_over(PrimeSet q) {
    IntSet s;
    s.kind_ = Kind::SquarefreeOverQ;
    s.q_ = std::move(q);
    return s;
}

IntSet IntSet::squarefree_part_avoids(PrimeSet q) {
    IntSet s;
    s.kind_ = Kind::SquarefreePartAvoidsQ;
    s.q_ = std::move(q);
    return s;
}

IntSet IntSet::even_valuation_first_k(uint32_t k) {
    if (k < 1) throw std::invalid_argument("IntSet: k must be >= 1");
    IntSet s;
    s.kind_ = Kind::EvenValuationFirstK;
    s.k_ = k;
    return s;
}

IntSet IntSet::squarefree_over_first_k(uint32_t k) {
    if (k < 1 || k > 63) throw std::invalid_argument("IntSet: need 1 <= k <= 63");
    IntSet s;
    s.kind_ = Kind::SquarefreeOverFirstK;
    s.k_ = k;
    return s;
}

bool IntSet::member(uint64_t n, const FactorTable& t) const {
    if (n < 1) throw std::out_of_range("member: n must be positive");
    switch (kind_) {
        case Kind::All:
            return true;
        case Kind::Explicit:
            return std::binary_search(list_.begin(), list_.end(), n);
        case Kind::SquarefreeOverQ: {
            t.check_range(n);
            while (n > 1) {
                uint64_t p = t.spf(n);
                n /= p;
                if (n % p == 0) return false; // square factor
                if (!q_.contains(p, t)) return false;
            }
            return true;
        }
        case Kind::SquarefreePartAvoidsQ: {
            t.check_range(n);
            while (n > 1) {
                uint64_t p = t.spf(n);
                uint32_t e = 0;
                while (n % p == 0) {
                    n /= p;
                    ++e;
                }
                if ((e & 1u) && q_.contains(p, t)) return false;
            }
            return true;
        }
        case Kind::EvenValuationFirstK: {
            t.check_range(n);
            if (k_ <= 64) {
                for (uint32_t i = 0; i < k_; ++i) {
                    uint64_t p = kSmallPrimes[i];
                    uint32_t e = 0;
                    while (n % p == 0) {
                        n /= p;
                        ++e;
                    }
                    if (e & 1u) return false;
                }
                return true;
            }
            for (uint64_t p : first_k_primes(k_)) {
                uint32_t e = 0;
                while (n % p == 0) {
                    n /= p;
                    ++e;
                }
                if (e & 1u) return false;
            }
            return true;
        }
        case Kind::SquarefreeOverFirstK: {
            t.check_range(n);
            uint64_t pk = kSmallPrimes[k_ - 1]; // k <= 63 enforced at construction
            while (n > 1) {
                uint64_t p = t.spf(n);
                if (p > pk) return false;
                n /= p;
                if (n % p == 0) return false;
            }
            return true;
        }
    }
    return false;
}

std::optional<uint64_t> IntSet::finite_size() const {
    switch (kind_) {
        case Kind::Explicit: return list_.size();
        case Kind::SquarefreeOverFirstK: return uint64_t(1) << k_;
        default: return std::nullopt;
    }
}

std::vector<uint64_t> IntSet::enumerate_finite(uint64_t x) const {
    switch (kind_) {
        case Kind::Explicit: {
            std::vector<uint64_t> out;
            for (uint64_t m : list_)
                if (m <= x) out.push_back(m);
            return out;
        }
        case Kind::SquarefreeOverFirstK: {
            // DFS over subsets of the first k primes, pruned at x.
            auto ps = first_k_primes(k_);
            std::vector<uint64_t> out{1};
            std::vector<std::pair<uint64_t, size_t>> stack{{1, 0}};
            while (!stack.empty()) {
                auto [prod, i] = stack.back();
                stack.pop_back();
                for (size_t j = i; j < ps.size(); ++j) {
                    if (prod > x / ps[j]) break; // overflow-safe prune
                    uint64_t next = prod * ps[j];
                    out.push_back(next);
                    stack.emplace_back(next, j + 1);
                }
            }
            std::sort(out.begin(), out.end());
            return out;
        }
        default:
            throw std::invalid_argument("enumerate_finite: descriptor is not a finite set");
    }
}

bool IntSet::operator==(const IntSet& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
        case Kind::All: return true;
        case Kind::Explicit: return list_ == o.list_;
        case Kind::SquarefreeOverQ:
        case Kind::SquarefreePartAvoidsQ: return q_ == o.q_;
        case Kind::EvenValuationFirstK:
        case Kind::SquarefreeOverFirstK: return k_ == o.k_;
    }
    return false;
}

// -------------------------------------------------------------------
// Counting and sums
// -------------------------------------------------------------------

std::vector<uint64_t> membership_bitmap(const IntSet& d, uint64_t x, const FactorTable& t,
                                        unsigned threads) {
    t.check_range(x);
    std::vector<uint64_t> bm((x >> 6) + 1, 0);
    auto fill = [&](uint64_t lo, uint64_t hi) { // [lo, hi], lo word-aligned
        for (uint64_t n = std::max<uint64_t>(lo, 1); n <= hi; ++n)
            if (d.member(n, t)) bm[n >> 6] |= uint64_t(1) << (n & 63);
    };
    if (threads <= 1 || x < (uint64_t(1) << 18)) {
        fill(0, x);
        return bm;
    }
    // Chunk on 64-entry boundaries: no two threads share a word.
    uint64_t words = bm.size();
    uint64_t words_per = (words + threads - 1) / threads;
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < threads; ++w) {
        uint64_t wlo = w * words_per;
        if (wlo >= words) break;
        uint64_t whi = std::min(words, wlo + words_per);
        workers.emplace_back(fill, wlo << 6, std::min(x, (whi << 6) - 1));
    }
    for (auto& th : workers) th.join();
    return bm;
}

uint64_t count(const IntSet& d, uint64_t x, const FactorTable& t, unsigned threads) {
    t.check_range(x);
    if (d.kind() == IntSet::Kind::All) return x;
    auto bm = membership_bitmap(d, x, t, threads);
    uint64_t c = 0;
    for (uint64_t w : bm) c += uint64_t(__builtin_popcountll(w));
    return c;
}

CountingSeries counting_series(const IntSet& d, const std::vector<uint64_t>& checkpoints,
                               const FactorTable& t, unsigned threads) {
    if (checkpoints.empty()) throw std::invalid_argument("counting_series: no checkpoints");
    if (checkpoints.front() < 1)
        throw std::invalid_argument("counting_series: checkpoints must be positive");
    for (size_t i = 0; i + 1 < checkpoints.size(); ++i)
        if (checkpoints[i] >= checkpoints[i + 1])
            throw std::invalid_argument("counting_series: checkpoints must be strictly increasing");
    uint64_t x_max = checkpoints.back();
    t.check_range(x_max);

    CountingSeries series;
    series.descriptor = d;
    series.checkpoints = checkpoints;
    auto bm = membership_bitmap(d, x_max, t, threads);
    uint64_t c = 0;
    size_t next = 0;
    for (uint64_t n = 1; n <= x_max && next < checkpoints.size(); ++n) {
        if (bitmap_test(bm, n)) ++c;
        while (next < checkpoints.size() && checkpoints[next] == n) {
            series.counts.push_back(c);
            ++next;
        }
    }
    return series;
}

AbelSums reciprocal_sum_abel(const IntSet& d, uint64_t n_max, const FactorTable& t) {
    if (n_max < 1) throw std::out_of_range("reciprocal_sum_abel: N must be positive");
    t.check_range(n_max);
    CompensatedSum direct, abel;
    uint64_t running = 0; // A(n)
    for (uint64_t n = 1; n <= n_max; ++n) {
        if (d.member(n, t)) {
            ++running;
            direct.add(1.0 / double(n));
        }
        if (n < n_max)
            abel.add(double(running) / (double(n) * double(n + 1)));
        else
            abel.add(double(running) / double(n));
    }
    return {direct.value(), abel.value()};
}

} // namespace mulcomp
