#include "mulcomp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace mulcomp {

namespace {

// Witness validity per n as a bitmap; failures appended in order.
std::vector<uint64_t> run_witness(const ComplementPair& pair, uint64_t x, const FactorTable& t,
                                  unsigned threads, std::vector<WitnessFailure>& failures) {
    std::vector<uint64_t> ok((x >> 6) + 1, 0);
    auto check = [&](uint64_t lo, uint64_t hi) {
        for (uint64_t n = std::max<uint64_t>(lo, 1); n <= hi; ++n) {
            auto [a, b] = pair.decompose(n, t);
            if (a * b == n && pair.a_desc.member(a, t) && pair.b_desc.member(b, t))
                ok[n >> 6] |= uint64_t(1) << (n & 63);
        }
    };
    if (threads <= 1 || x < (uint64_t(1) << 18)) {
        check(0, x);
    } else {
        uint64_t words = ok.size();
        uint64_t per = (words + threads - 1) / threads;
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            uint64_t wlo = w * per;
            if (wlo >= words) break;
            uint64_t whi = std::min(words, wlo + per);
            workers.emplace_back(check, wlo << 6, std::min(x, (whi << 6) - 1));
        }
        for (auto& th : workers) th.join();
    }
    for (uint64_t n = 1; n <= x; ++n) {
        if (!bitmap_test(ok, n)) {
            auto [a, b] = pair.decompose(n, t);
            failures.push_back({n, a, b});
        }
    }
    return ok;
}

// Representability per n by iterating b in B and marking multiples with
// an A-member cofactor. Independent of the witness path.
std::vector<uint64_t> run_divisor_scan(const ComplementPair& pair, uint64_t x,
                                       const FactorTable& t, unsigned threads) {
    auto mem_a = membership_bitmap(pair.a_desc, x, t, threads);
    auto mem_b = membership_bitmap(pair.b_desc, x, t, threads);
    std::vector<uint64_t> rep((x >> 6) + 1, 0);
    auto mark = [&](uint64_t lo, uint64_t hi) { // mark representable n in [lo, hi]
        for (uint64_t b = 1; b <= hi; ++b) {
            if (!bitmap_test(mem_b, b)) continue;
            uint64_t start = std::max(b, ((lo + b - 1) / b) * b);
            for (uint64_t n = start; n <= hi; n += b)
                if (bitmap_test(mem_a, n / b)) rep[n >> 6] |= uint64_t(1) << (n & 63);
        }
    };
    if (threads <= 1 || x < (uint64_t(1) << 18)) {
        mark(0, x);
    } else {
        uint64_t words = rep.size();
        uint64_t per = (words + threads - 1) / threads;
        std::vector<std::thread> workers;
        for (unsigned w = 0; w < threads; ++w) {
            uint64_t wlo = w * per;
            if (wlo >= words) break;
            uint64_t whi = std::min(words, wlo + per);
            workers.emplace_back(mark, wlo << 6, std::min(x, (whi << 6) - 1));
        }
        for (auto& th : workers) th.join();
    }
    return rep;
}

} // namespace

VerificationReport verify_mc2(const ComplementPair& pair, uint64_t x, VerifyMethod method,
                              const FactorTable& t, unsigned threads) {
    t.check_range(x);
    if (x < 1) throw std::invalid_argument("verify_mc2: X must be positive");
    bool want_witness = method == VerifyMethod::Witness || method == VerifyMethod::Both;
    bool want_scan = method == VerifyMethod::DivisorScan || method == VerifyMethod::Both;
    if (want_witness && !pair.has_witness())
        throw std::invalid_argument("verify_mc2: pair has no decomposition rule for the witness method");

    VerificationReport report;
    report.pair = pair;
    report.x = x;
    report.method = method;

    std::vector<uint64_t> witness_ok, rep;
    if (want_witness) witness_ok = run_witness(pair, x, t, threads, report.witness_failures);
    if (want_scan) {
        rep = run_divisor_scan(pair, x, t, threads);
        for (uint64_t n = 1; n <= x; ++n)
            if (!bitmap_test(rep, n)) report.missing.push_back(n);
    }
    if (method == VerifyMethod::Both) {
        bool agree = true;
        for (size_t w = 0; w < rep.size() && agree; ++w)
            if (witness_ok[w] != rep[w]) agree = false;
        // Word 0 holds bit 0 (unused); both paths leave it clear.
        report.methods_agree = agree;
    }
    return report;
}

RatioSeries ratio_series(const ComplementPair& pair, const std::vector<uint64_t>& checkpoints,
                         const FactorTable& t, unsigned threads) {
    if (checkpoints.empty()) throw std::invalid_argument("ratio_series: no checkpoints");
    if (checkpoints.front() < 1)
        throw std::invalid_argument("ratio_series: checkpoints must be positive");
    for (size_t i = 0; i + 1 < checkpoints.size(); ++i)
        if (checkpoints[i] >= checkpoints[i + 1])
            throw std::invalid_argument("ratio_series: checkpoints must be strictly increasing");
    uint64_t x_max = checkpoints.back();
    t.check_range(x_max);

    auto mem_a = membership_bitmap(pair.a_desc, x_max, t, threads);
    auto mem_b = membership_bitmap(pair.b_desc, x_max, t, threads);

    RatioSeries series;
    uint64_t ca = 0, cb = 0;
    size_t next = 0;
    for (uint64_t n = 1; n <= x_max && next < checkpoints.size(); ++n) {
        if (bitmap_test(mem_a, n)) ++ca;
        if (bitmap_test(mem_b, n)) ++cb;
        while (next < checkpoints.size() && checkpoints[next] == n) {
            RatioPoint pt;
            pt.x = n;
            pt.a_count = ca;
            pt.b_count = cb;
            double x = double(n);
            uint64_t mx = std::max(ca, cb), mn = std::min(ca, cb);
            pt.r1 = double(ca) * double(cb) / x;
            if (mn >= 2) {
                pt.r2 = double(mx) * std::log(double(mn)) / x;
                pt.r3 = double(mx) * std::sqrt(std::log(double(mn))) / x;
            }
            pt.r4 = double(mx) * std::sqrt(std::log(x)) / x;
            series.points.push_back(pt);
            ++next;
        }
    }
    return series;
}

double coverage_upper_bound(const ComplementPair& pair, uint64_t x, uint64_t threshold,
                            CoverageSide side, const FactorTable& t) {
    t.check_range(x);
    if (x < 1) throw std::out_of_range("coverage_upper_bound: x must be positive");
    if (threshold < 1) throw std::invalid_argument("coverage_upper_bound: threshold must be >= 1");
    const IntSet& own = side == CoverageSide::A ? pair.a_desc : pair.b_desc;
    const IntSet& other = side == CoverageSide::A ? pair.b_desc : pair.a_desc;

    auto mem_own = membership_bitmap(own, x, t);
    auto mem_other = membership_bitmap(other, x, t);
    // Prefix counts of the other set for O(1) Other(x/s) queries.
    std::vector<uint64_t> prefix(x + 1, 0);
    for (uint64_t n = 1; n <= x; ++n) prefix[n] = prefix[n - 1] + (bitmap_test(mem_other, n) ? 1 : 0);

    CompensatedSum total;
    for (uint64_t s = 1; s <= x; ++s) {
        if (!bitmap_test(mem_own, s)) continue;
        if (s < threshold)
            total.add(double(prefix[x / s]));
        else
            total.add(double(x) / double(s));
    }
    return total.value();
}

TrendReport little_o_trend(const CountingSeries& series) {
    if (series.checkpoints.size() < 4)
        throw std::invalid_argument("little_o_trend: need at least 4 checkpoints");
    if (series.checkpoints.back() < 1000 * series.checkpoints.front())
        throw std::invalid_argument("little_o_trend: checkpoints must span at least 3 decades");

    TrendReport rep;
    rep.checkpoints = series.checkpoints;
    for (size_t i = 0; i < series.checkpoints.size(); ++i)
        rep.ratios.push_back(double(series.counts[i]) / double(series.checkpoints[i]));
    rep.strictly_decreasing = true;
    for (size_t i = 0; i + 1 < rep.ratios.size(); ++i)
        if (!(rep.ratios[i + 1] < rep.ratios[i])) rep.strictly_decreasing = false;
    return rep;
}

} // namespace mulcomp
