#include "mulcomp/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace mulcomp {

BuchstabTable BuchstabTable::build(double u_max, double h) {
    if (!(h > 0) || h > 0.01 + 1e-15)
        throw std::invalid_argument("build_buchstab: need 0 < h <= 0.01");
    if (u_max < 2) throw std::invalid_argument("build_buchstab: need u_max >= 2");
    double ratio = u_max / h;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
        throw std::invalid_argument("build_buchstab: u_max/h must be an integer");

    BuchstabTable tbl;
    tbl.u_max_ = u_max;
    tbl.h_ = h;
    size_t n = size_t(std::llround((u_max - 1.0) / h));
    tbl.values_.resize(n + 1);

    // g(u) = u*omega(u). Closed form on [1,2]; beyond, g' = omega(u-1) and
    // the trapezoid step only reads grid values at least one unit back.
    auto omega_at = [&](size_t i) { return tbl.values_[i]; };
    size_t per_unit = size_t(std::llround(1.0 / h));
    bool aligned = std::abs(1.0 / h - double(per_unit)) < 1e-9 / h;

    // Delayed value omega(u_i - 1): grid lookup when 1/h is integral,
    // linear interpolation into the computed prefix otherwise.
    auto delayed = [&](size_t i) {
        if (aligned) return omega_at(i - per_unit);
        double u = 1.0 + double(i) * h - 1.0;
        double pos = (u - 1.0) / h;
        size_t j = size_t(pos);
        double frac = pos - double(j);
        return tbl.values_[j] * (1.0 - frac) + tbl.values_[j + 1] * frac;
    };

    double g = 1.0; // g(u) = u*omega(u) is identically 1 on [1,2]
    for (size_t i = 0; i <= n; ++i) {
        double u = 1.0 + double(i) * h;
        if (u <= 2.0 + 1e-12) {
            tbl.values_[i] = 1.0 / u;
        } else {
            // g(u) = g(u-h) + h/2 * (omega(u-h-1) + omega(u-1))
            g += 0.5 * h * (delayed(i - 1) + delayed(i));
            tbl.values_[i] = g / u;
        }
    }

    double lip = 0.0;
    for (size_t i = 0; i + 1 <= n; ++i)
        lip = std::max(lip, std::abs(tbl.values_[i + 1] - tbl.values_[i]) / h);
    tbl.lipschitz_ = lip;

    double dev = 0.0;
    for (size_t i = 0; i <= n; ++i) {
        double u = 1.0 + double(i) * h;
        if (u < 2.0 || u > std::min(3.0, u_max)) continue;
        double closed = (1.0 + std::log(u - 1.0)) / u;
        dev = std::max(dev, std::abs(tbl.values_[i] - closed));
    }
    tbl.max_dev_check_ = dev;
    return tbl;
}

double BuchstabTable::eval(double u) const {
    if (u < 1.0 - 1e-12 || u > u_max_ + 1e-12)
        throw std::out_of_range("eval_buchstab: u outside [1, u_max]");
    u = std::clamp(u, 1.0, u_max_);
    double pos = (u - 1.0) / h_;
    size_t i = std::min(size_t(pos), values_.size() - 1);
    if (i + 1 >= values_.size()) return values_.back();
    double frac = pos - double(i);
    return values_[i] * (1.0 - frac) + values_[i + 1] * frac;
}

uint64_t phi_rough(uint64_t x, uint64_t y, const FactorTable& t, unsigned threads) {
    if (y < 2) throw std::out_of_range("phi_rough: need y >= 2");
    t.check_range(x);
    if (x == 0) return 0;
    // n = 1 plus every n whose smallest prime factor is >= y.
    auto count_range = [&](uint64_t lo, uint64_t hi) {
        uint64_t c = 0;
        for (uint64_t n = lo; n <= hi; ++n)
            if (t.spf(n) >= y) ++c;
        return c;
    };
    if (x == 1) return 1;
    if (threads <= 1 || x < (uint64_t(1) << 20)) return 1 + count_range(2, x);

    std::vector<uint64_t> partial(threads, 0);
    std::vector<std::thread> workers;
    uint64_t span = x - 1, chunk = (span + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        uint64_t lo = 2 + w * chunk;
        if (lo > x) break;
        uint64_t hi = std::min(x, lo + chunk - 1);
        workers.emplace_back([&, w, lo, hi] { partial[w] = count_range(lo, hi); });
    }
    for (auto& th : workers) th.join();
    uint64_t total = 1;
    for (uint64_t c : partial) total += c;
    return total;
}

double warlimont_estimate(uint64_t x, uint64_t y, const BuchstabTable& tbl,
                          const FactorTable& t) {
    if (y < 2) throw std::out_of_range("warlimont_estimate: need y >= 2");
    double u = std::log(double(x)) / std::log(double(y));
    if (u < 1.0 - 1e-12 || u > tbl.u_max() + 1e-12)
        throw std::out_of_range("warlimont_estimate: u = log x/log y outside table range");
    return kExpGamma * tbl.eval(u) * double(x) * mertens_product(y, t);
}

double warlimont_error_ratio(uint64_t x, uint64_t y, const BuchstabTable& tbl,
                             const FactorTable& t) {
    double est = warlimont_estimate(x, y, tbl, t);
    double exact = double(phi_rough(x, y, t));
    double denom = double(x) * mertens_product(y, t);
    return std::abs(exact - est) * std::log(double(x)) / denom;
}

double loglog_deviation(uint64_t n, const FactorTable& t) {
    if (n < 3) throw std::out_of_range("loglog_deviation: need N >= 3");
    t.check_range(n);
    double s = prime_reciprocal_sum(1, n - 1, t);
    return s - std::log(std::log(double(n)));
}

} // namespace mulcomp
