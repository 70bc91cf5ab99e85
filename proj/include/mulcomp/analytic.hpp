// analytic.hpp
// Numerical Buchstab function, exact rough-number counts phi(x,y), the
// Warlimont estimate e^gamma * omega(u) * x * prod_{p<y}(1-1/p) with its
// empirical error ratio, and the log log N deviation of prime reciprocal
// sums.

#pragma once

#include <cstdint>
#include <vector>

#include "mulcomp/arith_core.hpp"

namespace mulcomp {

// Euler-Mascheroni constant and friends, held to full double precision.
inline constexpr double kEulerGamma = 0.57721566490153286060651209;
inline constexpr double kExpGamma = 1.78107241799019798523650410;      // e^gamma
inline constexpr double kExpMinusGamma = 0.56145948356688516982414772; // e^-gamma
inline constexpr double kPiSquaredOver6 = 1.64493406684822643647241516;

// -------------------------------------------------------------------
// BuchstabTable: omega(u) on a uniform grid over [1, u_max].
// omega(u) = 1/u on [1,2]; (u omega(u))' = omega(u-1) for u >= 2,
// integrated interval by interval with the trapezoid rule (the delayed
// argument u-1 always lies on the already-computed part, so each step
// is explicit). Grid values stay in [0.5, 1].
// -------------------------------------------------------------------
class BuchstabTable {
public:
    // u_max >= 2, 0 < h <= 0.01, u_max/h integral.
    static BuchstabTable build(double u_max, double h);

    double u_max() const { return u_max_; }
    double step() const { return h_; }
    const std::vector<double>& values() const { return values_; }

    // Linear interpolation between grid points; exact at grid points.
    // 1 <= u <= u_max.
    double eval(double u) const;

    // Max |omega(u+h)-omega(u)|/h over the grid (empirical Lipschitz bound).
    double lipschitz_bound() const { return lipschitz_; }
    // Max deviation from the closed form (1+ln(u-1))/u on [2, min(3,u_max)],
    // measured at build time.
    double max_dev_check() const { return max_dev_check_; }

private:
    BuchstabTable() = default;
    double u_max_ = 0, h_ = 0;
    std::vector<double> values_; // values_[i] = omega(1 + i*h)
    double lipschitz_ = 0;
    double max_dev_check_ = 0;
};

inline BuchstabTable build_buchstab(double u_max, double h) { return BuchstabTable::build(u_max, h); }
inline double eval_buchstab(const BuchstabTable& tbl, double u) { return tbl.eval(u); }

// Exact |{n <= x : p | n => p >= y}| (n = 1 included) by a streaming scan
// of smallest prime factors. x <= t.capacity, y >= 2.
uint64_t phi_rough(uint64_t x, uint64_t y, const FactorTable& t, unsigned threads = 1);

// e^gamma * omega(u) * x * prod_{p<y}(1-1/p) with u = log x / log y.
// Requires y >= 2 and 1 <= u <= tbl.u_max.
double warlimont_estimate(uint64_t x, uint64_t y, const BuchstabTable& tbl,
                          const FactorTable& t);

// |phi(x,y) - estimate| * log x / (x * prod_{p<y}(1-1/p)): the empirical
// constant in Warlimont's error term.
double warlimont_error_ratio(uint64_t x, uint64_t y, const BuchstabTable& tbl,
                             const FactorTable& t);

// sum_{p<N} 1/p - log log N. N >= 3.
double loglog_deviation(uint64_t n, const FactorTable& t);

} // namespace mulcomp
