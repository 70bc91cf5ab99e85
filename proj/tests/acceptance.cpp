// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Usage: acceptance <path-to-mulcomp-cli>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mulcomp/analytic.hpp"
#include "mulcomp/arith_core.hpp"
#include "mulcomp/constructions.hpp"
#include "mulcomp/descriptor.hpp"
#include "mulcomp/metrics.hpp"
#include "mulcomp/set_kit.hpp"

using namespace mulcomp;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  criterion %2d  %-24s %s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ----------------------------------------------------------------
// 1. exhaustive MC2 verification at X = 1e6, both methods, <= 60 s/pair
// ----------------------------------------------------------------
void criterion_1(const FactorTable& t) {
    struct Case {
        std::string name;
        ComplementPair pair;
    };
    std::vector<Case> cases;
    for (uint32_t k = 1; k <= 4; ++k)
        cases.push_back({"vegeseset(k=" + std::to_string(k) + ")", vegeseset_pair(k)});
    cases.push_back({"lemma-q(all)", lemma_q_pair(PrimeSet::all_primes())});
    cases.push_back({"lemma-q(residue:1 mod 4)", lemma_q_pair(PrimeSet::residue(4, 1))});
    cases.push_back({"lemma-q(intervals:(2,29])", lemma_q_pair(PrimeSet::intervals({{2, 29}}))});

    bool pass = true;
    std::string detail;
    for (const auto& c : cases) {
        auto start = std::chrono::steady_clock::now();
        auto rep = verify_mc2(c.pair, 1000000, VerifyMethod::Both, t, 2);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool ok = rep.missing.empty() && rep.witness_failures.empty() &&
                  rep.methods_agree.value_or(false) && secs <= 60.0;
        if (!ok) {
            pass = false;
            detail += c.name + " missing=" + std::to_string(rep.missing.size()) +
                      " witness_failures=" + std::to_string(rep.witness_failures.size()) +
                      " agree=" + (rep.methods_agree.value_or(false) ? "yes" : "no") +
                      " secs=" + fmt(secs) + "; ";
        }
    }
    if (pass) detail = "7 pairs verified to 1e6, witness and scan agree";
    report(1, "mc2-exhaustive", pass, detail);
}

// ----------------------------------------------------------------
// 2. Buchstab correctness
// ----------------------------------------------------------------
void criterion_2() {
    auto tbl = build_buchstab(20.0, 1e-3);
    bool pass = true;
    std::string detail;

    double omega2 = tbl.eval(2.0);
    if (std::abs(omega2 - 0.5) > 1e-9) {
        pass = false;
        detail += "omega(2)=" + fmt(omega2) + "; ";
    }
    double max_dev = 0;
    for (double u = 2.0; u <= 3.0 + 1e-12; u += 1e-3) {
        double closed = (1.0 + std::log(std::max(u, 2.0) - 1.0)) / u;
        max_dev = std::max(max_dev, std::abs(tbl.eval(std::min(u, 3.0)) - closed));
    }
    if (max_dev > 1e-6) {
        pass = false;
        detail += "max dev on [2,3] = " + fmt(max_dev) + "; ";
    }
    auto coarse = build_buchstab(20.0, 2e-3);
    double ratio = coarse.max_dev_check() / tbl.max_dev_check();
    if (ratio < 3.5) {
        pass = false;
        detail += "refinement ratio " + fmt(ratio) + " < 3.5; ";
    }
    if (pass)
        detail = "omega(2)=0.5, [2,3] dev " + fmt(max_dev) + ", halving ratio " + fmt(ratio);
    report(2, "buchstab", pass, detail);
}

// ----------------------------------------------------------------
// 3. Warlimont desk-scale check
// ----------------------------------------------------------------
void criterion_3(const FactorTable& t) {
    auto tbl = build_buchstab(20.0, 1e-3);
    bool pass = true;
    std::string detail;
    double worst_ratio = 0, worst_rel = 0;
    for (uint64_t y : {10, 30, 50}) {
        for (uint64_t x : {10000, 100000, 1000000}) {
            double ratio = warlimont_error_ratio(x, y, tbl, t);
            worst_ratio = std::max(worst_ratio, ratio);
            if (ratio > 10.0) {
                pass = false;
                detail += "C0(" + std::to_string(x) + "," + std::to_string(y) + ")=" + fmt(ratio) + "; ";
            }
            double u = std::log(double(x)) / std::log(double(y));
            if (u >= 2.0) {
                double est = warlimont_estimate(x, y, tbl, t);
                double exact = double(phi_rough(x, y, t, 2));
                double rel = std::abs(est - exact) / exact;
                worst_rel = std::max(worst_rel, rel);
                if (rel > 0.25) {
                    pass = false;
                    detail += "rel(" + std::to_string(x) + "," + std::to_string(y) + ")=" + fmt(rel) + "; ";
                }
            }
        }
    }
    if (pass)
        detail = "max C0 " + fmt(worst_ratio) + ", max rel err " + fmt(worst_rel) + " on the grid";
    report(3, "warlimont", pass, detail);
}

// ----------------------------------------------------------------
// 4. Mertens product and log log deviations
// ----------------------------------------------------------------
void criterion_4(const FactorTable& t) {
    bool pass = true;
    std::string detail;
    double v = mertens_product(1000000, t);
    double ratio = v * std::log(1e6) / kExpMinusGamma;
    if (std::abs(ratio - 1.0) >= 0.05) {
        pass = false;
        detail += "mertens ratio " + fmt(ratio) + "; ";
    }
    for (uint64_t n : {1000, 10000, 100000, 1000000}) {
        double dev = loglog_deviation(n, t);
        if (dev < 0.2 || dev > 0.32) {
            pass = false;
            detail += "dev(" + std::to_string(n) + ")=" + fmt(dev) + "; ";
        }
    }
    if (pass) detail = "ratio-1 = " + fmt(ratio - 1.0) + ", deviations inside [0.2, 0.32]";
    report(4, "mertens", pass, detail);
}

// ----------------------------------------------------------------
// 5. Abel identity
// ----------------------------------------------------------------
void criterion_5(const FactorTable& t) {
    std::vector<std::pair<std::string, IntSet>> descs = {
        {"squarefree", IntSet::squarefree_over(PrimeSet::all_primes())},
        {"squares", IntSet::squarefree_part_avoids(PrimeSet::all_primes())},
        {"evenval(k=2)", IntSet::even_valuation_first_k(2)},
    };
    bool pass = true;
    std::string detail;
    double worst = 0;
    for (const auto& [name, d] : descs) {
        auto [direct, abel] = reciprocal_sum_abel(d, 100000, t);
        double gap = std::abs(direct - abel);
        worst = std::max(worst, gap);
        if (gap >= 1e-10) {
            pass = false;
            detail += name + " gap=" + fmt(gap) + "; ";
        }
    }
    if (pass) detail = "max |direct-abel| = " + fmt(worst) + " at N=1e5";
    report(5, "abel-identity", pass, detail);
}

// ----------------------------------------------------------------
// 6. divergence trend for lemma-q(all)
// ----------------------------------------------------------------
void criterion_6(const FactorTable& t) {
    std::vector<uint64_t> checkpoints;
    for (uint64_t x = 100; x <= 10000000; x *= 10) checkpoints.push_back(x);
    auto series = ratio_series(lemma_q_pair(PrimeSet::all_primes()), checkpoints, t, 2);
    bool pass = true;
    std::string detail;
    for (size_t i = 0; i + 1 < series.points.size(); ++i) {
        if (!(series.points[i].r1 < series.points[i + 1].r1)) {
            pass = false;
            detail += "r1 not increasing at x=" + std::to_string(series.points[i + 1].x) + "; ";
        }
    }
    for (const auto& pt : series.points) {
        if (pt.x < 10000) continue;
        double v = pt.r1 / std::sqrt(double(pt.x));
        if (v < 0.55 || v > 0.70) {
            pass = false;
            detail += "r1/sqrt(x)=" + fmt(v) + " at x=" + std::to_string(pt.x) + "; ";
        }
    }
    if (pass)
        detail = "r1 strictly increasing over 1e2..1e7, r1/sqrt(x) in [0.55, 0.70] from 1e4";
    report(6, "divergence-trend", pass, detail);
}

// ----------------------------------------------------------------
// 7. finite-B shadow: density bracket and the two log functionals
// ----------------------------------------------------------------
void criterion_7(const FactorTable& t) {
    bool pass = true;
    std::string detail;
    const double x = 1e6;
    double prev_loglog = 0;
    for (uint32_t k = 1; k <= 8; ++k) {
        auto pair = vegeseset_pair(k);
        uint64_t a_count = count(pair.a_desc, 1000000, t, 2);
        double density = double(a_count) / x;
        double lower = vegeseset_lower_bound(pair.b_desc, t); // prod (1 - 1/p_i)
        double upper = kPiSquaredOver6 * lower + 10.0 / std::sqrt(x);
        if (density < lower || density > upper) {
            pass = false;
            detail += "k=" + std::to_string(k) + " A/x=" + fmt(density) + " outside [" +
                      fmt(lower) + "," + fmt(upper) + "]; ";
        }
        double log_b = double(k) * std::log(2.0); // |B| = 2^k
        double v_log = density * log_b;
        if (v_log < 0.2) {
            pass = false;
            detail += "k=" + std::to_string(k) + " A log|B|/x=" + fmt(v_log) + " < 0.2; ";
        }
        double v_loglog = density * std::log(log_b);
        if (k > 1 && !(v_loglog < prev_loglog)) {
            pass = false;
            detail += "A loglog|B|/x not decreasing at k=" + std::to_string(k) + " (" +
                      fmt(prev_loglog) + " -> " + fmt(v_loglog) + "); ";
        }
        prev_loglog = v_loglog;
    }
    if (pass) detail = "brackets and log functionals hold for k = 1..8";
    report(7, "finite-b-shadow", pass, detail);
}

// ----------------------------------------------------------------
// 8. thinned R-set shadow
// ----------------------------------------------------------------
void criterion_8(const FactorTable& t) {
    bool pass = true;
    std::string detail;
    auto f = TargetFunction::x_over_logx_loglogx();
    auto res = limsupfxyes_build(f, 0.25, 16, 1000000, t);
    auto res2 = limsupfxyes_build(f, 0.25, 16, 1000000, t);
    if (res.r != res2.r || res.n0 != res2.n0) {
        pass = false;
        detail += "rebuild differs; ";
    }
    if (!res.n0) {
        pass = false;
        detail += "N0 undetermined up to X; ";
    } else {
        auto q = res.q();
        auto rows = akfx_check(q, f, 0.25, 1000000, 8, t);
        for (const auto& row : rows) {
            if (!row.pass) {
                pass = false;
                detail += "A_" + std::to_string(row.k) + "(x)=" + std::to_string(row.count) +
                          " > bound " + fmt(row.bound) + "; ";
            }
        }
        auto b_desc = IntSet::squarefree_part_avoids(q);
        auto series = counting_series(b_desc, {1000, 10000, 100000, 1000000}, t, 2);
        auto trend = little_o_trend(series);
        if (!trend.strictly_decreasing) {
            pass = false;
            detail += "B(x)/x not strictly decreasing (";
            for (double r : trend.ratios) detail += fmt(r) + " ";
            detail += "); ";
        }
    }
    if (pass)
        detail = "R deterministic (|R|=" + std::to_string(res.r.size()) + "), N0=" +
                 std::to_string(*res.n0) + " certified to 1e6, A_k bounds hold, B(x)/x falls";
    report(8, "thinned-rset-shadow", pass, detail);
}

// ----------------------------------------------------------------
// 9. interval schedule shadow
// ----------------------------------------------------------------
void criterion_9(const FactorTable& t) {
    auto sched = liminffx_schedule(TargetFunction::identity(), 2, 1000000, t);
    bool pass = sched.entries.size() == 2;
    std::string detail;
    if (pass) {
        const auto& e1 = sched.entries[0];
        const auto& e2 = sched.entries[1];
        if (!(e1.certified && e1.m == 2 && e1.n == 29)) {
            pass = false;
            detail += "entry 1 = (" + std::to_string(e1.m) + "," + std::to_string(e1.n) + ") certified=" +
                      (e1.certified ? "yes" : "no") + "; ";
        }
        if (!(!e2.certified && e2.binding_constraint == "M2 > 6469693230")) {
            pass = false;
            detail += "entry 2 constraint '" + e2.binding_constraint + "'; ";
        }
    } else {
        detail = "expected 2 entries";
    }
    if (pass) detail = "(M1,N1)=(2,29) certified; entry 2 blocked by 'M2 > 6469693230'";
    report(9, "interval-schedule", pass, detail);
}

// ----------------------------------------------------------------
// 10. CLI determinism across thread counts
// ----------------------------------------------------------------
void criterion_10(const std::string& cli) {
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::string a = "/tmp/mulcomp_acc_t1.csv", b = "/tmp/mulcomp_acc_t8.csv";
    std::string base = "\"" + cli + "\" series \"lemma-q(all)\" --geometric 100,10,5 "
                       "--capacity 1000000 ";
    int rc1 = std::system((base + "--threads 1 --out " + a).c_str());
    int rc2 = std::system((base + "--threads 8 --out " + b).c_str());
    std::string ca = slurp(a), cb = slurp(b);
    bool pass = rc1 == 0 && rc2 == 0 && !ca.empty() && ca == cb;
    std::string detail = pass ? std::to_string(ca.size()) + " bytes, byte-identical at --threads 1 and 8"
                              : "outputs differ or runs failed";
    std::remove(a.c_str());
    std::remove(b.c_str());
    report(10, "cli-determinism", pass, detail);
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-mulcomp-cli>\n");
        return 64;
    }
    std::string cli = argv[1];

    std::printf("building factor table (capacity 1e7)...\n");
    auto t = FactorTable::build(10000000, FactorTable::default_budget_bytes, 2);

    criterion_1(t);
    criterion_2();
    criterion_3(t);
    criterion_4(t);
    criterion_5(t);
    criterion_6(t);
    criterion_7(t);
    criterion_8(t);
    criterion_9(t);
    criterion_10(cli);

    std::printf("%d of 10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
