// mulcomp: build multiplicative-complement constructions, verify the
// covering property n = a*b exhaustively, and emit counting/ratio series
// and analytic tables as CSV.
//
// Exit codes: 0 success, 1 counterexample found, 2 usage error,
// 3 resource limit.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mulcomp/analytic.hpp"
#include "mulcomp/arith_core.hpp"
#include "mulcomp/constructions.hpp"
#include "mulcomp/descriptor.hpp"
#include "mulcomp/metrics.hpp"
#include "mulcomp/set_kit.hpp"

using namespace mulcomp;

namespace {

constexpr uint64_t kDefaultCapacity = 1000000;

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// key = value lines, # comments. Recognized keys: capacity, threads, method.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](const std::string& s) {
            size_t b = s.find_first_not_of(" \t\r");
            size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string t = trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
        if (key != "capacity" && key != "threads" && key != "method")
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        kv[key] = value;
    }
    return kv;
}

struct CommonOpts {
    uint64_t capacity = 0; // 0 = unset
    unsigned threads = 0;  // 0 = unset
    std::string method;
    std::string out;
    std::string config;

    uint64_t resolve_capacity(const std::map<std::string, std::string>& cfg) const {
        if (capacity) return capacity;
        auto it = cfg.find("capacity");
        if (it != cfg.end()) return std::stoull(it->second);
        if (const char* env = std::getenv("MULCOMP_CAPACITY")) return std::stoull(env);
        return kDefaultCapacity;
    }
    unsigned resolve_threads(const std::map<std::string, std::string>& cfg) const {
        if (threads) return threads;
        auto it = cfg.find("threads");
        if (it != cfg.end()) return unsigned(std::stoul(it->second));
        return 1;
    }
    std::string resolve_method(const std::map<std::string, std::string>& cfg,
                               const std::string& fallback) const {
        if (!method.empty()) return method;
        auto it = cfg.find("method");
        if (it != cfg.end()) return it->second;
        return fallback;
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--capacity", opts.capacity, "factor table capacity");
    cmd->add_option("--threads", opts.threads, "worker threads");
    cmd->add_option("--out", opts.out, "write CSV here instead of stdout");
    cmd->add_option("--config", opts.config, "key = value defaults file");
}

// Sink that owns an optional file; CSV goes here, summaries to stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::invalid_argument("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::vector<uint64_t> parse_checkpoint_list(const std::string& text) {
    std::vector<uint64_t> xs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::invalid_argument("checkpoints: empty entry");
        xs.push_back(std::stoull(item));
    }
    if (xs.empty()) throw std::invalid_argument("checkpoints: none given");
    return xs;
}

std::vector<uint64_t> expand_geometric(const std::string& text) {
    auto parts = parse_checkpoint_list(text);
    if (parts.size() != 3) throw std::invalid_argument("geometric: need start,factor,count");
    uint64_t start = parts[0], factor = parts[1], count = parts[2];
    if (start < 1 || factor < 2 || count < 1)
        throw std::invalid_argument("geometric: need start >= 1, factor >= 2, count >= 1");
    std::vector<uint64_t> xs;
    uint64_t x = start;
    for (uint64_t i = 0; i < count; ++i) {
        xs.push_back(x);
        if (i + 1 < count) {
            if (x > UINT64_MAX / factor) throw std::invalid_argument("geometric: overflow");
            x *= factor;
        }
    }
    return xs;
}

// ---------------------------------------------------------------
// construct
// ---------------------------------------------------------------
int cmd_construct(const std::string& recipe_text, const CommonOpts& opts) {
    auto cfg = opts.config.empty() ? std::map<std::string, std::string>{}
                                   : read_config(opts.config);
    uint64_t capacity = opts.resolve_capacity(cfg);

    Recipe recipe = parse_recipe(recipe_text);
    if (recipe.kind == Recipe::Kind::RSet && recipe.x_cap > capacity) {
        std::cerr << "construct: rset X=" << recipe.x_cap << " exceeds capacity " << capacity
                  << "\n";
        return 2;
    }

    Output out(opts.out);
    std::ostream& os = out.stream();
    os << "recipe=" << print_recipe(recipe) << "\n";
    os << "capacity=" << capacity << "\n";

    if (recipe.kind == Recipe::Kind::RSet) {
        auto table = FactorTable::build(capacity, FactorTable::default_budget_bytes,
                                        opts.resolve_threads(cfg));
        RSetResult rset = limsupfxyes_build(recipe.f, recipe.c1, recipe.x_min, recipe.x_cap, table);
        os << "R_size=" << rset.r.size() << "\n";
        if (rset.n0) {
            os << "N0=" << *rset.n0 << "\n";
            os << "N0_certified_up_to=" << rset.x_max << "\n";
            uint64_t q_size = (rset.r.size()) / *rset.n0;
            os << "Q_size=" << q_size << "\n";
            os << "A=sf-over-q(thin(rset.R,n0=" << *rset.n0 << "))\n";
            os << "B=sfpart-avoids(thin(rset.R,n0=" << *rset.n0 << "))\n";
            os << "decompose=odd-valuation-split(thin(rset.R,n0=" << *rset.n0 << "))\n";
        } else {
            os << "N0=undetermined (no stride up to " << rset.n0_search_limit
               << " satisfies the window bound up to X)\n";
        }
        return 0;
    }

    if (recipe.kind == Recipe::Kind::Schedule) {
        auto table = FactorTable::build(capacity, FactorTable::default_budget_bytes,
                                        opts.resolve_threads(cfg));
        auto sched = liminffx_schedule(recipe.f, recipe.k, std::min(recipe.x_cap, capacity), table);
        for (const auto& e : sched.entries) {
            os << "entry" << e.k << "=";
            if (e.certified)
                os << "(M=" << e.m << ",N=" << e.n << ") certified sum=" << fmt_real(e.reciprocal_sum)
                   << " A(M)/f(M)=" << fmt_real(e.a_ratio) << " bound=" << fmt_real(e.ratio_bound);
            else
                os << "uncertified: " << e.binding_constraint;
            os << "\n";
        }
        auto q = sched.certified_q();
        os << "A=" << print_int_set(IntSet::squarefree_over(q)) << "\n";
        os << "B=" << print_int_set(IntSet::squarefree_part_avoids(q)) << "\n";
        os << "decompose=odd-valuation-split(" << print_prime_set(q) << ")\n";
        return 0;
    }

    // The other recipes need no table to describe.
    BuiltPair built;
    switch (recipe.kind) {
        case Recipe::Kind::LemmaQ:
            built.pair = lemma_q_pair(recipe.q);
            break;
        case Recipe::Kind::Vegeseset:
            built.pair = vegeseset_pair(recipe.k);
            break;
        case Recipe::Kind::ExplicitPair:
            built.pair.a_desc = IntSet::explicit_list(recipe.a_members);
            built.pair.b_desc = IntSet::explicit_list(recipe.b_members);
            break;
        default:
            break;
    }
    os << "A=" << print_int_set(built.pair.a_desc) << "\n";
    os << "B=" << print_int_set(built.pair.b_desc) << "\n";
    if (auto size = built.pair.b_desc.finite_size()) os << "|B|=" << *size << "\n";
    os << "decompose=" << describe_rule(built.pair) << "\n";
    return 0;
}

// ---------------------------------------------------------------
// verify
// ---------------------------------------------------------------
int cmd_verify(const std::string& recipe_text, uint64_t x, const CommonOpts& opts) {
    auto cfg = opts.config.empty() ? std::map<std::string, std::string>{}
                                   : read_config(opts.config);
    uint64_t capacity = opts.resolve_capacity(cfg);
    unsigned threads = opts.resolve_threads(cfg);

    if (x < 1) {
        std::cerr << "verify: --x must be positive\n";
        return 2;
    }
    if (x > capacity) {
        std::cerr << "verify: --x " << x << " exceeds capacity " << capacity << "\n";
        return 2;
    }
    Recipe recipe = parse_recipe(recipe_text);
    if (recipe.kind == Recipe::Kind::RSet && recipe.x_cap > capacity) {
        std::cerr << "verify: rset X exceeds capacity\n";
        return 2;
    }

    auto table = FactorTable::build(capacity, FactorTable::default_budget_bytes, threads);
    BuiltPair built = build_pair(recipe, table);

    std::string method_name =
        opts.resolve_method(cfg, built.pair.has_witness() ? "both" : "scan");
    VerifyMethod method;
    if (method_name == "witness")
        method = VerifyMethod::Witness;
    else if (method_name == "scan")
        method = VerifyMethod::DivisorScan;
    else if (method_name == "both")
        method = VerifyMethod::Both;
    else {
        std::cerr << "verify: unknown method '" << method_name << "'\n";
        return 2;
    }

    VerificationReport report = verify_mc2(built.pair, x, method, table, threads);

    Output out(opts.out);
    std::ostream& os = out.stream();
    os << "n,status,a,b\n";
    for (uint64_t n : report.missing) os << n << ",missing,,\n";
    for (const auto& wf : report.witness_failures)
        os << wf.n << ",witness," << wf.a << "," << wf.b << "\n";

    std::cout << "verified_up_to=" << x << " method=" << method_name
              << " missing=" << report.missing.size()
              << " witness_failures=" << report.witness_failures.size();
    if (report.methods_agree) std::cout << " methods_agree=" << (*report.methods_agree ? "yes" : "no");
    std::cout << " result=" << (report.verified() ? "PASS" : "FAIL");
    if (!report.missing.empty())
        std::cout << " first_counterexample=" << report.missing.front();
    else if (!report.witness_failures.empty())
        std::cout << " first_counterexample=" << report.witness_failures.front().n;
    std::cout << "\n";
    return report.verified() ? 0 : 1;
}

// ---------------------------------------------------------------
// series
// ---------------------------------------------------------------
int cmd_series(const std::string& recipe_text, const std::string& checkpoints_text,
               const std::string& geometric_text, const CommonOpts& opts) {
    auto cfg = opts.config.empty() ? std::map<std::string, std::string>{}
                                   : read_config(opts.config);
    uint64_t capacity = opts.resolve_capacity(cfg);
    unsigned threads = opts.resolve_threads(cfg);

    if (checkpoints_text.empty() == geometric_text.empty()) {
        std::cerr << "series: give exactly one of --checkpoints or --geometric\n";
        return 2;
    }
    std::vector<uint64_t> checkpoints = checkpoints_text.empty()
                                            ? expand_geometric(geometric_text)
                                            : parse_checkpoint_list(checkpoints_text);
    if (checkpoints.back() > capacity) {
        std::cerr << "series: checkpoint " << checkpoints.back() << " exceeds capacity "
                  << capacity << "\n";
        return 2;
    }

    // A pair recipe gives the ratio series; a plain set descriptor gives
    // its counting series.
    std::optional<Recipe> recipe;
    std::optional<IntSet> set_desc;
    try {
        recipe = parse_recipe(recipe_text);
    } catch (const ParseError&) {
        set_desc = parse_int_set(recipe_text);
    }

    auto table = FactorTable::build(capacity, FactorTable::default_budget_bytes, threads);
    Output out(opts.out);
    std::ostream& os = out.stream();

    if (recipe) {
        if (recipe->kind == Recipe::Kind::RSet && recipe->x_cap > capacity) {
            std::cerr << "series: rset X exceeds capacity\n";
            return 2;
        }
        BuiltPair built = build_pair(*recipe, table);
        RatioSeries series = ratio_series(built.pair, checkpoints, table, threads);
        os << "x,A,B,r1,r2,r3,r4\n";
        for (const auto& pt : series.points) {
            os << pt.x << "," << pt.a_count << "," << pt.b_count << "," << fmt_real(pt.r1) << ",";
            if (pt.r2) os << fmt_real(*pt.r2);
            os << ",";
            if (pt.r3) os << fmt_real(*pt.r3);
            os << "," << fmt_real(pt.r4) << "\n";
        }
    } else {
        CountingSeries series = counting_series(*set_desc, checkpoints, table, threads);
        os << "x,count\n";
        for (size_t i = 0; i < series.checkpoints.size(); ++i)
            os << series.checkpoints[i] << "," << series.counts[i] << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------
// buchstab / phi
// ---------------------------------------------------------------
int cmd_buchstab(double u_max, double h, const CommonOpts& opts) {
    if (!(h > 0) || u_max < 2) {
        std::cerr << "buchstab: need --umax >= 2 and --h > 0\n";
        return 2;
    }
    // Fine internal grid; the requested step only controls the sampling.
    double h_build = h <= 0.01 ? h : 1e-3;
    double ratio = u_max / h_build;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
        std::cerr << "buchstab: umax/h must be an integer\n";
        return 2;
    }
    BuchstabTable tbl = build_buchstab(u_max, h_build);

    Output out(opts.out);
    std::ostream& os = out.stream();
    os << "u,omega\n";
    for (uint64_t i = 0;; ++i) {
        double u = 1.0 + double(i) * h;
        if (u > u_max + 1e-12) break;
        u = std::min(u, u_max);
        os << fmt_real(u) << "," << fmt_real(tbl.eval(u)) << "\n";
    }
    return 0;
}

int cmd_phi(uint64_t x, uint64_t y, const CommonOpts& opts) {
    auto cfg = opts.config.empty() ? std::map<std::string, std::string>{}
                                   : read_config(opts.config);
    uint64_t capacity = opts.resolve_capacity(cfg);
    unsigned threads = opts.resolve_threads(cfg);
    if (x < 1 || y < 2) {
        std::cerr << "phi: need --x >= 1 and --y >= 2\n";
        return 2;
    }
    if (x > capacity) {
        std::cerr << "phi: --x " << x << " exceeds capacity " << capacity << "\n";
        return 2;
    }
    auto table = FactorTable::build(capacity, FactorTable::default_budget_bytes, threads);
    uint64_t exact = phi_rough(x, y, table, threads);

    // The estimate needs u = log x / log y inside the table range.
    constexpr double kUMax = 20.0;
    double u = std::log(double(x)) / std::log(double(y));
    std::optional<double> estimate, ratio;
    if (u >= 1.0 && u <= kUMax) {
        BuchstabTable tbl = build_buchstab(kUMax, 1e-3);
        estimate = warlimont_estimate(x, y, tbl, table);
        ratio = warlimont_error_ratio(x, y, tbl, table);
    }

    Output out(opts.out);
    std::ostream& os = out.stream();
    os << "phi_exact,warlimont_estimate,error_ratio\n";
    os << exact << ",";
    if (estimate) os << fmt_real(*estimate);
    os << ",";
    if (ratio) os << fmt_real(*ratio);
    os << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiplicative complement constructions, verification and series"};
    app.set_help_flag("--help", "print help"); // --h is a real option below
    app.require_subcommand(1);

    std::string recipe_text, checkpoints_text, geometric_text;
    uint64_t x = 0, y = 0;
    double u_max = 20.0, h = 1e-3;
    CommonOpts opts;

    auto* construct = app.add_subcommand("construct", "describe a construction recipe");
    construct->set_help_flag("--help", "print help");
    construct->add_option("recipe", recipe_text, "construction recipe")->required();
    add_common(construct, opts);

    auto* verify = app.add_subcommand("verify", "exhaustively verify n = a*b up to X");
    verify->set_help_flag("--help", "print help");
    verify->add_option("recipe", recipe_text, "construction recipe")->required();
    verify->add_option("--x", x, "verification bound")->required();
    verify->add_option("--method", opts.method, "witness|scan|both");
    add_common(verify, opts);

    auto* series = app.add_subcommand("series", "counting/ratio series as CSV");
    series->set_help_flag("--help", "print help");
    series->add_option("recipe", recipe_text, "pair recipe or set descriptor")->required();
    series->add_option("--checkpoints", checkpoints_text, "comma-separated x values");
    series->add_option("--geometric", geometric_text, "start,factor,count");
    add_common(series, opts);

    auto* buchstab = app.add_subcommand("buchstab", "omega(u) grid as CSV");
    buchstab->set_help_flag("--help", "print help");
    buchstab->add_option("--umax", u_max, "grid end")->required();
    buchstab->add_option("--h", h, "output step")->required();
    add_common(buchstab, opts);

    auto* phi = app.add_subcommand("phi", "rough-number count and Warlimont estimate");
    phi->set_help_flag("--help", "print help");
    phi->add_option("--x", x, "count bound")->required();
    phi->add_option("--y", y, "roughness bound")->required();
    add_common(phi, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (construct->parsed()) return cmd_construct(recipe_text, opts);
        if (verify->parsed()) return cmd_verify(recipe_text, x, opts);
        if (series->parsed()) return cmd_series(recipe_text, checkpoints_text, geometric_text, opts);
        if (buchstab->parsed()) return cmd_buchstab(u_max, h, opts);
        if (phi->parsed()) return cmd_phi(x, y, opts);
    } catch (const ParseError& e) {
        std::cerr << "recipe parse error " << e.what() << "\n";
        return 2;
    } catch (const resource_limit_error& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::bad_alloc&) {
        std::cerr << "out of memory\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}
