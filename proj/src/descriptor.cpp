#include "mulcomp/descriptor.hpp"

#include <cctype>
#include <cstdio>

namespace mulcomp {

// -------------------------------------------------------------------
// Printing
// -------------------------------------------------------------------

namespace {

std::string join_u64(const std::vector<uint64_t>& xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(xs[i]);
    }
    return out;
}

} // namespace

std::string print_prime_set(const PrimeSet& q) {
    switch (q.kind()) {
        case PrimeSet::Kind::AllPrimes:
            return "all";
        case PrimeSet::Kind::Explicit:
            return "primes:" + join_u64(q.explicit_primes());
        case PrimeSet::Kind::Intervals: {
            std::string out = "intervals:";
            const auto& iv = q.interval_bounds();
            for (size_t i = 0; i < iv.size(); ++i) {
                if (i) out += ',';
                out += '(' + std::to_string(iv[i].first) + ',' + std::to_string(iv[i].second) + ']';
            }
            return out;
        }
        case PrimeSet::Kind::Residue:
            return "residue:" + std::to_string(q.rem()) + " mod " + std::to_string(q.modulus());
        case PrimeSet::Kind::Thinned:
            return "thin(" + print_prime_set(q.base()) + ",n0=" + std::to_string(q.n0()) + ")";
    }
    return "";
}

std::string print_int_set(const IntSet& d) {
    switch (d.kind()) {
        case IntSet::Kind::All:
            return "all";
        case IntSet::Kind::Explicit:
            return "explicit:" + join_u64(d.explicit_members());
        case IntSet::Kind::SquarefreeOverQ:
            return "sf-over-q(" + print_prime_set(d.q()) + ")";
        case IntSet::Kind::SquarefreePartAvoidsQ:
            return "sfpart-avoids(" + print_prime_set(d.q()) + ")";
        case IntSet::Kind::EvenValuationFirstK:
            return "evenval(k=" + std::to_string(d.k()) + ")";
        case IntSet::Kind::SquarefreeOverFirstK:
            return "sf-first-k(k=" + std::to_string(d.k()) + ")";
    }
    return "";
}

std::string print_recipe(const Recipe& r) {
    switch (r.kind) {
        case Recipe::Kind::LemmaQ:
            return "lemma-q(" + print_prime_set(r.q) + ")";
        case Recipe::Kind::Vegeseset:
            return "vegeseset(k=" + std::to_string(r.k) + ")";
        case Recipe::Kind::RSet: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.12g", r.c1);
            return "rset(f=" + r.f.name() + ",c1=" + buf + ",xmin=" + std::to_string(r.x_min) +
                   ",X=" + std::to_string(r.x_cap) + ")";
        }
        case Recipe::Kind::Schedule:
            return "liminffx(f=" + r.f.name() + ",kmax=" + std::to_string(r.k) +
                   ",cap=" + std::to_string(r.x_cap) + ")";
        case Recipe::Kind::ExplicitPair:
            return "explicit(A=" + join_u64(r.a_members) + ";B=" + join_u64(r.b_members) + ")";
    }
    return "";
}

// -------------------------------------------------------------------
// Parsing: a small cursor-based recursive descent. Spaces are allowed
// around tokens; "residue:R mod M" keeps its inner keyword.
// -------------------------------------------------------------------

namespace {

class Cursor {
public:
    explicit Cursor(const std::string& s) : s_(s) {}

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(uint8_t(s_[pos_]))) ++pos_;
    }
    bool done() {
        skip_ws();
        return pos_ >= s_.size();
    }
    size_t pos() const { return pos_; }

    bool try_literal(const std::string& lit) {
        skip_ws();
        if (s_.compare(pos_, lit.size(), lit) == 0) {
            pos_ += lit.size();
            return true;
        }
        return false;
    }
    void expect(const std::string& lit) {
        if (!try_literal(lit)) throw ParseError(pos_, "expected '" + lit + "'");
    }

    uint64_t number() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(uint8_t(s_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError(start, "expected a number");
        return std::stoull(s_.substr(start, pos_ - start));
    }

    double real() {
        skip_ws();
        try {
            size_t idx = 0;
            double v = std::stod(s_.substr(pos_), &idx);
            pos_ += idx;
            return v;
        } catch (const std::exception&) {
            throw ParseError(pos_, "expected a real number");
        }
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    void rewind(size_t p) { pos_ = p; }

private:
    const std::string& s_;
    size_t pos_ = 0;
};

std::vector<uint64_t> number_list(Cursor& c) {
    std::vector<uint64_t> xs;
    xs.push_back(c.number());
    for (;;) {
        size_t mark = c.pos();
        if (!c.try_literal(",")) break;
        if (!std::isdigit(uint8_t(c.peek()))) { // comma belongs to the caller
            c.rewind(mark);
            break;
        }
        xs.push_back(c.number());
    }
    return xs;
}

PrimeSet prime_set(Cursor& c) {
    if (c.try_literal("all")) return PrimeSet::all_primes();
    if (c.try_literal("primes:")) return PrimeSet::explicit_list(number_list(c));
    if (c.try_literal("explicit:")) return PrimeSet::explicit_list(number_list(c));
    if (c.try_literal("intervals:")) {
        std::vector<std::pair<uint64_t, uint64_t>> ivals;
        for (;;) {
            c.expect("(");
            uint64_t m = c.number();
            c.expect(",");
            uint64_t n = c.number();
            c.expect("]");
            ivals.emplace_back(m, n);
            size_t mark = c.pos();
            if (!c.try_literal(",")) break;
            if (c.peek() != '(') { // comma belongs to the caller
                c.rewind(mark);
                break;
            }
        }
        return PrimeSet::intervals(std::move(ivals));
    }
    if (c.try_literal("residue:")) {
        uint64_t r = c.number();
        c.expect("mod");
        uint64_t m = c.number();
        if (m < 1) throw ParseError(c.pos(), "modulus must be >= 1");
        return PrimeSet::residue(m, r);
    }
    if (c.try_literal("thin(")) {
        PrimeSet base = prime_set(c);
        c.expect(",");
        c.expect("n0=");
        uint64_t n0 = c.number();
        c.expect(")");
        return PrimeSet::thinned(std::move(base), n0);
    }
    throw ParseError(c.pos(), "expected a prime-set descriptor");
}

IntSet int_set(Cursor& c) {
    if (c.try_literal("sf-over-q(")) {
        PrimeSet q = prime_set(c);
        c.expect(")");
        return IntSet::squarefree_over(std::move(q));
    }
    if (c.try_literal("sfpart-avoids(")) {
        PrimeSet q = prime_set(c);
        c.expect(")");
        return IntSet::squarefree_part_avoids(std::move(q));
    }
    if (c.try_literal("evenval(")) {
        c.expect("k=");
        uint64_t k = c.number();
        c.expect(")");
        return IntSet::even_valuation_first_k(uint32_t(k));
    }
    if (c.try_literal("sf-first-k(")) {
        c.expect("k=");
        uint64_t k = c.number();
        c.expect(")");
        return IntSet::squarefree_over_first_k(uint32_t(k));
    }
    if (c.try_literal("explicit:")) return IntSet::explicit_list(number_list(c));
    if (c.try_literal("all")) return IntSet::all();
    throw ParseError(c.pos(), "expected an integer-set descriptor");
}

TargetFunction target_function(Cursor& c) {
    if (c.try_literal("x/logx-loglogx")) return TargetFunction::x_over_logx_loglogx();
    if (c.try_literal("x")) return TargetFunction::identity();
    if (std::isdigit(c.peek()) || c.peek() == '.') return TargetFunction::constant(c.real());
    throw ParseError(c.pos(), "expected a target function (x, x/logx-loglogx, or a constant)");
}

Recipe recipe(Cursor& c) {
    Recipe r;
    if (c.try_literal("lemma-q(")) {
        r.kind = Recipe::Kind::LemmaQ;
        // Accept the A-set spelling lemma-q(sf-over-q(Q)) as well.
        if (c.try_literal("sf-over-q(")) {
            r.q = prime_set(c);
            c.expect(")");
        } else {
            r.q = prime_set(c);
        }
        c.expect(")");
        return r;
    }
    if (c.try_literal("vegeseset(")) {
        r.kind = Recipe::Kind::Vegeseset;
        c.expect("k=");
        r.k = uint32_t(c.number());
        c.expect(")");
        return r;
    }
    if (c.try_literal("rset(")) {
        r.kind = Recipe::Kind::RSet;
        c.expect("f=");
        r.f = target_function(c);
        c.expect(",");
        c.expect("c1=");
        r.c1 = c.real();
        c.expect(",");
        c.expect("xmin=");
        r.x_min = c.number();
        c.expect(",");
        c.expect("X=");
        r.x_cap = c.number();
        c.expect(")");
        return r;
    }
    if (c.try_literal("liminffx(")) {
        r.kind = Recipe::Kind::Schedule;
        c.expect("f=");
        r.f = target_function(c);
        c.expect(",");
        c.expect("kmax=");
        r.k = uint32_t(c.number());
        c.expect(",");
        c.expect("cap=");
        r.x_cap = c.number();
        c.expect(")");
        return r;
    }
    if (c.try_literal("explicit(")) {
        r.kind = Recipe::Kind::ExplicitPair;
        c.expect("A=");
        r.a_members = number_list(c);
        c.expect(";");
        c.expect("B=");
        r.b_members = number_list(c);
        c.expect(")");
        return r;
    }
    throw ParseError(c.pos(), "expected a construction recipe");
}

} // namespace

PrimeSet parse_prime_set(const std::string& text) {
    Cursor c(text);
    PrimeSet q = prime_set(c);
    if (!c.done()) throw ParseError(c.pos(), "trailing characters");
    return q;
}

IntSet parse_int_set(const std::string& text) {
    Cursor c(text);
    IntSet d = int_set(c);
    if (!c.done()) throw ParseError(c.pos(), "trailing characters");
    return d;
}

Recipe parse_recipe(const std::string& text) {
    Cursor c(text);
    Recipe r = recipe(c);
    if (!c.done()) throw ParseError(c.pos(), "trailing characters");
    return r;
}

BuiltPair build_pair(const Recipe& recipe, const FactorTable& t) {
    BuiltPair built;
    switch (recipe.kind) {
        case Recipe::Kind::LemmaQ:
            built.pair = lemma_q_pair(recipe.q);
            return built;
        case Recipe::Kind::Vegeseset:
            built.pair = vegeseset_pair(recipe.k);
            return built;
        case Recipe::Kind::RSet: {
            built.rset = limsupfxyes_build(recipe.f, recipe.c1, recipe.x_min, recipe.x_cap, t);
            if (!built.rset->n0)
                throw std::runtime_error(
                    "rset: no thinning stride N0 certified up to X; cannot form Q");
            built.pair = lemma_q_pair(built.rset->q());
            return built;
        }
        case Recipe::Kind::Schedule: {
            built.schedule = liminffx_schedule(recipe.f, recipe.k, recipe.x_cap, t);
            built.pair = lemma_q_pair(built.schedule->certified_q());
            return built;
        }
        case Recipe::Kind::ExplicitPair:
            built.pair.a_desc = IntSet::explicit_list(recipe.a_members);
            built.pair.b_desc = IntSet::explicit_list(recipe.b_members);
            built.pair.rule = ComplementPair::Rule::None;
            return built;
    }
    throw std::logic_error("build_pair: unknown recipe kind");
}

std::string describe_rule(const ComplementPair& pair) {
    switch (pair.rule) {
        case ComplementPair::Rule::None:
            return "none";
        case ComplementPair::Rule::OddValuationSplit:
            return "odd-valuation-split(" + print_prime_set(pair.rule_q) + ")";
        case ComplementPair::Rule::SmallPrimeParitySplit:
            return "parity-split(k=" + std::to_string(pair.rule_k) + ")";
    }
    return "";
}

} // namespace mulcomp
