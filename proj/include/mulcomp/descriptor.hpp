// descriptor.hpp
// Single-line textual forms for prime sets, integer sets and construction
// recipes, e.g.
//   sf-over-q(intervals:(2,29])     evenval(k=2)      sf-first-k(k=3)
//   lemma-q(residue:1 mod 4)        vegeseset(k=3)
//   rset(f=x/logx-loglogx,c1=0.25,xmin=16,X=1000000)
//   explicit(A=1;B=1)
// print and parse are exact inverses on canonical forms.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "mulcomp/constructions.hpp"
#include "mulcomp/set_kit.hpp"

namespace mulcomp {

class ParseError : public std::runtime_error {
public:
    ParseError(size_t pos, const std::string& what)
        : std::runtime_error("at position " + std::to_string(pos) + ": " + what), pos_(pos) {}
    size_t position() const { return pos_; }

private:
    size_t pos_;
};

std::string print_prime_set(const PrimeSet& q);
std::string print_int_set(const IntSet& d);

PrimeSet parse_prime_set(const std::string& text);
IntSet parse_int_set(const std::string& text);

// -------------------------------------------------------------------
// Construction recipes (what the CLI accepts).
// -------------------------------------------------------------------
struct Recipe {
    enum class Kind { LemmaQ, Vegeseset, RSet, Schedule, ExplicitPair };
    Kind kind = Kind::LemmaQ;

    PrimeSet q;        // LemmaQ
    uint32_t k = 0;    // Vegeseset / Schedule (k_max)
    TargetFunction f;  // RSet / Schedule
    double c1 = 0;     // RSet
    uint64_t x_min = 0; // RSet
    uint64_t x_cap = 0; // RSet: X, the prime scan bound; Schedule: cap
    std::vector<uint64_t> a_members, b_members; // ExplicitPair
};

Recipe parse_recipe(const std::string& text);
std::string print_recipe(const Recipe& r);

// Everything a realized recipe carries: the pair itself plus the
// construction record behind it (R size and N0 status for rset recipes,
// the entry list for liminffx schedules).
struct BuiltPair {
    ComplementPair pair;
    std::optional<RSetResult> rset;
    std::optional<IntervalSchedule> schedule;
};

// Instantiate the recipe. RSet recipes run limsupfxyes_build and wrap the
// resulting thinned Q in the lemma pair (an undetermined N0 is an error);
// Schedule recipes wrap the certified interval prefix the same way.
BuiltPair build_pair(const Recipe& recipe, const FactorTable& t);

std::string describe_rule(const ComplementPair& pair);

} // namespace mulcomp
