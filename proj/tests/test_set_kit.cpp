#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mulcomp/descriptor.hpp"
#include "mulcomp/set_kit.hpp"

using namespace mulcomp;

namespace {

const FactorTable& table_1e6() {
    static FactorTable t = FactorTable::build(1000000);
    return t;
}

// Squarefree test by trial division.
bool squarefree_oracle(uint64_t n) {
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % (d * d) == 0) return false;
    return true;
}

} // namespace

TEST_CASE("member: squarefree over Q") {
    const auto& t = table_1e6();
    auto all = IntSet::squarefree_over(PrimeSet::all_primes());
    CHECK(all.member(30, t));
    CHECK(!all.member(12, t));
    CHECK(all.member(1, t)); // empty product

    for (uint64_t n = 1; n <= 3000; ++n) CHECK(all.member(n, t) == squarefree_oracle(n));

    auto q14 = IntSet::squarefree_over(PrimeSet::residue(4, 1));
    CHECK(q14.member(5, t));
    CHECK(q14.member(65, t));  // 5 * 13
    CHECK(!q14.member(3, t));  // 3 = 3 mod 4
    CHECK(!q14.member(25, t)); // not squarefree
}

TEST_CASE("member: squarefree part avoids Q") {
    const auto& t = table_1e6();
    auto sq = IntSet::squarefree_part_avoids(PrimeSet::all_primes());
    CHECK(sq.member(49, t));  // squarefree part 1
    CHECK(!sq.member(18, t)); // squarefree part 2
    CHECK(sq.member(1, t));
    // degenerates to the perfect squares
    for (uint64_t n = 1; n <= 2000; ++n) {
        uint64_t r = uint64_t(std::llround(std::sqrt(double(n))));
        CHECK(sq.member(n, t) == (r * r == n));
    }
}

TEST_CASE("member: even valuation at first k") {
    const auto& t = table_1e6();
    auto d2 = IntSet::even_valuation_first_k(2);
    CHECK(d2.member(36, t));  // v2=2, v3=2
    CHECK(!d2.member(12, t)); // v3=1
    auto d1 = IntSet::even_valuation_first_k(1);
    uint64_t members[] = {1, 3, 4, 5, 7, 9, 11, 12};
    size_t idx = 0;
    for (uint64_t n = 1; n <= 12; ++n) {
        bool expect = idx < 8 && members[idx] == n;
        if (expect) ++idx;
        CHECK(d1.member(n, t) == expect);
    }
}

TEST_CASE("count matches brute force") {
    const auto& t = table_1e6();
    CHECK(count(IntSet::squarefree_over(PrimeSet::all_primes()), 100, t) == 61);
    CHECK(count(IntSet::squarefree_part_avoids(PrimeSet::all_primes()), 100, t) == 10);
    CHECK(count(IntSet::even_valuation_first_k(1), 12, t) == 8);
    CHECK(count(IntSet::all(), 345, t) == 345);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        uint64_t x = rng() % 100000 + 1;
        CHECK(count(IntSet::squarefree_over(PrimeSet::all_primes()), x, t) <= x);
        CHECK(count(IntSet::all(), x, t) == x);
    }
}

TEST_CASE("counting_series single pass equals count at checkpoints") {
    const auto& t = table_1e6();
    auto sq = IntSet::squarefree_over(PrimeSet::all_primes());
    auto series = counting_series(sq, {10, 100}, t);
    CHECK(series.counts == std::vector<uint64_t>{7, 61});

    auto all = counting_series(IntSet::all(), {10, 100}, t);
    CHECK(all.counts == std::vector<uint64_t>{10, 100});

    auto squares = counting_series(IntSet::squarefree_part_avoids(PrimeSet::all_primes()),
                                   {10, 100, 10000}, t);
    CHECK(squares.counts == std::vector<uint64_t>{3, 10, 100});

    CHECK_THROWS_AS(counting_series(sq, {100, 10}, t), std::invalid_argument);
    CHECK_THROWS_AS(counting_series(sq, {10, 10}, t), std::invalid_argument);

    // counts nondecreasing and bounded by the checkpoints
    auto evens = counting_series(IntSet::even_valuation_first_k(2),
                                 {7, 50, 333, 4096, 99999}, t);
    for (size_t i = 0; i < evens.counts.size(); ++i) {
        CHECK(evens.counts[i] <= evens.checkpoints[i]);
        if (i) CHECK(evens.counts[i] >= evens.counts[i - 1]);
    }
}

TEST_CASE("membership bitmap is thread-count independent") {
    const auto& t = table_1e6();
    auto d = IntSet::squarefree_over(PrimeSet::residue(4, 1));
    auto bm1 = membership_bitmap(d, 500000, t, 1);
    auto bm4 = membership_bitmap(d, 500000, t, 4);
    CHECK(bm1 == bm4);
}

TEST_CASE("reciprocal_sum_abel") {
    const auto& t = table_1e6();
    auto sq = IntSet::squarefree_over(PrimeSet::all_primes());
    auto [direct, abel] = reciprocal_sum_abel(sq, 10, t);
    // members up to 10: 1,2,3,5,6,7,10
    double hand = 1.0 + 1.0 / 2 + 1.0 / 3 + 1.0 / 5 + 1.0 / 6 + 1.0 / 7 + 1.0 / 10;
    CHECK(direct == doctest::Approx(hand).epsilon(1e-14));
    CHECK(hand == doctest::Approx(2.442857).epsilon(1e-6));
    CHECK(std::abs(direct - abel) < 1e-10);

    auto one = reciprocal_sum_abel(IntSet::explicit_list({1}), 5, t);
    CHECK(one.direct == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(one.abel == doctest::Approx(1.0).epsilon(1e-15));

    auto squares =
        reciprocal_sum_abel(IntSet::squarefree_part_avoids(PrimeSet::all_primes()), 100, t);
    double sum_sq = 0;
    for (int l = 1; l <= 10; ++l) sum_sq += 1.0 / double(l * l);
    CHECK(squares.direct == doctest::Approx(sum_sq).epsilon(1e-14));
    CHECK(sum_sq == doctest::Approx(1.549768).epsilon(1e-6));
}

TEST_CASE("abel identity holds to 1e-10 at N=1e5") {
    const auto& t = table_1e6();
    std::vector<IntSet> descs = {
        IntSet::squarefree_over(PrimeSet::all_primes()),
        IntSet::squarefree_part_avoids(PrimeSet::all_primes()),
        IntSet::even_valuation_first_k(2),
        IntSet::squarefree_over(PrimeSet::residue(4, 1)),
        IntSet::squarefree_over(PrimeSet::intervals({{2, 29}})),
    };
    for (const auto& d : descs) {
        auto [direct, abel] = reciprocal_sum_abel(d, 100000, t);
        CHECK(std::abs(direct - abel) < 1e-10);
    }
}

TEST_CASE("lemma decomposition totality over assorted prime sets") {
    const auto& t = table_1e6();
    std::vector<PrimeSet> qs = {
        PrimeSet::all_primes(),
        PrimeSet::residue(4, 1),
        PrimeSet::residue(4, 3),
        PrimeSet::intervals({{2, 29}, {100, 500}}),
        PrimeSet::explicit_list({2, 7, 11}),
        PrimeSet::explicit_list({}),
    };
    for (const auto& q : qs) {
        auto a_desc = IntSet::squarefree_over(q);
        auto b_desc = IntSet::squarefree_part_avoids(q);
        size_t bad = 0;
        for (uint64_t n = 1; n <= 20000; ++n) {
            // odd-valuation split
            uint64_t a = 1, m = n;
            while (m > 1) {
                uint64_t p = t.spf(m);
                uint32_t e = 0;
                while (m % p == 0) {
                    m /= p;
                    ++e;
                }
                if ((e & 1u) && q.contains(p, t)) a *= p;
            }
            uint64_t b = n / a;
            if (!(a * b == n && a_desc.member(a, t) && b_desc.member(b, t))) ++bad;
        }
        CHECK(bad == 0);
    }
}

TEST_CASE("monotonicity in Q") {
    const auto& t = table_1e6();
    auto small_q = PrimeSet::intervals({{2, 29}});
    auto big_q = PrimeSet::intervals({{2, 101}});
    auto a_small = IntSet::squarefree_over(small_q);
    auto a_big = IntSet::squarefree_over(big_q);
    auto b_small = IntSet::squarefree_part_avoids(small_q);
    auto b_big = IntSet::squarefree_part_avoids(big_q);
    for (uint64_t n = 1; n <= 10000; ++n) {
        if (a_small.member(n, t)) CHECK(a_big.member(n, t));
        if (b_big.member(n, t)) CHECK(b_small.member(n, t));
    }
}

TEST_CASE("even valuation density approaches prod p/(p+1)") {
    const auto& t = table_1e6();
    for (uint32_t k : {1u, 2u, 3u}) {
        double expect = 1.0;
        for (uint64_t p : first_k_primes(k)) expect *= double(p) / double(p + 1);
        double got = double(count(IntSet::even_valuation_first_k(k), 1000000, t)) / 1e6;
        CHECK(std::abs(got / expect - 1.0) < 0.01);
    }
}

TEST_CASE("squarefree-over-first-k enumeration") {
    auto d = IntSet::squarefree_over_first_k(3);
    CHECK(d.finite_size() == uint64_t(8));
    auto members = d.enumerate_finite(30);
    CHECK(members == std::vector<uint64_t>{1, 2, 3, 5, 6, 10, 15, 30});
    CHECK(d.enumerate_finite(10) == std::vector<uint64_t>{1, 2, 3, 5, 6, 10});
    const auto& t = table_1e6();
    for (uint64_t n = 1; n <= 30; ++n) {
        bool in_list = std::find(members.begin(), members.end(), n) != members.end();
        CHECK(d.member(n, t) == in_list);
    }
}

TEST_CASE("thinned prime set selects every n0-th member") {
    const auto& t = table_1e6();
    auto thin = PrimeSet::thinned(PrimeSet::all_primes(), 3);
    // primes 2 3 5 7 11 13 17 19 23 ... -> every 3rd: 5, 13, 23, ...
    CHECK(thin.contains(5, t));
    CHECK(thin.contains(13, t));
    CHECK(thin.contains(23, t));
    CHECK(!thin.contains(2, t));
    CHECK(!thin.contains(3, t));
    CHECK(!thin.contains(7, t));
    CHECK(thin.list_up_to(23, t) == std::vector<uint64_t>{5, 13, 23});
}

TEST_CASE("prime set reciprocal sum below") {
    const auto& t = table_1e6();
    auto all = PrimeSet::all_primes();
    // strictly below 8: 1/2+1/3+1/5+1/7
    CHECK(all.reciprocal_sum_below(8, t) ==
          doctest::Approx(0.5 + 1.0 / 3 + 0.2 + 1.0 / 7).epsilon(1e-14));
    // below 7: excludes 7
    CHECK(all.reciprocal_sum_below(7, t) == doctest::Approx(0.5 + 1.0 / 3 + 0.2).epsilon(1e-14));
    CHECK(all.reciprocal_sum_below(2, t) == 0.0);
}

TEST_CASE("descriptor round trip") {
    std::vector<IntSet> descs = {
        IntSet::all(),
        IntSet::explicit_list({1, 4, 9}),
        IntSet::squarefree_over(PrimeSet::all_primes()),
        IntSet::squarefree_over(PrimeSet::intervals({{2, 29}})),
        IntSet::squarefree_over(PrimeSet::intervals({{2, 29}, {50, 100}})),
        IntSet::squarefree_part_avoids(PrimeSet::residue(4, 1)),
        IntSet::even_valuation_first_k(2),
        IntSet::squarefree_over_first_k(3),
        IntSet::squarefree_over(PrimeSet::explicit_list({2, 7, 11})),
        IntSet::squarefree_part_avoids(
            PrimeSet::thinned(PrimeSet::explicit_list({3, 5, 7, 11}), 2)),
    };
    for (const auto& d : descs) {
        std::string text = print_int_set(d);
        CAPTURE(text);
        CHECK(parse_int_set(text) == d);
    }
    CHECK(print_int_set(descs[3]) == "sf-over-q(intervals:(2,29])");
    CHECK(print_int_set(descs[6]) == "evenval(k=2)");
    CHECK(print_int_set(descs[7]) == "sf-first-k(k=3)");
}

TEST_CASE("descriptor parse errors carry positions") {
    CHECK_THROWS_AS(parse_int_set("sf-over-q(intervals:(2,29)"), ParseError);
    CHECK_THROWS_AS(parse_int_set("evenval(k=)"), ParseError);
    CHECK_THROWS_AS(parse_int_set("nonsense"), ParseError);
    CHECK_THROWS_AS(parse_int_set("evenval(k=2) trailing"), ParseError);
    try {
        parse_int_set("evenval(k=x)");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.position() == 10);
    }
}

TEST_CASE("descriptor parse accepts whitespace") {
    CHECK(parse_int_set("sf-over-q( residue:1 mod 4 )") ==
          IntSet::squarefree_over(PrimeSet::residue(4, 1)));
    CHECK(parse_int_set(" evenval( k=2 ) ") == IntSet::even_valuation_first_k(2));
}
