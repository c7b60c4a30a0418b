#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cftrans/intsets.hpp"

using namespace cftrans;
using namespace cftrans::intsets;

namespace {

// independent oracle: p prime and p = x^2 + y^2 + 1 with positive x, y
std::vector<u64> p1_brute_force(u64 n) {
    auto primes = simple_sieve(n);
    std::vector<u64> out;
    for (u64 p : primes) {
        bool hit = false;
        for (u64 x = 1; x * x + 1 < p && !hit; ++x) {
            u64 r = p - 1 - x * x;
            if (r < 1) break;
            u64 y = isqrt_u64(r);
            if (y >= 1 && y * y == r) hit = true;
        }
        if (hit) out.push_back(p);
    }
    return out;
}

void check_consistency(const IntegerSet& s, u64 n) {
    BigInt c = s.count(BigInt(n));
    if (c == 0) return;
    CHECK(s.nth(c) <= BigInt(n));
    auto cap = s.horizon();
    BigInt probe = BigInt(n) * 1000 + 100;
    if (cap && *cap < probe) probe = *cap;
    bool next_known = s.count(probe) > c;
    if (next_known) CHECK(s.nth(c + 1) > BigInt(n));
    // spot indices
    BigInt step = c / 7;
    if (step < 1) step = 1;
    for (BigInt i = 1; i <= c; i += step) {
        BigInt v = s.nth(i);
        CHECK(s.contains(v));
        CHECK(s.count(v) == i);
        CHECK(s.count(v - 1) == i - 1);
    }
}

}  // namespace

TEST_CASE("primes: small counts and elements") {
    auto s = build_set(SetSpec::primes_spec(), 1000);
    CHECK(s.count(BigInt(10)) == 4);
    std::vector<BigInt> got = s.elements(1, 10);
    std::vector<BigInt> want = {2, 3, 5, 7};
    CHECK(got == want);
    CHECK(s.count(BigInt(1000)) == 168);
}

TEST_CASE("p1 primes match the brute-force oracle") {
    auto oracle = p1_brute_force(60);
    std::vector<u64> expected = {3, 11, 19, 41, 53, 59};
    CHECK(oracle == expected);

    auto s = build_set(SetSpec::p1_primes_spec(), 60);
    std::vector<u64> got;
    s.for_each_u64(1, 60, [&](u64 v) { got.push_back(v); return true; });
    CHECK(got == oracle);

    // excluded by the positivity requirement
    CHECK_FALSE(s.contains(BigInt(2)));
    CHECK_FALSE(s.contains(BigInt(5)));
}

TEST_CASE("p1 primes equal the oracle on a long prefix") {
    const u64 n = 20000;
    auto oracle = p1_brute_force(n);
    auto s = build_set(SetSpec::p1_primes_spec(), n);
    std::vector<u64> got;
    s.for_each_u64(1, n, [&](u64 v) { got.push_back(v); return true; });
    CHECK(got == oracle);
}

TEST_CASE("Piatetski-Shapiro values are exact integer roots") {
    CHECK(ps_value(4, Rational(3, 2)) == 8);
    CHECK(ps_value(3, Rational(3, 2)) == 5);
    CHECK(ps_value(10, Rational(3, 2)) == 31);

    auto s = build_set(SetSpec::ps_spec(Rational(3, 2)));
    std::vector<BigInt> first;
    s.for_each(1, 31, [&](const BigInt& v) { first.push_back(v); return true; });
    std::vector<BigInt> want = {1, 2, 5, 8, 11, 14, 18, 22, 27, 31};
    CHECK(first == want);

    CHECK_THROWS_AS(build_set(SetSpec::ps_spec(Rational(1))), invalid_input);
    CHECK_THROWS_AS(ps_value(BigInt(0), Rational(3, 2)), invalid_input);
}

TEST_CASE("Piatetski-Shapiro strictly increasing over [1, 10^4]") {
    auto s = build_set(SetSpec::ps_spec(Rational(5, 4)));
    BigInt prev = 0;
    for (BigInt i = 1; i <= 10000; ++i) {
        BigInt v = s.nth(i);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("count/nth/contains consistency across kinds") {
    std::vector<IntegerSet> sets = {
        build_set(SetSpec::naturals_spec()),
        build_set(SetSpec::evens_spec()),
        build_set(SetSpec::residue_spec(7, 3)),
        build_set(SetSpec::squares_spec()),
        build_set(SetSpec::square_blocks_spec()),
        build_set(SetSpec::primes_spec(), 100000),
        build_set(SetSpec::ps_spec(Rational(3, 2))),
        build_set(SetSpec::complement_spec(SetSpec::evens_spec())),
        build_set(SetSpec::explicit_spec({BigInt(4), BigInt(9), BigInt(44), BigInt(100)})),
    };
    for (const auto& s : sets) {
        check_consistency(s, 5000);
        check_consistency(s, 99991);
    }
}

TEST_CASE("square blocks: closed-form count against direct enumeration") {
    auto s = build_set(SetSpec::square_blocks_spec());
    u64 direct = 0;
    for (u64 v = 1; v <= 5000; ++v) {
        u64 n = isqrt_u64(v);
        if (v <= n * n + isqrt_u64(n)) ++direct;
        if (v % 977 == 0 || v == 5000)
            CHECK(s.count(BigInt(v)) == BigInt(direct));
    }
}

TEST_CASE("p1 primes are contained in primes") {
    auto p1 = build_set(SetSpec::p1_primes_spec(), 50000);
    auto primes = build_set(SetSpec::primes_spec(), 50000);
    p1.for_each_u64(1, 50000, [&](u64 v) {
        REQUIRE(primes.contains(BigInt(v)));
        return true;
    });
}

TEST_CASE("complement partitions the naturals") {
    auto s = build_set(SetSpec::square_blocks_spec());
    auto c = build_set(SetSpec::complement_spec(SetSpec::square_blocks_spec()));
    for (u64 v = 1; v <= 2000; ++v) {
        bool in_s = s.contains(BigInt(v));
        bool in_c = c.contains(BigInt(v));
        REQUIRE(in_s != in_c);
    }
    CHECK(s.count(BigInt(2000)) + c.count(BigInt(2000)) == 2000);
}

TEST_CASE("residue filter intersects primes with a congruence class") {
    auto a = build_set(SetSpec::residue_filter_spec(SetSpec::primes_spec(), 4, 1), 1000);
    std::vector<BigInt> got = a.elements(1, 60);
    std::vector<BigInt> want = {5, 13, 17, 29, 37, 41, 53};
    CHECK(got == want);
}

TEST_CASE("file sets must be ascending") {
    SetSpec bad = SetSpec::explicit_spec({});
    bad.kind = Kind::file;
    bad.path = "/tmp/cftrans_bad_set.txt";
    {
        FILE* f = fopen(bad.path.c_str(), "w");
        fputs("5\n3\n", f);
        fclose(f);
    }
    CHECK_THROWS_AS(build_set(bad), invalid_input);
    {
        FILE* f = fopen(bad.path.c_str(), "w");
        fputs("3\n5\n11\n", f);
        fclose(f);
    }
    auto s = build_set(bad);
    CHECK(s.count(BigInt(11)) == 3);
}

TEST_CASE("windowed sieve matches the table") {
    auto s = build_set(SetSpec::primes_spec(), 100000);
    auto win = sieve_window(50000, 50500);
    std::vector<u64> direct;
    s.for_each_u64(50000, 50500, [&](u64 v) { direct.push_back(v); return true; });
    CHECK(win == direct);
}

TEST_CASE("poly density fit: naturals give exact constants 1") {
    auto s = build_set(SetSpec::naturals_spec());
    auto fit = fit_poly_density(s, Rational(1), Rational(0), 10, 10000);
    CHECK(fit.c1 == 1);
    CHECK(fit.c2 == 1);
    CHECK_FALSE(fit.suspicious);
}

TEST_CASE("poly density fit: primes bracket N/log N loosely") {
    auto s = build_set(SetSpec::primes_spec(), 1000000);
    auto fit = fit_poly_density(s, Rational(1), Rational(1), 1000, 1000000);
    double c1 = to_double(fit.c1), c2 = to_double(fit.c2);
    CHECK(c1 > 0.8);
    CHECK(c1 < 1.1);
    CHECK(c2 > 1.1);
    CHECK(c2 < 1.4);
    CHECK_FALSE(fit.suspicious);
}

TEST_CASE("poly density fit: PS(3/2) constants hug 1") {
    auto s = build_set(SetSpec::ps_spec(Rational(3, 2)));
    // On a window starting at 10^2 the tight lower constant sits near 0.962:
    // just before the jump at 1015 the count is 21 against model 102^(2/3).
    auto wide = fit_poly_density(s, Rational(3, 2), Rational(0), 100, 1000000);
    CHECK(to_double(wide.c1) >= 0.95);
    CHECK(to_double(wide.c1) <= 0.97);
    CHECK(to_double(wide.c2) <= 1.01);
    // Past the coarse left edge both constants land within one percent of 1.
    auto fit = fit_poly_density(s, Rational(3, 2), Rational(0), 10000, 1000000);
    CHECK(to_double(fit.c1) >= 0.99);
    CHECK(to_double(fit.c2) <= 1.01);
}

TEST_CASE("poly density fit rejects an empty window") {
    auto s = build_set(SetSpec::explicit_spec({BigInt(1000000)}));
    CHECK_THROWS_AS(fit_poly_density(s, Rational(1), Rational(0), 10, 1000), invalid_input);
}
