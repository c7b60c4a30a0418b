#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cftrans/density.hpp"
#include "cftrans/thinning.hpp"

using namespace cftrans;
using namespace cftrans::thinning;
using intsets::SetSpec;
using intsets::build_set;

TEST_CASE("nu: factorial block index") {
    CHECK(nu(u64(1)) == 1);
    CHECK(nu(u64(5)) == 2);
    CHECK(nu(u64(24)) == 4);
    CHECK(nu(u64(23)) == 3);
    CHECK(nu(u64(119)) == 4);
    CHECK(nu(u64(120)) == 5);
    CHECK_THROWS_AS(nu_of(BigInt(0)), invalid_input);
}

TEST_CASE("Q prefix from the factorial blocks") {
    auto s = build_set(SetSpec::naturals_spec());
    auto thin = thin_subset(s, 23);
    std::vector<u64> want = {2, 4, 6, 9, 12, 15, 18, 21};
    CHECK(thin.q_indices == want);
    // for the naturals, values coincide with indices
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(thin.values[i] == BigInt(want[i]));
}

TEST_CASE("thin subset of the primes picks ranked primes") {
    auto primes = build_set(SetSpec::primes_spec(), 1000);
    auto thin = thin_subset(primes, 23);
    std::vector<BigInt> want = {3, 7, 13, 23, 37, 47, 61, 73};
    CHECK(thin.values == want);
}

TEST_CASE("Q never contains consecutive integers") {
    u64 prev = 0;
    q_for_each(BigInt(1), BigInt(100000), [&](const BigInt& v) {
        u64 x = to_u64(v);
        if (prev) CHECK(x - prev >= 2);
        prev = x;
        return true;
    });
    // cross-check membership against the direct defining union
    for (u64 k = 2; k <= 8; ++k) {
        u64 f = to_u64(factorial(k));
        for (u64 i = 0; i < std::min<u64>(to_u64(factorial(k)) - 0, 500); ++i) {
            u64 v = f + i * k;
            if (v >= to_u64(factorial(k + 1))) break;
            CHECK(q_contains(BigInt(v)));
        }
    }
    CHECK_FALSE(q_contains(BigInt(3)));
    CHECK_FALSE(q_contains(BigInt(5)));
    CHECK_FALSE(q_contains(BigInt(7)));
}

TEST_CASE("q_count, q_next, q_nth agree with enumeration") {
    BigInt idx = 0;
    q_for_each(BigInt(1), BigInt(50000), [&](const BigInt& v) {
        ++idx;
        CHECK(q_count(v) == idx);
        CHECK(q_count(v - 1) == idx - 1);
        CHECK(q_nth(idx) == v);
        CHECK(q_next(v) == v);
        return true;
    });
    CHECK(q_next(BigInt(3)) == 4);
    CHECK(q_next(BigInt(22)) == 24);
}

TEST_CASE("values of a thinned random set contain no consecutive integers") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<BigInt> xs;
        BigInt v = 0;
        std::uniform_int_distribution<int> gap(1, 4);
        for (int i = 0; i < 400; ++i) {
            v += gap(rng);
            xs.push_back(v);
        }
        auto s = build_set(SetSpec::explicit_spec(xs));
        auto thin = thin_subset(s, 300);
        for (std::size_t i = 1; i < thin.values.size(); ++i)
            CHECK(thin.values[i] - thin.values[i - 1] >= 2);
    }
}

TEST_CASE("count sandwich holds from a small threshold onward") {
    u64 from = q_sandwich_first_valid(200000);
    CHECK(from <= 24);
    // exhaustive recheck on a subrange with explicit counting
    BigInt cnt = q_count(BigInt(23));
    for (u64 m = 24; m <= 20000; ++m) {
        if (q_contains(BigInt(m))) ++cnt;
        unsigned k = nu(m);
        CHECK(cnt * k <= 3 * BigInt(m));
        CHECK(2 * cnt * k >= BigInt(m) + 1);
    }
}

TEST_CASE("thinned set handle is consistent with materialized thinning") {
    auto primes = build_set(SetSpec::primes_spec(), 200000);
    auto thin = thin_subset(primes, 2000);
    auto handle = make_thinned_set(primes);
    for (std::size_t i = 0; i < thin.values.size(); i += 37) {
        CHECK(handle.contains(thin.values[i]));
        CHECK(handle.nth(BigInt(i + 1)) == thin.values[i]);
    }
    CHECK(handle.count(thin.values.back()) == BigInt(thin.values.size()));
    CHECK_FALSE(handle.contains(BigInt(2)));  // rank 1 is not in Q
}

TEST_CASE("relative density of the thin subset decays like 3/nu") {
    auto nats = build_set(SetSpec::naturals_spec());
    auto thin_n = make_thinned_set(nats);
    auto est = density::relative_density_est(thin_n, nats, 1000000);
    unsigned k = nu(BigInt(1000000));
    CHECK(est.value <= 3.0L / k);

    auto primes = build_set(SetSpec::primes_spec(), 1000000);
    auto thin_p = make_thinned_set(primes);
    auto est_p = density::relative_density_est(thin_p, primes, 1000000);
    unsigned kp = nu(primes.count(BigInt(1000000)));
    CHECK(est_p.value <= 3.0L / kp);
}
