#include <catch2/catch_amalgamated.hpp>

#include "cftrans/density.hpp"

using namespace cftrans;
using namespace cftrans::density;
using intsets::SetSpec;
using intsets::build_set;
using intsets::u64;

TEST_CASE("upper density: evens and squares") {
    auto evens = build_set(SetSpec::evens_spec());
    auto est = upper_density_est(evens, 10000);
    CHECK(est.value == Catch::Approx(0.5).margin(1e-3));

    auto squares = build_set(SetSpec::squares_spec());
    auto sq = upper_density_est(squares, 1000000);
    CHECK(sq.value <= 2e-3);
}

TEST_CASE("upper density: primes at 10^6") {
    auto primes = build_set(SetSpec::primes_spec(), 1000000);
    auto est = upper_density_est(primes, 1000000);
    // pi(500000) = 41538 pins the tail-window max near its left edge
    CHECK(est.value >= 41538.0L / 500000);
    CHECK(est.value <= 0.0832);
}

TEST_CASE("lower density bounds upper density") {
    auto blocks = build_set(SetSpec::square_blocks_spec());
    auto lo = lower_density_est(blocks, 100000);
    auto hi = upper_density_est(blocks, 100000);
    CHECK(lo.value <= hi.value);
    CHECK(lo.value >= 0.0L);
}

TEST_CASE("banach density: full windows inside the square-block set") {
    auto blocks = build_set(SetSpec::square_blocks_spec());
    auto est = banach_density_est(blocks, 1000000, {31});
    REQUIRE(est.windows.size() == 1);
    CHECK(est.windows[0].value == 1.0L);
    CHECK(est.value == 1.0L);
    // the achieving window really is inside one block
    u64 m = est.windows[0].offset;
    for (u64 v = m; v < m + 31; ++v) REQUIRE(blocks.contains(BigInt(v)));
}

TEST_CASE("banach density: evens and a short explicit run") {
    auto evens = build_set(SetSpec::evens_spec());
    for (u64 w : {5, 10, 31}) {
        auto est = banach_density_est(evens, 10000, {w});
        CHECK(est.value <= 0.5L + 1.0L / w);
        CHECK(est.value >= 0.5L - 1e-9L);
    }
    std::vector<BigInt> run;
    for (int i = 1; i <= 10; ++i) run.emplace_back(i);
    auto s = build_set(SetSpec::explicit_spec(run));
    auto est = banach_density_est(s, 100, {10});
    CHECK(est.value == 1.0L);
    CHECK(est.windows[0].offset == 1);
}

TEST_CASE("banach dominates upper density at the same horizon") {
    // Width chosen as the upper estimator's achieving prefix [1, n*]; the
    // window scan then sees that prefix, so domination is exact.
    for (auto spec : {SetSpec::evens_spec(), SetSpec::square_blocks_spec(),
                      SetSpec::primes_spec()}) {
        auto s = build_set(spec, 100000);
        auto up = upper_density_est(s, 100000);
        REQUIRE(up.achieving_n > 0);
        auto ban = banach_density_est(s, 100000, {up.achieving_n});
        CHECK(ban.value >= up.value);
    }
}

TEST_CASE("relative density: basic identities") {
    auto primes = build_set(SetSpec::primes_spec(), 1000000);
    auto self = relative_density_est(primes, primes, 100000);
    CHECK(self.value == 1.0L);

    // relative to the naturals coincides with the plain upper density
    auto evens = build_set(SetSpec::evens_spec());
    auto nats = build_set(SetSpec::naturals_spec());
    auto rel = relative_density_est(evens, nats, 10000);
    auto up = upper_density_est(evens, 10000);
    CHECK(rel.value == up.value);
}

TEST_CASE("relative density: primes 1 mod 4 among primes") {
    auto primes = build_set(SetSpec::primes_spec(), 1000000);
    auto a = build_set(SetSpec::residue_filter_spec(SetSpec::primes_spec(), 4, 1), 1000000);
    auto est = relative_density_est(a, primes, 1000000);
    CHECK(est.value == Catch::Approx(0.5).margin(0.01));
}

TEST_CASE("relative density rejects non-subsets") {
    auto evens = build_set(SetSpec::evens_spec());
    auto squares = build_set(SetSpec::squares_spec());
    CHECK_THROWS_AS(relative_density_est(evens, squares, 1000), invalid_input);
}

TEST_CASE("convergence exponent: squares and naturals") {
    auto squares = build_set(SetSpec::squares_spec());
    auto est = convergence_exponent_est(squares, 1000000);
    CHECK(est.value == Catch::Approx(0.5).margin(1e-6));

    auto nats = build_set(SetSpec::naturals_spec());
    auto nat = convergence_exponent_est(nats, 1000000);
    CHECK(nat.value == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("convergence exponent: square-block set heads toward 3/4") {
    auto blocks = build_set(SetSpec::square_blocks_spec());
    auto est = convergence_exponent_est(blocks, 1000000);
    CHECK(est.value > 0.70L);
    CHECK(est.value < 0.76L);
}

TEST_CASE("convergence exponent: PS(3/2) heads toward 2/3") {
    auto ps = build_set(SetSpec::ps_spec(Rational(3, 2)));
    auto est = convergence_exponent_est(ps, 10000000);
    CHECK(est.value > 0.60L);
    CHECK(est.value < 0.72L);
}

TEST_CASE("convergence exponent needs enough elements") {
    auto s = build_set(SetSpec::explicit_spec({BigInt(3), BigInt(9), BigInt(12)}));
    CHECK_THROWS_AS(convergence_exponent_est(s, 100), invalid_input);
}
