#include <catch2/catch_amalgamated.hpp>

#include "cftrans/moran.hpp"

using namespace cftrans;
using namespace cftrans::moran;
using intsets::SetSpec;
using intsets::build_set;
using intsets::fit_poly_density;

TEST_CASE("seed scale: naturals give L = 12 exactly") {
    auto nats = build_set(SetSpec::naturals_spec());
    auto fit = fit_poly_density(nats, Rational(1), Rational(0), 10, 10000);
    auto [L, exact] = seed_scale(fit);
    CHECK(L == 12);
    CHECK(exact);
}

TEST_CASE("seed scale: PS(3/2) with unit constants encloses 12^(3/2)") {
    intsets::PolyDensityParams clean;
    clean.alpha = Rational(3, 2);
    clean.beta = Rational(0);
    clean.c1 = Rational(1);
    clean.c2 = Rational(1);
    auto [L, exact] = seed_scale(clean);
    CHECK_FALSE(exact);
    // 12^(3/2) = 41.569219...
    CHECK(to_double(L) >= 41.569219);
    CHECK(to_double(L) <= 41.569221);
    // certified: L^2 >= 12^3
    CHECK(pow_rat(L, 2) >= Rational(1728));
}

TEST_CASE("seed params for the naturals: t = 13, lambda = 1.25") {
    auto nats = build_set(SetSpec::naturals_spec());
    auto fit = fit_poly_density(nats, Rational(1), Rational(0), 10, 10000);
    auto params = choose_seed_params(fit, nats, 60);
    CHECK(params.L == 12);
    CHECK(params.t == 13);
    CHECK(params.lambda == 1.25);
    CHECK(params.rho == 1.25);
    CHECK(params.bracket_checked_to == 60);
    CHECK(params.nu_gap_from >= 1);
}

TEST_CASE("seed levels over the full naturals window") {
    auto nats = build_set(SetSpec::naturals_spec());
    auto fit = fit_poly_density(nats, Rational(1), Rational(0), 10, 10000);
    auto params = choose_seed_params(fit, nats, 40);
    auto levels = seed_moran_levels(nats, params, 40);
    REQUIRE(levels.levels.size() == 40);
    CHECK(levels.levels[0].window_lo == 13);
    CHECK(levels.levels[0].window_hi == 156);
    CHECK(levels.levels[0].child_count == 144);
    CHECK(levels.levels[0].gap_lower == Rational(1, 8225568));  // (1/2)(12*13^2)^-2
    for (std::size_t i = 1; i < levels.levels.size(); ++i) {
        CHECK(levels.levels[i].gap_lower > 0);
        CHECK(levels.levels[i].gap_lower < levels.levels[i - 1].gap_lower);
    }
}

TEST_CASE("seed levels on the thinned naturals count factorial-block values") {
    auto nats = build_set(SetSpec::naturals_spec());
    auto thin = thinning::make_thinned_set(nats);
    auto fit = fit_poly_density(nats, Rational(1), Rational(0), 10, 10000);
    auto params = choose_seed_params(fit, nats, 10);
    auto levels = seed_moran_levels(thin, params, 6);
    // oracle: direct membership scan of the first window
    BigInt direct = 0;
    for (BigInt v = 13; v <= 156; ++v)
        if (thinning::q_contains(v)) ++direct;
    CHECK(direct == 35);
    CHECK(levels.levels[0].child_count == direct);
    CHECK(levels.low_estimate_from >= 1);
}

TEST_CASE("mass estimate oracle: constant parameters reach closed forms") {
    // r = 2, delta = 3^-n: middle-thirds Cantor, limit log 2 / log 3
    MoranLevels cantor;
    cantor.depth = 10000;
    Rational third(1, 3), d(1, 1);
    for (unsigned n = 1; n <= cantor.depth; ++n) {
        d *= third;
        MoranLevel lv;
        lv.n = n;
        lv.child_count = 2;
        lv.gap_lower = d;
        cantor.levels.push_back(std::move(lv));
    }
    auto est = mass_dimension_estimate(cantor);
    double want = std::log(2.0) / std::log(3.0);
    CHECK(est.d.back() == Catch::Approx(want).margin(1e-3));

    // r = 2, delta = 4^-n: limit 1/2 via (n-1)log2 / (2n log2 - log2)
    MoranLevels half;
    half.depth = 10000;
    Rational quarter(1, 4);
    d = 1;
    for (unsigned n = 1; n <= half.depth; ++n) {
        d *= quarter;
        MoranLevel lv;
        lv.n = n;
        lv.child_count = 2;
        lv.gap_lower = d;
        half.levels.push_back(std::move(lv));
    }
    auto est2 = mass_dimension_estimate(half);
    CHECK(est2.d.back() == Catch::Approx(0.5).margin(1e-3));
    // closed form at finite depth
    unsigned n = half.depth;
    double closed = (n - 1.0) * std::log(2.0) / (2.0 * n * std::log(2.0) - std::log(2.0));
    CHECK(est2.d.back() == Catch::Approx(closed).margin(1e-9));
}

TEST_CASE("naturals seed estimate climbs toward 1/2") {
    auto nats = build_set(SetSpec::naturals_spec());
    auto thin = thinning::make_thinned_set(nats);
    auto fit = fit_poly_density(nats, Rational(1), Rational(0), 10, 10000);
    auto params = choose_seed_params(fit, nats, 80);
    auto levels = seed_moran_levels(thin, params, 80);
    auto est = mass_dimension_estimate(levels);
    CHECK(est.d.back() > 0.40);
    CHECK(est.d.back() < 0.50);
    for (std::size_t i = 41; i < est.d.size(); ++i)
        CHECK(est.d[i] > est.d[i - 1]);
}

TEST_CASE("dimension report: naturals pair 1/2 against tau/2") {
    auto nats = build_set(SetSpec::naturals_spec());
    auto fit = fit_poly_density(nats, Rational(1), Rational(0), 10, 10000);
    auto params = choose_seed_params(fit, nats, 60);
    auto rep = dimension_report(nats, params, 60, 1000000);
    CHECK(rep.upper == Catch::Approx(0.5).margin(1e-6));
    CHECK(rep.consistent);
    CHECK(rep.lower_tail <= rep.upper + rep.tolerance);
    CHECK(rep.lower_seq.back() > 0.4);
}

TEST_CASE("dimension report: PS(3/2) pairs 1/3 against tau/2") {
    auto ps = build_set(SetSpec::ps_spec(Rational(3, 2)));
    auto fit = fit_poly_density(ps, Rational(3, 2), Rational(0), 10000, 1000000);
    auto params = choose_seed_params(fit, ps, 60);
    CHECK(to_double(params.L) > 41.0);
    CHECK(params.t > 41);
    auto rep = dimension_report(ps, params, 60, 1000000);
    CHECK(rep.upper == Catch::Approx(1.0 / 3.0).margin(0.02));
    CHECK(rep.consistent);
}

TEST_CASE("seed search failure surfaces diagnostics") {
    auto squares = build_set(SetSpec::squares_spec());
    // alpha = 2 demands count ~ sqrt(N); deliberately tiny ceiling
    auto fit = fit_poly_density(squares, Rational(2), Rational(0), 10, 10000);
    SearchConfig cfg;
    cfg.t_ceiling = 4;
    CHECK_THROWS_AS(choose_seed_params(fit, squares, 10, cfg), search_failure);
}

TEST_CASE("seed window with fewer than 2 children is rejected") {
    // an explicit set too sparse to fill level windows
    auto s = build_set(SetSpec::explicit_spec({BigInt(13), BigInt(200), BigInt(2000)}));
    SeedParams p;
    p.L = 12;
    p.t = 13;
    p.alpha = Rational(1);
    p.rho = 1.25;
    CHECK_THROWS_AS(seed_moran_levels(s, p, 3), search_failure);
}
