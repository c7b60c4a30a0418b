// Seed-set construction and finite-depth Hausdorff-dimension estimates.
//
// Given a set S of polynomial density (count ~ N^(1/alpha)/(log N)^beta
// between c1 and c2), the seed recipe picks
//
//     L = (12 c1^-1 c2 2^beta)^alpha,
//     t = the smallest integer > max(L, e) such that #(S cap [1,t]) >= 2
//         and the count-ratio bracket
//         c1 c2^-1 2^-beta L^(-1/alpha) <= count(t^n)/count(L t^n)
//                                       <= c1^-1 c2 2^beta L^(-1/alpha)
//         holds for n up to the requested horizon,
//     lambda = the smallest grid exponent with nu(t^n) <= (n log t)^lambda,
//     rho = beta + lambda.
//
// The seed's level-n children live in the window [t^n, L t^n]; the per-level
// gap lower bound is delta_n = (1/2) prod_{i<=n} (L t^(i+1))^-2, and the mass
// bound gives the dimension estimate
//
//     d_n = log(r_1 ... r_{n-1}) / (-log(r_n delta_n)).
//
// The convergence exponent supplies the matching upper bound tau/2.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cftrans/density.hpp"
#include "cftrans/intsets.hpp"
#include "cftrans/numeric.hpp"
#include "cftrans/thinning.hpp"

namespace cftrans::moran {

using intsets::IntegerSet;
using intsets::PolyDensityParams;
using u64 = std::uint64_t;

struct SeedParams {
    Rational L;
    BigInt t;
    Rational alpha = Rational(1);
    Rational beta = Rational(0);
    Rational c1 = Rational(1);
    Rational c2 = Rational(1);
    double lambda = 0;
    double rho = 0;
    unsigned horizon = 0;           // n range the checks covered
    unsigned bracket_checked_to = 0;// bracket verified for n <= this
    unsigned nu_gap_from = 0;       // nu(count(Lt^n)) - nu(count(t^n)) in {0,1} from here on
    bool l_exact = true;            // false when L is a certified upper enclosure
};

struct SearchConfig {
    BigInt t_ceiling = 1000000;
    std::vector<double> lambda_grid = {1.01, 1.1, 1.25, 1.5, 2.0};
    long double guard = 1e-9L;  // relative guard band for log-domain checks
};

// L from the fit constants; exact rational whenever alpha and beta are
// integers, otherwise the smallest certified upper bound on a 1e-6 grid.
inline std::pair<Rational, bool> seed_scale(const PolyDensityParams& fit) {
    Rational base = Rational(12) * fit.c2 / fit.c1;
    // times 2^beta
    if (fit.beta.get_den() == 1 && fit.alpha.get_den() == 1) {
        Rational two_beta = pow_rat(Rational(2), fit.beta.get_num().get_ui());
        Rational L = pow_rat(base * two_beta, fit.alpha.get_num().get_ui());
        return {L, true};
    }
    // certified upper enclosure: find smallest grid rational lam with
    //   lam^(ad*bd) >= base^(an*bd) * 2^(bn*an)
    unsigned long an = fit.alpha.get_num().get_ui(), ad = fit.alpha.get_den().get_ui();
    unsigned long bn = fit.beta.get_num().get_ui(), bd = fit.beta.get_den().get_ui();
    Rational rhs = pow_rat(base, an * bd) * pow_rat(Rational(2), bn * an);
    const unsigned long scale = 1000000;
    auto ge = [&](const BigInt& num) {
        Rational v(num, scale);
        v.canonicalize();
        return pow_rat(v, ad * bd) >= rhs;
    };
    BigInt lo = 0, hi = 1;
    while (!ge(hi)) hi *= 2;
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        if (ge(mid)) hi = mid; else lo = mid;
    }
    Rational L(hi, scale);
    L.canonicalize();
    return {L, false};
}

namespace detail {

// Count-ratio bracket at level n, exact when the bound is rational
// (alpha = 1, beta integral), otherwise log-domain with a guard band.
// Returns +1 pass, 0 marginal, -1 fail.
inline int bracket_check(const BigInt& cnt_lo, const BigInt& cnt_hi,
                         const PolyDensityParams& fit, const Rational& L,
                         long double guard) {
    if (cnt_lo < 1 || cnt_hi < 1) return -1;
    if (fit.alpha == 1 && fit.beta.get_den() == 1) {
        Rational two_beta = pow_rat(Rational(2), fit.beta.get_num().get_ui());
        Rational lo_bound = fit.c1 / (fit.c2 * two_beta * L);
        Rational hi_bound = fit.c2 * two_beta / (fit.c1 * L);
        Rational ratio(cnt_lo, cnt_hi);
        ratio.canonicalize();
        return (lo_bound <= ratio && ratio <= hi_bound) ? 1 : -1;
    }
    long double ln_ratio = log_big(cnt_lo) - log_big(cnt_hi);
    long double ln2b = static_cast<long double>(to_double(fit.beta)) * kLn2;
    long double lnL_a = log_rat(L) / static_cast<long double>(to_double(fit.alpha));
    long double lnc = std::log(static_cast<long double>(to_double(fit.c2 / fit.c1)));
    long double lo_margin = ln_ratio - (-lnc - ln2b - lnL_a);
    long double hi_margin = (lnc + ln2b - lnL_a) - ln_ratio;
    long double m = std::min(lo_margin, hi_margin);
    if (m > guard) return 1;
    if (m >= -guard) return 0;
    return -1;
}

}  // namespace detail

inline SeedParams choose_seed_params(const PolyDensityParams& fit, const IntegerSet& s,
                                     unsigned n_max, const SearchConfig& cfg = {}) {
    SeedParams out;
    auto [L, l_exact] = seed_scale(fit);
    out.L = L;
    out.l_exact = l_exact;
    out.alpha = fit.alpha;
    out.beta = fit.beta;
    out.c1 = fit.c1;
    out.c2 = fit.c2;
    out.horizon = n_max;

    BigInt t_start = floor_rat(L) + 1;
    if (t_start < 3) t_start = 3;
    std::string last_reason = "no candidate tried";
    for (BigInt t = t_start; t <= cfg.t_ceiling; ++t) {
        if (s.count(t) < 2) {  // nu(#(S cap [1,t])) >= 2
            last_reason = "count below 2 at t=" + t.get_str();
            continue;
        }
        unsigned checked = 0;
        bool ok = true;
        for (unsigned n = 1; n <= n_max; ++n) {
            BigInt tn = pow_big(t, n);
            BigInt hi = floor_rat(L * Rational(tn));
            BigInt cnt_lo, cnt_hi;
            try {
                cnt_lo = s.count(tn);
                cnt_hi = s.count(hi);
            } catch (const resource_limit&) {
                break;  // bracket verified as far as the set can count
            }
            if (detail::bracket_check(cnt_lo, cnt_hi, fit, L, cfg.guard) != 1) {
                ok = false;
                last_reason = "bracket failed at t=" + t.get_str() + ", n=" + std::to_string(n);
                break;
            }
            checked = n;
        }
        if (!ok || checked == 0) continue;

        out.t = t;
        out.bracket_checked_to = checked;

        // lambda: smallest grid exponent covering nu(t^n) for n <= horizon
        out.lambda = 0;
        long double ln_t = log_big(t);
        for (double lam : cfg.lambda_grid) {
            bool pass = true;
            for (unsigned n = 1; n <= n_max && pass; ++n) {
                unsigned nu_tn = nu_of(pow_big(t, n));
                long double model = std::pow(static_cast<long double>(n) * ln_t,
                                             static_cast<long double>(lam));
                if (static_cast<long double>(nu_tn) > model) pass = false;
            }
            if (pass) { out.lambda = lam; break; }
        }
        if (out.lambda == 0) {
            last_reason = "no lambda on the grid fits nu(t^n) at t=" + t.get_str();
            continue;
        }
        out.rho = static_cast<double>(to_double(fit.beta)) + out.lambda;

        // measured: first n from which the nu gap stays in {0,1}
        unsigned gap_from = 0;
        bool tail_ok = true;
        for (unsigned n = out.bracket_checked_to; n >= 1; --n) {
            BigInt tn = pow_big(t, n);
            unsigned lo_nu = nu_of(s.count(tn));
            unsigned hi_nu = nu_of(s.count(floor_rat(L * Rational(tn))));
            unsigned gap = hi_nu - lo_nu;
            if (tail_ok && gap <= 1) gap_from = n; else tail_ok = false;
        }
        out.nu_gap_from = gap_from == 0 ? out.bracket_checked_to + 1 : gap_from;
        return out;
    }
    throw search_failure("seed parameter search exhausted (ceiling " + cfg.t_ceiling.get_str() +
                         "): " + last_reason);
}

struct MoranLevel {
    unsigned n = 0;
    BigInt window_lo;
    BigInt window_hi;
    BigInt child_count;   // r_n
    Rational gap_lower;   // delta_n
};

struct MoranLevels {
    std::vector<MoranLevel> levels;
    unsigned depth = 0;
    unsigned low_estimate_from = 0;  // 0 = never entered the regime
    Rational L;
    BigInt t;
};

inline MoranLevels seed_moran_levels(const IntegerSet& k, const SeedParams& params,
                                     unsigned depth) {
    if (depth < 1) throw invalid_input("seed levels: depth must be >= 1");
    MoranLevels out;
    out.depth = depth;
    out.L = params.L;
    out.t = params.t;
    out.levels.reserve(depth);

    Rational delta(1, 2);
    BigInt tn = 1;
    for (unsigned n = 1; n <= depth; ++n) {
        tn *= params.t;
        MoranLevel lv;
        lv.n = n;
        lv.window_lo = tn;
        lv.window_hi = floor_rat(params.L * Rational(tn));
        lv.child_count = k.count(lv.window_hi) - k.count(lv.window_lo - 1);
        if (lv.child_count < 2)
            throw search_failure("seed window at level " + std::to_string(n) +
                                 " has fewer than 2 children");
        Rational factor = Rational(1) / (params.L * Rational(tn * params.t));
        delta *= factor * factor;  // append (L t^(n+1))^-2
        lv.gap_lower = delta;
        out.levels.push_back(std::move(lv));
    }

    // low-estimate regime: r_n >= t^(n/alpha) / (n log t)^rho, log-domain
    long double ln_t = log_big(params.t);
    long double inv_alpha = 1.0L / static_cast<long double>(to_double(params.alpha));
    unsigned from = 0;
    bool tail_ok = true;
    for (unsigned n = depth; n >= 1; --n) {
        const auto& lv = out.levels[n - 1];
        long double bound = inv_alpha * n * ln_t -
                            static_cast<long double>(params.rho) *
                                std::log(static_cast<long double>(n) * ln_t);
        bool holds = log_big(lv.child_count) >= bound;
        if (tail_ok && holds) from = n; else tail_ok = false;
        if (n == 1) break;
    }
    out.low_estimate_from = from;
    return out;
}

struct DimensionEstimate {
    std::vector<double> d;      // d[n-1] for n = 1..depth (d[0] = 0 by convention)
    double liminf_proxy = 0;    // min over the tail half
    unsigned depth = 0;
};

inline DimensionEstimate mass_dimension_estimate(const MoranLevels& levels) {
    if (levels.levels.size() < 3)
        throw invalid_input("mass dimension estimate needs depth >= 3");
    DimensionEstimate out;
    out.depth = levels.depth;
    out.d.resize(levels.levels.size(), 0.0);
    long double cum = 0;  // log(r_1 ... r_{n-1})
    for (std::size_t i = 0; i < levels.levels.size(); ++i) {
        const auto& lv = levels.levels[i];
        long double ln_rn = log_big(lv.child_count);
        long double ln_dn = log_rat(lv.gap_lower);
        long double denom = -(ln_rn + ln_dn);
        if (i > 0 && denom > 0) out.d[i] = static_cast<double>(cum / denom);
        cum += ln_rn;
    }
    double best = out.d[out.d.size() / 2];
    for (std::size_t i = out.d.size() / 2; i < out.d.size(); ++i)
        best = std::min(best, out.d[i]);
    out.liminf_proxy = best;
    return out;
}

struct DimensionReport {
    SeedParams params;
    unsigned depth = 0;
    std::vector<double> lower_seq;
    double lower_tail = 0;     // liminf proxy of the mass estimate
    double tau_est = 0;
    double upper = 0;          // tau_est / 2
    u64 tau_horizon = 0;
    bool consistent = false;   // lower_tail <= upper + tolerance
    double tolerance = 0.02;
    unsigned low_estimate_from = 0;
};

// Full step-1 + step-2 report for S: thin, seed on the thin subset, estimate
// the mass lower bound, and pair it with the tau/2 upper bound.
inline DimensionReport dimension_report(const IntegerSet& s, const SeedParams& params,
                                        unsigned depth, u64 tau_horizon,
                                        double tolerance = 0.02) {
    IntegerSet thin = thinning::make_thinned_set(s);
    MoranLevels levels = seed_moran_levels(thin, params, depth);
    DimensionEstimate est = mass_dimension_estimate(levels);

    DimensionReport rep;
    rep.params = params;
    rep.depth = depth;
    rep.lower_seq = est.d;
    rep.lower_tail = est.liminf_proxy;
    rep.low_estimate_from = levels.low_estimate_from;
    auto tau = density::convergence_exponent_est(s, tau_horizon);
    rep.tau_est = static_cast<double>(tau.value);
    rep.upper = rep.tau_est / 2.0;
    rep.tau_horizon = tau_horizon;
    rep.tolerance = tolerance;
    rep.consistent = rep.lower_tail <= rep.upper + tolerance;
    return rep;
}

}  // namespace cftrans::moran
