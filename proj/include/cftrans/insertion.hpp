// Digit-insertion planners, the splice/eliminate pair, and the Hoelder
// certification machinery.
//
// A plan extends a seed family (digit n drawn from B cap [t^n, L t^n]) by
// inserting, immediately after seed position M_k, the ascending block
//     W_k = insert-source cap I_k.
// Relative plans draw from A minus the thin subset with
//     I_k = [L t^(M_{k-1)) + 1, L t^(M_{k-1}) + floor(sqrt(M_k))];
// Banach plans draw from S itself with I_k = [M_{k-1}, M_{k-1} + N_{k-1}].
//
// Per-k conditions, all evaluated in log domain from exact integers with a
// relative guard band (inside-band results report as "marginal", not "pass"):
//
//   window_order   the insertion window precedes the M_k-th seed window:
//                  L t^(M_{k-1}) + sqrt(M_k) < t^(M_k)
//   block_cost     worst-case block product dominated by the seed segment:
//                  (max I_k + 1)^(-2 sqrt(M_k)) >= t^(-2 eps_k M_k^2)
//                  >= (prod_{i=M_{k-1}+1..M_k} t^(-2i))^(3 eps_k)
//                  (Banach form uses the window width in the exponent)
//   tail_slack     inf_{n>=M_k} t^((n+1)(eps_k n - 6)) >= 2
//   block_product  the realized block satisfies
//                  prod_{i in W_k} (i+1)^(-2) >= (seed segment product)^(3 eps_k)
//   tail_holder    the deep-level gap absorbs exponent 1 + 4 eps_k; reduces
//                  to the same exponent inequality as tail_slack
//   density_horizon   |density of inserts below sqrt(M_k) - target| <= eps_k
//   window_ratio   |#W_k / #(S cap I_k) - target| <= min(eps_k, window_tol)
//   position_decay, window_span   decay diagnostics; recorded per k and
//                  gating only in strict mode, since insisting on them forces
//                  positions beyond any representable size after two blocks
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cftrans/cfcore.hpp"
#include "cftrans/density.hpp"
#include "cftrans/intsets.hpp"
#include "cftrans/moran.hpp"
#include "cftrans/numeric.hpp"
#include "cftrans/thinning.hpp"

namespace cftrans::insertion {

using intsets::IntegerSet;
using intsets::SetSpec;
using u64 = std::uint64_t;

enum class PlanKind { relative, banach };

enum class CondStatus { pass, marginal, fail, skipped };

inline const char* status_name(CondStatus s) {
    switch (s) {
        case CondStatus::pass: return "pass";
        case CondStatus::marginal: return "marginal";
        case CondStatus::fail: return "fail";
        case CondStatus::skipped: return "skipped";
    }
    return "?";
}

struct ConditionResult {
    std::string name;
    unsigned k = 0;
    CondStatus status = CondStatus::skipped;
    long double margin = 0;  // log-domain slack; > 0 passes
    bool gating = true;
    std::string note;
};

struct PlanBlock {
    unsigned k = 0;
    BigInt position;          // M_k, block goes right after seed digit M_k
    BigInt width;             // banach: N_{k-1}; relative: floor(sqrt(M_k))
    BigInt window_lo;
    BigInt window_hi;
    BigInt count;             // #W_k
    BigInt denom_count;       // #(S cap I_k) (relative) / #(N cap I_k) (banach)
    double ratio = 0;
    bool materialized = false;
    bool thin_excluded = true;  // relative only: exact thin-subset exclusion applied
    std::vector<BigInt> elements;
};

struct PlanConfig {
    u64 est_horizon = 1000000;       // horizon for the density targets
    unsigned seed_horizon = 48;      // n range for seed parameter checks
    double window_tol = 0.05;        // cap on the window-ratio tolerance
    std::size_t block_cap = 10000;   // max materialized block size
    u64 m_ceiling = 40000000;        // admissible-position search ceiling
    u64 scan_ceiling = 40000000;     // banach window scan ceiling
    long double guard = 1e-9L;
    bool strict_proxies = false;     // gate on position_decay / window_span
    unsigned banach_base_width = 3;  // N_0
    u64 sieve_horizon = 4000000;     // build horizon for sieved sets
};

struct InsertionPlan {
    PlanKind kind = PlanKind::relative;
    moran::SeedParams seed;
    std::vector<double> epsilons;    // eps_1 .. eps_{k_requested}
    unsigned k_requested = 0;
    bool prefix_complete = false;
    std::string stop_reason;
    double target_ratio = 0;         // window-ratio target
    double target_horizon_ratio = 0; // density_horizon target (relative only)
    std::vector<PlanBlock> blocks;
    std::vector<ConditionResult> ledger;
    std::vector<BigInt> banach_lengths;  // N_0 .. (banach only)

    IntegerSet base;        // B: digits of the seed family
    IntegerSet s_ref;       // denominator set (S, or naturals for banach)
    IntegerSet insert_src;  // A (relative, pre-exclusion) or S (banach)

    unsigned k_built() const { return static_cast<unsigned>(blocks.size()); }
};

inline std::vector<double> harmonic_epsilons(unsigned k_max, unsigned shift = 1) {
    std::vector<double> eps(k_max);
    for (unsigned k = 1; k <= k_max; ++k) eps[k - 1] = 1.0 / (k + shift);
    return eps;
}

namespace detail {

inline long double ld(const BigInt& x) { return static_cast<long double>(x.get_d()); }

inline CondStatus grade(long double margin, long double guard) {
    if (margin > guard) return CondStatus::pass;
    if (margin >= -guard) return CondStatus::marginal;
    return CondStatus::fail;
}

// sum i for i in (m0, m1]  =  m1(m1+1)/2 - m0(m0+1)/2
inline BigInt segment_sum(const BigInt& m0, const BigInt& m1) {
    return (m1 * (m1 + 1) - m0 * (m0 + 1)) / 2;
}

struct SegmentLogs {
    long double ln_t = 0;
    long double seg = 0;  // 2 * (sum of i over the segment) * ln t
};

inline SegmentLogs segment_logs(const BigInt& t, const BigInt& m0, const BigInt& m1) {
    SegmentLogs s;
    s.ln_t = log_big(t);
    s.seg = 2.0L * ld(segment_sum(m0, m1)) * s.ln_t;
    return s;
}

// window elements of a set, falling back to a windowed prime sieve when the
// handle's own horizon is exceeded
inline std::vector<BigInt> window_elements(const IntegerSet& s, const BigInt& lo,
                                           const BigInt& hi, std::size_t cap, bool& exact) {
    exact = true;
    std::vector<BigInt> out;
    try {
        s.for_each(lo, hi, [&](const BigInt& v) {
            if (out.size() >= cap) throw resource_limit("window block above cap");
            out.push_back(v);
            return true;
        });
        return out;
    } catch (const resource_limit&) {
        out.clear();
    }
    // sieve route for prime-based sets
    const SetSpec* spec = &s.spec();
    bool residue = false;
    BigInt mod = 0, rem = 0;
    if (spec->kind == intsets::Kind::residue_filter && spec->inner) {
        residue = true;
        mod = spec->modulus;
        rem = spec->residue;
        spec = spec->inner.get();
    }
    if (spec->kind != intsets::Kind::primes)
        throw resource_limit("window enumeration beyond set horizon");
    u64 lo64 = to_u64(lo, "window low"), hi64 = to_u64(hi, "window high");
    for (u64 p : intsets::sieve_window(lo64, hi64)) {
        if (residue && BigInt(p) % mod != rem) continue;
        if (out.size() >= cap) throw resource_limit("window block above cap");
        out.emplace_back(p);
    }
    return out;
}

}  // namespace detail

// --- shared condition evaluations -------------------------------------------

// window_order: L t^(m_prev) + sqrt(M_k) < t^(m_k)
inline ConditionResult cond_window_order(const moran::SeedParams& seed, unsigned k,
                                         const BigInt& m_prev, const BigInt& m_k,
                                         long double guard) {
    ConditionResult c{"window_order", k, CondStatus::skipped, 0, true, ""};
    Rational lhs = seed.L * Rational(pow_big(seed.t, m_prev.get_ui())) +
                   Rational(isqrt(m_k) + 1);
    c.margin = detail::ld(m_k) * log_big(seed.t) - log_rat(lhs);
    c.status = detail::grade(c.margin, guard);
    return c;
}

// block_cost, relative form: two chained inequalities; margin is the minimum.
// The middle-vs-right comparison reduces to the exact integer inequality
// M_k^2 <= 3 * sum of the segment indices.
inline ConditionResult cond_block_cost_relative(const moran::SeedParams& seed, unsigned k,
                                                double eps, const BigInt& m_prev,
                                                const BigInt& m_k, const BigInt& window_max,
                                                long double guard) {
    ConditionResult c{"block_cost", k, CondStatus::skipped, 0, true, ""};
    long double ln_t = log_big(seed.t);
    BigInt seg_sum = detail::segment_sum(m_prev, m_k);
    BigInt s = isqrt(m_k);
    // worst-case block product vs t^(-2 eps M_k^2): conservative sqrt bound
    long double left = 2.0L * detail::ld(s + 1) * log_big(window_max + 1);
    long double mid = 2.0L * eps * detail::ld(m_k) * detail::ld(m_k) * ln_t;
    long double m1 = mid - left;
    BigInt mid_right = 3 * seg_sum - m_k * m_k;  // exact; >= 0 required
    long double m2 = 2.0L * eps * ln_t * detail::ld(mid_right);
    c.margin = std::min(m1, m2);
    if (mid_right < 0) {
        c.status = CondStatus::fail;
        return c;
    }
    c.status = detail::grade(m1, guard);
    return c;
}

// block_cost, banach form: (max I + 1)^(-2 N_{k-1}) >= segment^(3 eps)
inline ConditionResult cond_block_cost_banach(const moran::SeedParams& seed, unsigned k,
                                              double eps, const BigInt& m_prev,
                                              const BigInt& m_k, const BigInt& width,
                                              const BigInt& window_max, long double guard) {
    ConditionResult c{"block_cost", k, CondStatus::skipped, 0, true, ""};
    auto seg = detail::segment_logs(seed.t, m_prev, m_k);
    long double left = 2.0L * detail::ld(width) * log_big(window_max + 1);
    c.margin = 3.0L * eps * seg.seg - left;
    c.status = detail::grade(c.margin, guard);
    return c;
}

// tail_slack: inf_{n >= M_k} t^((n+1)(eps n - 6)) >= 2. The exponent is
// increasing once eps(n+1) > 3 and positivity at n = M_k needs eps M_k > 6,
// so a single evaluation at n = M_k settles the infimum.
inline ConditionResult cond_tail_slack(const moran::SeedParams& seed, unsigned k, double eps,
                                       const BigInt& m_k, long double guard,
                                       const char* name = "tail_slack") {
    ConditionResult c{name, k, CondStatus::skipped, 0, true, ""};
    long double expo = detail::ld(m_k + 1) * (eps * detail::ld(m_k) - 6.0L);
    c.margin = expo * log_big(seed.t) - kLn2;
    if (eps * detail::ld(m_k) <= 6.0L) {
        c.status = CondStatus::fail;
        c.note = "exponent not positive at the block position";
        return c;
    }
    c.status = detail::grade(c.margin, guard);
    return c;
}

// block_product: realized block digits against the seed segment product
inline ConditionResult cond_block_product(const moran::SeedParams& seed, unsigned k, double eps,
                                          const BigInt& m_prev, const BigInt& m_k,
                                          const PlanBlock& blk, long double guard) {
    ConditionResult c{"block_product", k, CondStatus::skipped, 0, true, ""};
    if (blk.count == 0) {
        c.status = CondStatus::pass;
        c.note = "empty block, vacuous";
        c.margin = 0;
        return c;
    }
    auto seg = detail::segment_logs(seed.t, m_prev, m_k);
    long double lhs;
    if (blk.materialized) {
        lhs = 0;
        for (const auto& w : blk.elements) lhs -= 2.0L * log_big(w + 1);
    } else {
        lhs = -2.0L * detail::ld(blk.count) * log_big(blk.window_hi + 1);
        c.note = "count-based bound (block not materialized)";
    }
    c.margin = lhs - (-3.0L * eps * seg.seg);
    c.status = detail::grade(c.margin, guard);
    return c;
}

// density_horizon: inserted-source density at sqrt(M_k) against the target
inline ConditionResult cond_density_horizon(unsigned k, double eps, const BigInt& m_k,
                                            const IntegerSet& inserts, const IntegerSet& s,
                                            double target) {
    ConditionResult c{"density_horizon", k, CondStatus::skipped, 0, true, ""};
    BigInt h = isqrt(m_k);
    BigInt cs = s.count(h);
    if (cs == 0) {
        c.status = CondStatus::fail;
        c.note = "S empty below sqrt(M_k)";
        return c;
    }
    BigInt ca = inserts.count(h);
    double ratio = BigInt(ca).get_d() / cs.get_d();
    c.margin = eps - std::abs(ratio - target);
    c.status = c.margin >= 0 ? CondStatus::pass : CondStatus::fail;
    c.note = "ratio " + std::to_string(ratio) + " target " + std::to_string(target);
    return c;
}

// window_ratio: realized block density against the target
inline ConditionResult cond_window_ratio(unsigned k, double tol, const PlanBlock& blk,
                                         double target, bool gating) {
    ConditionResult c{"window_ratio", k, CondStatus::skipped, 0, gating, ""};
    if (blk.denom_count == 0) {
        c.status = CondStatus::fail;
        c.note = "window misses S entirely";
        return c;
    }
    c.margin = tol - std::abs(blk.ratio - target);
    c.status = c.margin >= 0 ? CondStatus::pass : CondStatus::fail;
    c.note = "ratio " + std::to_string(blk.ratio) + " target " + std::to_string(target);
    return c;
}

// position_decay: t^(M_{k-1}) / sqrt(M_k)^(1/alpha) <= eps   (diagnostic)
inline ConditionResult cond_position_decay(const moran::SeedParams& seed, unsigned k,
                                           double eps, const BigInt& m_prev, const BigInt& m_k,
                                           bool gating) {
    ConditionResult c{"position_decay", k, CondStatus::skipped, 0, gating, ""};
    long double lhs = detail::ld(m_prev) * log_big(seed.t) -
                      0.5L * std::log(detail::ld(m_k)) /
                          static_cast<long double>(to_double(seed.alpha));
    c.margin = std::log(static_cast<long double>(eps)) - lhs;
    c.status = c.margin >= 0 ? CondStatus::pass : CondStatus::fail;
    return c;
}

// window_span: min I_k / max I_k <= eps   (diagnostic)
inline ConditionResult cond_window_span(unsigned k, double eps, const PlanBlock& blk,
                                        bool gating) {
    ConditionResult c{"window_span", k, CondStatus::skipped, 0, gating, ""};
    double span = BigInt(blk.window_lo).get_d() / BigInt(blk.window_hi).get_d();
    c.margin = eps - span;
    c.status = c.margin >= 0 ? CondStatus::pass : CondStatus::fail;
    c.note = "span " + std::to_string(span);
    return c;
}

// ---------------------------------------------------------------------------
// planners

namespace detail {

struct RelativeGates {
    // M-monotone lower bounds for the k-th position
    static u64 lower_bound(const moran::SeedParams& seed, double eps, u64 m_prev) {
        u64 lo = m_prev + 1;
        // tail_slack: eps * M > 6
        u64 slack = static_cast<u64>(std::floor(6.0 / eps)) + 1;
        lo = std::max(lo, slack);
        // exact mid-right: M^2 + 3M >= 3(m_prev^2 + m_prev)
        BigInt target = 3 * (BigInt(m_prev) * m_prev + m_prev);
        u64 m3 = to_u64(isqrt(target));
        while (BigInt(m3) * m3 + 3 * m3 < target) ++m3;
        return std::max(lo, m3);
    }
};

inline void append(std::vector<ConditionResult>& ledger, ConditionResult c) {
    ledger.push_back(std::move(c));
}

}  // namespace detail

inline InsertionPlan plan_relative(const IntegerSet& s, const IntegerSet& a,
                                   const intsets::PolyDensityParams& fit,
                                   std::vector<double> epsilons, unsigned k_max,
                                   const PlanConfig& cfg = {}) {
    if (k_max < 1) throw invalid_input("plan_relative: k_max must be >= 1");
    if (epsilons.size() < k_max) throw invalid_input("plan_relative: epsilon schedule too short");
    for (unsigned i = 1; i < k_max; ++i)
        if (!(epsilons[i] < epsilons[i - 1]) || epsilons[i] <= 0)
            throw invalid_input("epsilons must be positive and strictly decreasing");

    InsertionPlan plan;
    plan.kind = PlanKind::relative;
    plan.epsilons.assign(epsilons.begin(), epsilons.begin() + k_max);
    plan.k_requested = k_max;
    plan.s_ref = s;
    plan.insert_src = a;
    plan.base = thinning::make_thinned_set(s);

    auto rel = density::relative_density_est(a, s, cfg.est_horizon);
    if (!(rel.value > 0)) throw invalid_input("plan_relative: A has zero relative density");
    plan.target_ratio = static_cast<double>(rel.value);

    IntegerSet a_minus_thin = intsets::make_difference(a, plan.base);
    auto rel_thin = density::relative_density_est(a_minus_thin, s, cfg.est_horizon);
    plan.target_horizon_ratio = static_cast<double>(rel_thin.value);

    moran::SearchConfig scfg;
    scfg.guard = cfg.guard;
    plan.seed = moran::choose_seed_params(fit, s, cfg.seed_horizon, scfg);

    const double bits_per_m = static_cast<double>(log_big(plan.seed.t)) / kLn2;
    const u64 bits_cap = 1u << 22;
    const u64 m_hard_cap =
        std::min<u64>(cfg.m_ceiling, static_cast<u64>(bits_cap / std::max(1.0, bits_per_m)));

    BigInt m_prev = 0;
    for (unsigned k = 1; k <= k_max; ++k) {
        const double eps = plan.epsilons[k - 1];
        u64 m_lo = detail::RelativeGates::lower_bound(plan.seed, eps, to_u64(m_prev));
        BigInt base_pos = floor_rat(plan.seed.L * Rational(pow_big(plan.seed.t, m_prev.get_ui())));

        std::optional<PlanBlock> chosen;
        u64 chosen_m = 0;
        for (u64 w = intsets::isqrt_u64(m_lo); !chosen; ++w) {
            u64 band_lo = std::max<u64>(m_lo, w * w);
            u64 band_hi = (w + 1) * (w + 1) - 1;
            if (band_lo > band_hi) continue;
            if (band_lo > m_hard_cap) break;

            // w-dependent gates first
            PlanBlock blk;
            blk.k = k;
            blk.width = w;
            blk.window_lo = base_pos + 1;
            blk.window_hi = base_pos + w;
            bool exact = true;
            std::vector<BigInt> in_a;
            try {
                in_a = detail::window_elements(a, blk.window_lo, blk.window_hi, cfg.block_cap,
                                               exact);
            } catch (const resource_limit&) {
                chosen.reset();
                break;  // window itself unmanageable: stop the prefix here
            }
            // thin-subset exclusion, exact when the base set can answer
            blk.thin_excluded = true;
            std::vector<BigInt> w_elems;
            for (const auto& v : in_a) {
                bool in_thin = false;
                try {
                    in_thin = plan.base.contains(v);
                } catch (const resource_limit&) {
                    blk.thin_excluded = false;
                    in_thin = false;  // provably collision-free: I_k avoids seed windows
                }
                if (!in_thin) w_elems.push_back(v);
            }
            BigInt denom;
            try {
                denom = s.count(blk.window_hi) - s.count(blk.window_lo - 1);
            } catch (const resource_limit&) {
                bool e2 = true;
                denom = BigInt(
                    detail::window_elements(s, blk.window_lo, blk.window_hi, cfg.block_cap, e2)
                        .size());
            }
            blk.count = BigInt(w_elems.size());
            blk.denom_count = denom;
            blk.materialized = true;
            blk.elements = std::move(w_elems);
            blk.ratio = denom == 0 ? 0.0 : BigInt(blk.count).get_d() / denom.get_d();

            if (k >= 2) {
                double tol = std::min(eps, cfg.window_tol);
                auto wr = cond_window_ratio(k, tol, blk, plan.target_ratio, true);
                if (wr.status != CondStatus::pass) continue;
            }
            {
                BigInt m_probe = BigInt(band_lo);
                auto dh = cond_density_horizon(k, eps, m_probe, a_minus_thin, s,
                                               plan.target_horizon_ratio);
                if (dh.status != CondStatus::pass) continue;
            }

            // binary search the band for the smallest M passing the monotone gates
            auto m_gates_pass = [&](u64 m) {
                BigInt M(m);
                auto wo = cond_window_order(plan.seed, k, m_prev, M, cfg.guard);
                if (wo.status != CondStatus::pass) return false;
                auto bc = cond_block_cost_relative(plan.seed, k, eps, m_prev, M, blk.window_hi,
                                                   cfg.guard);
                if (bc.status != CondStatus::pass) return false;
                auto ts = cond_tail_slack(plan.seed, k, eps, M, cfg.guard);
                if (ts.status != CondStatus::pass) return false;
                if (cfg.strict_proxies) {
                    auto pd = cond_position_decay(plan.seed, k, eps, m_prev, M, true);
                    if (pd.status != CondStatus::pass) return false;
                    auto ws = cond_window_span(k, eps, blk, true);
                    if (ws.status != CondStatus::pass) return false;
                }
                return true;
            };
            if (!m_gates_pass(band_hi)) continue;
            u64 lo = band_lo, hi = band_hi;
            if (m_gates_pass(lo)) {
                hi = lo;
            } else {
                while (hi - lo > 1) {
                    u64 mid = lo + (hi - lo) / 2;
                    if (m_gates_pass(mid)) hi = mid; else lo = mid;
                }
            }
            chosen_m = hi;
            blk.position = BigInt(chosen_m);
            chosen = std::move(blk);
        }

        if (!chosen) {
            plan.stop_reason = "no admissible position for block " + std::to_string(k) +
                               " within the search ceiling";
            break;
        }

        BigInt m_k = chosen->position;
        detail::append(plan.ledger, cond_window_order(plan.seed, k, m_prev, m_k, cfg.guard));
        detail::append(plan.ledger, cond_block_cost_relative(plan.seed, k, eps, m_prev, m_k,
                                                             chosen->window_hi, cfg.guard));
        detail::append(plan.ledger, cond_tail_slack(plan.seed, k, eps, m_k, cfg.guard));
        detail::append(plan.ledger, cond_tail_slack(plan.seed, k, eps, m_k, cfg.guard,
                                                    "tail_holder"));
        detail::append(plan.ledger,
                       cond_block_product(plan.seed, k, eps, m_prev, m_k, *chosen, cfg.guard));
        detail::append(plan.ledger, cond_density_horizon(k, eps, m_k, a_minus_thin, s,
                                                         plan.target_horizon_ratio));
        if (k >= 2)
            detail::append(plan.ledger,
                           cond_window_ratio(k, std::min(eps, cfg.window_tol), *chosen,
                                             plan.target_ratio, true));
        detail::append(plan.ledger, cond_position_decay(plan.seed, k, eps, m_prev, m_k,
                                                        cfg.strict_proxies));
        detail::append(plan.ledger, cond_window_span(k, eps, *chosen, cfg.strict_proxies));

        plan.blocks.push_back(std::move(*chosen));
        m_prev = m_k;
    }
    plan.prefix_complete = plan.k_built() == k_max;
    if (plan.prefix_complete) plan.stop_reason = "complete";
    return plan;
}

inline InsertionPlan plan_banach(const IntegerSet& s, std::vector<double> epsilons,
                                 unsigned k_max, const PlanConfig& cfg = {}) {
    if (k_max < 1) throw invalid_input("plan_banach: k_max must be >= 1");
    if (epsilons.size() < k_max) throw invalid_input("plan_banach: epsilon schedule too short");

    InsertionPlan plan;
    plan.kind = PlanKind::banach;
    plan.epsilons.assign(epsilons.begin(), epsilons.begin() + k_max);
    plan.k_requested = k_max;
    plan.insert_src = s;
    plan.s_ref = intsets::build_set(SetSpec::naturals_spec());

    // Banach target over the largest width the schedule will use
    std::vector<u64> widths;
    for (unsigned k = 0; k < k_max; ++k) widths.push_back(cfg.banach_base_width + k + 1);
    auto ban = density::banach_density_est(s, cfg.est_horizon, widths);
    if (!(ban.value > 0)) throw invalid_input("plan_banach: zero Banach density");
    plan.target_ratio = static_cast<double>(ban.value);

    auto up = density::upper_density_est(s, cfg.est_horizon);
    if (up.value > 0.05) {
        ConditionResult adv{"planner_advisory", 0, CondStatus::pass, 0, false,
                            "upper density positive: the relative planner covers this case"};
        plan.ledger.push_back(adv);
    }

    // seed over the complement's thin subset
    auto comp = intsets::build_set(SetSpec::complement_spec(s.spec()), cfg.sieve_horizon);
    auto fit = intsets::fit_poly_density(comp, Rational(1), Rational(0),
                                         std::max<u64>(10, cfg.est_horizon / 1000),
                                         cfg.est_horizon);
    moran::SearchConfig scfg;
    scfg.guard = cfg.guard;
    plan.seed = moran::choose_seed_params(fit, comp, cfg.seed_horizon, scfg);
    plan.base = thinning::make_thinned_set(comp);

    // window scan: M_0 gated by the first window ratio; each further M_k by
    // the k-th block conditions plus the (k+1)-th window ratio
    auto window_block = [&](unsigned k, const BigInt& start, const BigInt& len) {
        PlanBlock blk;
        blk.k = k;
        blk.window_lo = start;
        blk.window_hi = start + len;
        blk.width = len;
        bool exact = true;
        blk.elements =
            detail::window_elements(s, blk.window_lo, blk.window_hi, cfg.block_cap, exact);
        blk.count = BigInt(blk.elements.size());
        blk.denom_count = len + 1;
        blk.materialized = true;
        blk.thin_excluded = true;
        blk.ratio = BigInt(blk.count).get_d() / blk.denom_count.get_d();
        return blk;
    };

    // Index idx selects position M_idx and (for idx < k_max) the window
    // I_{idx+1} = [M_idx, M_idx + N_idx]; block k needs both its window
    // (chosen at idx = k-1) and its insertion position (chosen at idx = k).
    std::vector<BigInt> m(k_max + 1), n(k_max + 1);
    std::vector<PlanBlock> pending;  // pending[idx] = window block for k = idx+1
    unsigned chosen = 0;             // indices successfully selected
    for (unsigned idx = 0; idx <= k_max; ++idx) {
        BigInt n_idx = cfg.banach_base_width + idx;
        double win_eps = idx < k_max ? plan.epsilons[idx] : plan.epsilons.back();
        double tol = std::min(win_eps, cfg.window_tol);
        BigInt start = idx == 0 ? BigInt(1) : m[idx - 1] + n[idx - 1] + 1;
        if (idx >= 1) {
            double eps_k = plan.epsilons[idx - 1];
            BigInt lo_gate(static_cast<unsigned long>(std::floor(6.0 / eps_k)) + 1);
            if (start < lo_gate) start = lo_gate;
        }
        bool found = false;
        for (BigInt cand = start; cand <= BigInt(cfg.scan_ceiling); ++cand) {
            if (idx >= 1) {
                double eps_k = plan.epsilons[idx - 1];
                auto ts = cond_tail_slack(plan.seed, idx, eps_k, cand, cfg.guard);
                if (ts.status != CondStatus::pass) continue;
                auto bc = cond_block_cost_banach(plan.seed, idx, eps_k, m[idx - 1], cand,
                                                 n[idx - 1], m[idx - 1] + n[idx - 1],
                                                 cfg.guard);
                if (bc.status != CondStatus::pass) continue;
            }
            if (idx < k_max) {
                auto blk = window_block(idx + 1, cand, n_idx);
                auto wr = cond_window_ratio(idx + 1, tol, blk, plan.target_ratio, true);
                if (wr.status != CondStatus::pass) continue;
                pending.push_back(std::move(blk));
            }
            m[idx] = cand;
            n[idx] = n_idx;
            found = true;
            break;
        }
        if (!found) {
            plan.stop_reason = "no admissible window/position at index " + std::to_string(idx);
            break;
        }
        chosen = idx + 1;
    }

    const unsigned built = chosen == 0 ? 0 : std::min(k_max, chosen - 1);
    for (unsigned k = 1; k <= built; ++k) {
        PlanBlock blk = pending[k - 1];
        blk.position = m[k];
        double eps_k = plan.epsilons[k - 1];
        detail::append(plan.ledger, [&] {
            ConditionResult c{"window_order", k, CondStatus::pass, 0, true,
                              "windows disjoint and increasing"};
            c.margin = detail::ld(m[k] - (m[k - 1] + n[k - 1]));
            if (c.margin <= 0) c.status = CondStatus::fail;
            return c;
        }());
        detail::append(plan.ledger,
                       cond_block_cost_banach(plan.seed, k, eps_k, m[k - 1], m[k], n[k - 1],
                                              m[k - 1] + n[k - 1], cfg.guard));
        detail::append(plan.ledger, cond_tail_slack(plan.seed, k, eps_k, m[k], cfg.guard));
        detail::append(plan.ledger,
                       cond_tail_slack(plan.seed, k, eps_k, m[k], cfg.guard, "tail_holder"));
        detail::append(plan.ledger,
                       cond_block_product(plan.seed, k, eps_k, m[k - 1], m[k], blk, cfg.guard));
        detail::append(plan.ledger,
                       cond_window_ratio(k, std::min(eps_k, cfg.window_tol), blk,
                                         plan.target_ratio, true));
        plan.blocks.push_back(std::move(blk));
        plan.banach_lengths.push_back(n[k - 1]);
    }
    plan.prefix_complete = built == k_max;
    if (plan.prefix_complete) plan.stop_reason = "complete";
    return plan;
}

// ---------------------------------------------------------------------------
// verification

struct PlanLedger {
    std::vector<ConditionResult> conditions;
    bool pass = false;           // all gating conditions pass
    bool diagnostics_ok = false; // the decay diagnostics pass as well
};

inline PlanLedger verify_plan(const InsertionPlan& plan, long double guard = 1e-9L) {
    PlanLedger out;
    BigInt m_prev = 0;
    for (std::size_t i = 0; i < plan.blocks.size(); ++i) {
        const auto& blk = plan.blocks[i];
        unsigned k = blk.k;
        double eps = plan.epsilons[k - 1];
        if (plan.kind == PlanKind::relative) {
            out.conditions.push_back(cond_window_order(plan.seed, k, m_prev, blk.position, guard));
            out.conditions.push_back(cond_block_cost_relative(plan.seed, k, eps, m_prev,
                                                              blk.position, blk.window_hi,
                                                              guard));
        } else {
            ConditionResult c{"window_order", k, CondStatus::pass, 0, true, ""};
            BigInt prev_end = (i == 0) ? BigInt(0) : plan.blocks[i - 1].window_hi;
            c.margin = detail::ld(blk.window_lo - prev_end);
            if (i > 0 && blk.window_lo <= prev_end) c.status = CondStatus::fail;
            out.conditions.push_back(c);
            out.conditions.push_back(cond_block_cost_banach(plan.seed, k, eps, m_prev,
                                                            blk.position, blk.width,
                                                            blk.window_hi, guard));
        }
        out.conditions.push_back(cond_tail_slack(plan.seed, k, eps, blk.position, guard));
        out.conditions.push_back(
            cond_tail_slack(plan.seed, k, eps, blk.position, guard, "tail_holder"));
        out.conditions.push_back(
            cond_block_product(plan.seed, k, eps, m_prev, blk.position, blk, guard));
        if (plan.kind == PlanKind::relative) {
            out.conditions.push_back(cond_position_decay(plan.seed, k, eps, m_prev,
                                                         blk.position, false));
            out.conditions.push_back(cond_window_span(k, eps, blk, false));
        }
        m_prev = blk.position;
    }
    out.pass = true;
    out.diagnostics_ok = true;
    for (const auto& c : out.conditions) {
        if (c.gating && c.status != CondStatus::pass) out.pass = false;
        if (!c.gating && c.status != CondStatus::pass) out.diagnostics_ok = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// splice / eliminate

struct SpliceResult {
    cfcore::DigitWord word;
    bool noop = false;  // input shorter than the first block position
};

inline void validate_seed_word(const InsertionPlan& plan, const cfcore::DigitWord& y) {
    y.validate();
    if (!y.regular()) throw invalid_input("seed words are regular digit words");
    BigInt tn = 1;
    for (std::size_t i = 0; i < y.size(); ++i) {
        tn *= plan.seed.t;
        BigInt hi = floor_rat(plan.seed.L * Rational(tn));
        const BigInt& d = y.digits[i];
        if (d < tn || d > hi)
            throw invalid_input("seed digit at position " + std::to_string(i + 1) +
                                " escapes its window");
        if (!plan.base.contains(d))
            throw invalid_input("seed digit at position " + std::to_string(i + 1) +
                                " is not in the base set");
    }
}

inline SpliceResult splice(const InsertionPlan& plan, const cfcore::DigitWord& y) {
    validate_seed_word(plan, y);
    SpliceResult out;
    const BigInt len(y.size());
    if (plan.blocks.empty() || len < plan.blocks.front().position) {
        out.word = y;
        out.noop = true;
        return out;
    }
    std::vector<BigInt> digits;
    std::size_t next_block = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        digits.push_back(y.digits[i]);
        while (next_block < plan.blocks.size() &&
               plan.blocks[next_block].position == BigInt(i + 1)) {
            const auto& blk = plan.blocks[next_block];
            if (!blk.materialized)
                throw resource_limit("block " + std::to_string(blk.k) +
                                     " is not materialized; cannot splice through it");
            for (const auto& w : blk.elements) digits.push_back(w);
            ++next_block;
        }
    }
    out.word = cfcore::DigitWord(std::move(digits));
    return out;
}

inline cfcore::DigitWord eliminate(const InsertionPlan& plan, const cfcore::DigitWord& x) {
    x.validate();
    std::vector<BigInt> digits;
    std::size_t i = 0;            // index into x
    BigInt seed_pos = 0;          // seed digits emitted
    std::size_t next_block = 0;
    while (i < x.size()) {
        digits.push_back(x.digits[i]);
        ++i;
        ++seed_pos;
        while (next_block < plan.blocks.size() &&
               plan.blocks[next_block].position == seed_pos && i < x.size()) {
            const auto& blk = plan.blocks[next_block];
            if (!blk.materialized)
                throw resource_limit("block " + std::to_string(blk.k) +
                                     " is not materialized; cannot eliminate through it");
            for (const auto& w : blk.elements) {
                if (i >= x.size())
                    throw structural_error("word ends inside an inserted block", BigInt(i + 1));
                if (x.digits[i] != w)
                    throw structural_error("digit does not match the inserted block",
                                           BigInt(i + 1));
                ++i;
            }
            ++next_block;
        }
    }
    return cfcore::DigitWord(std::move(digits));
}

// ---------------------------------------------------------------------------
// Hoelder certification

struct HolderSample {
    BigInt n;                 // first differing seed position - 1 (words agree through n)
    long double ln_sep_x = 0; // log of the exact separating-interval diameter
    long double ln_pref_y = 0;// log of the exact common-prefix diameter
    long double margin = 0;   // ln sep - ln D_k - (1+4 eps) ln pref
};

struct HolderReport {
    unsigned k = 0;
    double eps = 0;
    long double ln_d_k = 0;  // log of the proof's product constant
    long double ln_c_k = 0;  // ln D_k / (1 + 4 eps)
    std::vector<HolderSample> samples;
    long double worst_margin = 0;
    bool pass = false;
};

namespace detail {

// first few base digits available at each seed position
inline std::vector<std::vector<BigInt>> seed_window_heads(const InsertionPlan& plan,
                                                          std::size_t maxlen,
                                                          std::size_t head) {
    std::vector<std::vector<BigInt>> out(maxlen);
    BigInt tn = 1;
    for (std::size_t i = 0; i < maxlen; ++i) {
        tn *= plan.seed.t;
        BigInt hi = floor_rat(plan.seed.L * Rational(tn));
        auto& slot = out[i];
        plan.base.for_each(tn, hi, [&](const BigInt& v) {
            slot.push_back(v);
            return slot.size() < head;
        });
        if (slot.size() < 2)
            throw search_failure("seed window at position " + std::to_string(i + 1) +
                                 " too thin for sampling");
    }
    return out;
}

struct ConvergentTrack {
    std::vector<BigInt> p, q;  // p[i], q[i] after i digits; p[0]=0, q[0]=1
    ConvergentTrack() {
        p = {0};
        q = {1};
    }
    void push(const BigInt& digit, const BigInt& p_before_prev, const BigInt& q_before_prev) {
        p.push_back(digit * p.back() + p_before_prev);
        q.push_back(digit * q.back() + q_before_prev);
    }
    void extend(const BigInt& digit) {
        const std::size_t n = p.size();
        BigInt pp = n >= 2 ? p[n - 2] : BigInt(1);
        BigInt qq = n >= 2 ? q[n - 2] : BigInt(0);
        p.push_back(digit * p.back() + pp);
        q.push_back(digit * q.back() + qq);
    }
    // diameter of the fundamental interval after n digits: 1/(q_n (q_n + q_{n-1}))
    long double ln_diam(std::size_t n) const {
        const BigInt& qn = q[n];
        const BigInt& qn1 = n >= 1 ? q[n - 1] : q[0];
        return -(log_big(qn) + log_big(qn + qn1));
    }
};

}  // namespace detail

inline long double plan_ln_dk(const InsertionPlan& plan, unsigned k) {
    long double ln_t = log_big(plan.seed.t);
    long double acc = 0;
    BigInt m_prev = 0;
    for (unsigned j = 1; j <= k; ++j) {
        const auto& blk = plan.blocks[j - 1];
        acc += -3.0L * plan.epsilons[j - 1] * 2.0L *
               detail::ld(detail::segment_sum(m_prev, blk.position)) * ln_t;
        m_prev = blk.position;
    }
    return acc;
}

inline HolderReport empirical_holder(const InsertionPlan& plan, unsigned k, std::size_t samples) {
    if (k < 1 || k > plan.k_built())
        throw invalid_input("empirical_holder: k outside the materialized prefix");
    auto ledger = verify_plan(plan);
    if (!ledger.pass)
        throw invalid_input("empirical_holder: plan does not verify through its prefix");

    HolderReport rep;
    rep.k = k;
    rep.eps = plan.epsilons[k - 1];
    rep.ln_d_k = plan_ln_dk(plan, k);
    rep.ln_c_k = rep.ln_d_k / (1.0L + 4.0L * rep.eps);

    const u64 m_k = to_u64(plan.blocks[k - 1].position, "holder block position");
    u64 next_m = 0;
    if (k < plan.k_built()) next_m = to_u64(plan.blocks[k].position, "next block position");

    const std::size_t span = 24;
    const std::size_t tail_max = 3;
    std::size_t maxlen = m_k + span + tail_max + 2;
    if (next_m != 0) maxlen = std::min<std::size_t>(maxlen, next_m - 1);
    auto heads = detail::seed_window_heads(plan, maxlen, 4);

    // canonical seed word and its spliced image share convergent prefixes
    std::vector<BigInt> y_digits;
    for (std::size_t i = 0; i < maxlen; ++i) y_digits.push_back(heads[i][0]);
    cfcore::DigitWord y_canon{y_digits};
    auto x_canon = splice(plan, y_canon).word;

    detail::ConvergentTrack ytrack, xtrack;
    for (const auto& d : y_canon.digits) ytrack.extend(d);
    for (const auto& d : x_canon.digits) xtrack.extend(d);

    // x-position of seed position n: n + total size of blocks at positions <= n
    auto x_pos = [&](u64 n) {
        u64 shift = 0;
        for (const auto& blk : plan.blocks)
            if (blk.position <= BigInt(n)) shift += to_u64(blk.count);
        return n + shift;
    };

    std::size_t made = 0;
    for (std::size_t trial = 0; made < samples; ++trial) {
        u64 n = m_k + (trial % span);                       // words agree through n
        std::size_t pick = (trial / span) % 3;              // which pair of digits differs
        std::size_t tail = (trial / (span * 3)) % (tail_max + 1);
        if (n + 1 + tail > maxlen) { continue; }
        const auto& head = heads[n];                         // window at position n+1
        if (head.size() < pick + 2) continue;
        const BigInt& a1 = head[pick];

        // separating interval: canonical x-prefix through x_pos(n), digit a1+1
        u64 px = x_pos(n);
        BigInt sep_q = (a1 + 1) * xtrack.q[px] + (px >= 1 ? xtrack.q[px - 1] : BigInt(0));
        long double ln_sep =
            -(log_big(sep_q) + log_big(sep_q + xtrack.q[px]));

        HolderSample smp;
        smp.n = BigInt(n);
        smp.ln_sep_x = ln_sep;
        smp.ln_pref_y = ytrack.ln_diam(n);
        smp.margin = smp.ln_sep_x - rep.ln_d_k -
                     (1.0L + 4.0L * rep.eps) * smp.ln_pref_y;
        rep.samples.push_back(smp);
        ++made;
        if (trial > samples * 8) break;
    }
    if (rep.samples.empty()) throw search_failure("holder sampling produced no pairs");
    rep.worst_margin = rep.samples.front().margin;
    for (const auto& s : rep.samples) rep.worst_margin = std::min(rep.worst_margin, s.margin);
    rep.pass = rep.worst_margin >= 0;
    return rep;
}

}  // namespace cftrans::insertion
