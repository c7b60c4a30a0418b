// Finite-horizon density estimators.
//
// Every limsup-style quantity is proxied deterministically by a max over the
// tail half of the horizon [ceil(N/2), N]; liminf quantities use the min.
// The convention is recorded inside each estimate, since the defining
// expressions are genuine limits with no canonical finite form.
//
//   upper density        limsup #(S cap [1,N]) / N
//   upper Banach density limsup over sliding windows of window density
//   relative density     limsup #(A cap [1,N]) / #(S cap [1,N]),  A subset S
//   convergence exponent limsup log n / log a_n  (elements a_1 < a_2 < ...)
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cftrans/intsets.hpp"
#include "cftrans/numeric.hpp"

namespace cftrans::density {

using intsets::IntegerSet;
using u64 = std::uint64_t;

enum class DensityKind { upper, lower, banach, relative, convergence_exponent };

inline const char* kind_name(DensityKind k) {
    switch (k) {
        case DensityKind::upper: return "upper";
        case DensityKind::lower: return "lower";
        case DensityKind::banach: return "banach";
        case DensityKind::relative: return "relative";
        case DensityKind::convergence_exponent: return "convergence_exponent";
    }
    return "?";
}

struct WindowHit {
    u64 width = 0;
    u64 offset = 0;       // smallest M attaining the max
    long double value = 0;
};

struct DensityEstimate {
    DensityKind kind = DensityKind::upper;
    u64 horizon = 0;
    long double value = 0;
    u64 achieving_n = 0;  // point in the tail window attaining the extremum
    std::string convention;
    std::vector<std::pair<u64, double>> profile;
    std::vector<WindowHit> windows;  // banach only
};

namespace detail {
inline void sample_profile(DensityEstimate& est, u64 n, long double ratio) {
    constexpr std::size_t cap = 256;
    if (est.profile.size() < cap)
        est.profile.emplace_back(n, static_cast<double>(ratio));
    else {
        // thin by dropping every other point and doubling the stride
        std::vector<std::pair<u64, double>> kept;
        kept.reserve(cap);
        for (std::size_t i = 0; i < est.profile.size(); i += 2) kept.push_back(est.profile[i]);
        est.profile = std::move(kept);
        est.profile.emplace_back(n, static_cast<double>(ratio));
    }
}
}  // namespace detail

inline DensityEstimate upper_density_est(const IntegerSet& s, u64 n_horizon) {
    if (n_horizon < 2) throw invalid_input("upper_density_est: horizon must be >= 2");
    DensityEstimate est;
    est.kind = DensityKind::upper;
    est.horizon = n_horizon;
    est.convention = "max of count(n)/n over n in [ceil(N/2), N]";
    const u64 n0 = (n_horizon + 1) / 2;
    u64 cnt = s.count_u64(n0);
    long double best = static_cast<long double>(cnt) / n0;
    est.achieving_n = n0;
    detail::sample_profile(est, n0, best);
    // count(n)/n can only rise at element positions
    s.for_each_u64(n0 + 1, n_horizon, [&](u64 v) {
        ++cnt;
        long double r = static_cast<long double>(cnt) / v;
        detail::sample_profile(est, v, r);
        if (r > best) { best = r; est.achieving_n = v; }
        return true;
    });
    est.value = best;
    return est;
}

inline DensityEstimate lower_density_est(const IntegerSet& s, u64 n_horizon) {
    if (n_horizon < 2) throw invalid_input("lower_density_est: horizon must be >= 2");
    DensityEstimate est;
    est.kind = DensityKind::lower;
    est.horizon = n_horizon;
    est.convention = "min of count(n)/n over n in [ceil(N/2), N]";
    const u64 n0 = (n_horizon + 1) / 2;
    u64 cnt = s.count_u64(n0);
    long double best = static_cast<long double>(cnt) / n0;
    // count(n)/n dips just before each element and at the horizon
    s.for_each_u64(n0 + 1, n_horizon, [&](u64 v) {
        long double r = static_cast<long double>(cnt) / (v - 1);
        if (r < best) best = r;
        ++cnt;
        return true;
    });
    best = std::min(best, static_cast<long double>(cnt) / n_horizon);
    est.value = best;
    return est;
}

// Windows are w consecutive integers [M, M+w-1], so values stay in [0,1].
inline DensityEstimate banach_density_est(const IntegerSet& s, u64 n_horizon,
                                          std::vector<u64> widths) {
    if (widths.empty()) throw invalid_input("banach_density_est: need at least one width");
    for (u64 w : widths)
        if (w == 0 || w > n_horizon) throw invalid_input("banach width out of range");
    DensityEstimate est;
    est.kind = DensityKind::banach;
    est.horizon = n_horizon;
    est.convention =
        "per width w: max over M of #(S cap [M, M+w-1])/w; value from the largest width";

    std::vector<u64> elems;
    s.for_each_u64(1, n_horizon, [&](u64 v) {
        if (elems.size() >= (u64(1) << 27)) throw resource_limit("banach horizon too dense");
        elems.push_back(v);
        return true;
    });

    std::sort(widths.begin(), widths.end());
    for (u64 w : widths) {
        WindowHit hit{w, 1, 0.0L};
        u64 best_inside = 0;
        std::size_t lo = 0;
        for (std::size_t hi = 0; hi < elems.size(); ++hi) {
            // window ending at elems[hi]: [elems[hi]-w+1, elems[hi]]
            u64 wlo = elems[hi] >= w ? elems[hi] - w + 1 : 1;
            while (elems[lo] < wlo) ++lo;
            u64 inside = static_cast<u64>(hi - lo + 1);
            if (inside > best_inside) {
                best_inside = inside;
                hit.offset = wlo;
            }
        }
        hit.value = static_cast<long double>(best_inside) / w;
        est.windows.push_back(hit);
    }
    est.value = est.windows.back().value;
    return est;
}

inline DensityEstimate relative_density_est(const IntegerSet& a, const IntegerSet& s,
                                            u64 n_horizon) {
    if (n_horizon < 2) throw invalid_input("relative_density_est: horizon must be >= 2");
    // containment gate: A subset of S on [1, N]
    a.for_each_u64(1, n_horizon, [&](u64 v) {
        if (!s.contains(BigInt(v)))
            throw invalid_input("relative density: A is not contained in S at " +
                                std::to_string(v));
        return true;
    });
    if (s.count_u64(n_horizon) == 0)
        throw invalid_input("relative density: S empty on horizon");

    DensityEstimate est;
    est.kind = DensityKind::relative;
    est.horizon = n_horizon;
    est.convention = "max of #(A cap [1,n]) / #(S cap [1,n]) over n in [ceil(N/2), N]";
    const u64 n0 = (n_horizon + 1) / 2;
    u64 ca = a.count_u64(n0);
    u64 cs = s.count_u64(n0);
    long double best = cs ? static_cast<long double>(ca) / cs : 0.0L;
    est.achieving_n = n0;
    detail::sample_profile(est, n0, best);
    s.for_each_u64(n0 + 1, n_horizon, [&](u64 v) {
        ++cs;
        if (a.contains(BigInt(v))) ++ca;
        long double r = static_cast<long double>(ca) / cs;
        detail::sample_profile(est, v, r);
        if (r > best) { best = r; est.achieving_n = v; }
        return true;
    });
    est.value = best;
    return est;
}

inline DensityEstimate convergence_exponent_est(const IntegerSet& s, u64 n_horizon) {
    DensityEstimate est;
    est.kind = DensityKind::convergence_exponent;
    est.horizon = n_horizon;
    est.convention = "max of log i / log a_i over the top half of indices, elements <= N";
    const u64 total = s.count_u64(n_horizon);
    if (total < 10) throw invalid_input("convergence exponent: need at least 10 elements");
    const u64 i0 = (total + 1) / 2;
    u64 idx = i0 - 1;
    long double best = 0;
    s.for_each_u64(to_u64(s.nth(BigInt(i0))), n_horizon, [&](u64 v) {
        ++idx;
        if (v >= 2) {
            long double r = std::log(static_cast<long double>(idx)) /
                            std::log(static_cast<long double>(v));
            if (r > best) { best = r; est.achieving_n = v; }
            detail::sample_profile(est, v, r);
        }
        return true;
    });
    est.value = best;
    return est;
}

}  // namespace cftrans::density
