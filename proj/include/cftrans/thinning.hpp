// Relatively thin subsets via the factorial-block index set
//
//     Q = union over k >= 2 of { k! + i k : i = 0, ..., k! - 1 }.
//
// Split [k!, (k+1)!) into consecutive runs of k integers; Q collects the left
// endpoints, so Q has local density 1/k there and never contains consecutive
// integers. With nu(xi) = k for xi in [k!, (k+1)!), the count obeys
//
//     xi / (2 nu(xi))  <=  #(Q cap [1, xi])  <=  3 xi / nu(xi)
//
// for all xi past a small threshold, which this module measures exactly.
// The thin subset of S keeps the elements of S whose rank lies in Q.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cftrans/intsets.hpp"
#include "cftrans/numeric.hpp"

namespace cftrans::thinning {

using intsets::IntegerSet;
using intsets::SetSpec;
using u64 = std::uint64_t;

inline unsigned nu(const BigInt& xi) { return nu_of(xi); }
inline unsigned nu(u64 xi) { return nu_of(BigInt(xi)); }

inline bool q_contains(const BigInt& n) {
    if (n < 2) return false;
    unsigned k = nu_of(n);
    if (k < 2) return false;
    return (n - factorial(k)) % k == 0;
}

// #(Q cap [1, x])
inline BigInt q_count(const BigInt& x) {
    if (x < 2) return 0;
    unsigned k = nu_of(x);
    if (k < 2) return 0;
    BigInt full = 0;
    for (unsigned j = 2; j < k; ++j) full += factorial(j);
    return full + (x - factorial(k)) / k + 1;
}

// smallest element of Q that is >= x
inline BigInt q_next(const BigInt& x) {
    if (x <= 2) return 2;
    unsigned k = nu_of(x);
    if (k < 2) return 2;
    const BigInt& base = factorial(k);
    BigInt i = (x - base + k - 1) / k;
    if (i <= factorial(k) - 1) return base + i * k;
    return factorial(k + 1);  // next block start
}

inline BigInt q_nth(const BigInt& i) {
    if (i < 1) throw invalid_input("q_nth: index must be >= 1");
    unsigned k = 2;
    BigInt skipped = 0;
    while (skipped + factorial(k) < i) {
        skipped += factorial(k);
        ++k;
    }
    return factorial(k) + (i - skipped - 1) * k;
}

template <class F>
inline void q_for_each(const BigInt& lo, const BigInt& hi, F&& fn) {
    for (BigInt v = q_next(lo); v <= hi;) {
        if (!fn(v)) return;
        unsigned k = nu_of(v);
        BigInt nxt = v + k;
        v = (nxt <= factorial(k + 1) - k) ? nxt : factorial(k + 1);
    }
}

// Exhaustive scan of the count sandwich over integer xi in [1, limit],
// covering real xi up to limit+1 (the upper bound is tightest at integers,
// the lower bound just below them). Returns the first point from which the
// sandwich holds through the end of the scanned range.
inline u64 q_sandwich_first_valid(u64 limit) {
    u64 last_fail = 0;
    BigInt cnt = 0;
    unsigned k = 1;
    BigInt next_fact = factorial(2);
    for (u64 m = 1; m <= limit; ++m) {
        if (BigInt(m) >= next_fact) {
            ++k;
            next_fact = factorial(k + 1);
        }
        if (q_contains(BigInt(m))) ++cnt;
        // upper: count(m) * nu(m) <= 3 m ; lower: 2 count(m) nu(m) >= m+1
        BigInt cn = cnt * k;
        if (!(cn <= 3 * BigInt(m) && 2 * cn >= BigInt(m) + 1)) last_fail = m;
    }
    return last_fail + 1;
}

struct ThinningResult {
    u64 bound = 0;
    std::vector<u64> q_indices;                    // Q cap [1, bound]
    std::vector<BigInt> values;                    // {a_n : n in Q}, a_n the n-th element of S
    u64 sandwich_from = 0;                         // first xi with the sandwich verified onward
    std::vector<std::pair<u64, unsigned>> nu_table;
};

inline ThinningResult thin_subset(const IntegerSet& s, u64 bound) {
    if (bound < 2) throw invalid_input("thin_subset: bound must be >= 2");
    ThinningResult out;
    out.bound = bound;
    q_for_each(BigInt(1), BigInt(bound), [&](const BigInt& q) {
        out.q_indices.push_back(to_u64(q));
        return true;
    });
    out.values.reserve(out.q_indices.size());
    for (u64 q : out.q_indices) out.values.push_back(s.nth(BigInt(q)));
    out.sandwich_from = q_sandwich_first_valid(bound);
    for (u64 xi = 1; xi <= bound; xi *= 2) out.nu_table.emplace_back(xi, nu(xi));
    if (out.nu_table.empty() || out.nu_table.back().first != bound)
        out.nu_table.emplace_back(bound, nu(bound));
    return out;
}

// ---------------------------------------------------------------------------
// thinned sets as first-class handles: S_* = { a_n : n in Q } for S = {a_n}

class ThinnedImpl final : public intsets::SetImpl {
public:
    explicit ThinnedImpl(std::shared_ptr<const intsets::SetImpl> inner)
        : inner_(std::move(inner)) {}

    BigInt count(const BigInt& x) const override { return q_count(inner_->count(x)); }
    bool contains(const BigInt& x) const override {
        return inner_->contains(x) && q_contains(inner_->count(x));
    }
    BigInt nth(const BigInt& i) const override { return inner_->nth(q_nth(i)); }
    std::optional<BigInt> horizon() const override { return inner_->horizon(); }
    void for_each(const BigInt& lo, const BigInt& hi,
                  const std::function<bool(const BigInt&)>& fn) const override {
        if (hi < lo) return;
        BigInt r_lo = inner_->count(lo - 1) + 1;
        BigInt r_hi = inner_->count(hi);
        bool go = true;
        q_for_each(r_lo, r_hi, [&](const BigInt& rank) {
            go = fn(inner_->nth(rank));
            return go;
        });
    }

private:
    std::shared_ptr<const intsets::SetImpl> inner_;
};

inline IntegerSet make_thinned_set(const IntegerSet& s) {
    return {SetSpec::thinned_spec(s.spec()), std::make_shared<ThinnedImpl>(s.impl_ptr())};
}

}  // namespace cftrans::thinning
