// Integer-set generators and query engines.
//
// Every set handle answers, over [1, N] (or unbounded for closed-form kinds):
//   count(x)   = #(S ∩ [1,x])          contains(x)
//   nth(i)     = i-th smallest element  ascending enumeration
// with the consistency contract nth(count(x)) <= x < nth(count(x)+1).
//
// Closed-form kinds (naturals, residue classes, squares, square blocks,
// Piatetski-Shapiro) answer at arbitrary-precision arguments; sieved kinds
// (primes, primes of the form x^2+y^2+1) answer up to their build horizon,
// plus windowed sieving for far-out intervals that fit in 64 bits.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cftrans/numeric.hpp"

namespace cftrans::intsets {

using u64 = std::uint64_t;

// ---------------------------------------------------------------------------
// specs

enum class Kind {
    naturals,
    residue,           // {n >= 1 : n = r (mod m)}
    squares,
    square_blocks,     // union over n of [n^2, n^2 + floor(sqrt(n))]
    primes,
    p1_primes,         // primes p = x^2 + y^2 + 1, x, y >= 1
    piatetski_shapiro, // {floor(n^alpha)}, alpha rational > 1
    file,
    explicit_list,
    complement,        // N \ inner
    intersect_interval,
    residue_filter,    // {n in inner : n = r (mod m)}
    thinned,           // values of inner indexed by the factorial-block set
    custom,
};

struct SetSpec {
    Kind kind = Kind::naturals;
    BigInt modulus = 0;
    BigInt residue = 0;
    Rational alpha = Rational(0);
    std::string path;
    std::vector<BigInt> elements;
    std::shared_ptr<SetSpec> inner;
    BigInt lo = 0, hi = 0;
    std::string label;  // for custom kinds

    static SetSpec naturals_spec() { return SetSpec{}; }
    static SetSpec residue_spec(BigInt m, BigInt r) {
        SetSpec s; s.kind = Kind::residue; s.modulus = std::move(m); s.residue = std::move(r);
        return s;
    }
    static SetSpec evens_spec() { return residue_spec(2, 0); }
    static SetSpec squares_spec() { SetSpec s; s.kind = Kind::squares; return s; }
    static SetSpec square_blocks_spec() { SetSpec s; s.kind = Kind::square_blocks; return s; }
    static SetSpec primes_spec() { SetSpec s; s.kind = Kind::primes; return s; }
    static SetSpec p1_primes_spec() { SetSpec s; s.kind = Kind::p1_primes; return s; }
    static SetSpec ps_spec(Rational a) {
        SetSpec s; s.kind = Kind::piatetski_shapiro; s.alpha = std::move(a); return s;
    }
    static SetSpec explicit_spec(std::vector<BigInt> xs) {
        SetSpec s; s.kind = Kind::explicit_list; s.elements = std::move(xs); return s;
    }
    static SetSpec file_spec(std::string p) {
        SetSpec s; s.kind = Kind::file; s.path = std::move(p); return s;
    }
    static SetSpec complement_spec(SetSpec in) {
        SetSpec s; s.kind = Kind::complement; s.inner = std::make_shared<SetSpec>(std::move(in));
        return s;
    }
    static SetSpec intersect_spec(SetSpec in, BigInt lo, BigInt hi) {
        SetSpec s; s.kind = Kind::intersect_interval;
        s.inner = std::make_shared<SetSpec>(std::move(in));
        s.lo = std::move(lo); s.hi = std::move(hi);
        return s;
    }
    static SetSpec residue_filter_spec(SetSpec in, BigInt m, BigInt r) {
        SetSpec s; s.kind = Kind::residue_filter;
        s.inner = std::make_shared<SetSpec>(std::move(in));
        s.modulus = std::move(m); s.residue = std::move(r);
        return s;
    }
    static SetSpec thinned_spec(SetSpec in) {
        SetSpec s; s.kind = Kind::thinned; s.inner = std::make_shared<SetSpec>(std::move(in));
        return s;
    }
};

// ---------------------------------------------------------------------------
// sieve machinery

inline std::vector<u64> simple_sieve(u64 limit) {
    std::vector<u64> primes;
    if (limit < 2) return primes;
    std::vector<char> mark(limit + 1, 1);
    mark[0] = mark[1] = 0;
    for (u64 i = 2; i * i <= limit; ++i)
        if (mark[i])
            for (u64 j = i * i; j <= limit; j += i) mark[j] = 0;
    for (u64 i = 2; i <= limit; ++i)
        if (mark[i]) primes.push_back(i);
    return primes;
}

inline u64 isqrt_u64(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Primes in [lo, hi], hi < 2^63; cost ~ sqrt(hi) for the base sieve.
inline std::vector<u64> sieve_window(u64 lo, u64 hi) {
    if (lo > hi) return {};
    if (lo < 2) lo = 2;
    if (hi - lo > (u64(1) << 28))
        throw resource_limit("sieve window wider than 2^28");
    auto base = simple_sieve(isqrt_u64(hi));
    std::vector<char> is_prime(hi - lo + 1, 1);
    for (u64 p : base) {
        u64 start = std::max(p * p, ((lo + p - 1) / p) * p);
        for (u64 j = start; j <= hi; j += p) is_prime[j - lo] = 0;
    }
    std::vector<u64> out;
    for (u64 v = lo; v <= hi; ++v)
        if (is_prime[v - lo] && v >= 2) out.push_back(v);
    return out;
}

// Bit sieve over [2, horizon] with per-block cumulative counts.
class PrimeTable {
public:
    explicit PrimeTable(u64 horizon) : horizon_(horizon) {
        if (horizon < 2) horizon_ = 2;
        if (horizon_ > (u64(1) << 33))
            throw resource_limit("prime table horizon above 2^33");
        bits_.assign(horizon_ / 2 + 1, true);  // bits_[i] ~ odd number 2i+1
        bits_[0] = false;                      // 1
        for (u64 i = 3; i * i <= horizon_; i += 2)
            if (bits_[i / 2])
                for (u64 j = i * i; j <= horizon_; j += 2 * i) bits_[j / 2] = false;
        cum_.reserve(bits_.size() / kBlock + 2);
        u64 run = 0;
        cum_.push_back(0);
        for (std::size_t i = 0; i < bits_.size(); ++i) {
            run += bits_[i];
            if ((i + 1) % kBlock == 0) cum_.push_back(run);
        }
        total_ = run;
    }

    u64 horizon() const { return horizon_; }

    bool contains(u64 x) const {
        if (x > horizon_) throw resource_limit("prime query beyond horizon");
        if (x == 2) return true;
        if (x < 2 || x % 2 == 0) return false;
        return bits_[x / 2];
    }

    u64 count(u64 x) const {  // pi(x)
        if (x > horizon_) throw resource_limit("prime count beyond horizon");
        if (x < 2) return 0;
        u64 idx = (std::min(x, horizon_) - 1) / 2;  // largest i with 2i+1 <= x
        u64 blocks = (idx + 1) / kBlock;
        u64 run = cum_[blocks];
        for (u64 i = blocks * kBlock; i <= idx; ++i) run += bits_[i];
        return run + 1;  // + the prime 2
    }

    template <class F>
    void for_each(u64 lo, u64 hi, F&& fn) const {
        hi = std::min(hi, horizon_);
        if (lo <= 2 && hi >= 2)
            if (!fn(u64(2))) return;
        u64 start = std::max<u64>(lo | 1, 3);
        for (u64 v = start; v <= hi; v += 2)
            if (bits_[v / 2])
                if (!fn(v)) return;
    }

private:
    static constexpr u64 kBlock = 4096;
    u64 horizon_;
    u64 total_ = 0;
    std::vector<bool> bits_;
    std::vector<u64> cum_;
};

// n = x^2 + y^2 with x, y >= 1  <=>  every prime factor = 3 (mod 4) occurs to
// an even power, and additionally n has a prime factor = 1 (mod 4) or an odd
// power of 2 (otherwise the only representations lie on the axes).
inline bool sum_of_two_positive_squares(u64 n, const std::vector<u64>& small_primes) {
    if (n == 0) return false;
    int two_exp = 0;
    while (n % 2 == 0) { n /= 2; ++two_exp; }
    bool has_one_mod4 = false;
    for (u64 p : small_primes) {
        if (p * p > n) break;
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        if (p % 4 == 3) {
            if (e % 2) return false;
        } else {
            has_one_mod4 = true;
        }
    }
    if (n > 1) {  // leftover prime
        if (n % 4 == 3) return false;
        has_one_mod4 = true;  // n = 1 (mod 4), since odd leftover
    }
    return has_one_mod4 || (two_exp % 2 == 1);
}

// ---------------------------------------------------------------------------
// handles

class SetImpl {
public:
    virtual ~SetImpl() = default;
    virtual BigInt count(const BigInt& x) const = 0;
    virtual bool contains(const BigInt& x) const = 0;
    virtual BigInt nth(const BigInt& i) const {
        if (i < 1) throw invalid_input("nth: index must be >= 1");
        BigInt lo = 1, hi = 1;
        auto cap = horizon();
        while (count(hi) < i) {
            if (cap && hi >= *cap) throw invalid_input("nth: index beyond horizon");
            hi *= 2;
            if (cap && hi > *cap) hi = *cap;
        }
        while (lo < hi) {
            BigInt mid = (lo + hi) / 2;
            if (count(mid) >= i) hi = mid; else lo = mid + 1;
        }
        return lo;
    }
    // Ascending visit of S over [lo, hi]; fn returns false to stop.
    virtual void for_each(const BigInt& lo, const BigInt& hi,
                          const std::function<bool(const BigInt&)>& fn) const {
        if (hi < lo) return;
        BigInt i = count(lo - 1) + 1, n = count(hi);
        for (; i <= n; ++i)
            if (!fn(nth(i))) return;
    }
    // 64-bit fast path used by the density estimators.
    virtual void for_each_u64(u64 lo, u64 hi, const std::function<bool(u64)>& fn) const {
        for_each(BigInt(lo), BigInt(hi), [&](const BigInt& v) { return fn(to_u64(v)); });
    }
    virtual std::optional<BigInt> horizon() const { return std::nullopt; }
};

class IntegerSet {
public:
    IntegerSet() = default;
    IntegerSet(SetSpec spec, std::shared_ptr<const SetImpl> impl)
        : spec_(std::move(spec)), impl_(std::move(impl)) {}

    const SetSpec& spec() const { return spec_; }
    bool valid() const { return impl_ != nullptr; }

    BigInt count(const BigInt& x) const { return impl_->count(x); }
    u64 count_u64(u64 x) const { return to_u64(impl_->count(BigInt(x)), "count"); }
    bool contains(const BigInt& x) const { return impl_->contains(x); }
    BigInt nth(const BigInt& i) const { return impl_->nth(i); }
    std::optional<BigInt> horizon() const { return impl_->horizon(); }

    void for_each(const BigInt& lo, const BigInt& hi,
                  const std::function<bool(const BigInt&)>& fn) const {
        impl_->for_each(lo, hi, fn);
    }
    void for_each_u64(u64 lo, u64 hi, const std::function<bool(u64)>& fn) const {
        impl_->for_each_u64(lo, hi, fn);
    }

    std::vector<BigInt> elements(const BigInt& lo, const BigInt& hi,
                                 std::size_t cap = std::size_t(-1)) const {
        std::vector<BigInt> out;
        impl_->for_each(lo, hi, [&](const BigInt& v) {
            if (out.size() >= cap) throw resource_limit("window materialization cap exceeded");
            out.push_back(v);
            return true;
        });
        return out;
    }

    const SetImpl& impl() const { return *impl_; }
    std::shared_ptr<const SetImpl> impl_ptr() const { return impl_; }

private:
    SetSpec spec_;
    std::shared_ptr<const SetImpl> impl_;
};

// --- closed-form kinds ------------------------------------------------------

class NaturalsImpl final : public SetImpl {
public:
    BigInt count(const BigInt& x) const override { return x < 0 ? BigInt(0) : x; }
    bool contains(const BigInt& x) const override { return x >= 1; }
    BigInt nth(const BigInt& i) const override {
        if (i < 1) throw invalid_input("nth: index must be >= 1");
        return i;
    }
    void for_each_u64(u64 lo, u64 hi, const std::function<bool(u64)>& fn) const override {
        for (u64 v = std::max<u64>(lo, 1); v <= hi; ++v)
            if (!fn(v)) return;
    }
    void for_each(const BigInt& lo, const BigInt& hi,
                  const std::function<bool(const BigInt&)>& fn) const override {
        for (BigInt v = std::max(lo, BigInt(1)); v <= hi; ++v)
            if (!fn(v)) return;
    }
};

class ResidueImpl final : public SetImpl {
public:
    ResidueImpl(BigInt m, BigInt r) : m_(std::move(m)), r_(std::move(r)) {
        if (m_ < 1 || r_ < 0 || r_ >= m_)
            throw invalid_input("residue class requires 0 <= r < m, m >= 1");
        first_ = (r_ == 0) ? m_ : r_;
    }
    BigInt count(const BigInt& x) const override {
        if (x < first_) return 0;
        return (x - first_) / m_ + 1;
    }
    bool contains(const BigInt& x) const override { return x >= 1 && x % m_ == r_; }
    BigInt nth(const BigInt& i) const override {
        if (i < 1) throw invalid_input("nth: index must be >= 1");
        return first_ + (i - 1) * m_;
    }
    void for_each(const BigInt& lo, const BigInt& hi,
                  const std::function<bool(const BigInt&)>& fn) const override {
        if (hi < first_) return;
        BigInt start = std::max(lo, first_);
        BigInt rem = (start - r_) % m_;
        if (rem != 0) start += m_ - rem;
        for (BigInt v = start; v <= hi; v += m_)
            if (!fn(v)) return;
    }
    void for_each_u64(u64 lo, u64 hi, const std::function<bool(u64)>& fn) const override {
        u64 m = to_u64(m_), r = to_u64(r_), first = to_u64(first_);
        u64 start = std::max(lo, first);
        u64 rem = (start - r) % m;
        if (rem != 0) start += m - rem;
        for (u64 v = start; v <= hi; v += m)
            if (!fn(v)) return;
    }

private:
    BigInt m_, r_, first_;
};

class SquaresImpl final : public SetImpl {
public:
    BigInt count(const BigInt& x) const override { return x < 1 ? BigInt(0) : isqrt(x); }
    bool contains(const BigInt& x) const override {
        if (x < 1) return false;
        BigInt r = isqrt(x);
        return r * r == x;
    }
    BigInt nth(const BigInt& i) const override {
        if (i < 1) throw invalid_input("nth: index must be >= 1");
        return i * i;
    }
};

// Union of blocks [n^2, n^2 + floor(sqrt(n))], n >= 1. Blocks are pairwise
// disjoint: n^2 + sqrt(n) < (n+1)^2.
class SquareBlocksImpl final : public SetImpl {
public:
    // sum_{n=1..m} floor(sqrt(n)), closed form
    static BigInt sum_floor_sqrt(const BigInt& m) {
        if (m < 1) return 0;
        BigInt s = isqrt(m);
        // sum_{j=1..s-1} j((j+1)^2 - j^2) + s(m - s^2 + 1)
        BigInt head = (s - 1) * s * (2 * (s - 1) + 1) / 3 + (s - 1) * s / 2;
        return head + s * (m - s * s + 1);
    }

    BigInt count(const BigInt& x) const override {
        if (x < 1) return 0;
        BigInt m = isqrt(x);  // block index containing or preceding x
        BigInt full = 0;
        if (m >= 2) full = (m - 1) + sum_floor_sqrt(m - 1);  // blocks 1..m-1 complete
        BigInt bstart = m * m;
        BigInt bend = bstart + isqrt(m);
        BigInt partial = std::min(x, bend) - bstart + 1;
        if (partial < 0) partial = 0;
        return full + partial;
    }
    bool contains(const BigInt& x) const override {
        if (x < 1) return false;
        BigInt n = isqrt(x);
        return x <= n * n + isqrt(n);
    }
};

class PiatetskiShapiroImpl final : public SetImpl {
public:
    explicit PiatetskiShapiroImpl(const Rational& alpha) : alpha_(alpha) {
        if (alpha <= 1) throw invalid_input("Piatetski-Shapiro exponent must be > 1");
        p_ = alpha.get_num().get_ui();
        q_ = alpha.get_den().get_ui();
        if (!alpha.get_num().fits_ulong_p() || !alpha.get_den().fits_ulong_p())
            throw invalid_input("Piatetski-Shapiro exponent out of range");
    }

    // floor(n^(p/q)) computed exactly as the integer q-th root of n^p
    BigInt value(const BigInt& n) const { return iroot(pow_big(n, p_), q_); }

    BigInt count(const BigInt& x) const override {
        if (x < 1) return 0;
        // #{n >= 1 : n^p < (x+1)^q}
        return iroot(pow_big(x + 1, q_) - 1, p_);
    }
    bool contains(const BigInt& x) const override {
        if (x < 1) return false;
        BigInt n = count(x);
        return n >= 1 && value(n) == x;
    }
    BigInt nth(const BigInt& i) const override {
        if (i < 1) throw invalid_input("nth: index must be >= 1");
        return value(i);  // strictly increasing for alpha > 1
    }
    void for_each(const BigInt& lo, const BigInt& hi,
                  const std::function<bool(const BigInt&)>& fn) const override {
        if (hi < lo) return;
        for (BigInt n = count(lo - 1) + 1;; ++n) {
            BigInt v = value(n);
            if (v > hi) return;
            if (!fn(v)) return;
        }
    }

    const Rational& alpha() const { return alpha_; }

private:
    Rational alpha_;
    unsigned long p_ = 0, q_ = 0;
};

class ExplicitImpl final : public SetImpl {
public:
    explicit ExplicitImpl(std::vector<BigInt> xs, bool require_sorted = false)
        : xs_(std::move(xs)) {
        if (require_sorted) {
            for (std::size_t i = 0; i < xs_.size(); ++i) {
                if (xs_[i] < 1) throw invalid_input("set elements must be positive");
                if (i && xs_[i] <= xs_[i - 1])
                    throw invalid_input("set file must be strictly ascending");
            }
        } else {
            std::sort(xs_.begin(), xs_.end());
            xs_.erase(std::unique(xs_.begin(), xs_.end()), xs_.end());
            if (!xs_.empty() && xs_.front() < 1)
                throw invalid_input("set elements must be positive");
        }
    }
    BigInt count(const BigInt& x) const override {
        return BigInt(std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin());
    }
    bool contains(const BigInt& x) const override {
        return std::binary_search(xs_.begin(), xs_.end(), x);
    }
    BigInt nth(const BigInt& i) const override {
        if (i < 1 || i > BigInt(xs_.size())) throw invalid_input("nth: index out of range");
        return xs_[i.get_ui() - 1];
    }
    void for_each(const BigInt& lo, const BigInt& hi,
                  const std::function<bool(const BigInt&)>& fn) const override {
        auto it = std::lower_bound(xs_.begin(), xs_.end(), lo);
        for (; it != xs_.end() && *it <= hi; ++it)
            if (!fn(*it)) return;
    }
    const std::vector<BigInt>& data() const { return xs_; }

private:
    std::vector<BigInt> xs_;
};

class ComplementImpl final : public SetImpl {
public:
    explicit ComplementImpl(std::shared_ptr<const SetImpl> inner) : inner_(std::move(inner)) {}
    BigInt count(const BigInt& x) const override {
        if (x < 1) return 0;
        return x - inner_->count(x);
    }
    bool contains(const BigInt& x) const override { return x >= 1 && !inner_->contains(x); }
    std::optional<BigInt> horizon() const override { return inner_->horizon(); }
    void for_each(const BigInt& lo, const BigInt& hi,
                  const std::function<bool(const BigInt&)>& fn) const override {
        for (BigInt v = std::max(lo, BigInt(1)); v <= hi; ++v)
            if (!inner_->contains(v))
                if (!fn(v)) return;
    }
    void for_each_u64(u64 lo, u64 hi, const std::function<bool(u64)>& fn) const override {
        // visit gaps between inner elements
        u64 cur = std::max<u64>(lo, 1);
        bool stopped = false;
        inner_->for_each_u64(cur, hi, [&](u64 e) {
            for (u64 v = cur; v < e && !stopped; ++v)
                if (!fn(v)) { stopped = true; }
            cur = e + 1;
            return !stopped;
        });
        for (u64 v = cur; v <= hi && !stopped; ++v)
            if (!fn(v)) stopped = true;
    }

private:
    std::shared_ptr<const SetImpl> inner_;
};

class IntervalImpl final : public SetImpl {
public:
    IntervalImpl(std::shared_ptr<const SetImpl> inner, BigInt lo, BigInt hi)
        : inner_(std::move(inner)), lo_(std::move(lo)), hi_(std::move(hi)) {
        if (lo_ < 1 || hi_ < lo_) throw invalid_input("interval: need 1 <= lo <= hi");
    }
    BigInt count(const BigInt& x) const override {
        if (x < lo_) return 0;
        return inner_->count(std::min(x, hi_)) - inner_->count(lo_ - 1);
    }
    bool contains(const BigInt& x) const override {
        return x >= lo_ && x <= hi_ && inner_->contains(x);
    }
    std::optional<BigInt> horizon() const override { return inner_->horizon(); }
    void for_each(const BigInt& lo, const BigInt& hi,
                  const std::function<bool(const BigInt&)>& fn) const override {
        inner_->for_each(std::max(lo, lo_), std::min(hi, hi_), fn);
    }

private:
    std::shared_ptr<const SetImpl> inner_;
    BigInt lo_, hi_;
};

class ResidueFilterImpl final : public SetImpl {
public:
    ResidueFilterImpl(std::shared_ptr<const SetImpl> inner, BigInt m, BigInt r)
        : inner_(std::move(inner)), m_(std::move(m)), r_(std::move(r)) {
        if (m_ < 1 || r_ < 0 || r_ >= m_) throw invalid_input("residue filter: need 0 <= r < m");
    }
    BigInt count(const BigInt& x) const override {  // linear in inner's count
        BigInt n = 0;
        inner_->for_each(1, x, [&](const BigInt& v) {
            if (v % m_ == r_) ++n;
            return true;
        });
        return n;
    }
    bool contains(const BigInt& x) const override {
        return x % m_ == r_ && inner_->contains(x);
    }
    std::optional<BigInt> horizon() const override { return inner_->horizon(); }
    void for_each(const BigInt& lo, const BigInt& hi,
                  const std::function<bool(const BigInt&)>& fn) const override {
        inner_->for_each(lo, hi, [&](const BigInt& v) {
            if (v % m_ == r_) return fn(v);
            return true;
        });
    }
    void for_each_u64(u64 lo, u64 hi, const std::function<bool(u64)>& fn) const override {
        u64 m = to_u64(m_), r = to_u64(r_);
        inner_->for_each_u64(lo, hi, [&](u64 v) {
            if (v % m == r) return fn(v);
            return true;
        });
    }

private:
    std::shared_ptr<const SetImpl> inner_;
    BigInt m_, r_;
};

class PrimesImpl final : public SetImpl {
public:
    explicit PrimesImpl(u64 horizon) : table_(std::make_shared<PrimeTable>(horizon)) {}
    explicit PrimesImpl(std::shared_ptr<PrimeTable> t) : table_(std::move(t)) {}

    BigInt count(const BigInt& x) const override {
        if (x < 2) return 0;
        return BigInt(table_->count(to_u64(x, "prime count argument")));
    }
    bool contains(const BigInt& x) const override {
        if (x < 2) return false;
        return table_->contains(to_u64(x, "prime membership argument"));
    }
    std::optional<BigInt> horizon() const override { return BigInt(table_->horizon()); }
    void for_each(const BigInt& lo, const BigInt& hi,
                  const std::function<bool(const BigInt&)>& fn) const override {
        BigInt h(table_->horizon());
        if (lo > h) throw resource_limit("prime enumeration beyond horizon");
        if (hi > h) throw resource_limit("prime enumeration beyond horizon");
        table_->for_each(to_u64(std::max(lo, BigInt(1))), to_u64(hi),
                         [&](u64 v) { return fn(BigInt(v)); });
    }
    void for_each_u64(u64 lo, u64 hi, const std::function<bool(u64)>& fn) const override {
        if (hi > table_->horizon()) throw resource_limit("prime enumeration beyond horizon");
        table_->for_each(lo, hi, fn);
    }
    std::shared_ptr<PrimeTable> table() const { return table_; }

private:
    std::shared_ptr<PrimeTable> table_;
};

class P1PrimesImpl final : public SetImpl {
public:
    explicit P1PrimesImpl(u64 horizon) {
        auto table = PrimeTable(horizon);
        auto small = simple_sieve(isqrt_u64(horizon) + 1);
        table.for_each(2, horizon, [&](u64 p) {
            if (sum_of_two_positive_squares(p - 1, small)) xs_.push_back(p);
            return true;
        });
        horizon_ = horizon;
    }
    BigInt count(const BigInt& x) const override {
        if (x > BigInt(horizon_)) throw resource_limit("P1 count beyond horizon");
        u64 v = x < 1 ? 0 : to_u64(x);
        return BigInt(std::upper_bound(xs_.begin(), xs_.end(), v) - xs_.begin());
    }
    bool contains(const BigInt& x) const override {
        if (x > BigInt(horizon_)) throw resource_limit("P1 membership beyond horizon");
        if (x < 3) return false;
        return std::binary_search(xs_.begin(), xs_.end(), to_u64(x));
    }
    BigInt nth(const BigInt& i) const override {
        if (i < 1 || i > BigInt(xs_.size())) throw invalid_input("nth: index out of range");
        return BigInt(xs_[i.get_ui() - 1]);
    }
    std::optional<BigInt> horizon() const override { return BigInt(horizon_); }
    void for_each(const BigInt& lo, const BigInt& hi,
                  const std::function<bool(const BigInt&)>& fn) const override {
        if (hi > BigInt(horizon_)) throw resource_limit("P1 enumeration beyond horizon");
        for_each_u64(lo < 1 ? 1 : to_u64(lo), to_u64(hi),
                     [&](u64 v) { return fn(BigInt(v)); });
    }
    void for_each_u64(u64 lo, u64 hi, const std::function<bool(u64)>& fn) const override {
        auto it = std::lower_bound(xs_.begin(), xs_.end(), lo);
        for (; it != xs_.end() && *it <= hi; ++it)
            if (!fn(*it)) return;
    }
    const std::vector<u64>& data() const { return xs_; }

private:
    std::vector<u64> xs_;
    u64 horizon_ = 0;
};

// A \ B, with counting by enumeration of A (use over modest ranges only).
class DifferenceImpl final : public SetImpl {
public:
    DifferenceImpl(std::shared_ptr<const SetImpl> a, std::shared_ptr<const SetImpl> b)
        : a_(std::move(a)), b_(std::move(b)) {}
    BigInt count(const BigInt& x) const override {
        BigInt n = 0;
        a_->for_each(1, x, [&](const BigInt& v) {
            if (!b_->contains(v)) ++n;
            return true;
        });
        return n;
    }
    bool contains(const BigInt& x) const override {
        return a_->contains(x) && !b_->contains(x);
    }
    std::optional<BigInt> horizon() const override { return a_->horizon(); }
    void for_each(const BigInt& lo, const BigInt& hi,
                  const std::function<bool(const BigInt&)>& fn) const override {
        a_->for_each(lo, hi, [&](const BigInt& v) {
            if (!b_->contains(v)) return fn(v);
            return true;
        });
    }
    void for_each_u64(u64 lo, u64 hi, const std::function<bool(u64)>& fn) const override {
        a_->for_each_u64(lo, hi, [&](u64 v) {
            if (!b_->contains(BigInt(v))) return fn(v);
            return true;
        });
    }

private:
    std::shared_ptr<const SetImpl> a_, b_;
};

inline IntegerSet make_difference(const IntegerSet& a, const IntegerSet& b) {
    SetSpec spec;
    spec.kind = Kind::custom;
    spec.label = "difference";
    spec.inner = std::make_shared<SetSpec>(a.spec());
    return {spec, std::make_shared<DifferenceImpl>(a.impl_ptr(), b.impl_ptr())};
}

// ---------------------------------------------------------------------------

IntegerSet build_set(const SetSpec& spec, u64 horizon);

namespace detail {
inline std::vector<BigInt> load_set_file(const std::string& path);
}

inline IntegerSet build_set(const SetSpec& spec, u64 horizon = 1u << 20) {
    switch (spec.kind) {
        case Kind::naturals:
            return {spec, std::make_shared<NaturalsImpl>()};
        case Kind::residue:
            return {spec, std::make_shared<ResidueImpl>(spec.modulus, spec.residue)};
        case Kind::squares:
            return {spec, std::make_shared<SquaresImpl>()};
        case Kind::square_blocks:
            return {spec, std::make_shared<SquareBlocksImpl>()};
        case Kind::piatetski_shapiro:
            return {spec, std::make_shared<PiatetskiShapiroImpl>(spec.alpha)};
        case Kind::primes:
            return {spec, std::make_shared<PrimesImpl>(horizon)};
        case Kind::p1_primes:
            return {spec, std::make_shared<P1PrimesImpl>(horizon)};
        case Kind::explicit_list:
            return {spec, std::make_shared<ExplicitImpl>(spec.elements)};
        case Kind::file:
            return {spec, std::make_shared<ExplicitImpl>(detail::load_set_file(spec.path),
                                                         /*require_sorted=*/true)};
        case Kind::complement:
            return {spec, std::make_shared<ComplementImpl>(
                              build_set(*spec.inner, horizon).impl_ptr())};
        case Kind::intersect_interval:
            return {spec, std::make_shared<IntervalImpl>(
                              build_set(*spec.inner, horizon).impl_ptr(), spec.lo, spec.hi)};
        case Kind::residue_filter:
            return {spec, std::make_shared<ResidueFilterImpl>(
                              build_set(*spec.inner, horizon).impl_ptr(), spec.modulus,
                              spec.residue)};
        case Kind::thinned:
            throw invalid_input("thinned sets are built via thin_subset");
        case Kind::custom:
            throw invalid_input("custom sets cannot be built from a spec");
    }
    throw invalid_input("unknown set kind");
}

// floor(n^alpha) for rational alpha = p/q, exact.
inline BigInt ps_value(const BigInt& n, const Rational& alpha) {
    if (n < 1) throw invalid_input("ps_value: n must be >= 1");
    if (alpha <= 1) throw invalid_input("ps_value: exponent must be > 1");
    return iroot(pow_big(n, alpha.get_num().get_ui()), alpha.get_den().get_ui());
}

// ---------------------------------------------------------------------------
// polynomial density fits

struct PolyDensityParams {
    Rational alpha = Rational(1);
    Rational beta = Rational(0);
    Rational c1 = Rational(1);
    Rational c2 = Rational(1);
    u64 window_lo = 0, window_hi = 0;
    bool suspicious = false;   // spread beyond the configured threshold
    double spread = 1.0;       // c2 / c1
};

// Tightest constants with  c1 N^(1/alpha) / (log N)^beta <= count(N) <= c2 ...
// over the whole window. The ratio function moves only at element positions,
// so it suffices to probe elements and their predecessors.
inline PolyDensityParams fit_poly_density(const IntegerSet& s, const Rational& alpha,
                                          const Rational& beta, u64 window_lo, u64 window_hi,
                                          double spread_threshold = 10.0) {
    if (window_lo < 2 || window_hi < window_lo) throw invalid_input("bad fit window");
    if (alpha < 1 || beta < 0) throw invalid_input("fit requires alpha >= 1, beta >= 0");
    const long double inv_alpha = 1.0L / static_cast<long double>(to_double(alpha));
    const long double beta_ld = static_cast<long double>(to_double(beta));
    const bool unit_alpha = (alpha == 1);
    const bool zero_beta = (beta == 0);

    if (s.count_u64(window_hi) == 0) throw invalid_input("set empty on fit window");

    long double lo_ratio = 0, hi_ratio = 0;
    bool first = true;
    u64 running = s.count_u64(window_lo);
    auto probe = [&](u64 n, u64 cnt) {
        if (cnt == 0) return;
        long double ln_n = std::log(static_cast<long double>(n));
        long double model = unit_alpha ? static_cast<long double>(n)
                                       : std::exp(inv_alpha * ln_n);  // N^(1/alpha)
        long double weight = zero_beta ? 1.0L : std::pow(ln_n, beta_ld);
        long double ratio = static_cast<long double>(cnt) * weight / model;
        if (first) { lo_ratio = hi_ratio = ratio; first = false; }
        lo_ratio = std::min(lo_ratio, ratio);
        hi_ratio = std::max(hi_ratio, ratio);
    };

    probe(window_lo, s.count_u64(window_lo));
    s.for_each_u64(window_lo + 1, window_hi, [&](u64 v) {
        probe(v - 1, running);  // just before the jump
        ++running;
        probe(v, running);
        return true;
    });
    probe(window_hi, running);

    PolyDensityParams out;
    out.alpha = alpha;
    out.beta = beta;
    out.window_lo = window_lo;
    out.window_hi = window_hi;
    // directed rounding keeps the sandwich valid
    const long scale = 1000000000L;
    long c1i = static_cast<long>(std::floor(lo_ratio * scale));
    long c2i = static_cast<long>(std::ceil(hi_ratio * scale));
    if (c1i < 1) c1i = 1;
    out.c1 = Rational(c1i, scale); out.c1.canonicalize();
    out.c2 = Rational(c2i, scale); out.c2.canonicalize();
    out.spread = static_cast<double>(hi_ratio / lo_ratio);
    out.suspicious = out.spread > spread_threshold;
    return out;
}

namespace detail {
inline std::vector<BigInt> load_set_file(const std::string& path) {
    std::vector<BigInt> out;
    FILE* f = std::fopen(path.c_str(), "r");
    if (!f) throw invalid_input("cannot open set file: " + path);
    char buf[4096];
    std::string line;
    while (std::fgets(buf, sizeof buf, f)) {
        line = buf;
        while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
        if (line.empty()) continue;
        out.emplace_back(line);
    }
    std::fclose(f);
    return out;
}
}  // namespace detail

}  // namespace cftrans::intsets
