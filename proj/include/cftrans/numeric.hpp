// Shared exact-arithmetic primitives: arbitrary-precision integers and
// rationals (GMP-backed), integer roots, factorial-block helpers, and
// high-precision logarithms taken directly from exact values (so that
// quantities far outside floating-point range still have usable logs).
#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cftrans {

using BigInt = mpz_class;
using Rational = mpq_class;

struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct search_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct resource_limit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a digit sequence does not match the structure a plan expects.
struct structural_error : std::runtime_error {
    structural_error(const std::string& what, const BigInt& pos)
        : std::runtime_error(what), position(pos) {}
    BigInt position;
};

inline constexpr long double kLn2 = 0.6931471805599453094172321214581765680755L;

// Natural log of a positive big integer. mpz_get_d_2exp gives x = d * 2^e
// with d in [0.5, 1); the result keeps ~16 significant digits in the
// mantissa part while the (exact) exponent part carries the magnitude.
inline long double log_big(const BigInt& x) {
    if (x <= 0) throw invalid_input("log_big: argument must be positive");
    signed long int e = 0;
    double d = mpz_get_d_2exp(&e, x.get_mpz_t());
    return std::log(static_cast<long double>(d)) + static_cast<long double>(e) * kLn2;
}

inline long double log_rat(const Rational& x) {
    if (x <= 0) throw invalid_input("log_rat: argument must be positive");
    return log_big(x.get_num()) - log_big(x.get_den());
}

inline BigInt isqrt(const BigInt& x) {
    if (x < 0) throw invalid_input("isqrt: negative argument");
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

// floor of the k-th root
inline BigInt iroot(const BigInt& x, unsigned long k) {
    if (x < 0) throw invalid_input("iroot: negative argument");
    if (k == 0) throw invalid_input("iroot: zeroth root");
    BigInt r;
    mpz_root(r.get_mpz_t(), x.get_mpz_t(), k);
    return r;
}

inline BigInt pow_big(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rational pow_rat(const Rational& base, unsigned long e) {
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), e);
    r.canonicalize();
    return r;
}

inline BigInt floor_rat(const Rational& x) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

inline BigInt ceil_rat(const Rational& x) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

inline std::uint64_t to_u64(const BigInt& x, const char* what = "value") {
    if (x < 0 || !x.fits_ulong_p())
        throw resource_limit(std::string(what) + " does not fit in 64 bits: " + x.get_str());
    return static_cast<std::uint64_t>(x.get_ui());
}

inline double to_double(const Rational& x) { return x.get_d(); }

// Factorials, cached and extended on demand. Consumers index as factorial(k).
inline const BigInt& factorial(std::size_t k) {
    static std::vector<BigInt> cache = {1, 1};
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    while (cache.size() <= k) cache.push_back(cache.back() * BigInt(cache.size()));
    return cache[k];
}

// nu(xi) = k for xi in [k!, (k+1)!). Defined for xi >= 1.
inline unsigned nu_of(const BigInt& xi) {
    if (xi < 1) throw invalid_input("nu_of: argument must be >= 1");
    unsigned k = 1;
    while (factorial(k + 1) <= xi) ++k;
    return k;
}

inline unsigned nu_of(const Rational& xi) {
    if (xi < 1) throw invalid_input("nu_of: argument must be >= 1");
    unsigned k = 1;
    while (factorial(k + 1) <= xi) ++k;
    return k;
}

// Parses "p/q" or "p" into an exact rational.
inline Rational parse_rational(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0)
        throw invalid_input("not a rational: '" + s + "'");
    r.canonicalize();
    if (r.get_den() == 0) throw invalid_input("zero denominator: '" + s + "'");
    return r;
}

inline std::string rational_str(const Rational& x) { return x.get_str(); }

// Smallest rational on the grid (1/scale)Z that is >= base^(p/q), certified
// by exact integer-power comparison. Requires base > 0 and p, q >= 1.
inline Rational rational_pow_upper(const Rational& base, unsigned long p, unsigned long q,
                                   unsigned long scale = 1000000) {
    if (base <= 0) throw invalid_input("rational_pow_upper: base must be positive");
    Rational target = pow_rat(base, p);
    // bracket: value^q >= target  <=>  value >= base^(p/q)
    auto ge = [&](const BigInt& num) {
        Rational v(num, scale);
        v.canonicalize();
        return pow_rat(v, q) >= target;
    };
    BigInt lo = 0, hi = 1;
    while (!ge(hi)) hi *= 2;
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        if (ge(mid)) hi = mid; else lo = mid;
    }
    Rational out(hi, scale);
    out.canonicalize();
    return out;
}

}  // namespace cftrans
