// Exact continued-fraction arithmetic.
//
// Convergents follow the classical recursion
//     p[-1]=1, p[0]=0, p[i] = a_i p[i-1] + p[i-2]
//     q[-1]=0, q[0]=1, q[i] = a_i q[i-1] + q[i-2]
// and the n-th fundamental interval of a digit word (a_1..a_n) has endpoints
// p_n/q_n and (p_n+p_{n-1})/(q_n+q_{n-1}) with parity-dependent orientation.
// Its diameter is exactly 1/(q_n(q_n+q_{n-1})) and is sandwiched between
// (1/2)prod (a_i+1)^-2 and prod a_i^-2.
//
// Semi-regular words carry a sign in {-1,+1} per position; their intervals
// are computed as exact Moebius images of [0,1].
#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cftrans/numeric.hpp"

namespace cftrans::cfcore {

struct DigitWord {
    std::vector<BigInt> digits;
    std::optional<std::vector<int>> signs;  // absent => regular (all +1)

    DigitWord() = default;
    explicit DigitWord(std::vector<BigInt> d) : digits(std::move(d)) {}
    DigitWord(std::vector<BigInt> d, std::vector<int> s)
        : digits(std::move(d)), signs(std::move(s)) {}

    std::size_t size() const { return digits.size(); }
    bool regular() const { return !signs.has_value(); }

    void validate() const {
        if (digits.empty()) throw invalid_input("digit word must be non-empty");
        for (const auto& d : digits)
            if (d < 1) throw invalid_input("digits must be >= 1");
        if (!signs) return;
        if (signs->size() != digits.size())
            throw invalid_input("sign word length must match digit word length");
        for (int s : *signs)
            if (s != 1 && s != -1) throw invalid_input("signs must be +1 or -1");
        // A digit reached through a -1 sign must be >= 2; the trailing sign
        // constrains the tail the same way, so a -1 after a digit 1 at the end
        // would send the Moebius image through a pole.
        for (std::size_t i = 0; i + 1 < digits.size(); ++i)
            if ((*signs)[i] == -1 && digits[i + 1] < 2)
                throw invalid_input("semi-regular admissibility: sign -1 must precede a digit >= 2");
        if (signs->back() == -1 && digits.back() < 2)
            throw invalid_input("semi-regular admissibility: trailing sign -1 requires final digit >= 2");
    }
};

struct Convergent {
    BigInt p;
    BigInt q;
    int index = 0;
};

struct DiameterBounds {
    Rational lower;   // (1/2) prod (a_i+1)^-2
    Rational upper;   // prod a_i^-2
    bool holds = false;
};

struct FundamentalInterval {
    Rational lo;
    Rational hi;
    bool lo_closed = false;
    bool hi_closed = false;
    int depth = 0;
    DigitWord word;
    DiameterBounds bounds;

    Rational diameter() const { return hi - lo; }
};

inline std::vector<Convergent> convergents(const DigitWord& word) {
    word.validate();
    if (!word.regular()) throw invalid_input("convergents: word must be regular");
    std::vector<Convergent> out;
    out.reserve(word.size());
    BigInt p_prev = 1, p_cur = 0;  // p[-1], p[0]
    BigInt q_prev = 0, q_cur = 1;  // q[-1], q[0]
    int i = 0;
    for (const auto& a : word.digits) {
        BigInt p_next = a * p_cur + p_prev;
        BigInt q_next = a * q_cur + q_prev;
        p_prev = p_cur; p_cur = p_next;
        q_prev = q_cur; q_cur = q_next;
        out.push_back({p_cur, q_cur, ++i});
    }
    return out;
}

// Exact value of the finite continued fraction [0; a_1, ..., a_n].
inline Rational cf_value(const DigitWord& word) {
    auto cs = convergents(word);
    Rational v(cs.back().p, cs.back().q);
    v.canonicalize();
    return v;
}

inline DiameterBounds sandwich_bounds(const DigitWord& word) {
    DiameterBounds b;
    Rational lower(1, 2), upper(1, 1);
    for (const auto& a : word.digits) {
        Rational ap1 = Rational(a + 1);
        lower /= ap1 * ap1;
        upper /= Rational(a) * Rational(a);
    }
    b.lower = lower;
    b.upper = upper;
    return b;
}

inline FundamentalInterval fundamental_interval(const DigitWord& word) {
    word.validate();
    if (!word.regular()) throw invalid_input("fundamental_interval: word must be regular");
    auto cs = convergents(word);
    const std::size_t n = cs.size();
    const BigInt& pn = cs.back().p;
    const BigInt& qn = cs.back().q;
    BigInt pn1 = (n >= 2) ? cs[n - 2].p : BigInt(1);  // p_0 = 0 handled below
    BigInt qn1 = (n >= 2) ? cs[n - 2].q : BigInt(1);
    if (n == 1) { pn1 = 0; qn1 = 1; }

    Rational at_qn(pn, qn);
    at_qn.canonicalize();
    Rational mediant(pn + pn1, qn + qn1);
    mediant.canonicalize();

    FundamentalInterval iv;
    iv.depth = static_cast<int>(n);
    iv.word = word;
    if (n % 2 == 0) {
        iv.lo = at_qn;      iv.lo_closed = true;
        iv.hi = mediant;    iv.hi_closed = false;
    } else {
        iv.lo = mediant;    iv.lo_closed = false;
        iv.hi = at_qn;      iv.hi_closed = true;
    }

    Rational diam = iv.hi - iv.lo;
    Rational expected(1, 1);
    expected /= Rational(qn * (qn + qn1));
    if (diam != expected)
        throw std::logic_error("fundamental interval diameter mismatch");

    iv.bounds = sandwich_bounds(word);
    iv.bounds.holds = (iv.bounds.lower <= diam) && (diam <= iv.bounds.upper);
    if (!iv.bounds.holds)
        throw std::logic_error("fundamental interval sandwich violated");
    return iv;
}

// Exact image of [0,1] under the composition of x -> 1/(a_i + s_i x).
// Endpoints are sorted; both are included (closure semantics).
inline FundamentalInterval semi_regular_interval(const DigitWord& word) {
    word.validate();
    const auto& digits = word.digits;
    std::vector<int> signs =
        word.signs ? *word.signs : std::vector<int>(digits.size(), 1);

    // Moebius composition as an integer 2x2 matrix acting by
    // (A x + B) / (C x + D); map i contributes [[0,1],[s_i,a_i]].
    BigInt A = 1, B = 0, C = 0, D = 1;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        BigInt s = signs[i];
        const BigInt& a = digits[i];
        // M := M * [[0,1],[s,a]]
        BigInt nA = B * s;
        BigInt nB = A + B * a;
        BigInt nC = D * s;
        BigInt nD = C + D * a;
        A = nA; B = nB; C = nC; D = nD;
    }
    BigInt den0 = D, den1 = C + D;
    if (den0 == 0 || den1 == 0)
        throw invalid_input("semi-regular interval degenerates (pole inside [0,1])");
    Rational e0(B, den0), e1(A + B, den1);
    e0.canonicalize();
    e1.canonicalize();

    FundamentalInterval iv;
    iv.depth = static_cast<int>(digits.size());
    iv.word = word;
    iv.lo = std::min(e0, e1);
    iv.hi = std::max(e0, e1);
    iv.lo_closed = iv.hi_closed = true;
    if (iv.lo < 0 || iv.hi > 1 || iv.lo == iv.hi)
        throw invalid_input("semi-regular interval escapes [0,1]");
    iv.bounds = sandwich_bounds(word);
    iv.bounds.holds = (iv.bounds.lower <= iv.diameter()) && (iv.diameter() <= iv.bounds.upper);
    return iv;
}

// Diameter check for semi-regular intervals with all digits >= 3:
//   C^-1 prod (a_i+1)^-2  <=  |I|  <=  C prod (a_i-1)^-2.
// The constant is configuration; best_constant is the smallest C >= 1 that
// makes both sides hold for this word.
struct SemiRegularCheck {
    bool applicable = false;
    Rational lower;
    Rational upper;
    bool holds = false;
    Rational best_constant;
};

inline SemiRegularCheck semi_regular_check(const DigitWord& word, const Rational& c) {
    if (c < 1) throw invalid_input("semi-regular check: constant must be >= 1");
    SemiRegularCheck out;
    for (const auto& a : word.digits)
        if (a < 3) return out;  // not applicable
    out.applicable = true;
    FundamentalInterval iv = semi_regular_interval(word);
    Rational diam = iv.diameter();
    Rational plus(1, 1), minus(1, 1);
    for (const auto& a : word.digits) {
        plus /= Rational((a + 1) * (a + 1));
        minus /= Rational((a - 1) * (a - 1));
    }
    out.lower = plus / c;
    out.upper = minus * c;
    out.holds = (out.lower <= diam) && (diam <= out.upper);
    Rational c1 = plus / diam;   // need C >= plus/diam
    Rational c2 = diam / minus;  // need C >= diam/minus
    out.best_constant = std::max({Rational(1), c1, c2});
    return out;
}

// Set-level helpers; endpoint closedness is deliberately ignored
// (boundary points form a measure-zero set the constructions discard).
inline bool interiors_disjoint(const FundamentalInterval& a, const FundamentalInterval& b) {
    return a.hi <= b.lo || b.hi <= a.lo;
}

inline bool contains_up_to_boundary(const FundamentalInterval& outer,
                                    const FundamentalInterval& inner) {
    return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

// Serialization: one decimal digit per line; semi-regular words prefix each
// digit with its sign, e.g. "+3" / "-4".
inline std::string to_lines(const DigitWord& word) {
    std::ostringstream os;
    for (std::size_t i = 0; i < word.digits.size(); ++i) {
        if (word.signs) os << ((*word.signs)[i] == -1 ? '-' : '+');
        os << word.digits[i].get_str() << '\n';
    }
    return os.str();
}

inline DigitWord from_lines(const std::string& text) {
    DigitWord w;
    std::vector<int> signs;
    bool signed_word = false;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        int sign = 1;
        std::string body = line;
        if (line[0] == '+' || line[0] == '-') {
            signed_word = true;
            sign = (line[0] == '-') ? -1 : 1;
            body = line.substr(1);
        }
        w.digits.emplace_back(body);
        signs.push_back(sign);
    }
    if (signed_word) w.signs = std::move(signs);
    w.validate();
    return w;
}

}  // namespace cftrans::cfcore
