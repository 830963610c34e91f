#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "qdetect/primes.hpp"
#include "qdetect/rational.hpp"

namespace qdetect {

/**
 * Formal rational combination of products of two shifted zeta factors,
 *   sum_j A_j zeta(s - l_j) zeta(s - l_j - k_j),   l_j, k_j >= 0,
 * whose Dirichlet coefficients are the divisor-sum values A_j n^l sigma_k(n).
 * Terms are keyed by the unordered shift pair {l, l+k} (stored as l = lower
 * shift, k = gap), merged, and kept sorted with zero coefficients dropped, so
 * structural equality is semantic equality.
 */
class WExpression {
public:
    struct Term {
        Rational coeff;
        std::uint32_t shift;  // lower zeta shift l
        std::uint32_t gap;    // k; the other shift is l + k
    };

    WExpression() = default;

    static WExpression from_terms(const std::vector<std::tuple<Rational, std::uint32_t, std::uint32_t>>& raw) {
        std::map<std::pair<std::uint32_t, std::uint32_t>, Rational> merged;
        for (const auto& [a, l, k] : raw) merged[{l, k}] += a;
        WExpression w;
        for (const auto& [key, a] : merged)
            if (a != 0) w.terms_.push_back(Term{a, key.first, key.second});
        return w;
    }

    // Accepts an arbitrary unordered shift pair {a, b} with a, b >= 0.
    static WExpression from_shift_pairs(
        const std::vector<std::tuple<Rational, std::int64_t, std::int64_t>>& raw) {
        std::vector<std::tuple<Rational, std::uint32_t, std::uint32_t>> terms;
        for (const auto& [c, a, b] : raw) {
            if (a < 0 || b < 0) throw std::invalid_argument("WExpression: negative zeta shift");
            const std::int64_t lo = std::min(a, b);
            const std::int64_t hi = std::max(a, b);
            terms.emplace_back(c, static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi - lo));
        }
        return from_terms(terms);
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Top shift degree max(l + k); 0 for the zero expression.
    std::uint32_t top_degree() const {
        std::uint32_t r = 0;
        for (const auto& t : terms_) r = std::max(r, t.shift + t.gap);
        return r;
    }

    // Total absolute coefficient mass at the top degree.
    Rational top_mass() const {
        const std::uint32_t r = top_degree();
        Rational s(0);
        for (const auto& t : terms_)
            if (t.shift + t.gap == r) s += (t.coeff < 0 ? Rational(-t.coeff) : t.coeff);
        return s;
    }

    // Dirichlet coefficient a(n) = sum A_j n^(l_j) sigma_(k_j)(n).
    Rational coefficient(std::uint64_t n) const {
        if (n == 0) throw std::invalid_argument("WExpression: coefficients are indexed from 1");
        const auto divs = divisors(n);
        Rational acc(0);
        for (const auto& t : terms_) {
            Integer sigma(0);
            for (std::uint64_t d : divs) sigma += pow_integer(Integer(d), t.gap);
            acc += t.coeff * Rational(pow_integer(Integer(n), t.shift) * sigma);
        }
        return acc;
    }

    // Closed form of a(p) at primes: sum A_j (p^(l_j) + p^(l_j + k_j)).
    Rational prime_coefficient(std::uint64_t p) const {
        Rational acc(0);
        for (const auto& t : terms_)
            acc += t.coeff * Rational(pow_integer(Integer(p), t.shift) + pow_integer(Integer(p), t.shift + t.gap));
        return acc;
    }

    // Exponent vector of the associated zeta product: shift m receives A_j
    // from every factor zeta(s-m) of every term (a gap-0 term contributes 2A).
    std::map<std::uint32_t, Rational> zeta_exponents() const {
        std::map<std::uint32_t, Rational> exps;
        for (const auto& t : terms_) {
            exps[t.shift] += t.coeff;
            exps[t.shift + t.gap] += t.coeff;
        }
        for (auto it = exps.begin(); it != exps.end();) it = (it->second == 0) ? exps.erase(it) : std::next(it);
        return exps;
    }

    WExpression scaled(const Rational& c) const {
        WExpression w;
        if (c == 0) return w;
        w.terms_ = terms_;
        for (auto& t : w.terms_) t.coeff *= c;
        return w;
    }

    friend WExpression operator+(const WExpression& x, const WExpression& y) {
        std::vector<std::tuple<Rational, std::uint32_t, std::uint32_t>> raw;
        for (const auto& t : x.terms_) raw.emplace_back(t.coeff, t.shift, t.gap);
        for (const auto& t : y.terms_) raw.emplace_back(t.coeff, t.shift, t.gap);
        return from_terms(raw);
    }

    friend WExpression operator-(const WExpression& x, const WExpression& y) { return x + y.scaled(Rational(-1)); }

    friend bool operator==(const WExpression& x, const WExpression& y) {
        if (x.terms_.size() != y.terms_.size()) return false;
        for (std::size_t i = 0; i < x.terms_.size(); ++i) {
            if (x.terms_[i].shift != y.terms_[i].shift || x.terms_[i].gap != y.terms_[i].gap ||
                x.terms_[i].coeff != y.terms_[i].coeff)
                return false;
        }
        return true;
    }

private:
    std::vector<Term> terms_;
};

struct Quadruple {
    std::array<std::int64_t, 4> m{0, 0, 0, 0};
    auto operator<=>(const Quadruple&) const = default;
};

// The four-term combination zeta(s-m1)zeta(s-m3) + zeta(s-m2)zeta(s-m4)
// - zeta(s-m1)zeta(s-m4) - zeta(s-m2)zeta(s-m3). Shifts must be >= 0 to be
// representable with non-negative (l, k).
inline WExpression quadruple_expression(const Quadruple& q) {
    for (std::int64_t v : q.m)
        if (v < 0) throw std::invalid_argument("quadruple_expression: negative shifts are not representable");
    return WExpression::from_shift_pairs({
        {Rational(1), q.m[0], q.m[2]},
        {Rational(1), q.m[1], q.m[3]},
        {Rational(-1), q.m[0], q.m[3]},
        {Rational(-1), q.m[1], q.m[2]},
    });
}

// Divisor-sum form of the quadruple coefficients, valid for any integer
// entries: sum over d | n of ((n/d)^m2 - (n/d)^m1)(d^m4 - d^m3).
inline Rational quadruple_coefficient(const Quadruple& q, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("quadruple_coefficient: n must be positive");
    Rational acc(0);
    for (std::uint64_t d : divisors(n)) {
        const Rational co = pow_rational(Rational(n / d), q.m[1]) - pow_rational(Rational(n / d), q.m[0]);
        if (co == 0) continue;
        acc += co * (pow_rational(Rational(d), q.m[3]) - pow_rational(Rational(d), q.m[2]));
    }
    return acc;
}

inline int predicted_composite_sign(const Quadruple& q) {
    const auto sgn = [](std::int64_t v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    return sgn(q.m[1] - q.m[0]) * sgn(q.m[3] - q.m[2]);
}

// Sign of the quadruple coefficient at a composite index, which is determined
// by the quadruple alone. Non-composite n is rejected.
inline int sign_of_composite(const Quadruple& q, std::uint64_t n) {
    if (!is_composite(n)) throw std::invalid_argument("sign_of_composite: n must be composite");
    return predicted_composite_sign(q);
}

struct Decomposition {
    std::vector<std::pair<Rational, Quadruple>> parts;  // merged, sorted by quadruple
    std::size_t iterations = 0;
    Integer iteration_bound{0};
};

/**
 * Peel-off decomposition: writes an expression with trivial zeta-exponent
 * vector as a rational combination of quadruple expressions. Each round works
 * at the top degree R: take the term with maximal gap there, pair it with an
 * opposite-sign top-degree term, and subtract the quadruple that cancels one
 * unit of each. Either R or the top-degree mass strictly drops, which bounds
 * the number of rounds by (R+2) times the total cleared-coefficient mass + 2.
 */
inline Decomposition decompose(const WExpression& w) {
    if (!w.zeta_exponents().empty())
        throw std::invalid_argument("decompose: zeta-exponent vector must vanish (detection precondition)");
    Decomposition result;
    if (w.is_zero()) return result;

    Integer den_lcm(1);
    for (const auto& t : w.terms()) den_lcm = lcm(den_lcm, denominator(t.coeff));
    WExpression cur = w.scaled(Rational(den_lcm));

    Integer total_mass(0);
    for (const auto& t : cur.terms()) total_mass += abs(numerator(t.coeff));
    result.iteration_bound = Integer(cur.top_degree() + 2) * (total_mass + 2);

    std::map<Quadruple, Rational> emitted;
    while (!cur.is_zero()) {
        if (Integer(result.iterations) >= result.iteration_bound)
            throw std::logic_error("decompose: iteration bound exceeded");
        const std::uint32_t r = cur.top_degree();
        const WExpression::Term* pick = nullptr;
        for (const auto& t : cur.terms()) {
            if (t.shift + t.gap != r) continue;
            if (!pick || t.gap > pick->gap || (t.gap == pick->gap && t.shift < pick->shift)) pick = &t;
        }
        if (!pick) throw std::logic_error("decompose: empty top degree");
        const int s = sign_of(pick->coeff);
        const WExpression::Term* partner = nullptr;
        for (const auto& t : cur.terms()) {
            if (t.shift + t.gap != r || sign_of(t.coeff) != -s) continue;
            if (!partner || std::make_pair(t.shift, t.gap) < std::make_pair(partner->shift, partner->gap))
                partner = &t;
        }
        if (!partner)
            throw std::logic_error("decompose: no opposite-sign partner at the top degree "
                                   "(unreachable when the exponent vector vanishes)");
        Quadruple q;
        q.m = {static_cast<std::int64_t>(pick->shift), static_cast<std::int64_t>(partner->shift),
               static_cast<std::int64_t>(pick->shift), static_cast<std::int64_t>(pick->shift + pick->gap)};
        emitted[q] += Rational(-s);
        cur = cur + quadruple_expression(q).scaled(Rational(s));
        ++result.iterations;
    }
    for (const auto& [q, c] : emitted) {
        if (c == 0) continue;
        result.parts.emplace_back(c / Rational(den_lcm), q);
    }
    return result;
}

inline WExpression expand_decomposition(const std::vector<std::pair<Rational, Quadruple>>& parts) {
    WExpression acc;
    for (const auto& [c, q] : parts) acc = acc + quadruple_expression(q).scaled(c);
    return acc;
}

enum class WCertifyMode { exponents, primes, decomposition, all };

struct WCertificate {
    bool detects = false;
    std::map<std::uint32_t, Rational> exponents;
    std::optional<std::pair<std::uint64_t, Rational>> witness;
    std::vector<std::uint64_t> primes_checked;
    std::optional<Decomposition> decomposition;
};

/**
 * Certify that the prime coefficients of a divisor-sum expression vanish.
 * Three routes: emptiness of the zeta-exponent vector, vanishing of a(p) at
 * the first R+1 primes (R+1 evaluation points pin down a degree-<=R
 * polynomial; the flag drops the count to max(R, 1) for experiments), and a
 * successful peel-off decomposition. The routes agree on every input; `all`
 * runs the three and fails loudly if they ever disagree.
 */
inline WCertificate certify_prime_detection(const WExpression& w, WCertifyMode mode,
                                            bool paper_prime_count = false) {
    WCertificate cert;
    cert.exponents = w.zeta_exponents();
    const bool exponents_empty = cert.exponents.empty();

    const auto run_primes = [&]() {
        const std::size_t count =
            paper_prime_count ? std::max<std::size_t>(w.top_degree(), 1) : static_cast<std::size_t>(w.top_degree()) + 1;
        cert.primes_checked = primes_in_progression(0, 1, count);
        for (std::uint64_t p : cert.primes_checked) {
            Rational v = w.coefficient(p);
            if (v != 0) {
                cert.witness = std::make_pair(p, std::move(v));
                return false;
            }
        }
        return true;
    };

    switch (mode) {
        case WCertifyMode::exponents:
            cert.detects = exponents_empty;
            return cert;
        case WCertifyMode::primes:
            cert.detects = run_primes();
            return cert;
        case WCertifyMode::decomposition: {
            if (!exponents_empty) {
                cert.detects = false;
                return cert;
            }
            cert.decomposition = decompose(w);
            if (!(expand_decomposition(cert.decomposition->parts) == w))
                throw std::logic_error("certify_prime_detection: decomposition does not re-expand to the input");
            cert.detects = true;
            return cert;
        }
        case WCertifyMode::all: {
            const bool by_primes = run_primes();
            bool by_decomposition = false;
            if (exponents_empty) {
                cert.decomposition = decompose(w);
                if (!(expand_decomposition(cert.decomposition->parts) == w))
                    throw std::logic_error("certify_prime_detection: decomposition does not re-expand to the input");
                by_decomposition = true;
            }
            if (by_primes != exponents_empty || by_decomposition != exponents_empty)
                throw std::logic_error("certify_prime_detection: certificate modes disagree");
            cert.detects = exponents_empty;
            return cert;
        }
    }
    throw std::logic_error("certify_prime_detection: unknown mode");
}

}  // namespace qdetect
