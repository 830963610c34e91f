#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qdetect/characters.hpp"
#include "qdetect/cyclotomic.hpp"
#include "qdetect/primes.hpp"
#include "qdetect/qseries.hpp"
#include "qdetect/rational.hpp"

namespace qdetect {

// Weighted divisor power sum: sum over d | n of chi(n/d) psi(d) d^(k-1).
inline CycValue sigma_weighted(unsigned k_minus_1, const DirichletCharacter& chi, const DirichletCharacter& psi,
                               std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("sigma_weighted: n must be positive");
    CycValue acc = CycValue::zero();
    for (std::uint64_t d : divisors(n)) {
        const CycValue& a = chi.at(n / d);
        if (a.is_zero()) continue;
        const CycValue& b = psi.at(d);
        if (b.is_zero()) continue;
        acc += (a * b).scaled(Rational(pow_integer(Integer(d), k_minus_1)));
    }
    return acc;
}

// Character-twisted Bernoulli number B_{k,psi}, defined by the exponential
// generating function over the conductor of psi (the primitive version is
// substituted first). With the trivial character this gives B_1 = +1/2.
inline CycValue generalized_bernoulli(unsigned k, const DirichletCharacter& psi) {
    const DirichletCharacter prim = psi.primitive_character();
    const std::uint32_t f = prim.modulus();
    std::vector<CycValue> B;
    B.reserve(k + 1);
    for (unsigned m = 0; m <= k; ++m) {
        // (m+1) * sum_a psi(a) a^m  =  sum_{j<=m} C(m+1,j) f^(m+1-j) B_j
        CycValue lhs = CycValue::zero();
        for (std::uint32_t a = 1; a <= f; ++a) {
            const CycValue& v = prim.at(a);
            if (v.is_zero()) continue;
            lhs += v.scaled(Rational(pow_integer(Integer(a), m)));
        }
        lhs = lhs.scaled(Rational(m + 1));
        for (unsigned j = 0; j < m; ++j) {
            const Rational c(binomial(m + 1, j) * pow_integer(Integer(f), m + 1 - j));
            lhs -= B[j].scaled(c);
        }
        B.push_back(lhs.scaled(Rational(Integer(1), Integer(m + 1) * f)));
    }
    return B[k];
}

// L(1-k, psi) = -B_{k,psi}/k.
inline CycValue l_value_at_negative(unsigned k, const DirichletCharacter& psi) {
    if (k == 0) throw std::invalid_argument("l_value_at_negative: k must be positive");
    return generalized_bernoulli(k, psi).scaled(Rational(Integer(-1), Integer(k)));
}

/**
 * Symbolic descriptor of a generalized Eisenstein q-expansion: weight k and a
 * character pair, with an optional derivative power applied first and an
 * optional index dilation applied last. weight 0 denotes the zero series;
 * e2 selects the distinguished weight-2 expansion 1 - 24 sum sigma_1(n) q^n.
 */
struct EisensteinSpec {
    bool e2 = false;
    std::uint32_t weight = 0;
    DirichletCharacter chi{1, 0};
    DirichletCharacter psi{1, 0};
    std::uint32_t derivative = 0;
    std::uint32_t v_multiplier = 1;

    static EisensteinSpec e2_series(std::uint32_t derivative = 0, std::uint32_t v = 1) {
        EisensteinSpec s;
        s.e2 = true;
        s.weight = 2;
        s.derivative = derivative;
        s.v_multiplier = v;
        return s;
    }

    static EisensteinSpec series(std::uint32_t weight, DirichletCharacter chi, DirichletCharacter psi,
                                 std::uint32_t derivative = 0, std::uint32_t v = 1) {
        EisensteinSpec s;
        s.weight = weight;
        s.chi = std::move(chi);
        s.psi = std::move(psi);
        s.derivative = derivative;
        s.v_multiplier = v;
        return s;
    }

    bool parity_holds() const {
        if (e2 || weight == 0) return true;
        const int target = (weight % 2 == 0) ? 1 : -1;
        return chi.parity() * psi.parity() == target;
    }

    std::uint64_t level_bound() const {
        const std::uint64_t base = e2 ? 1 : std::lcm<std::uint64_t>(chi.modulus(), psi.modulus());
        return base * v_multiplier;
    }
};

namespace detail {

inline void check_eisenstein_spec(const EisensteinSpec& spec) {
    if (spec.v_multiplier == 0) throw std::invalid_argument("EisensteinSpec: v multiplier must be positive");
    if (!spec.e2 && spec.weight == 1)
        throw std::invalid_argument("EisensteinSpec: weight 1 is outside the supported family");
}

// Coefficient of the bare series (no derivative, no dilation) at index n.
inline CycValue eisenstein_base_coefficient(const EisensteinSpec& spec, std::uint64_t n) {
    if (spec.e2) {
        if (n == 0) return CycValue::one();
        return sigma_weighted(1, principal_character(1), principal_character(1), n).scaled(Rational(-24));
    }
    if (spec.weight == 0) return CycValue::zero();
    if (n == 0) {
        if (!spec.chi.is_principal()) return CycValue::zero();
        return l_value_at_negative(spec.weight, spec.psi);
    }
    return sigma_weighted(spec.weight - 1, spec.chi, spec.psi, n).scaled(Rational(2));
}

}  // namespace detail

// Coefficient at n of the full spec (derivative applied before the dilation).
inline CycValue eisenstein_coefficient(const EisensteinSpec& spec, std::uint64_t n) {
    detail::check_eisenstein_spec(spec);
    if (n % spec.v_multiplier != 0) return CycValue::zero();
    const std::uint64_t base_n = n / spec.v_multiplier;
    CycValue c = detail::eisenstein_base_coefficient(spec, base_n);
    if (spec.derivative > 0) {
        if (base_n == 0) return CycValue::zero();
        c = c.scaled(Rational(pow_integer(Integer(base_n), spec.derivative)));
    }
    return c;
}

/**
 * Exact q-expansion of the spec up to n_max. The parity condition
 * chi(-1)psi(-1) = (-1)^k is enforced by default; callers that assemble the
 * two-sided difference family pass enforce_parity = false, because those
 * combinations use the divisor-sum expansion as a formal series for every
 * character pair.
 */
inline QSeries eisenstein_qexp(const EisensteinSpec& spec, std::uint32_t n_max, bool enforce_parity = true) {
    detail::check_eisenstein_spec(spec);
    if (enforce_parity && !spec.parity_holds())
        throw std::invalid_argument("eisenstein_qexp: parity condition chi(-1)psi(-1) = (-1)^k fails");
    QSeries f(n_max, spec.level_bound());
    for (std::uint64_t n = 0; n <= n_max; ++n)
        f.set_coefficient(static_cast<std::uint32_t>(n), eisenstein_coefficient(spec, n));
    return f;
}

inline QSeries e2_series(std::uint32_t n_max) { return eisenstein_qexp(EisensteinSpec::e2_series(), n_max); }

// Rescaled variant -E_2/12 = -1/12 + 2 sum sigma_1(n) q^n, which is exactly
// the trivial-character instance of the general coefficient pattern.
inline QSeries e2_hat_series(std::uint32_t n_max) {
    return e2_series(n_max).scaled(CycValue(Rational(Integer(-1), Integer(12))));
}

/**
 * Parameters of the two-term detecting combination
 *   conj(chi(m)) D^(l-1) E_{k,psi,chi} - psi(m) E_{l,conj(psi),conj(chi)}
 * with both characters mod M and gcd(m, M) = 1. Weight parameters equal to 0
 * make the corresponding constituent vanish; for l = 0 the derivative power
 * on the surviving first term is 0.
 */
struct HSpec {
    std::uint32_t k = 2;
    std::uint32_t l = 2;
    DirichletCharacter chi{1, 0};
    DirichletCharacter psi{1, 0};
    std::uint64_t residue = 0;  // m

    HSpec(std::uint32_t k_, std::uint32_t l_, DirichletCharacter chi_, DirichletCharacter psi_, std::uint64_t m)
        : k(k_), l(l_), chi(std::move(chi_)), psi(std::move(psi_)), residue(m) {
        if (chi.modulus() != psi.modulus())
            throw std::invalid_argument("HSpec: both characters must share the modulus");
        if (std::gcd<std::uint64_t>(residue, chi.modulus()) != 1)
            throw std::invalid_argument("HSpec: residue must be coprime to the modulus");
        if (k == 1 || l == 1) throw std::invalid_argument("HSpec: weight-1 constituents are not defined");
    }

    std::uint32_t modulus() const { return chi.modulus(); }
    std::uint32_t total_weight() const { return k + l; }

    // The two constituents as (coefficient, spec) pairs.
    std::vector<std::pair<CycValue, EisensteinSpec>> constituents() const {
        std::vector<std::pair<CycValue, EisensteinSpec>> out;
        const std::uint32_t deriv = l >= 1 ? l - 1 : 0;
        out.emplace_back(chi.at(residue).conjugated(),
                         EisensteinSpec::series(k, psi, chi, deriv));
        out.emplace_back(-psi.at(residue),
                         EisensteinSpec::series(l, psi.conjugate(), chi.conjugate()));
        return out;
    }
};

inline CycValue h_coefficient(const HSpec& spec, std::uint64_t n) {
    CycValue acc = CycValue::zero();
    for (const auto& [coeff, part] : spec.constituents()) {
        if (coeff.is_zero()) continue;
        acc += coeff * eisenstein_coefficient(part, n);
    }
    return acc;
}

inline QSeries h_qexp(const HSpec& spec, std::uint32_t n_max) {
    QSeries f(n_max, spec.modulus() == 0 ? 1 : spec.modulus());
    for (std::uint64_t n = 0; n <= n_max; ++n)
        f.set_coefficient(static_cast<std::uint32_t>(n), h_coefficient(spec, n));
    return f;
}

// All distinct parameter points (k, l, chi, psi) with k, l >= 2, k + l = K,
// characters mod M, paired two at a time (the same-total-weight differences).
// Specs are ordered by (k, chi index, psi index); pairs are emitted in
// lexicographic order of their spec positions.
inline std::vector<HSpec> spanning_specs(std::uint32_t K, std::uint32_t M, std::uint64_t m) {
    if (K < 4) throw std::invalid_argument("spanning_specs: total weight must be at least 4");
    const auto chars = enumerate_characters(M);
    std::vector<HSpec> specs;
    for (std::uint32_t k = 2; k + 2 <= K; ++k) {
        for (const auto& chi : chars)
            for (const auto& psi : chars) specs.emplace_back(k, K - k, chi, psi, m);
    }
    return specs;
}

inline std::vector<std::pair<HSpec, HSpec>> spanning_set(std::uint32_t K, std::uint32_t M, std::uint64_t m) {
    const auto specs = spanning_specs(K, M, m);
    std::vector<std::pair<HSpec, HSpec>> pairs;
    for (std::size_t i = 0; i < specs.size(); ++i)
        for (std::size_t j = i + 1; j < specs.size(); ++j) pairs.emplace_back(specs[i], specs[j]);
    return pairs;
}

/**
 * The coefficient-at-primes polynomial of a combination of Eisenstein specs,
 * restricted to a residue class: for primes p == m (mod M) coprime to every
 * character modulus, the p-th coefficient equals sum_r beta_r p^r exactly.
 * degree_bound is the Vandermonde slot count (max derivative + weight over
 * the contributing terms), which may exceed the actual polynomial degree.
 */
struct PrimeCoefficientPolynomial {
    std::uint64_t residue = 0;
    std::uint32_t modulus = 1;
    std::uint32_t degree_bound = 0;
    std::map<std::uint32_t, CycValue> coeffs;  // zero entries dropped

    bool is_zero() const { return coeffs.empty(); }

    CycValue evaluate(std::uint64_t p) const {
        CycValue acc = CycValue::zero();
        for (const auto& [r, beta] : coeffs) acc += beta.scaled(Rational(pow_integer(Integer(p), r)));
        return acc;
    }

    friend bool operator==(const PrimeCoefficientPolynomial& a, const PrimeCoefficientPolynomial& b) {
        return a.residue == b.residue && a.modulus == b.modulus && a.degree_bound == b.degree_bound &&
               a.coeffs == b.coeffs;
    }
};

inline PrimeCoefficientPolynomial prime_coefficient_polynomial(
    const std::vector<std::pair<CycValue, EisensteinSpec>>& combination, std::uint64_t m, std::uint32_t M) {
    if (M == 0) throw std::invalid_argument("prime_coefficient_polynomial: modulus must be positive");
    PrimeCoefficientPolynomial poly;
    poly.residue = m % M;
    poly.modulus = M;
    for (const auto& [alpha, spec] : combination) {
        detail::check_eisenstein_spec(spec);
        if (spec.v_multiplier != 1)
            throw std::invalid_argument(
                "prime_coefficient_polynomial: dilated specs vanish at primes away from the dilation factor and "
                "are not representable; scan them with the detector instead");
        if (!spec.e2 && (M % spec.chi.modulus() != 0 || M % spec.psi.modulus() != 0))
            throw std::invalid_argument("prime_coefficient_polynomial: character moduli must divide M");
        if (alpha.is_zero()) continue;
        if (spec.e2) {
            const CycValue c = alpha.scaled(Rational(-24));
            poly.coeffs[spec.derivative] += c;
            poly.coeffs[spec.derivative + 1] += c;
            poly.degree_bound = std::max(poly.degree_bound, spec.derivative + 2);
        } else {
            if (spec.weight == 0) continue;  // zero series by convention
            poly.coeffs[spec.derivative] += alpha * spec.chi.at(m).scaled(Rational(2));
            poly.coeffs[spec.derivative + spec.weight - 1] += alpha * spec.psi.at(m).scaled(Rational(2));
            poly.degree_bound = std::max(poly.degree_bound, spec.derivative + spec.weight);
        }
    }
    for (auto it = poly.coeffs.begin(); it != poly.coeffs.end();)
        it = it->second.is_zero() ? poly.coeffs.erase(it) : std::next(it);
    return poly;
}

inline PrimeCoefficientPolynomial h_prime_polynomial(const HSpec& spec) {
    return prime_coefficient_polynomial(spec.constituents(), spec.residue, spec.modulus());
}

// Sign of the leading coefficient; 0 for the zero polynomial. The leading
// coefficient must be rational once rewritten over the minimal order --- a
// combination with genuinely complex leading data is rejected.
inline int polynomial_sign(const PrimeCoefficientPolynomial& poly) {
    if (poly.coeffs.empty()) return 0;
    const CycValue lead = poly.coeffs.rbegin()->second.normalized();
    if (!lead.is_rational())
        throw std::domain_error("polynomial_sign: leading coefficient is not real-rational; "
                                "the fixed-sign conclusion does not apply");
    return sign_of(lead.rational_value());
}

struct FiniteCheckCertificate {
    bool detects = false;
    std::optional<std::pair<std::uint64_t, CycValue>> witness;
    std::vector<std::uint64_t> primes_used;
};

inline std::size_t required_prime_count(const PrimeCoefficientPolynomial& poly) {
    return static_cast<std::size_t>(poly.degree_bound) + 1;
}

inline std::vector<std::uint64_t> auto_check_primes(const PrimeCoefficientPolynomial& poly) {
    return primes_in_progression(poly.residue, poly.modulus, required_prime_count(poly));
}

/**
 * Vandermonde finite check: a polynomial with slots 0..degree_bound that
 * vanishes at degree_bound + 1 distinct primes in the class is identically
 * zero, so the coefficient vanishes at every prime of the progression.
 * Otherwise the first nonzero evaluation is reported as a witness.
 */
inline FiniteCheckCertificate finite_prime_check(const PrimeCoefficientPolynomial& poly,
                                                 const std::vector<std::uint64_t>& primes) {
    const std::size_t needed = required_prime_count(poly);
    if (primes.size() < needed)
        throw std::invalid_argument("finite_prime_check: need at least " + std::to_string(needed) +
                                    " primes in the class, got " + std::to_string(primes.size()));
    std::vector<std::uint64_t> sorted = primes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("finite_prime_check: primes must be distinct");
    for (std::uint64_t p : primes) {
        if (!is_prime(p)) throw std::invalid_argument("finite_prime_check: " + std::to_string(p) + " is not prime");
        if (p % poly.modulus != poly.residue % poly.modulus)
            throw std::invalid_argument("finite_prime_check: " + std::to_string(p) + " is not in the class");
    }
    FiniteCheckCertificate cert;
    cert.primes_used = primes;
    for (std::uint64_t p : primes) {
        CycValue v = poly.evaluate(p);
        if (!v.is_zero()) {
            cert.detects = false;
            cert.witness = std::make_pair(p, std::move(v));
            return cert;
        }
    }
    cert.detects = true;
    return cert;
}

}  // namespace qdetect
