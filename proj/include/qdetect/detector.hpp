#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdetect/eisenstein.hpp"
#include "qdetect/primes.hpp"
#include "qdetect/qseries.hpp"
#include "qdetect/rational.hpp"

namespace qdetect {

struct Progression {
    std::uint64_t residue = 0;  // normalized into [0, modulus)
    std::uint64_t modulus = 1;

    Progression() = default;
    Progression(std::int64_t m, std::uint64_t M) {
        if (M == 0) throw std::invalid_argument("Progression: modulus must be positive");
        modulus = M;
        std::int64_t r = m % static_cast<std::int64_t>(M);
        if (r < 0) r += M;
        residue = static_cast<std::uint64_t>(r);
    }

    bool contains(std::uint64_t n) const { return n % modulus == residue; }

    friend bool operator==(const Progression& a, const Progression& b) {
        return a.residue == b.residue && a.modulus == b.modulus;
    }
};

// CRT intersection: empty unless the residues agree modulo gcd of the moduli,
// otherwise a single class modulo lcm.
inline std::optional<Progression> progression_intersection(const Progression& a, const Progression& b) {
    const std::uint64_t g = std::gcd(a.modulus, b.modulus);
    if (a.residue % g != b.residue % g) return std::nullopt;
    const Integer m1(a.modulus), m2(b.modulus);
    const Integer l = lcm(m1, m2);
    // x = r1 + m1 * t with t == (r2 - r1)/g * inv(m1/g) (mod m2/g)
    const Integer m2g = m2 / g;
    Integer diff = (Integer(b.residue) - Integer(a.residue)) / g;
    Integer m1g = (m1 / g) % m2g;
    Integer t(0);
    if (m2g != 1) {
        // extended euclid for the inverse of m1g mod m2g
        Integer r0 = m2g, r1 = m1g % m2g, s0 = 0, s1 = 1;
        while (r1 != 0) {
            const Integer q = r0 / r1;
            Integer r2 = r0 - q * r1;
            Integer s2 = s0 - q * s1;
            r0 = r1;
            r1 = r2;
            s0 = s1;
            s1 = s2;
        }
        if (r0 != 1) throw std::logic_error("progression_intersection: gcd reduction failed");
        t = ((diff % m2g) * (s0 % m2g)) % m2g;
        if (t < 0) t += m2g;
    }
    Integer x = (Integer(a.residue) + m1 * t) % l;
    if (x < 0) x += l;
    if (l > Integer(UINT64_MAX)) throw std::overflow_error("progression_intersection: lcm exceeds 64 bits");
    Progression out;
    out.modulus = l.convert_to<std::uint64_t>();
    out.residue = x.convert_to<std::uint64_t>();
    return out;
}

// Residues n mod N, coprime to N, whose class mod N meets the class m mod M.
inline std::vector<std::uint64_t> v_set(std::uint64_t m, std::uint64_t M, std::uint64_t N) {
    if (M == 0 || N == 0) throw std::invalid_argument("v_set: moduli must be positive");
    if (std::gcd(m % M, M) != 1) throw std::invalid_argument("v_set: residue must be coprime to its modulus");
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 0; n < N; ++n) {
        if (std::gcd(n, N) != 1) continue;
        if (progression_intersection(Progression(static_cast<std::int64_t>(n), N),
                                     Progression(static_cast<std::int64_t>(m % M), M)))
            out.push_back(n);
    }
    return out;
}

/**
 * Exact coefficient oracle: a name for reports, an inclusive index bound
 * (UINT64_MAX when values can be generated for any index), and the evaluator.
 */
struct CoefficientSource {
    std::string name;
    std::uint64_t max_index = 0;
    std::function<CycValue(std::uint64_t)> at;
};

inline CoefficientSource source_from_qseries(QSeries series, std::string name = "qseries") {
    auto holder = std::make_shared<QSeries>(std::move(series));
    CoefficientSource src;
    src.name = std::move(name);
    src.max_index = holder->truncation();
    src.at = [holder](std::uint64_t n) { return holder->coefficient(static_cast<std::uint32_t>(n)); };
    return src;
}

inline CoefficientSource source_from_h(HSpec spec, std::string name = "h-series") {
    auto holder = std::make_shared<HSpec>(std::move(spec));
    CoefficientSource src;
    src.name = std::move(name);
    src.max_index = UINT64_MAX;
    src.at = [holder](std::uint64_t n) { return h_coefficient(*holder, n); };
    return src;
}

inline CoefficientSource source_from_eisenstein(std::vector<std::pair<CycValue, EisensteinSpec>> combination,
                                                std::string name = "eisenstein") {
    auto holder = std::make_shared<std::vector<std::pair<CycValue, EisensteinSpec>>>(std::move(combination));
    CoefficientSource src;
    src.name = std::move(name);
    src.max_index = UINT64_MAX;
    src.at = [holder](std::uint64_t n) {
        CycValue acc = CycValue::zero();
        for (const auto& [coeff, part] : *holder) {
            if (coeff.is_zero()) continue;
            acc += coeff * eisenstein_coefficient(part, n);
        }
        return acc;
    };
    return src;
}

// tau(n), materialized once up to the requested bound.
inline CoefficientSource source_delta(std::uint32_t bound) {
    auto table = std::make_shared<std::vector<Integer>>(tau_table(bound));
    CoefficientSource src;
    src.name = "delta";
    src.max_index = bound;
    src.at = [table](std::uint64_t n) {
        if (n == 0) return CycValue::zero();
        return CycValue(Rational((*table)[n]));
    };
    return src;
}

inline CoefficientSource source_e2() {
    CoefficientSource src;
    src.name = "e2";
    src.max_index = UINT64_MAX;
    src.at = [](std::uint64_t n) { return eisenstein_coefficient(EisensteinSpec::e2_series(), n); };
    return src;
}

enum class DetectionVerdict { fails, detects, strongly_detects };

inline const char* to_string(DetectionVerdict v) {
    switch (v) {
        case DetectionVerdict::fails: return "fails";
        case DetectionVerdict::detects: return "detects";
        case DetectionVerdict::strongly_detects: return "strongly_detects";
    }
    return "unknown";
}

struct DetectionWitness {
    std::uint64_t n = 0;
    CycValue value;
    // true: a prime whose coefficient should vanish but does not;
    // false: a non-prime whose coefficient should be nonzero but vanishes.
    bool prime_class = false;
};

struct DetectionReport {
    DetectionVerdict verdict = DetectionVerdict::fails;
    std::uint64_t bound = 0;
    bool vacuous = false;  // every scanned coefficient was zero
    std::vector<DetectionWitness> witnesses;
    std::uint64_t witness_total = 0;
};

/**
 * Scan the progression up to the bound, skipping indices sharing a factor
 * with the level. Detection requires vanishing at the primes of the class;
 * strong detection additionally requires every non-prime scanned index
 * (including n = 1, which the literal set equality puts on the nonzero side)
 * to carry a nonzero coefficient.
 */
inline DetectionReport scan_detection(const CoefficientSource& source, const Progression& progression,
                                      std::uint64_t level, std::uint64_t bound, std::size_t witness_cap = 32) {
    if (level == 0) throw std::invalid_argument("scan_detection: level must be positive");
    if (bound > source.max_index) throw std::invalid_argument("scan_detection: source cannot reach the bound");
    DetectionReport report;
    report.bound = bound;
    bool any_nonzero = false;
    bool prime_violation = false;
    bool strong_violation = false;
    for (std::uint64_t n = 1; n <= bound; ++n) {
        if (!progression.contains(n)) continue;
        if (std::gcd(n, level) != 1) continue;
        const CycValue v = source.at(n);
        const bool zero = v.is_zero();
        if (!zero) any_nonzero = true;
        const bool prime = is_prime(n);
        const bool bad = prime ? !zero : zero;
        if (!bad) continue;
        if (prime) prime_violation = true;
        else strong_violation = true;
        ++report.witness_total;
        if (report.witnesses.size() < witness_cap)
            report.witnesses.push_back(DetectionWitness{n, v, prime});
    }
    report.vacuous = !any_nonzero;
    if (prime_violation)
        report.verdict = DetectionVerdict::fails;
    else if (strong_violation)
        report.verdict = DetectionVerdict::detects;
    else
        report.verdict = DetectionVerdict::strongly_detects;
    return report;
}

struct SignChangeReport {
    std::size_t count = 0;
    std::vector<std::uint64_t> positions;  // the prime where each flip lands
};

// Adjacent sign flips among the nonzero coefficients at primes of the class.
// Values must canonicalize to rationals; anything else is rejected with the
// offending index.
inline SignChangeReport sign_changes(const CoefficientSource& source, const Progression& progression,
                                     std::uint64_t bound) {
    if (bound > source.max_index) throw std::invalid_argument("sign_changes: source cannot reach the bound");
    SignChangeReport report;
    int last = 0;
    for (std::uint64_t n = 2; n <= bound; ++n) {
        if (!progression.contains(n) || !is_prime(n)) continue;
        const CycValue v = source.at(n).normalized();
        if (!v.is_rational())
            throw std::domain_error("sign_changes: non-real coefficient at index " + std::to_string(n));
        const int s = sign_of(v.rational_value());
        if (s == 0) continue;
        if (last != 0 && s != last) {
            ++report.count;
            report.positions.push_back(n);
        }
        last = s;
    }
    return report;
}

}  // namespace qdetect
