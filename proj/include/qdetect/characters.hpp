#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qdetect/cyclotomic.hpp"
#include "qdetect/primes.hpp"
#include "qdetect/rational.hpp"

namespace qdetect {

// Kronecker symbol (D|n), the full extension of the Jacobi symbol.
inline int kronecker(long long a, long long n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n % 2) == 0) return 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    int v = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++v;
    }
    if (v & 1) {
        const long long am8 = ((a % 8) + 8) % 8;
        if (am8 == 3 || am8 == 5) result = -result;
    }
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        int v2 = 0;
        while ((a & 1) == 0) {
            a >>= 1;
            ++v2;
        }
        if (v2 & 1) {
            const long long nm8 = n % 8;
            if (nm8 == 3 || nm8 == 5) result = -result;
        }
        if ((a % 4) == 3 && (n % 4) == 3) result = -result;
        std::swap(a, n);
        a %= n;
    }
    return (n == 1) ? result : 0;
}

namespace detail {

// One cyclic factor of (Z/M)^*, attached to the prime power q | M that carries it.
struct UnitComponent {
    std::uint32_t prime_power = 1;
    std::uint64_t generator = 1;
    std::uint32_t order = 1;
    std::vector<std::uint32_t> dlog;  // dlog[r] for units r mod prime_power, else undefined
};

inline std::uint64_t smallest_generator(std::uint64_t q, std::uint64_t group_order) {
    const auto factors = factorize(group_order);
    for (std::uint64_t g = 2; g < q; ++g) {
        if (std::gcd(g, q) != 1) continue;
        bool ok = true;
        for (const auto& [p, e] : factors) {
            if (powmod_u64(g, group_order / p, q) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw std::logic_error("smallest_generator: no generator found");
}

// CRT decomposition of the unit group. Component order: for 8 | M the {±1}
// component then the <5> component, then odd prime powers in increasing order.
inline std::vector<UnitComponent> unit_group_components(std::uint32_t M) {
    std::vector<UnitComponent> comps;
    if (M <= 2) return comps;
    std::vector<std::pair<std::uint64_t, unsigned>> fac = factorize(M);
    for (const auto& [p, e] : fac) {
        const std::uint64_t q = pow_integer(Integer(p), e).convert_to<std::uint64_t>();
        if (p == 2) {
            if (e == 1) continue;
            if (e == 2) {
                UnitComponent c;
                c.prime_power = static_cast<std::uint32_t>(q);
                c.generator = 3;
                c.order = 2;
                c.dlog.assign(q, 0);
                c.dlog[1] = 0;
                c.dlog[3] = 1;
                comps.insert(comps.begin(), c);
                continue;
            }
            // 2^e with e >= 3: units are (-1)^s * 5^j
            UnitComponent sign_comp, five_comp;
            sign_comp.prime_power = five_comp.prime_power = static_cast<std::uint32_t>(q);
            sign_comp.generator = q - 1;
            sign_comp.order = 2;
            five_comp.generator = 5;
            five_comp.order = static_cast<std::uint32_t>(q / 4);
            sign_comp.dlog.assign(q, 0);
            five_comp.dlog.assign(q, 0);
            std::uint64_t pw = 1;
            for (std::uint32_t j = 0; j < five_comp.order; ++j) {
                sign_comp.dlog[pw] = 0;
                five_comp.dlog[pw] = j;
                sign_comp.dlog[q - pw] = 1;
                five_comp.dlog[q - pw] = j;
                pw = (pw * 5) % q;
            }
            comps.insert(comps.begin(), five_comp);
            comps.insert(comps.begin(), sign_comp);
            continue;
        }
        UnitComponent c;
        c.prime_power = static_cast<std::uint32_t>(q);
        c.order = static_cast<std::uint32_t>(q - q / p);
        c.generator = smallest_generator(q, c.order);
        c.dlog.assign(q, 0);
        std::uint64_t pw = 1;
        for (std::uint32_t j = 0; j < c.order; ++j) {
            c.dlog[pw] = j;
            pw = (pw * c.generator) % q;
        }
        comps.push_back(c);
    }
    return comps;
}

}  // namespace detail

/**
 * Dirichlet character mod M, identified by its modulus and enumeration index.
 *
 * Indexing is mixed radix over the cyclic components of (Z/M)^* as returned
 * by the CRT decomposition (2-power components first, then odd prime powers
 * ascending; each odd component uses the smallest primitive root as its fixed
 * generator). Index 0 is the principal character. Values are exact roots of
 * unity; the full value table is precomputed so evaluation is a lookup.
 */
class DirichletCharacter {
public:
    explicit DirichletCharacter(std::uint32_t modulus, std::uint64_t index = 0)
        : modulus_(modulus), index_(index) {
        if (modulus_ == 0) throw std::invalid_argument("DirichletCharacter: modulus must be positive");
        comps_ = detail::unit_group_components(modulus_);
        std::uint64_t rest = index;
        std::uint64_t group_size = 1;
        for (const auto& c : comps_) {
            exponents_.push_back(static_cast<std::uint32_t>(rest % c.order));
            rest /= c.order;
            group_size *= c.order;
        }
        if (index >= group_size)
            throw std::invalid_argument("DirichletCharacter: index out of range (must be < phi(M))");
        build_value_table();
        conductor_ = compute_conductor();
        order_ = 1;
        for (std::size_t i = 0; i < comps_.size(); ++i) {
            const std::uint32_t n = comps_[i].order;
            order_ = std::lcm<std::uint64_t>(order_, n / std::gcd<std::uint64_t>(n, exponents_[i]));
        }
        parity_ = 1;
        if (modulus_ > 2) {
            const CycValue v = values_[modulus_ - 1];
            if (v == CycValue(Rational(-1)))
                parity_ = -1;
            else if (v != CycValue::one())
                throw std::logic_error("DirichletCharacter: value at -1 is not a sign");
        }
    }

    std::uint32_t modulus() const { return modulus_; }
    std::uint64_t index() const { return index_; }
    std::uint32_t conductor() const { return conductor_; }
    std::uint64_t order() const { return order_; }
    int parity() const { return parity_; }
    bool is_principal() const { return index_ == 0; }
    bool is_primitive() const { return conductor_ == modulus_; }

    const CycValue& operator()(std::int64_t n) const {
        std::int64_t r = n % static_cast<std::int64_t>(modulus_);
        if (r < 0) r += modulus_;
        return values_[static_cast<std::size_t>(r)];
    }
    const CycValue& at(std::uint64_t n) const { return values_[n % modulus_]; }

    DirichletCharacter conjugate() const {
        std::uint64_t idx = 0;
        std::uint64_t radix = 1;
        for (std::size_t i = 0; i < comps_.size(); ++i) {
            const std::uint32_t e = exponents_[i] == 0 ? 0 : comps_[i].order - exponents_[i];
            idx += radix * e;
            radix *= comps_[i].order;
        }
        return DirichletCharacter(modulus_, idx);
    }

    friend DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b) {
        if (a.modulus_ != b.modulus_)
            throw std::invalid_argument("DirichletCharacter: product requires equal moduli");
        std::uint64_t idx = 0;
        std::uint64_t radix = 1;
        for (std::size_t i = 0; i < a.comps_.size(); ++i) {
            const std::uint32_t e = (a.exponents_[i] + b.exponents_[i]) % a.comps_[i].order;
            idx += radix * e;
            radix *= a.comps_[i].order;
        }
        return DirichletCharacter(a.modulus_, idx);
    }

    friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
        return a.modulus_ == b.modulus_ && a.index_ == b.index_;
    }

    // The character mod conductor() inducing this one.
    DirichletCharacter primitive_character() const {
        if (conductor_ == modulus_) return *this;
        const std::uint64_t count = euler_phi(conductor_);
        for (std::uint64_t j = 0; j < count; ++j) {
            DirichletCharacter cand(conductor_, j);
            bool match = true;
            for (std::uint32_t n = 0; n < modulus_ && match; ++n) {
                if (std::gcd<std::uint64_t>(n, modulus_) != 1) continue;
                if (cand.at(n) != values_[n]) match = false;
            }
            if (match) return cand;
        }
        throw std::logic_error("primitive_character: no inducing character found");
    }

private:
    void build_value_table() {
        values_.reserve(modulus_);
        std::uint64_t value_order = 1;
        for (const auto& c : comps_) value_order = std::lcm<std::uint64_t>(value_order, c.order);
        for (std::uint32_t n = 0; n < modulus_; ++n) {
            if (modulus_ == 1) {
                values_.push_back(CycValue::one());
                continue;
            }
            if (std::gcd<std::uint64_t>(n, modulus_) != 1) {
                values_.push_back(CycValue::zero());
                continue;
            }
            std::uint64_t exp = 0;
            for (std::size_t i = 0; i < comps_.size(); ++i) {
                const auto& c = comps_[i];
                const std::uint64_t t = c.dlog[n % c.prime_power];
                const std::uint64_t part = (static_cast<std::uint64_t>(exponents_[i]) * t) % c.order;
                exp = (exp + part * (value_order / c.order)) % value_order;
            }
            values_.push_back(CycValue::root_of_unity(static_cast<unsigned>(value_order),
                                                      static_cast<long long>(exp)));
        }
    }

    // Smallest d | M with chi(a) = 1 whenever a == 1 (mod d) and gcd(a, M) = 1.
    std::uint32_t compute_conductor() const {
        for (std::uint64_t d : divisors(modulus_)) {
            bool ok = true;
            for (std::uint32_t a = 1; a < modulus_ && ok; ++a) {
                if (std::gcd<std::uint64_t>(a, modulus_) != 1) continue;
                if (a % d != 1 % d) continue;
                if (values_[a] != CycValue::one()) ok = false;
            }
            if (ok) return static_cast<std::uint32_t>(d);
        }
        return modulus_;
    }

    std::uint32_t modulus_;
    std::uint64_t index_;
    std::vector<detail::UnitComponent> comps_;
    std::vector<std::uint32_t> exponents_;
    std::vector<CycValue> values_;
    std::uint32_t conductor_ = 1;
    std::uint64_t order_ = 1;
    int parity_ = 1;
};

inline std::vector<DirichletCharacter> enumerate_characters(std::uint32_t M) {
    if (M == 0) throw std::invalid_argument("enumerate_characters: modulus must be positive");
    const std::uint64_t count = euler_phi(M);
    std::vector<DirichletCharacter> out;
    out.reserve(count);
    for (std::uint64_t j = 0; j < count; ++j) out.emplace_back(M, j);
    return out;
}

inline DirichletCharacter principal_character(std::uint32_t M) { return DirichletCharacter(M, 0); }

// The quadratic character n -> (D|n) as a Dirichlet character mod |D|.
// Only defined when (D|.) is |D|-periodic, i.e. for fundamental discriminants.
inline DirichletCharacter kronecker_character(long long D) {
    if (D == 0) throw std::invalid_argument("kronecker_character: D must be nonzero");
    const std::uint32_t M = static_cast<std::uint32_t>(D < 0 ? -D : D);
    for (auto& chi : enumerate_characters(M)) {
        bool match = true;
        // (D|.) always has period 4|D|, so matching a mod-|D| character across
        // that full period pins the symbol down
        for (std::uint32_t n = 0; n < 4 * M && match; ++n) {
            if (chi.at(n) != CycValue(Rational(kronecker(D, n)))) match = false;
        }
        if (match) return chi;
    }
    throw std::invalid_argument("kronecker_character: (D|.) is not a character mod |D|");
}

}  // namespace qdetect
