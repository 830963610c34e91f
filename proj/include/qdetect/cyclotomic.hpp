#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qdetect/primes.hpp"
#include "qdetect/rational.hpp"

namespace qdetect {

namespace detail {

// Exact division of integer polynomials by a monic divisor (remainder must be zero).
inline std::vector<Integer> divide_monic(const std::vector<Integer>& num, const std::vector<Integer>& den) {
    if (den.empty() || den.back() != 1) throw std::logic_error("divide_monic: divisor must be monic");
    if (num.size() < den.size()) throw std::logic_error("divide_monic: divisor degree too large");
    std::vector<Integer> rem = num;
    std::vector<Integer> quo(num.size() - den.size() + 1, Integer(0));
    for (std::size_t shift = quo.size(); shift-- > 0;) {
        const Integer c = rem[shift + den.size() - 1];
        if (c == 0) continue;
        quo[shift] = c;
        for (std::size_t j = 0; j < den.size(); ++j) rem[shift + j] -= c * den[j];
    }
    for (const Integer& r : rem)
        if (r != 0) throw std::logic_error("divide_monic: nonzero remainder");
    return quo;
}

}  // namespace detail

// Coefficients of the n-th cyclotomic polynomial, ascending degree (monic, integral).
inline const std::vector<Integer>& cyclotomic_polynomial(unsigned n) {
    if (n == 0) throw std::invalid_argument("cyclotomic_polynomial: n must be positive");
    static std::map<unsigned, std::vector<Integer>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    for (std::uint64_t d : divisors(n)) {
        const unsigned du = static_cast<unsigned>(d);
        if (cache.count(du)) continue;
        std::vector<Integer> poly(du + 1, Integer(0));  // x^d - 1
        poly[0] = -1;
        poly[du] = 1;
        for (std::uint64_t e : divisors(d)) {
            if (e == d) continue;
            poly = detail::divide_monic(poly, cache.at(static_cast<unsigned>(e)));
        }
        cache.emplace(du, std::move(poly));
    }
    return cache.at(n);
}

namespace detail {

// table[e] = power-basis coordinates of the e-th power of the primitive order-n
// root, for 0 <= e < n. Entries are integral because the modulus is monic.
inline const std::vector<std::vector<Integer>>& power_basis_table(unsigned n) {
    static std::map<unsigned, std::vector<std::vector<Integer>>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    const auto& phi_poly = cyclotomic_polynomial(n);
    const std::size_t deg = phi_poly.size() - 1;  // = euler_phi(n)
    if (deg == 0) throw std::logic_error("power_basis_table: degenerate modulus");
    std::vector<std::vector<Integer>> table(n);
    // e = 0
    std::vector<Integer> rep(deg, Integer(0));
    rep[0] = 1;
    table[0] = rep;
    for (unsigned e = 1; e < n; ++e) {
        // multiply previous representative by x, reduce by the monic modulus
        std::vector<Integer> next(deg + 1, Integer(0));
        for (std::size_t j = 0; j < deg; ++j) next[j + 1] = table[e - 1][j];
        if (next[deg] != 0) {
            const Integer c = next[deg];
            for (std::size_t j = 0; j <= deg; ++j) next[j] -= c * phi_poly[j];
        }
        next.resize(deg);
        table[e] = std::move(next);
    }
    return cache.emplace(n, std::move(table)).first->second;
}

}  // namespace detail

/**
 * Element of the cyclotomic field of a given order, stored as exact rational
 * coordinates in the power basis reduced modulo the cyclotomic polynomial.
 * The representation is canonical for a fixed order; binary operations embed
 * both operands into the lcm order first. The stored order is not forced to
 * be minimal; normalized() rewrites a value over the smallest possible order.
 */
class CycValue {
public:
    CycValue() : order_(1), coords_(1, Rational(0)) {}
    explicit CycValue(const Rational& r) : order_(1), coords_(1, r) {}
    explicit CycValue(const Integer& n) : order_(1), coords_(1, Rational(n)) {}
    explicit CycValue(long long n) : order_(1), coords_(1, Rational(n)) {}

    static CycValue zero() { return CycValue(); }
    static CycValue one() { return CycValue(Rational(1)); }

    static CycValue root_of_unity(unsigned order, long long exponent) {
        if (order == 0) throw std::invalid_argument("root_of_unity: order must be positive");
        long long e = exponent % static_cast<long long>(order);
        if (e < 0) e += order;
        const auto& table = detail::power_basis_table(order);
        CycValue v;
        v.order_ = order;
        v.coords_.assign(table[0].size(), Rational(0));
        for (std::size_t j = 0; j < v.coords_.size(); ++j) v.coords_[j] = Rational(table[static_cast<std::size_t>(e)][j]);
        return v;
    }

    static CycValue from_coords(unsigned order, std::vector<Rational> coords) {
        CycValue v;
        v.order_ = order;
        const std::size_t deg = detail::power_basis_table(order)[0].size();
        if (coords.size() != deg) throw std::invalid_argument("from_coords: wrong coordinate count");
        v.coords_ = std::move(coords);
        return v;
    }

    unsigned order() const { return order_; }
    const std::vector<Rational>& coords() const { return coords_; }

    bool is_zero() const {
        for (const auto& c : coords_)
            if (c != 0) return false;
        return true;
    }

    bool is_rational() const {
        for (std::size_t j = 1; j < coords_.size(); ++j)
            if (coords_[j] != 0) return false;
        return true;
    }

    const Rational& rational_value() const {
        if (!is_rational()) throw std::domain_error("CycValue: not a rational value");
        return coords_[0];
    }

    CycValue embedded(unsigned target_order) const {
        if (target_order % order_ != 0) throw std::invalid_argument("embedded: order must divide target");
        if (target_order == order_) return *this;
        const auto& table = detail::power_basis_table(target_order);
        const unsigned factor = target_order / order_;
        std::vector<Rational> out(table[0].size(), Rational(0));
        for (std::size_t e = 0; e < coords_.size(); ++e) {
            if (coords_[e] == 0) continue;
            const auto& rep = table[(e * static_cast<std::size_t>(factor)) % target_order];
            for (std::size_t j = 0; j < out.size(); ++j)
                if (rep[j] != 0) out[j] += coords_[e] * Rational(rep[j]);
        }
        return from_coords(target_order, std::move(out));
    }

    friend CycValue operator+(const CycValue& a, const CycValue& b) {
        if (a.order_ == b.order_) {
            std::vector<Rational> out = a.coords_;
            for (std::size_t j = 0; j < out.size(); ++j) out[j] += b.coords_[j];
            return from_coords(a.order_, std::move(out));
        }
        const unsigned target = std::lcm(a.order_, b.order_);
        return a.embedded(target) + b.embedded(target);
    }

    friend CycValue operator-(const CycValue& a, const CycValue& b) { return a + (-b); }

    CycValue operator-() const {
        std::vector<Rational> out = coords_;
        for (auto& c : out) c = -c;
        return from_coords(order_, std::move(out));
    }

    friend CycValue operator*(const CycValue& a, const CycValue& b) {
        if (a.is_rational()) return b.scaled(a.coords_[0]);
        if (b.is_rational()) return a.scaled(b.coords_[0]);
        if (a.order_ != b.order_) {
            const unsigned target = std::lcm(a.order_, b.order_);
            return a.embedded(target) * b.embedded(target);
        }
        const unsigned n = a.order_;
        const std::size_t deg = a.coords_.size();
        std::vector<Rational> conv(2 * deg - 1, Rational(0));
        for (std::size_t i = 0; i < deg; ++i) {
            if (a.coords_[i] == 0) continue;
            for (std::size_t j = 0; j < deg; ++j) {
                if (b.coords_[j] == 0) continue;
                conv[i + j] += a.coords_[i] * b.coords_[j];
            }
        }
        const auto& table = detail::power_basis_table(n);
        std::vector<Rational> out(deg, Rational(0));
        for (std::size_t e = 0; e < conv.size(); ++e) {
            if (conv[e] == 0) continue;
            if (e < deg) {
                out[e] += conv[e];
                continue;
            }
            const auto& rep = table[e % n];
            for (std::size_t j = 0; j < deg; ++j)
                if (rep[j] != 0) out[j] += conv[e] * Rational(rep[j]);
        }
        return from_coords(n, std::move(out));
    }

    CycValue scaled(const Rational& r) const {
        std::vector<Rational> out = coords_;
        for (auto& c : out) c *= r;
        return from_coords(order_, std::move(out));
    }

    // Image under the automorphism sending every root of unity to its inverse.
    CycValue conjugated() const {
        const auto& table = detail::power_basis_table(order_);
        std::vector<Rational> out(coords_.size(), Rational(0));
        for (std::size_t e = 0; e < coords_.size(); ++e) {
            if (coords_[e] == 0) continue;
            const auto& rep = table[(order_ - e) % order_];
            for (std::size_t j = 0; j < out.size(); ++j)
                if (rep[j] != 0) out[j] += coords_[e] * Rational(rep[j]);
        }
        return from_coords(order_, std::move(out));
    }

    friend bool operator==(const CycValue& a, const CycValue& b) {
        if (a.order_ == b.order_) return a.coords_ == b.coords_;
        const unsigned target = std::lcm(a.order_, b.order_);
        return a.embedded(target).coords_ == b.embedded(target).coords_;
    }
    friend bool operator!=(const CycValue& a, const CycValue& b) { return !(a == b); }

    CycValue& operator+=(const CycValue& o) { return *this = *this + o; }
    CycValue& operator-=(const CycValue& o) { return *this = *this - o; }
    CycValue& operator*=(const CycValue& o) { return *this = *this * o; }

    /// Rewrite over the smallest order that can represent the value exactly.
    CycValue normalized() const {
        if (is_rational()) return CycValue(coords_[0]);
        for (std::uint64_t d : divisors(order_)) {
            if (d == order_) break;
            auto expressed = express_in_suborder(static_cast<unsigned>(d));
            if (expressed) return *expressed;
        }
        return *this;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t e = 0; e < coords_.size(); ++e) {
            const Rational& c = coords_[e];
            if (c == 0) continue;
            Rational mag = c < 0 ? Rational(-c) : c;
            if (first) {
                if (c < 0) os << "-";
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            if (e == 0) {
                os << rational_to_string(mag);
            } else {
                if (mag != 1) os << rational_to_string(mag) << "*";
                os << "z" << order_;
                if (e > 1) os << "^" << e;
            }
        }
        return os.str();
    }

private:
    // Attempt to express the value in the subfield generated by the order-d root.
    std::optional<CycValue> express_in_suborder(unsigned d) const {
        const std::size_t sub_deg = detail::power_basis_table(d)[0].size();
        const auto& table = detail::power_basis_table(order_);
        const unsigned step = order_ / d;
        const std::size_t rows = coords_.size();
        // Columns: coordinates of the i-th power of the order-d root inside our field.
        std::vector<std::vector<Rational>> mat(rows, std::vector<Rational>(sub_deg + 1, Rational(0)));
        for (std::size_t i = 0; i < sub_deg; ++i) {
            const auto& rep = table[(i * step) % order_];
            for (std::size_t r = 0; r < rows; ++r) mat[r][i] = Rational(rep[r]);
        }
        for (std::size_t r = 0; r < rows; ++r) mat[r][sub_deg] = coords_[r];
        // Gaussian elimination.
        std::size_t lead = 0;
        std::vector<std::size_t> pivot_col;
        for (std::size_t col = 0; col < sub_deg && lead < rows; ++col) {
            std::size_t sel = lead;
            while (sel < rows && mat[sel][col] == 0) ++sel;
            if (sel == rows) continue;
            std::swap(mat[sel], mat[lead]);
            const Rational inv = Rational(1) / mat[lead][col];
            for (auto& v : mat[lead]) v *= inv;
            for (std::size_t r = 0; r < rows; ++r) {
                if (r == lead || mat[r][col] == 0) continue;
                const Rational f = mat[r][col];
                for (std::size_t cc = col; cc <= sub_deg; ++cc) mat[r][cc] -= f * mat[lead][cc];
            }
            pivot_col.push_back(col);
            ++lead;
        }
        for (std::size_t r = lead; r < rows; ++r)
            if (mat[r][sub_deg] != 0) return std::nullopt;  // inconsistent: not in the subfield
        std::vector<Rational> sol(sub_deg, Rational(0));
        for (std::size_t r = 0; r < pivot_col.size(); ++r) sol[pivot_col[r]] = mat[r][sub_deg];
        return from_coords(d, std::move(sol));
    }

    unsigned order_;
    std::vector<Rational> coords_;
};

inline CycValue operator*(const Rational& r, const CycValue& v) { return v.scaled(r); }
inline CycValue operator*(const CycValue& v, const Rational& r) { return v.scaled(r); }

}  // namespace qdetect
