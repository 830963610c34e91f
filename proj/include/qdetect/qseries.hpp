#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qdetect/characters.hpp"
#include "qdetect/cyclotomic.hpp"
#include "qdetect/rational.hpp"

namespace qdetect {

/**
 * Truncated q-expansion over exact cyclotomic values.
 *
 * Coefficients 0..truncation are stored densely. The level field is tracked
 * metadata only: it is an upper bound in the divisibility lattice (the true
 * level of a modular input divides it) and no transformation law is checked.
 * Binary operations truncate to the shorter operand and never extrapolate.
 */
class QSeries {
public:
    explicit QSeries(std::uint32_t truncation, std::uint64_t level = 1)
        : truncation_(truncation), level_(level), coeffs_(truncation + 1, CycValue::zero()) {
        if (level == 0) throw std::invalid_argument("QSeries: level must be positive");
    }

    static QSeries zero(std::uint32_t truncation, std::uint64_t level = 1) { return QSeries(truncation, level); }

    static QSeries from_coefficients(std::vector<CycValue> coeffs, std::uint64_t level = 1) {
        if (coeffs.empty()) throw std::invalid_argument("QSeries: need at least the constant coefficient");
        QSeries f(static_cast<std::uint32_t>(coeffs.size() - 1), level);
        f.coeffs_ = std::move(coeffs);
        return f;
    }

    std::uint32_t truncation() const { return truncation_; }
    std::uint64_t level() const { return level_; }

    const CycValue& coefficient(std::uint32_t n) const {
        if (n > truncation_) throw std::out_of_range("QSeries: coefficient beyond truncation");
        return coeffs_[n];
    }

    void set_coefficient(std::uint32_t n, CycValue v) {
        if (n > truncation_) throw std::out_of_range("QSeries: coefficient beyond truncation");
        coeffs_[n] = std::move(v);
    }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!c.is_zero()) return false;
        return true;
    }

    friend QSeries operator+(const QSeries& f, const QSeries& g) {
        const std::uint32_t n = std::min(f.truncation_, g.truncation_);
        QSeries out(n, std::lcm(f.level_, g.level_));
        for (std::uint32_t i = 0; i <= n; ++i) out.coeffs_[i] = f.coeffs_[i] + g.coeffs_[i];
        return out;
    }

    friend QSeries operator-(const QSeries& f, const QSeries& g) {
        const std::uint32_t n = std::min(f.truncation_, g.truncation_);
        QSeries out(n, std::lcm(f.level_, g.level_));
        for (std::uint32_t i = 0; i <= n; ++i) out.coeffs_[i] = f.coeffs_[i] - g.coeffs_[i];
        return out;
    }

    friend QSeries operator*(const QSeries& f, const QSeries& g) {
        const std::uint32_t n = std::min(f.truncation_, g.truncation_);
        QSeries out(n, std::lcm(f.level_, g.level_));
        for (std::uint32_t i = 0; i <= n; ++i) {
            if (f.coeffs_[i].is_zero()) continue;
            for (std::uint32_t j = 0; i + j <= n; ++j) {
                if (g.coeffs_[j].is_zero()) continue;
                out.coeffs_[i + j] += f.coeffs_[i] * g.coeffs_[j];
            }
        }
        return out;
    }

    QSeries scaled(const CycValue& s) const {
        QSeries out(truncation_, level_);
        if (s.is_zero()) return out;
        for (std::uint32_t i = 0; i <= truncation_; ++i) out.coeffs_[i] = coeffs_[i] * s;
        return out;
    }

    // c(n) -> n^times * c(n); kills the constant term for times >= 1.
    QSeries derivative(unsigned times = 1) const {
        if (times == 0) return *this;
        QSeries out(truncation_, level_);
        out.coeffs_[0] = CycValue::zero();
        for (std::uint32_t i = 1; i <= truncation_; ++i)
            out.coeffs_[i] = coeffs_[i].scaled(Rational(pow_integer(Integer(i), times)));
        return out;
    }

    // Index dilation n -> d*n; raises the level bound by the factor d.
    QSeries v_operator(std::uint32_t d) const {
        if (d == 0) throw std::invalid_argument("v_operator: d must be positive");
        QSeries out(truncation_, level_ * d);
        for (std::uint32_t i = 0; static_cast<std::uint64_t>(i) * d <= truncation_; ++i)
            out.coeffs_[i * d] = coeffs_[i];
        return out;
    }

    // Keep only coefficients with index == m (mod M).
    QSeries sieve(std::uint32_t M, std::int64_t m) const {
        if (M == 0) throw std::invalid_argument("sieve: modulus must be positive");
        std::int64_t r = m % static_cast<std::int64_t>(M);
        if (r < 0) r += M;
        QSeries out(truncation_, sieved_level(M));
        for (std::uint32_t i = 0; i <= truncation_; ++i)
            if (i % M == static_cast<std::uint32_t>(r)) out.coeffs_[i] = coeffs_[i];
        return out;
    }

    // c(n) -> chi(n) c(n). A twist is a character combination of sieves, so the
    // same pessimistic level bound applies.
    QSeries twisted(const DirichletCharacter& chi) const {
        QSeries out(truncation_, sieved_level(chi.modulus()));
        for (std::uint32_t i = 0; i <= truncation_; ++i) {
            const CycValue& val = chi.at(i);
            if (!val.is_zero() && !coeffs_[i].is_zero()) out.coeffs_[i] = coeffs_[i] * val;
        }
        return out;
    }

    friend bool operator==(const QSeries& f, const QSeries& g) {
        return f.truncation_ == g.truncation_ && f.level_ == g.level_ && f.coeffs_ == g.coeffs_;
    }

private:
    std::uint64_t sieved_level(std::uint64_t M) const {
        return std::lcm(std::lcm(level_, M * M), M * level_);
    }

    std::uint32_t truncation_;
    std::uint64_t level_;
    std::vector<CycValue> coeffs_;
};

// Coefficient agreement up to the common truncation (level metadata ignored).
inline bool same_coefficients(const QSeries& f, const QSeries& g) {
    const std::uint32_t n = std::min(f.truncation(), g.truncation());
    for (std::uint32_t i = 0; i <= n; ++i)
        if (f.coefficient(i) != g.coefficient(i)) return false;
    return true;
}

namespace detail {

inline Integer int128_to_integer(__int128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    Integer out = Integer(static_cast<std::uint64_t>(u >> 64));
    out <<= 64;
    out += Integer(static_cast<std::uint64_t>(u));
    return neg ? Integer(-out) : out;
}

// Signed sparse support of prod_{n>=1} (1 - q^n) up to n_max (pentagonal numbers).
inline std::vector<std::pair<std::uint32_t, int>> pentagonal_support(std::uint32_t n_max) {
    std::vector<std::pair<std::uint32_t, int>> sup;
    sup.emplace_back(0, 1);
    for (std::uint64_t k = 1;; ++k) {
        const std::uint64_t g1 = k * (3 * k - 1) / 2;
        const std::uint64_t g2 = k * (3 * k + 1) / 2;
        const int s = (k % 2 == 0) ? 1 : -1;
        if (g1 > n_max) break;
        sup.emplace_back(static_cast<std::uint32_t>(g1), s);
        if (g2 <= n_max) sup.emplace_back(static_cast<std::uint32_t>(g2), s);
    }
    std::sort(sup.begin(), sup.end());
    return sup;
}

}  // namespace detail

// Coefficients of q * prod (1-q^n)^24, i.e. tau(0..n_max), computed by 24
// sparse pentagonal convolutions in 128-bit arithmetic (overflow-checked).
inline std::vector<Integer> tau_table(std::uint32_t n_max) {
    const std::uint32_t len = n_max;  // need prod^24 up to q^(n_max-1)
    std::vector<__int128> cur(len, 0), next(len, 0);
    if (n_max == 0) return {};
    cur[0] = 1;
    const auto sup = detail::pentagonal_support(len == 0 ? 0 : len - 1);
    for (int pass = 0; pass < 24; ++pass) {
        std::fill(next.begin(), next.end(), __int128(0));
        for (std::uint32_t n = 0; n < len; ++n) {
            if (cur[n] == 0) continue;
            for (const auto& [g, s] : sup) {
                const std::uint64_t idx = static_cast<std::uint64_t>(n) + g;
                if (idx >= len) break;
                __int128 out;
                if (s > 0 ? __builtin_add_overflow(next[idx], cur[n], &out)
                          : __builtin_sub_overflow(next[idx], cur[n], &out))
                    throw std::overflow_error("tau_table: 128-bit overflow");
                next[idx] = out;
            }
        }
        std::swap(cur, next);
    }
    std::vector<Integer> tau(n_max + 1, Integer(0));
    for (std::uint32_t n = 1; n <= n_max; ++n) tau[n] = detail::int128_to_integer(cur[n - 1]);
    return tau;
}

// q * prod (1-q^n)^24 as an exact q-expansion (level 1).
inline QSeries delta_series(std::uint32_t n_max) {
    if (n_max < 1) throw std::invalid_argument("delta_series: truncation must be >= 1");
    const auto tau = tau_table(n_max);
    QSeries f(n_max, 1);
    for (std::uint32_t n = 1; n <= n_max; ++n) f.set_coefficient(n, CycValue(Rational(tau[n])));
    return f;
}

}  // namespace qdetect
