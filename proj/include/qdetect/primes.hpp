#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qdetect {

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t acc = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1) acc = mulmod_u64(acc, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return acc;
}

}  // namespace detail

// Deterministic Miller-Rabin for 64-bit inputs (the 12-base set covers all of u64).
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline std::vector<std::uint32_t> prime_sieve(std::uint32_t bound) {
    std::vector<std::uint32_t> primes;
    if (bound < 2) return primes;
    std::vector<bool> composite(bound + 1, false);
    for (std::uint32_t p = 2; p <= bound; ++p) {
        if (composite[p]) continue;
        primes.push_back(p);
        for (std::uint64_t q = static_cast<std::uint64_t>(p) * p; q <= bound; q += p) composite[q] = true;
    }
    return primes;
}

// First `count` primes p ≡ m (mod M). Requires gcd(m, M) = 1 unless the class
// contains a prime dividing M (e.g. 2 mod 4 holds only p = 2).
inline std::vector<std::uint64_t> primes_in_progression(std::uint64_t m, std::uint64_t M, std::size_t count) {
    if (M == 0) throw std::invalid_argument("primes_in_progression: modulus must be positive");
    m %= M;
    std::vector<std::uint64_t> out;
    if (count == 0) return out;
    if (std::gcd(m, M) != 1) {
        // At most one prime can lie in such a class.
        if (m != 0 && is_prime(m)) out.push_back(m);
        if (out.size() < count)
            throw std::invalid_argument("primes_in_progression: class shares a factor with the modulus");
        return out;
    }
    std::uint64_t n = (m == 0) ? M : m;
    for (; out.size() < count; n += M) {
        if (is_prime(n)) out.push_back(n);
        if (n > (1ull << 40)) throw std::runtime_error("primes_in_progression: search bound exceeded");
    }
    return out;
}

// Trial division; intended for word-sized inputs only.
inline std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, unsigned>> fac;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        fac.emplace_back(p, e);
    }
    if (n > 1) fac.emplace_back(n, 1);
    return fac;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> divs{1};
    for (const auto& [p, e] : factorize(n)) {
        const std::size_t sz = divs.size();
        std::uint64_t pk = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < sz; ++j) divs.push_back(divs[j] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t phi = n;
    for (const auto& [p, e] : factorize(n)) {
        phi -= phi / p;
    }
    return phi;
}

inline bool is_composite(std::uint64_t n) { return n > 3 && !is_prime(n); }

}  // namespace qdetect
