#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qdetect/primes.hpp"
#include "qdetect/rational.hpp"

namespace qdetect {

// Values M_a(0..n_max) of the a-part MacMahon partition sum: over chains of
// distinct part sizes s_1 < ... < s_a with multiplicities m_i >= 1 summing to
// n, the product m_1...m_a is accumulated.
struct MacMahonTable {
    std::uint32_t a = 1;
    std::vector<Integer> values;
};

inline MacMahonTable macmahon_table(std::uint32_t a, std::uint32_t n_max) {
    if (a == 0) throw std::invalid_argument("macmahon_table: a must be positive");
    // Knapsack over part sizes: layer j holds the weighted count using j
    // distinct sizes among those processed so far. Each size s contributes the
    // generating factor q^s/(1-q^s)^2 = sum_m m q^(m s); descending j keeps a
    // size from being reused inside one chain.
    std::vector<std::vector<Integer>> layers(a + 1, std::vector<Integer>(n_max + 1, Integer(0)));
    layers[0][0] = 1;
    for (std::uint32_t s = 1; s <= n_max; ++s) {
        for (std::uint32_t j = a; j >= 1; --j) {
            const auto& prev = layers[j - 1];
            auto& curr = layers[j];
            for (std::uint32_t base = 0; base + s <= n_max; ++base) {
                if (prev[base] == 0) continue;
                std::uint64_t idx = base + s;
                for (std::uint64_t mult = 1; idx <= n_max; ++mult, idx += s) curr[idx] += Integer(mult) * prev[base];
            }
        }
    }
    MacMahonTable table;
    table.a = a;
    table.values = std::move(layers[a]);
    return table;
}

struct IdentityFailure {
    std::uint32_t n = 0;
    Integer lhs;
    Integer rhs;
    bool prime = false;
};

struct IdentityReport {
    std::uint32_t n_max = 0;
    std::vector<IdentityFailure> failures;  // every n where (equality <=> primality) breaks
};

// Scans 2 <= n <= n_max for the quadratic relation between the one- and
// two-part tables: (n^2-3n+2) M_1(n) = 8 M_2(n). Equality is expected exactly
// at the primes; any n violating that equivalence is reported. n = 1 satisfies
// the equation (both sides vanish) but is not prime, so the scan starts at 2
// and the unit is deliberately out of range.
inline IdentityReport verify_prime_identity(std::uint32_t n_max) {
    if (n_max < 2) throw std::invalid_argument("verify_prime_identity: n_max must be at least 2");
    const MacMahonTable m1 = macmahon_table(1, n_max);
    const MacMahonTable m2 = macmahon_table(2, n_max);
    IdentityReport report;
    report.n_max = n_max;
    for (std::uint32_t n = 2; n <= n_max; ++n) {
        const Integer lhs = Integer(n - 1) * Integer(n - 2) * m1.values[n];
        const Integer rhs = Integer(8) * m2.values[n];
        const bool equal = lhs == rhs;
        const bool prime = is_prime(n);
        if (equal != prime) report.failures.push_back(IdentityFailure{n, lhs, rhs, prime});
    }
    return report;
}

}  // namespace qdetect
