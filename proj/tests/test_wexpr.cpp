#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qdetect/wexpr.hpp"

using namespace qdetect;

namespace {

// Brute-force a(n) = sum A_j n^l sigma_k(n) straight from the definition.
Rational coefficient_oracle(const std::vector<std::tuple<Rational, std::uint32_t, std::uint32_t>>& raw,
                            std::uint64_t n) {
    Rational acc(0);
    for (const auto& [a, l, k] : raw) {
        Integer sigma(0);
        for (std::uint64_t d = 1; d <= n; ++d)
            if (n % d == 0) sigma += pow_integer(Integer(d), k);
        acc += a * Rational(pow_integer(Integer(n), l) * sigma);
    }
    return acc;
}

Quadruple random_quadruple(std::mt19937& rng, std::int64_t lo, std::int64_t hi) {
    std::uniform_int_distribution<std::int64_t> pick(lo, hi);
    Quadruple q;
    for (auto& v : q.m) v = pick(rng);
    return q;
}

}  // namespace

TEST_CASE("canonicalization of divisor expressions") {
    CHECK(WExpression::from_terms({{Rational(1), 0, 3}, {Rational(-1), 0, 3}}).is_zero());
    const auto doubled = WExpression::from_terms({{Rational(1), 2, 1}, {Rational(1), 2, 1}});
    REQUIRE(doubled.terms().size() == 1);
    CHECK(doubled.terms()[0].coeff == Rational(2));
    CHECK(doubled.terms()[0].shift == 2);
    CHECK(doubled.terms()[0].gap == 1);
    const auto four = WExpression::from_terms(
        {{Rational(1), 0, 3}, {Rational(1), 1, 1}, {Rational(-1), 0, 2}, {Rational(-1), 1, 2}});
    CHECK(four.terms().size() == 4);
    // unordered-pair canonicalization: {3, 0} is the same zeta pair as {0, 3}
    const auto swapped = WExpression::from_shift_pairs({{Rational(1), 3, 0}});
    REQUIRE(swapped.terms().size() == 1);
    CHECK(swapped.terms()[0].shift == 0);
    CHECK(swapped.terms()[0].gap == 3);
    CHECK(swapped == WExpression::from_terms({{Rational(1), 0, 3}}));
    CHECK_THROWS_AS(WExpression::from_shift_pairs({{Rational(1), -1, 2}}), std::invalid_argument);
}

TEST_CASE("dirichlet coefficients of expressions") {
    const std::vector<std::tuple<Rational, std::uint32_t, std::uint32_t>> raw{
        {Rational(1), 0, 3}, {Rational(1), 1, 1}, {Rational(-1), 0, 2}, {Rational(-1), 1, 2}};
    const auto w = WExpression::from_terms(raw);
    CHECK(w.coefficient(1) == Rational(0));  // sum of the A_j
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) CHECK(w.coefficient(p) == 0);
    for (std::uint64_t n = 1; n <= 60; ++n) CHECK(w.coefficient(n) == coefficient_oracle(raw, n));
    const auto sigma1 = WExpression::from_terms({{Rational(1), 0, 1}});
    CHECK(sigma1.coefficient(6) == Rational(12));
    // closed form at primes agrees with the divisor sum
    for (std::uint64_t p : {2ull, 3ull, 5ull, 31ull}) CHECK(w.prime_coefficient(p) == w.coefficient(p));
}

TEST_CASE("zeta exponent bookkeeping") {
    CHECK(WExpression().zeta_exponents().empty());
    const auto single = WExpression::from_terms({{Rational(1), 0, 3}});
    const auto exps = single.zeta_exponents();
    REQUIRE(exps.size() == 2);
    CHECK(exps.at(0) == Rational(1));
    CHECK(exps.at(3) == Rational(1));
    // a gap-0 term contributes twice to its shift
    const auto squared = WExpression::from_terms({{Rational(3, 2), 4, 0}});
    CHECK(squared.zeta_exponents().at(4) == Rational(3));
    const auto cancelling = WExpression::from_terms(
        {{Rational(1), 0, 3}, {Rational(1), 1, 1}, {Rational(-1), 0, 2}, {Rational(-1), 1, 2}});
    CHECK(cancelling.zeta_exponents().empty());
}

TEST_CASE("quadruple expansion") {
    const auto w = quadruple_expression(Quadruple{{0, 1, 3, 2}});
    CHECK(w == WExpression::from_terms(
                   {{Rational(1), 0, 3}, {Rational(1), 1, 1}, {Rational(-1), 0, 2}, {Rational(-1), 1, 2}}));
    CHECK(quadruple_expression(Quadruple{{2, 2, 0, 5}}).is_zero());
    CHECK(quadruple_expression(Quadruple{{0, 1, 0, 2}}) ==
          WExpression::from_terms(
              {{Rational(1), 0, 0}, {Rational(1), 1, 1}, {Rational(-1), 0, 2}, {Rational(-1), 0, 1}}));
    CHECK_THROWS_AS(quadruple_expression(Quadruple{{-1, 0, 1, 2}}), std::invalid_argument);
}

TEST_CASE("quadruple coefficients") {
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 97ull})
        CHECK(quadruple_coefficient(Quadruple{{0, 1, 3, 2}}, p) == 0);
    CHECK(quadruple_coefficient(Quadruple{{0, 1, 2, 3}}, 4) == Rational(4));
    CHECK(quadruple_coefficient(Quadruple{{0, 1, 2, 3}}, 1) == 0);
    // expansion route and divisor-sum route agree
    std::mt19937 rng(555);
    for (int trial = 0; trial < 25; ++trial) {
        const Quadruple q = random_quadruple(rng, 0, 5);
        const auto w = quadruple_expression(q);
        for (std::uint64_t n = 1; n <= 60; ++n) CHECK(w.coefficient(n) == quadruple_coefficient(q, n));
    }
}

TEST_CASE("composite sign rule") {
    CHECK(sign_of_composite(Quadruple{{0, 1, 2, 3}}, 4) == 1);
    CHECK(sign_of_composite(Quadruple{{1, 0, 2, 3}}, 4) == -1);
    CHECK(sign_of_composite(Quadruple{{2, 2, 0, 4}}, 9) == 0);
    CHECK_THROWS_AS(sign_of_composite(Quadruple{{0, 1, 2, 3}}, 7), std::invalid_argument);
    CHECK_THROWS_AS(sign_of_composite(Quadruple{{0, 1, 2, 3}}, 1), std::invalid_argument);
    std::mt19937 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const Quadruple q = random_quadruple(rng, -4, 4);
        for (std::uint64_t n = 4; n <= 80; ++n) {
            if (is_prime(n)) continue;
            CHECK(sign_of_composite(q, n) == sign_of(quadruple_coefficient(q, n)));
        }
    }
}

TEST_CASE("peel-off on the worked example") {
    const auto w = WExpression::from_terms(
        {{Rational(1), 0, 3}, {Rational(1), 1, 1}, {Rational(-1), 0, 2}, {Rational(-1), 1, 2}});
    const auto dec = decompose(w);
    REQUIRE(dec.parts.size() == 2);
    CHECK(dec.parts[0].first == Rational(1));
    CHECK(dec.parts[0].second == Quadruple{{0, 1, 0, 2}});
    CHECK(dec.parts[1].first == Rational(-1));
    CHECK(dec.parts[1].second == Quadruple{{0, 1, 0, 3}});
    CHECK(dec.iterations == 2);
    CHECK(Integer(dec.iterations) <= dec.iteration_bound);
    CHECK(expand_decomposition(dec.parts) == w);
    CHECK(decompose(WExpression()).parts.empty());
    // rejected when the exponent vector is nonzero
    CHECK_THROWS_AS(decompose(WExpression::from_terms({{Rational(1), 0, 1}})), std::invalid_argument);
}

TEST_CASE("peel-off reproduces random quadruple combinations") {
    std::mt19937 rng(2718);
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4), count(1, 5);
    for (int trial = 0; trial < 60; ++trial) {
        WExpression w;
        const int parts = count(rng);
        for (int i = 0; i < parts; ++i) {
            const Quadruple q = random_quadruple(rng, 0, 6);
            w = w + quadruple_expression(q).scaled(Rational(num(rng), den(rng)));
        }
        REQUIRE(w.zeta_exponents().empty());
        const auto dec = decompose(w);
        CHECK(expand_decomposition(dec.parts) == w);
        CHECK(Integer(dec.iterations) <= dec.iteration_bound);
        // quadruple representations are non-unique; equality is by re-expansion
    }
}

TEST_CASE("peel-off pairs against squared-factor terms") {
    // a gap-0 term at the top degree: the quadruple with repeated entries
    // cancels two units of the paired term in one round
    const auto w = quadruple_expression(Quadruple{{0, 2, 0, 2}});
    REQUIRE(w.terms().size() == 3);  // {0,0} + {2,2} - 2*{0,2}
    const auto dec = decompose(w);
    CHECK(expand_decomposition(dec.parts) == w);
    CHECK(dec.iterations == 1);
    // mixtures where the only partners are gap-0 terms
    const auto mixed = quadruple_expression(Quadruple{{1, 3, 1, 3}}).scaled(Rational(2)) +
                       quadruple_expression(Quadruple{{0, 3, 2, 3}});
    REQUIRE(mixed.zeta_exponents().empty());
    const auto dec2 = decompose(mixed);
    CHECK(expand_decomposition(dec2.parts) == mixed);
    CHECK(Integer(dec2.iterations) <= dec2.iteration_bound);
}

TEST_CASE("decomposition handles rational masses via denominator clearing") {
    const auto w = quadruple_expression(Quadruple{{0, 2, 1, 3}}).scaled(Rational(7, 6)) +
                   quadruple_expression(Quadruple{{1, 2, 0, 4}}).scaled(Rational(-3, 10));
    const auto dec = decompose(w);
    CHECK(expand_decomposition(dec.parts) == w);
    for (const auto& [c, q] : dec.parts) CHECK(denominator(c) <= 30);
}

TEST_CASE("certificates agree across all three routes") {
    const auto w = quadruple_expression(Quadruple{{0, 1, 3, 2}});
    for (auto mode : {WCertifyMode::exponents, WCertifyMode::primes, WCertifyMode::decomposition}) {
        CHECK(certify_prime_detection(w, mode).detects);
    }
    const auto all = certify_prime_detection(w, WCertifyMode::all);
    CHECK(all.detects);
    CHECK(all.decomposition.has_value());

    const auto sigma1 = WExpression::from_terms({{Rational(1), 0, 1}});
    const auto refuted = certify_prime_detection(sigma1, WCertifyMode::all);
    CHECK(!refuted.detects);
    REQUIRE(refuted.witness.has_value());
    CHECK(refuted.witness->first == 2);
    CHECK(refuted.witness->second == Rational(3));

    const auto empty = certify_prime_detection(WExpression(), WCertifyMode::all);
    CHECK(empty.detects);
    CHECK(empty.decomposition->parts.empty());
}

TEST_CASE("prime route uses R+1 evaluation points") {
    // degree-5 expression: the default prime list has 6 entries
    const auto w = quadruple_expression(Quadruple{{0, 1, 3, 2}}) + quadruple_expression(Quadruple{{0, 1, 0, 5}});
    CHECK(w.top_degree() == 5);
    const auto cert = certify_prime_detection(w, WCertifyMode::primes);
    CHECK(cert.primes_checked.size() == 6);
    CHECK(cert.detects);
    const auto paper = certify_prime_detection(w, WCertifyMode::primes, true);
    CHECK(paper.primes_checked.size() == 5);
    CHECK(paper.detects);
}

TEST_CASE("generic expressions are refuted with an explicit witness") {
    std::mt19937 rng(31337);
    std::uniform_int_distribution<int> coeff(-5, 5);
    std::uniform_int_distribution<std::uint32_t> shift(0, 6);
    int refuted_count = 0;
    for (int trial = 0; trial < 80; ++trial) {
        std::vector<std::tuple<Rational, std::uint32_t, std::uint32_t>> raw;
        const int parts = 1 + (trial % 4);
        for (int i = 0; i < parts; ++i) raw.emplace_back(Rational(coeff(rng)), shift(rng), shift(rng));
        const auto w = WExpression::from_terms(raw);
        if (w.zeta_exponents().empty()) continue;  // rare accidental cancellation
        ++refuted_count;
        const auto cert = certify_prime_detection(w, WCertifyMode::all);
        CHECK(!cert.detects);
        REQUIRE(cert.witness.has_value());
        CHECK(w.coefficient(cert.witness->first) == cert.witness->second);
        CHECK(cert.witness->second != 0);
    }
    CHECK(refuted_count > 40);
}
