// Acceptance suite: one check per shipped guarantee, each printed as a
// single PASS/FAIL line with a short data summary. Everything is exact
// arithmetic; random instances use fixed seeds so reruns are byte-identical.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qdetect/detector.hpp"
#include "qdetect/eisenstein.hpp"
#include "qdetect/macmahon.hpp"
#include "qdetect/qseries.hpp"
#include "qdetect/wexpr.hpp"

using namespace qdetect;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

int g_failures = 0;

void run_criterion(int number, const std::string& title, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = body();
    } catch (const std::exception& e) {
        outcome.ok = false;
        outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count() /
        1000.0;
    std::ostringstream line;
    line << (outcome.ok ? "PASS" : "FAIL") << " criterion " << number << ": " << title;
    if (!outcome.detail.empty()) line << " — " << outcome.detail;
    line << " [" << seconds << "s]";
    std::cout << line.str() << std::endl;
    if (!outcome.ok) ++g_failures;
}

const DirichletCharacter kTrivial(1, 0);

Outcome criterion1_flagship_identity() {
    const auto start = std::chrono::steady_clock::now();
    const IdentityReport report = verify_prime_identity(2000);
    const double seconds =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count() /
        1000.0;
    Outcome o;
    o.ok = report.failures.empty() && seconds < 60.0;
    std::ostringstream d;
    d << "n in [2,2000], " << report.failures.size() << " classification failures, " << seconds << "s";
    o.detail = d.str();
    return o;
}

Outcome criterion2_quadruple_prime_vanishing() {
    std::mt19937 rng(1001);
    std::uniform_int_distribution<std::int64_t> entry(0, 5);
    const auto primes = prime_sieve(10000);
    std::size_t checked = 0, bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Quadruple q;
        for (auto& v : q.m) v = entry(rng);
        for (std::uint32_t p : primes) {
            if (quadruple_coefficient(q, p) != 0) ++bad;
            ++checked;
        }
    }
    Outcome o;
    o.ok = bad == 0;
    o.detail = "200 quadruples x " + std::to_string(primes.size()) + " primes, " + std::to_string(bad) +
               " nonzero values";
    return o;
}

Outcome criterion3_composite_sign() {
    std::mt19937 rng(1002);
    std::uniform_int_distribution<std::int64_t> entry(-4, 4);
    std::vector<std::uint32_t> composites;
    for (std::uint32_t n = 2; n <= 1000; ++n)
        if (!is_prime(n) && n > 1) composites.push_back(n);
    std::size_t mismatches = 0, checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Quadruple q;
        for (auto& v : q.m) v = entry(rng);
        const int predicted = predicted_composite_sign(q);
        for (std::uint32_t n : composites) {
            if (predicted != sign_of(quadruple_coefficient(q, n))) ++mismatches;
            ++checked;
        }
    }
    Outcome o;
    o.ok = mismatches == 0;
    o.detail = std::to_string(checked) + " (quadruple, composite) pairs, " + std::to_string(mismatches) +
               " sign mismatches";
    return o;
}

struct EquivalenceData {
    std::size_t detect_instances = 0;
    std::size_t refuted_instances = 0;
    std::size_t reexpansion_failures = 0;
    std::size_t bound_violations = 0;
    std::size_t mode_disagreements = 0;
    std::size_t missing_witnesses = 0;
    std::size_t paper_count_agreements = 0;  // informational probe
};

EquivalenceData& equivalence_data() {
    static EquivalenceData data;
    return data;
}

Outcome criterion4_equivalence() {
    auto& data = equivalence_data();
    std::mt19937 rng(1003);
    std::uniform_int_distribution<std::int64_t> entry(0, 6);
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4), parts(1, 5);

    // combinations of quadruple expressions: all three routes must certify
    for (int trial = 0; trial < 100; ++trial) {
        WExpression w;
        const int t = parts(rng);
        for (int i = 0; i < t; ++i) {
            Quadruple q;
            for (auto& v : q.m) v = entry(rng);
            int c = num(rng);
            if (c == 0) c = 1;
            w = w + quadruple_expression(q).scaled(Rational(c, den(rng)));
        }
        ++data.detect_instances;
        if (!w.zeta_exponents().empty()) {
            ++data.mode_disagreements;
            continue;
        }
        const auto cert = certify_prime_detection(w, WCertifyMode::all);
        if (!cert.detects) ++data.mode_disagreements;
        if (cert.decomposition) {
            if (!(expand_decomposition(cert.decomposition->parts) == w)) ++data.reexpansion_failures;
            if (Integer(cert.decomposition->iterations) > cert.decomposition->iteration_bound)
                ++data.bound_violations;
        } else {
            ++data.reexpansion_failures;
        }
    }

    // generic expressions: exponent route and prime route agree on refutation
    std::uniform_int_distribution<std::uint32_t> shift(0, 6);
    int produced = 0;
    while (produced < 100) {
        std::vector<std::tuple<Rational, std::uint32_t, std::uint32_t>> raw;
        const int t = 1 + (produced % 4);
        for (int i = 0; i < t; ++i) raw.emplace_back(Rational(num(rng)), shift(rng), shift(rng));
        const WExpression w = WExpression::from_terms(raw);
        if (w.zeta_exponents().empty()) continue;  // unlucky cancellation; draw again
        ++produced;
        ++data.refuted_instances;
        const auto by_exponents = certify_prime_detection(w, WCertifyMode::exponents);
        const auto by_primes = certify_prime_detection(w, WCertifyMode::primes);
        const auto by_decomposition = certify_prime_detection(w, WCertifyMode::decomposition);
        if (by_exponents.detects || by_primes.detects || by_decomposition.detects) ++data.mode_disagreements;
        if (!by_primes.witness || by_primes.witness->second == 0 ||
            w.coefficient(by_primes.witness->first) != by_primes.witness->second)
            ++data.missing_witnesses;
        // informational: the sharper prime count from the source analysis
        const auto paper = certify_prime_detection(w, WCertifyMode::primes, true);
        if (!paper.detects) ++data.paper_count_agreements;
    }

    Outcome o;
    o.ok = data.mode_disagreements == 0 && data.missing_witnesses == 0;
    std::ostringstream d;
    d << data.detect_instances << " detecting + " << data.refuted_instances << " refuted instances, "
      << data.mode_disagreements << " disagreements, " << data.missing_witnesses << " witness defects"
      << "; informational: max(R,1)-prime probe refuted " << data.paper_count_agreements << "/"
      << data.refuted_instances;
    o.detail = d.str();
    return o;
}

Outcome criterion5_peel_off() {
    const auto& data = equivalence_data();
    Outcome o;
    o.ok = data.detect_instances > 0 && data.reexpansion_failures == 0 && data.bound_violations == 0;
    o.detail = std::to_string(data.detect_instances) + " decompositions, " +
               std::to_string(data.reexpansion_failures) + " re-expansion failures, " +
               std::to_string(data.bound_violations) + " iteration-bound violations";
    return o;
}

struct HFamilyData {
    // polys grouped by (M, m, K); all entries proved equal to the canonical one
    std::size_t specs_checked = 0;
    std::size_t poly_mismatches = 0;
    std::size_t pair_diffs_checked = 0;
    std::size_t pair_diff_nonzero = 0;
    std::size_t prime_evals = 0;
    std::size_t prime_eval_mismatches = 0;
    std::size_t expansion_samples = 0;
    std::size_t expansion_mismatches = 0;
    std::vector<PrimeCoefficientPolynomial> single_polys;
    std::vector<PrimeCoefficientPolynomial> diff_polys;  // one canonical zero diff per group
};

HFamilyData& h_family_data() {
    static HFamilyData data;
    return data;
}

Outcome criterion6_h_vanishing() {
    auto& data = h_family_data();
    const std::vector<std::uint32_t> moduli{1, 3, 4, 5};
    for (std::uint32_t M : moduli) {
        const auto chars = enumerate_characters(M);
        for (std::uint64_t m = 1; m <= (M == 1 ? 1 : M - 1); ++m) {
            if (std::gcd<std::uint64_t>(m, M) != 1) continue;
            const auto class_primes = [&] {
                std::vector<std::uint64_t> ps;
                for (std::uint32_t p : prime_sieve(10000))
                    if (p % M == m % M) ps.push_back(p);
                return ps;
            }();
            for (std::uint32_t K = 4; K <= 10; ++K) {
                // expected polynomial: 2 p^(K-2) - 2 on the class
                PrimeCoefficientPolynomial expected;
                expected.residue = m % M;
                expected.modulus = M;
                expected.degree_bound = K - 1;
                expected.coeffs[0] = CycValue(Rational(-2));
                expected.coeffs[K - 2] = CycValue(Rational(2));

                std::vector<HSpec> specs;
                for (std::uint32_t k = 2; k + 2 <= K; ++k)
                    for (const auto& chi : chars)
                        for (const auto& psi : chars) specs.emplace_back(k, K - k, chi, psi, m);

                std::vector<PrimeCoefficientPolynomial> polys;
                for (const auto& spec : specs) {
                    auto poly = h_prime_polynomial(spec);
                    ++data.specs_checked;
                    if (!(poly.coeffs == expected.coeffs) || poly.degree_bound != K - 1) ++data.poly_mismatches;
                    data.single_polys.push_back(poly);
                    polys.push_back(std::move(poly));
                }

                // every same-K difference is the zero polynomial
                for (std::size_t i = 0; i < specs.size(); ++i) {
                    for (std::size_t j = i + 1; j < specs.size(); ++j) {
                        auto combo = specs[i].constituents();
                        for (auto& [c, s] : specs[j].constituents()) combo.emplace_back(-c, s);
                        auto diff = prime_coefficient_polynomial(combo, m, M);
                        ++data.pair_diffs_checked;
                        if (!diff.is_zero()) ++data.pair_diff_nonzero;
                        data.diff_polys.push_back(std::move(diff));
                    }
                }

                // numeric evaluation at every prime of the class up to 10^4
                for (std::uint64_t p : class_primes) {
                    const CycValue value = polys.front().evaluate(p);
                    const CycValue target(Rational(2 * (pow_integer(Integer(p), K - 2) - 1)));
                    ++data.prime_evals;
                    if (value != target) ++data.prime_eval_mismatches;
                }

                // cross-validate the polynomial against the actual expansion
                const std::uint32_t truncation = (M == 1) ? 3000 : 1500;
                for (std::size_t pick : {std::size_t(0), specs.size() / 2}) {
                    const auto& spec = specs[pick];
                    const QSeries series = h_qexp(spec, truncation);
                    const auto& poly = polys[pick];
                    for (std::uint32_t p = 2; p <= truncation; ++p) {
                        if (!is_prime(p) || p % M != m % M) continue;
                        ++data.expansion_samples;
                        if (series.coefficient(p) != poly.evaluate(p)) ++data.expansion_mismatches;
                    }
                    if (specs.size() == 1) break;
                }
            }
        }
    }
    Outcome o;
    o.ok = data.poly_mismatches == 0 && data.pair_diff_nonzero == 0 && data.prime_eval_mismatches == 0 &&
           data.expansion_mismatches == 0;
    std::ostringstream d;
    d << data.specs_checked << " parameter points (" << data.poly_mismatches << " polynomial mismatches), "
      << data.pair_diffs_checked << " same-weight differences (" << data.pair_diff_nonzero << " nonzero), "
      << data.prime_evals << " prime evaluations (" << data.prime_eval_mismatches << " off), "
      << data.expansion_samples << " expansion cross-checks (" << data.expansion_mismatches << " off)";
    o.detail = d.str();
    return o;
}

Outcome criterion7_finite_check_agreement() {
    const auto& data = h_family_data();
    const auto primes = prime_sieve(10000);
    std::size_t agreements = 0, total = 0, certified = 0;
    const auto full_scan_all_zero = [&](const PrimeCoefficientPolynomial& poly) {
        for (std::uint32_t p : primes) {
            if (p % poly.modulus != poly.residue) continue;
            if (!poly.evaluate(p).is_zero()) return false;
        }
        return true;
    };
    for (const auto* group : {&data.single_polys, &data.diff_polys}) {
        for (const auto& poly : *group) {
            const auto cert = finite_prime_check(poly, auto_check_primes(poly));
            ++total;
            if (cert.detects == full_scan_all_zero(poly)) ++agreements;
            if (cert.detects) ++certified;
        }
    }
    Outcome o;
    o.ok = total > 0 && agreements == total;
    o.detail = std::to_string(agreements) + "/" + std::to_string(total) +
               " finite checks agree with the full evaluation to 10^4 (" + std::to_string(certified) +
               " certified vanishing)";
    return o;
}

Outcome criterion8_operator_algebra() {
    std::mt19937 rng(1008);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
    const std::uint32_t n_max = 1000;
    QSeries f(n_max, 1), g(n_max, 1);
    for (std::uint32_t n = 0; n <= n_max; ++n) {
        f.set_coefficient(n, CycValue(Rational(num(rng), den(rng))));
        g.set_coefficient(n, CycValue(Rational(num(rng), den(rng))));
    }
    f.set_coefficient(17, CycValue::root_of_unity(3, 1).scaled(Rational(2)) + CycValue(Rational(1, 2)));

    std::size_t failures = 0;
    const auto expect = [&](bool cond) { failures += cond ? 0 : 1; };

    for (const auto& [M, m] : std::vector<std::pair<std::uint32_t, std::int64_t>>{{2, 1}, {3, 2}, {5, 0}, {7, 4}})
        expect(same_coefficients(f.sieve(M, m).sieve(M, m), f.sieve(M, m)));
    expect(same_coefficients(f.sieve(2, 1).sieve(3, 2), f.sieve(3, 2).sieve(2, 1)));
    expect(same_coefficients(f.sieve(2, 1).sieve(3, 1), f.sieve(6, 1)));
    expect(f.sieve(4, 1).sieve(4, 3).is_zero());
    expect(f.sieve(2, 0).sieve(2, 1).is_zero());
    expect(same_coefficients(g.v_operator(2).v_operator(3), g.v_operator(6)));
    expect(same_coefficients(g.v_operator(1), g));

    const auto chi_m3 = kronecker_character(-3);
    const QSeries twist_diff = f - f.twisted(chi_m3);
    std::size_t vanish_checked = 0;
    for (std::uint32_t n = 1; n <= n_max; ++n) {
        if (kronecker(-3, static_cast<long long>(n)) != 1) continue;
        ++vanish_checked;
        expect(twist_diff.coefficient(n).is_zero());
    }

    Outcome o;
    o.ok = failures == 0;
    o.detail = "projection algebra + dilation composition at truncation 1000, " +
               std::to_string(vanish_checked) + " twist-difference vanishing indices, " +
               std::to_string(failures) + " failures";
    return o;
}

Outcome criterion9_constants() {
    std::size_t failures = 0;
    if (!(l_value_at_negative(2, kTrivial) == CycValue(Rational(-1, 12)))) ++failures;
    if (!(l_value_at_negative(4, kTrivial) == CycValue(Rational(1, 120)))) ++failures;
    if (!(generalized_bernoulli(2, kTrivial) == CycValue(Rational(1, 6)))) ++failures;
    if (!(generalized_bernoulli(4, kTrivial) == CycValue(Rational(-1, 30)))) ++failures;
    // E2 against an independently sieved divisor-sum table
    const std::uint32_t n_max = 1000;
    std::vector<Integer> sigma(n_max + 1, Integer(0));
    for (std::uint32_t d = 1; d <= n_max; ++d)
        for (std::uint32_t n = d; n <= n_max; n += d) sigma[n] += d;
    const QSeries e2 = e2_series(n_max);
    if (!(e2.coefficient(0) == CycValue::one())) ++failures;
    for (std::uint32_t n = 1; n <= n_max; ++n)
        if (!(e2.coefficient(n) == CycValue(Rational(-24 * sigma[n])))) ++failures;
    Outcome o;
    o.ok = failures == 0;
    o.detail = "special values exact, weight-2 expansion matches to 1000 (" + std::to_string(failures) +
               " failures)";
    return o;
}

Outcome criterion10_sign_changes() {
    const std::uint32_t bound = 100000;
    const auto delta = source_delta(bound);
    const auto delta_report = sign_changes(delta, Progression(0, 1), bound);
    const auto e2_report = sign_changes(source_e2(), Progression(0, 1), bound);
    Outcome o;
    o.ok = delta_report.count >= 50 && e2_report.count == 0;
    o.detail = "cusp-form flips to 10^5: " + std::to_string(delta_report.count) +
               " (need >= 50); weight-2 flips: " + std::to_string(e2_report.count) + " (need 0)";
    return o;
}

}  // namespace

int main() {
    run_criterion(1, "partition identity classifies primes exactly for n <= 2000", criterion1_flagship_identity);
    run_criterion(2, "quadruple coefficients vanish at all primes to 10^4", criterion2_quadruple_prime_vanishing);
    run_criterion(3, "composite-index signs match the product rule", criterion3_composite_sign);
    run_criterion(4, "three certificate routes agree on random instances", criterion4_equivalence);
    run_criterion(5, "peel-off re-expands exactly within its iteration bound", criterion5_peel_off);
    run_criterion(6, "same-weight combinations vanish at primes of the class", criterion6_h_vanishing);
    run_criterion(7, "finite prime checks match the full evaluations", criterion7_finite_check_agreement);
    run_criterion(8, "projection, dilation, and twist algebra hold exactly", criterion8_operator_algebra);
    run_criterion(9, "special values and the weight-2 expansion are exact", criterion9_constants);
    run_criterion(10, "sign-change behaviour splits cuspidal from Eisenstein", criterion10_sign_changes);
    if (g_failures != 0) {
        std::cout << g_failures << " criteria failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}
