#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdetect/detector.hpp"
#include "qdetect/eisenstein.hpp"
#include "qdetect/macmahon.hpp"
#include "qdetect/qseries.hpp"
#include "qdetect/wexpr.hpp"

// JSON encodings. Every numeric value is emitted as a decimal string so that
// arbitrary-precision data survives generic JSON tooling; readers accept both
// strings and plain JSON numbers.

namespace qdetect::io {

using json = nlohmann::ordered_json;

inline json from_rational(const Rational& r) { return rational_to_string(r); }

inline Rational to_rational(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw std::invalid_argument("expected a rational encoded as string or integer");
}

inline std::uint64_t to_u64(const json& j) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) {
        const long long v = j.get<long long>();
        if (v < 0) throw std::invalid_argument("expected a non-negative integer");
        return static_cast<std::uint64_t>(v);
    }
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("expected a non-negative integer, got '" + s + "'");
        return std::stoull(s);
    }
    throw std::invalid_argument("expected an integer encoded as string or number");
}

inline std::int64_t to_i64(const json& j) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("expected an integer, got '" + s + "'");
        }
    }
    throw std::invalid_argument("expected an integer encoded as string or number");
}

inline json from_integer(const Integer& n) { return n.str(); }
inline json from_u64(std::uint64_t n) { return std::to_string(n); }

inline json from_cyc(const CycValue& v) {
    json coeffs = json::object();
    for (std::size_t e = 0; e < v.coords().size(); ++e) {
        if (v.coords()[e] == 0) continue;
        coeffs[std::to_string(e)] = from_rational(v.coords()[e]);
    }
    return json{{"order", from_u64(v.order())}, {"coeffs", std::move(coeffs)}};
}

inline CycValue to_cyc(const json& j) {
    if (j.is_string() || j.is_number_integer()) return CycValue(to_rational(j));
    const unsigned order = static_cast<unsigned>(to_u64(j.at("order")));
    // zero of the stated order, so a round trip preserves the stored order
    CycValue acc = CycValue::root_of_unity(order, 0).scaled(Rational(0));
    for (const auto& [key, val] : j.at("coeffs").items()) {
        const std::uint64_t e = to_u64(json(key));
        acc += CycValue::root_of_unity(order, static_cast<long long>(e)).scaled(to_rational(val));
    }
    return acc;
}

inline json from_character(const DirichletCharacter& chi) {
    return json{{"modulus", from_u64(chi.modulus())}, {"index", from_u64(chi.index())}};
}

inline DirichletCharacter to_character(const json& j) {
    return DirichletCharacter(static_cast<std::uint32_t>(to_u64(j.at("modulus"))), to_u64(j.at("index")));
}

inline json from_qseries(const QSeries& f) {
    json coeffs = json::object();
    for (std::uint32_t n = 0; n <= f.truncation(); ++n) {
        if (f.coefficient(n).is_zero()) continue;
        coeffs[std::to_string(n)] = from_cyc(f.coefficient(n));
    }
    return json{{"truncation", from_u64(f.truncation())},
                {"level", from_u64(f.level())},
                {"coeffs", std::move(coeffs)}};
}

inline QSeries to_qseries(const json& j) {
    QSeries f(static_cast<std::uint32_t>(to_u64(j.at("truncation"))), to_u64(j.at("level")));
    for (const auto& [key, val] : j.at("coeffs").items()) {
        const std::uint64_t n = to_u64(json(key));
        if (n > f.truncation()) throw std::invalid_argument("qseries: coefficient index beyond truncation");
        f.set_coefficient(static_cast<std::uint32_t>(n), to_cyc(val));
    }
    return f;
}

// n: value lines, one per nonzero coefficient.
inline std::string qseries_text(const QSeries& f) {
    std::string out;
    for (std::uint32_t n = 0; n <= f.truncation(); ++n) {
        if (f.coefficient(n).is_zero()) continue;
        out += std::to_string(n) + ": " + f.coefficient(n).to_string() + "\n";
    }
    return out;
}

inline json from_wexpression(const WExpression& w) {
    json terms = json::array();
    for (const auto& t : w.terms())
        terms.push_back(json::array({from_rational(t.coeff), from_u64(t.shift), from_u64(t.gap)}));
    return json{{"terms", std::move(terms)}};
}

inline WExpression to_wexpression(const json& j) {
    std::vector<std::tuple<Rational, std::uint32_t, std::uint32_t>> raw;
    for (const auto& term : j.at("terms")) {
        if (!term.is_array() || term.size() != 3)
            throw std::invalid_argument("wexpression: each term must be [A, l, k]");
        raw.emplace_back(to_rational(term[0]), static_cast<std::uint32_t>(to_u64(term[1])),
                         static_cast<std::uint32_t>(to_u64(term[2])));
    }
    return WExpression::from_terms(raw);
}

inline json from_quadruple(const Quadruple& q) {
    json arr = json::array();
    for (std::int64_t v : q.m) arr.push_back(std::to_string(v));
    return arr;
}

inline Quadruple to_quadruple(const json& j) {
    if (!j.is_array() || j.size() != 4) throw std::invalid_argument("quadruple: expected [m1, m2, m3, m4]");
    Quadruple q;
    for (std::size_t i = 0; i < 4; ++i) q.m[i] = to_i64(j[i]);
    return q;
}

inline json from_eisenstein_spec(const EisensteinSpec& s) {
    json j;
    if (s.e2) {
        j["e2"] = true;
    } else {
        j["k"] = from_u64(s.weight);
        j["chi"] = from_character(s.chi);
        j["psi"] = from_character(s.psi);
    }
    if (s.derivative) j["derivative"] = from_u64(s.derivative);
    if (s.v_multiplier != 1) j["v"] = from_u64(s.v_multiplier);
    return j;
}

inline EisensteinSpec to_eisenstein_spec(const json& j) {
    EisensteinSpec s;
    if (j.value("e2", false)) {
        s = EisensteinSpec::e2_series();
    } else {
        s.weight = static_cast<std::uint32_t>(to_u64(j.at("k")));
        s.chi = j.contains("chi") ? to_character(j.at("chi")) : DirichletCharacter(1);
        s.psi = j.contains("psi") ? to_character(j.at("psi")) : DirichletCharacter(1);
    }
    if (j.contains("derivative")) s.derivative = static_cast<std::uint32_t>(to_u64(j.at("derivative")));
    if (j.contains("v")) s.v_multiplier = static_cast<std::uint32_t>(to_u64(j.at("v")));
    return s;
}

inline json from_h_spec(const HSpec& s) {
    return json{{"k", from_u64(s.k)},          {"l", from_u64(s.l)},
                {"chi", from_character(s.chi)}, {"psi", from_character(s.psi)},
                {"m", from_u64(s.residue)},     {"M", from_u64(s.modulus())}};
}

inline HSpec to_h_spec(const json& j) {
    const std::uint32_t M = static_cast<std::uint32_t>(to_u64(j.at("M")));
    DirichletCharacter chi = j.contains("chi") ? to_character(j.at("chi")) : DirichletCharacter(M);
    DirichletCharacter psi = j.contains("psi") ? to_character(j.at("psi")) : DirichletCharacter(M);
    if (chi.modulus() != M || psi.modulus() != M)
        throw std::invalid_argument("h spec: characters must live mod M");
    return HSpec(static_cast<std::uint32_t>(to_u64(j.at("k"))), static_cast<std::uint32_t>(to_u64(j.at("l"))),
                 std::move(chi), std::move(psi), to_u64(j.at("m")));
}

using EisensteinCombination = std::vector<std::pair<CycValue, EisensteinSpec>>;

inline json from_combination(const EisensteinCombination& combo) {
    json terms = json::array();
    for (const auto& [coeff, spec] : combo)
        terms.push_back(json{{"coeff", from_cyc(coeff)}, {"spec", from_eisenstein_spec(spec)}});
    return json{{"terms", std::move(terms)}};
}

inline EisensteinCombination to_combination(const json& j) {
    EisensteinCombination combo;
    for (const auto& term : j.at("terms"))
        combo.emplace_back(to_cyc(term.at("coeff")), to_eisenstein_spec(term.at("spec")));
    return combo;
}

inline json from_polynomial(const PrimeCoefficientPolynomial& poly) {
    json coeffs = json::object();
    for (const auto& [r, beta] : poly.coeffs) coeffs[std::to_string(r)] = from_cyc(beta);
    return json{{"m", from_u64(poly.residue)},
                {"M", from_u64(poly.modulus)},
                {"degree_bound", from_u64(poly.degree_bound)},
                {"coeffs", std::move(coeffs)}};
}

inline json from_finite_check(const FiniteCheckCertificate& cert, const PrimeCoefficientPolynomial& poly) {
    json j;
    j["verdict"] = cert.detects ? "detects" : "refuted";
    if (cert.witness)
        j["witness"] = json{{"prime", from_u64(cert.witness->first)}, {"value", from_cyc(cert.witness->second)}};
    j["polynomial"] = from_polynomial(poly);
    json primes = json::array();
    for (std::uint64_t p : cert.primes_used) primes.push_back(from_u64(p));
    j["primes"] = std::move(primes);
    return j;
}

inline json from_w_certificate(const WCertificate& cert) {
    json j;
    j["verdict"] = cert.detects ? "detects" : "refuted";
    json exps = json::object();
    for (const auto& [m, b] : cert.exponents) exps[std::to_string(m)] = from_rational(b);
    j["exponents"] = std::move(exps);
    if (cert.witness)
        j["witness"] = json{{"prime", from_u64(cert.witness->first)}, {"value", from_rational(cert.witness->second)}};
    if (!cert.primes_checked.empty()) {
        json primes = json::array();
        for (std::uint64_t p : cert.primes_checked) primes.push_back(from_u64(p));
        j["primes"] = std::move(primes);
    }
    if (cert.decomposition) {
        json parts = json::array();
        for (const auto& [c, q] : cert.decomposition->parts)
            parts.push_back(json::array({from_rational(c), from_quadruple(q)}));
        j["decomposition"] = std::move(parts);
        j["iterations"] = from_u64(cert.decomposition->iterations);
        j["iteration_bound"] = cert.decomposition->iteration_bound.str();
    }
    return j;
}

inline json from_detection_report(const DetectionReport& report) {
    json witnesses = json::array();
    for (const auto& w : report.witnesses)
        witnesses.push_back(json{{"n", from_u64(w.n)},
                                 {"value", from_cyc(w.value)},
                                 {"expected", w.prime_class ? "zero_at_prime" : "nonzero_off_prime"}});
    return json{{"verdict", to_string(report.verdict)},
                {"bound", from_u64(report.bound)},
                {"vacuous", report.vacuous},
                {"witnesses", std::move(witnesses)},
                {"witness_total", from_u64(report.witness_total)}};
}

inline json from_sign_changes(const SignChangeReport& report) {
    json positions = json::array();
    for (std::uint64_t p : report.positions) positions.push_back(from_u64(p));
    return json{{"count", from_u64(report.count)}, {"positions", std::move(positions)}};
}

inline json from_identity_report(const IdentityReport& report) {
    json failures = json::array();
    for (const auto& f : report.failures)
        failures.push_back(json{{"n", from_u64(f.n)},
                                {"lhs", from_integer(f.lhs)},
                                {"rhs", from_integer(f.rhs)},
                                {"prime", f.prime}});
    return json{{"n_max", from_u64(report.n_max)}, {"failures", std::move(failures)}};
}

}  // namespace qdetect::io
