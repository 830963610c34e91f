#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdetect/json_io.hpp"

namespace qdetect::cli {

namespace detail {

struct OutputTarget {
    std::string path;  // empty: write to the stream

    void emit(const std::string& content, std::ostream& fallback) const {
        if (path.empty()) {
            fallback << content;
            return;
        }
        std::filesystem::path p(path);
        if (p.is_relative()) {
            if (const char* dir = std::getenv("QDETECT_OUT_DIR")) p = std::filesystem::path(dir) / p;
        }
        std::ofstream f(p);
        if (!f) throw std::runtime_error("cannot open output file: " + p.string());
        f << content;
    }
};

inline std::pair<std::int64_t, std::uint64_t> parse_progression(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos)
        throw std::invalid_argument("progression must be written m/M, got '" + s + "'");
    try {
        const long long m = std::stoll(s.substr(0, slash));
        const unsigned long long M = std::stoull(s.substr(slash + 1));
        if (M == 0) throw std::invalid_argument("zero modulus");
        return {m, M};
    } catch (const std::exception&) {
        throw std::invalid_argument("progression must be written m/M, got '" + s + "'");
    }
}

// "A,l,k;A,l,k;..." with rational A.
inline WExpression parse_terms(const std::string& s) {
    std::vector<std::tuple<Rational, std::uint32_t, std::uint32_t>> raw;
    std::stringstream stream(s);
    std::string part;
    while (std::getline(stream, part, ';')) {
        if (part.empty()) continue;
        std::stringstream ps(part);
        std::string a, l, k;
        if (!std::getline(ps, a, ',') || !std::getline(ps, l, ',') || !std::getline(ps, k, ','))
            throw std::invalid_argument("term must be A,l,k (got '" + part + "')");
        raw.emplace_back(parse_rational(a), static_cast<std::uint32_t>(std::stoul(l)),
                         static_cast<std::uint32_t>(std::stoul(k)));
    }
    return WExpression::from_terms(raw);
}

inline io::json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open spec file: " + path);
    try {
        return io::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
        // e.what() carries the byte position of the failure
        throw std::invalid_argument(std::string("malformed spec file ") + path + ": " + e.what());
    }
}

// A scan/sign-change source description: {"series": "delta"|"e2"},
// an h-spec object, a combination {"terms": [{coeff, spec}...]}, or a
// q-series artifact {"truncation", "level", "coeffs"}.
inline CoefficientSource source_from_spec(const io::json& j, std::uint64_t bound) {
    if (j.contains("series")) {
        const std::string name = j.at("series").get<std::string>();
        if (name == "delta") return source_delta(static_cast<std::uint32_t>(bound));
        if (name == "e2") return source_e2();
        throw std::invalid_argument("unknown named series '" + name + "' (expected delta or e2)");
    }
    if (j.contains("truncation")) return source_from_qseries(io::to_qseries(j));
    if (j.contains("k") && j.contains("l")) return source_from_h(io::to_h_spec(j));
    if (j.contains("terms")) {
        const auto& terms = j.at("terms");
        if (terms.is_array() && !terms.empty() && terms[0].is_object())
            return source_from_eisenstein(io::to_combination(j));
    }
    throw std::invalid_argument("spec file does not describe a coefficient source");
}

inline std::string dump(const io::json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

/**
 * Command-line front end. Returns the process exit code: 0 for success and
 * positive verdicts, 1 for refuted certifications and failed scans (the
 * artifact still carries the witness), 2 for usage or input errors.
 */
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact q-series toolkit: divisor-sum identities, their finite prime checks, and scans"};
    app.require_subcommand(1);

    detail::OutputTarget target;
    app.add_option("--out", target.path, "write the artifact to this file (QDETECT_OUT_DIR resolves relative paths)");

    // characters
    auto* cmd_chars = app.add_subcommand("characters", "enumerate the characters of a modulus");
    std::uint32_t chars_modulus = 1;
    std::string chars_format = "text";
    cmd_chars->add_option("--modulus", chars_modulus, "modulus M")->required();
    cmd_chars->add_option("--format", chars_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    // gen-eisenstein
    auto* cmd_gen_e = app.add_subcommand("gen-eisenstein", "q-expansion of a weighted divisor-sum series");
    std::uint32_t ge_k = 0, ge_modulus = 1, ge_deriv = 0, ge_v = 1, ge_nmax = 0;
    std::uint64_t ge_chi = 0, ge_psi = 0;
    bool ge_e2 = false;
    std::string ge_format = "text";
    cmd_gen_e->add_option("--k", ge_k, "weight (0 gives the zero series)");
    cmd_gen_e->add_flag("--e2", ge_e2, "the distinguished weight-2 series");
    cmd_gen_e->add_option("--modulus", ge_modulus, "character modulus (both characters)");
    cmd_gen_e->add_option("--chi", ge_chi, "index of the first character");
    cmd_gen_e->add_option("--psi", ge_psi, "index of the second character");
    cmd_gen_e->add_option("--derivative", ge_deriv, "derivative power applied first");
    cmd_gen_e->add_option("--v", ge_v, "index dilation applied last");
    cmd_gen_e->add_option("--nmax", ge_nmax, "truncation")->required();
    cmd_gen_e->add_option("--format", ge_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    // gen-h
    auto* cmd_gen_h = app.add_subcommand("gen-h", "q-expansion of the two-term detecting combination");
    std::uint32_t gh_k = 0, gh_l = 0, gh_M = 1, gh_nmax = 0;
    std::uint64_t gh_chi = 0, gh_psi = 0, gh_m = 1;
    std::string gh_format = "text";
    cmd_gen_h->add_option("--k", gh_k, "first weight")->required();
    cmd_gen_h->add_option("--l", gh_l, "second weight")->required();
    cmd_gen_h->add_option("--M", gh_M, "character modulus")->required();
    cmd_gen_h->add_option("--m", gh_m, "residue coprime to M")->required();
    cmd_gen_h->add_option("--chi", gh_chi, "index of the first character");
    cmd_gen_h->add_option("--psi", gh_psi, "index of the second character");
    cmd_gen_h->add_option("--nmax", gh_nmax, "truncation")->required();
    cmd_gen_h->add_option("--format", gh_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    // spanning-set
    auto* cmd_span = app.add_subcommand("spanning-set", "same-total-weight difference family for a progression");
    std::uint32_t sp_K = 4, sp_M = 1;
    std::uint64_t sp_m = 1;
    bool sp_count_only = false;
    cmd_span->add_option("--K", sp_K, "total weight")->required();
    cmd_span->add_option("--M", sp_M, "character modulus")->required();
    cmd_span->add_option("--m", sp_m, "residue coprime to M")->required();
    cmd_span->add_flag("--count-only", sp_count_only, "emit only the counts");

    // certify
    auto* cmd_certify = app.add_subcommand("certify", "finite prime check of an Eisenstein combination");
    std::string ce_spec, ce_progression, ce_primes = "auto";
    cmd_certify->add_option("--spec", ce_spec, "spec file (combination or h parameters)")->required();
    cmd_certify->add_option("--progression", ce_progression, "target class m/M")->required();
    cmd_certify->add_option("--primes", ce_primes, "auto or a comma-separated list");

    // decompose-w
    auto* cmd_dec = app.add_subcommand("decompose-w", "peel a divisor-sum expression into quadruple parts");
    std::string dw_terms, dw_spec;
    cmd_dec->add_option("--terms", dw_terms, "inline terms A,l,k;A,l,k;...");
    cmd_dec->add_option("--spec", dw_spec, "JSON file with {\"terms\": [[A,l,k],...]}");

    // certify-w
    auto* cmd_cw = app.add_subcommand("certify-w", "certify vanishing prime coefficients of an expression");
    std::string cw_terms, cw_spec, cw_mode = "all";
    bool cw_paper_count = false;
    cmd_cw->add_option("--terms", cw_terms, "inline terms A,l,k;A,l,k;...");
    cmd_cw->add_option("--spec", cw_spec, "JSON file with {\"terms\": [[A,l,k],...]}");
    cmd_cw->add_option("--mode", cw_mode, "exponents, primes, decomposition, or all")
        ->check(CLI::IsMember({"exponents", "primes", "decomposition", "all"}));
    cmd_cw->add_flag("--paper-prime-count", cw_paper_count,
                     "probe max(R,1) primes instead of the unconditionally sound R+1");

    // macmahon
    auto* cmd_mac = app.add_subcommand("macmahon", "partition sum tables and the prime-detecting identity");
    std::uint32_t mac_a = 1, mac_nmax = 0;
    bool mac_verify = false;
    std::string mac_format = "csv";
    cmd_mac->add_option("--a", mac_a, "number of distinct part sizes")->required();
    cmd_mac->add_option("--nmax", mac_nmax, "table bound")->required();
    cmd_mac->add_flag("--verify-identity", mac_verify, "scan the quadratic identity instead of printing the table");
    cmd_mac->add_option("--format", mac_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    // scan
    auto* cmd_scan = app.add_subcommand("scan", "detection scan of a coefficient source over a progression");
    std::string sc_spec, sc_progression;
    std::uint64_t sc_level = 1, sc_bound = 0;
    bool sc_strong = false;
    std::size_t sc_cap = 32;
    cmd_scan->add_option("--spec", sc_spec, "source spec file")->required();
    cmd_scan->add_option("--progression", sc_progression, "class m/M")->required();
    cmd_scan->add_option("--level", sc_level, "level N (indices sharing a factor are skipped)");
    cmd_scan->add_option("--bound", sc_bound, "scan bound")->required();
    cmd_scan->add_flag("--strong", sc_strong, "require strong detection for exit code 0");
    cmd_scan->add_option("--witness-cap", sc_cap, "maximum witnesses embedded in the report");

    // sign-changes
    auto* cmd_sign = app.add_subcommand("sign-changes", "sign flips of prime coefficients over a progression");
    std::string sg_series, sg_spec, sg_progression = "0/1";
    std::uint64_t sg_bound = 0;
    cmd_sign->add_option("--series", sg_series, "named series: delta or e2");
    cmd_sign->add_option("--spec", sg_spec, "source spec file");
    cmd_sign->add_option("--progression", sg_progression, "class m/M (default all integers)");
    cmd_sign->add_option("--bound", sg_bound, "prime bound")->required();

    std::vector<const char*> argv;
    argv.push_back("qdetect");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*cmd_chars) {
            const auto chars = enumerate_characters(chars_modulus);
            if (chars_format == "json") {
                io::json arr = io::json::array();
                for (const auto& c : chars) {
                    io::json values = io::json::array();
                    for (std::uint32_t n = 0; n < chars_modulus; ++n) values.push_back(io::from_cyc(c.at(n)));
                    arr.push_back(io::json{{"modulus", io::from_u64(c.modulus())},
                                           {"index", io::from_u64(c.index())},
                                           {"order", io::from_u64(c.order())},
                                           {"conductor", io::from_u64(c.conductor())},
                                           {"parity", c.parity() > 0 ? "+1" : "-1"},
                                           {"primitive", c.is_primitive()},
                                           {"values", std::move(values)}});
                }
                target.emit(detail::dump(arr), out);
            } else {
                std::string text;
                for (const auto& c : chars) {
                    text += "index=" + std::to_string(c.index()) + " order=" + std::to_string(c.order()) +
                            " conductor=" + std::to_string(c.conductor()) +
                            " parity=" + (c.parity() > 0 ? std::string("+1") : std::string("-1")) +
                            " primitive=" + (c.is_primitive() ? "yes" : "no") + " values=";
                    for (std::uint32_t n = 0; n < chars_modulus; ++n) {
                        if (n) text += ",";
                        text += c.at(n).to_string();
                    }
                    text += "\n";
                }
                target.emit(text, out);
            }
            return 0;
        }

        if (*cmd_gen_e) {
            if (ge_e2 && cmd_gen_e->count("--k"))
                throw std::invalid_argument("--e2 and --k are mutually exclusive");
            if (!ge_e2 && !cmd_gen_e->count("--k"))
                throw std::invalid_argument("one of --k or --e2 is required");
            EisensteinSpec spec =
                ge_e2 ? EisensteinSpec::e2_series(ge_deriv, ge_v)
                      : EisensteinSpec::series(ge_k, DirichletCharacter(ge_modulus, ge_chi),
                                               DirichletCharacter(ge_modulus, ge_psi), ge_deriv, ge_v);
            const QSeries f = eisenstein_qexp(spec, ge_nmax);
            target.emit(ge_format == "json" ? detail::dump(io::from_qseries(f)) : io::qseries_text(f), out);
            return 0;
        }

        if (*cmd_gen_h) {
            HSpec spec(gh_k, gh_l, DirichletCharacter(gh_M, gh_chi), DirichletCharacter(gh_M, gh_psi), gh_m);
            const QSeries f = h_qexp(spec, gh_nmax);
            target.emit(gh_format == "json" ? detail::dump(io::from_qseries(f)) : io::qseries_text(f), out);
            return 0;
        }

        if (*cmd_span) {
            const auto specs = spanning_specs(sp_K, sp_M, sp_m);
            io::json j;
            j["K"] = io::from_u64(sp_K);
            j["M"] = io::from_u64(sp_M);
            j["m"] = io::from_u64(sp_m);
            j["spec_count"] = io::from_u64(specs.size());
            j["pair_count"] = io::from_u64(specs.size() * (specs.size() - 1) / 2);
            if (!sp_count_only) {
                io::json arr = io::json::array();
                for (const auto& s : specs) arr.push_back(io::from_h_spec(s));
                j["specs"] = std::move(arr);
                io::json pairs = io::json::array();
                for (std::size_t i = 0; i < specs.size(); ++i)
                    for (std::size_t k = i + 1; k < specs.size(); ++k)
                        pairs.push_back(io::json::array({io::from_u64(i), io::from_u64(k)}));
                j["pairs"] = std::move(pairs);
            }
            target.emit(detail::dump(j), out);
            return 0;
        }

        if (*cmd_certify) {
            const auto [m, M] = detail::parse_progression(ce_progression);
            const Progression target_class(m, M);
            const io::json spec_json = detail::load_json_file(ce_spec);
            PrimeCoefficientPolynomial poly;
            if (spec_json.contains("k") && spec_json.contains("l")) {
                poly = h_prime_polynomial(io::to_h_spec(spec_json));
                if (poly.modulus != target_class.modulus || poly.residue != target_class.residue)
                    throw std::invalid_argument("certify: --progression disagrees with the h parameters");
            } else {
                poly = prime_coefficient_polynomial(io::to_combination(spec_json), target_class.residue,
                                                    static_cast<std::uint32_t>(target_class.modulus));
            }
            std::vector<std::uint64_t> primes;
            if (ce_primes == "auto") {
                primes = auto_check_primes(poly);
            } else {
                std::stringstream ps(ce_primes);
                std::string tok;
                while (std::getline(ps, tok, ',')) primes.push_back(std::stoull(tok));
            }
            const FiniteCheckCertificate cert = finite_prime_check(poly, primes);
            target.emit(detail::dump(io::from_finite_check(cert, poly)), out);
            return cert.detects ? 0 : 1;
        }

        if (*cmd_dec || *cmd_cw) {
            const bool is_dec = static_cast<bool>(*cmd_dec);
            const std::string& terms = is_dec ? dw_terms : cw_terms;
            const std::string& spec_path = is_dec ? dw_spec : cw_spec;
            if (terms.empty() == spec_path.empty())
                throw std::invalid_argument("exactly one of --terms or --spec is required");
            const WExpression w =
                terms.empty() ? io::to_wexpression(detail::load_json_file(spec_path)) : detail::parse_terms(terms);
            WCertifyMode mode = WCertifyMode::all;
            if (!is_dec) {
                if (cw_mode == "exponents") mode = WCertifyMode::exponents;
                else if (cw_mode == "primes") mode = WCertifyMode::primes;
                else if (cw_mode == "decomposition") mode = WCertifyMode::decomposition;
            } else {
                mode = WCertifyMode::decomposition;
            }
            const WCertificate cert = certify_prime_detection(w, mode, cw_paper_count);
            target.emit(detail::dump(io::from_w_certificate(cert)), out);
            return cert.detects ? 0 : 1;
        }

        if (*cmd_mac) {
            if (mac_verify) {
                const IdentityReport report = verify_prime_identity(mac_nmax);
                target.emit(detail::dump(io::from_identity_report(report)), out);
                return report.failures.empty() ? 0 : 1;
            }
            const MacMahonTable table = macmahon_table(mac_a, mac_nmax);
            if (mac_format == "json") {
                io::json values = io::json::array();
                for (const Integer& v : table.values) values.push_back(io::from_integer(v));
                target.emit(detail::dump(io::json{{"a", io::from_u64(table.a)}, {"values", std::move(values)}}),
                            out);
            } else {
                std::string csv = "n,M_" + std::to_string(mac_a) + "(n)\n";
                for (std::size_t n = 0; n < table.values.size(); ++n)
                    csv += std::to_string(n) + "," + table.values[n].str() + "\n";
                target.emit(csv, out);
            }
            return 0;
        }

        if (*cmd_scan) {
            const auto [m, M] = detail::parse_progression(sc_progression);
            const CoefficientSource source = detail::source_from_spec(detail::load_json_file(sc_spec), sc_bound);
            const DetectionReport report =
                scan_detection(source, Progression(m, M), sc_level, sc_bound, sc_cap);
            target.emit(detail::dump(io::from_detection_report(report)), out);
            if (report.verdict == DetectionVerdict::fails) return 1;
            if (sc_strong && report.verdict != DetectionVerdict::strongly_detects) return 1;
            return 0;
        }

        if (*cmd_sign) {
            const auto [m, M] = detail::parse_progression(sg_progression);
            if (sg_series.empty() == sg_spec.empty())
                throw std::invalid_argument("exactly one of --series or --spec is required");
            CoefficientSource source;
            if (!sg_series.empty()) {
                if (sg_series == "delta") source = source_delta(static_cast<std::uint32_t>(sg_bound));
                else if (sg_series == "e2") source = source_e2();
                else throw std::invalid_argument("unknown named series '" + sg_series + "'");
            } else {
                source = detail::source_from_spec(detail::load_json_file(sg_spec), sg_bound);
            }
            const SignChangeReport report = sign_changes(source, Progression(m, M), sg_bound);
            target.emit(detail::dump(io::from_sign_changes(report)), out);
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace qdetect::cli
