#include "wk/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "wk/cache.hpp"
#include "wk/closedform.hpp"
#include "wk/decomposition.hpp"
#include "wk/oracles.hpp"
#include "wk/residue.hpp"
#include "wk/wp.hpp"

namespace wk {

namespace {

using Json = nlohmann::ordered_json;

enum class Format { text, json, csv };

struct Options {
    Format format = Format::text;
    std::string cache_flag;
    unsigned threads = 1;
    uint32_t seed_cap = 0;  // 0: smallest complete fit bound for the genus
};

// RFC 4180: CRLF row ends, quotes doubled, quoting only when the field
// contains a comma, a quote, or a line break.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        q += c;
        if (c == '"') q += '"';
    }
    q += '"';
    return q;
}

void csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
    out << "\r\n";
}

std::string join_u32(const std::vector<uint32_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s;
}

// "7/240*e1^5 + e2*e1 - e3": keys in partition order (all of equal weight
// within one amplitude), parts collapsed to powers.
std::string epoly_string(const EPolynomial<Rational>& p) {
    if (p.terms().empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : p.terms()) {
        bool neg = sgn(c) < 0;
        Rational mag = neg ? Rational(-c) : c;
        std::string mono;
        const auto& parts = key.parts();
        for (std::size_t i = 0; i < parts.size();) {
            std::size_t j = i;
            while (j < parts.size() && parts[j] == parts[i]) ++j;
            if (!mono.empty()) mono += "*";
            mono += "e" + std::to_string(parts[i]);
            if (j - i > 1) mono += "^" + std::to_string(j - i);
            i = j;
        }
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        if (mono.empty())
            os << pretty_string(mag);
        else if (mag != 1)
            os << pretty_string(mag) << "*" << mono;
        else
            os << mono;
    }
    return os.str();
}

std::string msym_string(const MSymPoly<Rational>& p) {
    if (p.terms().empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : p.terms()) {
        bool neg = sgn(c) < 0;
        Rational mag = neg ? Rational(-c) : c;
        std::string mono = key.empty() ? "" : "m(" + join_u32(key.parts()) + ")";
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        if (mono.empty())
            os << pretty_string(mag);
        else if (mag != 1)
            os << pretty_string(mag) << "*" << mono;
        else
            os << mono;
    }
    return os.str();
}

Json parts_array(const std::vector<uint32_t>& parts) {
    Json a = Json::array();
    for (uint32_t p : parts) a.push_back(p);
    return a;
}

int fail(std::ostream& err, const char* kind, const std::string& message) {
    Json j;
    j["error"]["kind"] = kind;
    j["error"]["message"] = message;
    err << j.dump() << "\n";
    return 1;
}

ClosedFormSet fit(CorrelatorEngine& engine, uint32_t genus, const Options& o) {
    return fit_closed_form(engine, genus, o.seed_cap, o.threads);
}

void run_correlator(CorrelatorEngine& engine, const Options& o, uint32_t g,
                    const std::vector<uint32_t>& degrees, std::ostream& out) {
    Rational v = engine.correlator(g, degrees);
    switch (o.format) {
        case Format::text:
            out << pretty_string(v) << "\n";
            break;
        case Format::json: {
            Json j;
            j["g"] = g;
            j["degrees"] = parts_array(degrees);
            j["value"] = fraction_string(v);
            out << j.dump() << "\n";
            break;
        }
        case Format::csv:
            csv_row(out, {"g", "degrees", "value"});
            csv_row(out, {std::to_string(g), join_u32(degrees), fraction_string(v)});
            break;
    }
}

void run_amplitude(CorrelatorEngine& engine, const Options& o, uint32_t g, uint32_t n,
                   bool normalized, std::ostream& out) {
    AmplitudeDecomposition dec = amplitude(engine, g, n, normalized, o.threads);
    switch (o.format) {
        case Format::text:
            out << epoly_string(dec.coeffs) << "\n";
            break;
        case Format::json: {
            Json j;
            j["g"] = g;
            j["n"] = n;
            j["normalized"] = normalized;
            j["degree"] = dec.degree();
            Json terms = Json::array();
            for (const auto& [key, c] : dec.coeffs.terms()) {
                Json t;
                t["key"] = parts_array(key.parts());
                t["coeff"] = fraction_string(c);
                terms.push_back(std::move(t));
            }
            j["terms"] = std::move(terms);
            out << j.dump() << "\n";
            break;
        }
        case Format::csv:
            csv_row(out, {"key", "coeff"});
            for (const auto& [key, c] : dec.coeffs.terms())
                csv_row(out, {join_u32(key.parts()), fraction_string(c)});
            break;
    }
}

void run_coeffs(CorrelatorEngine& engine, const Options& o, uint32_t g, std::ostream& out) {
    ClosedFormSet set = fit(engine, g, o);
    switch (o.format) {
        case Format::text:
            out << render_closed_forms(set);
            break;
        case Format::json: {
            Json j;
            j["g"] = g;
            j["c_empty"] = fraction_string(set.c_empty);
            Json fams = Json::array();
            for (const auto& [mu, fam] : set.families) {
                Json f;
                f["mu"] = parts_array(mu.parts());
                f["k0"] = fam.k0;
                f["shift"] = fam.shift;
                Json q = Json::array();
                for (const Rational& c : fam.qpoly) q.push_back(fraction_string(c));
                f["qpoly"] = std::move(q);
                fams.push_back(std::move(f));
            }
            j["families"] = std::move(fams);
            Json exc = Json::array();
            for (const auto& [key, v] : set.exceptional) {
                Json e;
                e["key"] = parts_array(key.parts());
                e["value"] = fraction_string(v);
                exc.push_back(std::move(e));
            }
            j["exceptional"] = std::move(exc);
            Json skipped = Json::array();
            for (const auto& mu : set.skipped) skipped.push_back(parts_array(mu.parts()));
            j["skipped"] = std::move(skipped);
            out << j.dump() << "\n";
            break;
        }
        case Format::csv: {
            csv_row(out, {"kind", "key", "k0", "shift", "data"});
            csv_row(out, {"empty", "", "", "", fraction_string(set.c_empty)});
            for (const auto& [mu, fam] : set.families) {
                std::string q;
                for (std::size_t i = 0; i < fam.qpoly.size(); ++i)
                    q += (i ? ";" : "") + fraction_string(fam.qpoly[i]);
                csv_row(out, {"family", join_u32(mu.parts()), std::to_string(fam.k0),
                              std::to_string(fam.shift), q});
            }
            for (const auto& [key, v] : set.exceptional)
                csv_row(out, {"exceptional", join_u32(key.parts()), "", "", fraction_string(v)});
            for (const auto& mu : set.skipped)
                csv_row(out, {"skipped", join_u32(mu.parts()), "", "", ""});
            break;
        }
    }
}

void run_formula(CorrelatorEngine& engine, const Options& o, uint32_t g, std::ostream& out) {
    ClosedFormSet set = fit(engine, g, o);
    std::string text = render_amplitude_formula(set);
    switch (o.format) {
        case Format::text:
            out << text;
            break;
        case Format::json: {
            Json j;
            j["g"] = g;
            j["scale"] = fraction_string(normalization_factor(g));
            j["text"] = text;
            out << j.dump() << "\n";
            break;
        }
        case Format::csv:
            csv_row(out, {"g", "scale", "text"});
            csv_row(out, {std::to_string(g), fraction_string(normalization_factor(g)), text});
            break;
    }
}

void run_conjecture(CorrelatorEngine& engine, const Options& o, uint32_t g, std::ostream& out) {
    ConjectureReport rep = check_conjecture(engine, g, o.threads);
    switch (o.format) {
        case Format::text:
            out << "genus " << rep.genus << ": " << rep.keys_checked << " keys through n = "
                << rep.checked_n;
            if (rep.ok()) {
                out << ", no violations\n";
            } else {
                out << ", violations:\n";
                for (const std::string& v : rep.violations) out << "  " << v << "\n";
            }
            break;
        case Format::json: {
            Json j;
            j["g"] = rep.genus;
            j["checked_n"] = rep.checked_n;
            j["violations"] = rep.violations;
            out << j.dump() << "\n";
            break;
        }
        case Format::csv: {
            csv_row(out, {"g", "checked_n", "keys_checked", "violations"});
            std::string joined;
            for (std::size_t i = 0; i < rep.violations.size(); ++i)
                joined += (i ? "|" : "") + rep.violations[i];
            csv_row(out, {std::to_string(rep.genus), std::to_string(rep.checked_n),
                          std::to_string(rep.keys_checked), joined});
            break;
        }
    }
}

void run_string_check(CorrelatorEngine& engine, const Options& o, uint32_t g, uint32_t n,
                      std::ostream& out) {
    RelationReport rep = check_string_relations(engine, g, n, o.threads);
    switch (o.format) {
        case Format::text:
            out << "genus " << g << " level " << n << ": " << rep.checks << " checks";
            if (rep.ok()) {
                out << ", no violations\n";
            } else {
                out << ", violations:\n";
                for (const std::string& v : rep.violations) out << "  " << v << "\n";
            }
            break;
        case Format::json: {
            Json j;
            j["g"] = g;
            j["n"] = n;
            j["checks"] = rep.checks;
            j["violations"] = rep.violations;
            out << j.dump() << "\n";
            break;
        }
        case Format::csv: {
            csv_row(out, {"g", "n", "checks", "violations"});
            std::string joined;
            for (std::size_t i = 0; i < rep.violations.size(); ++i)
                joined += (i ? "|" : "") + rep.violations[i];
            csv_row(out, {std::to_string(g), std::to_string(n), std::to_string(rep.checks),
                          joined});
            break;
        }
    }
}

void run_wp(CorrelatorEngine& engine, const Options& o, uint32_t g, uint32_t n,
            const std::string& path, std::ostream& out) {
    WPVolume vol;
    if (path == "kappa") {
        vol = wp_volume(engine, g, n, WPPath::kappa);
    } else {
        ClosedFormSet set = fit(engine, g, o);
        vol = wp_volume(engine, g, n, WPPath::residue, &set);
        if (path == "both") {
            WPVolume kappa = wp_volume(engine, g, n, WPPath::kappa);
            if (!(kappa == vol))
                throw integrity_error("volume paths disagree at g=" + std::to_string(g) +
                                      " n=" + std::to_string(n));
        }
    }
    switch (o.format) {
        case Format::text:
            out << wp_volume_human(vol) << "\n";
            break;
        case Format::json: {
            Json j = Json::parse(wp_volume_json(vol));
            j["path"] = path;
            out << j.dump() << "\n";
            break;
        }
        case Format::csv:
            csv_row(out, {"L2exp", "pi2pow", "coeff"});
            for (const auto& [exps, c] : vol.terms) {
                auto [power, r] = c.sole_term();
                csv_row(out, {join_u32(exps), std::to_string(power), fraction_string(r)});
            }
            break;
    }
}

void run_hurwitz(const Options& o, uint32_t g, uint32_t n, std::ostream& out) {
    MSymPoly<Rational> poly = gjv_onepart_poly(g, n);
    switch (o.format) {
        case Format::text:
            out << msym_string(poly) << "\n";
            break;
        case Format::json: {
            Json j;
            j["g"] = g;
            j["n"] = n;
            Json terms = Json::array();
            for (const auto& [key, c] : poly.terms()) {
                Json t;
                t["key"] = parts_array(key.parts());
                t["coeff"] = fraction_string(c);
                terms.push_back(std::move(t));
            }
            j["terms"] = std::move(terms);
            out << j.dump() << "\n";
            break;
        }
        case Format::csv:
            csv_row(out, {"key", "coeff"});
            for (const auto& [key, c] : poly.terms())
                csv_row(out, {join_u32(key.parts()), fraction_string(c)});
            break;
    }
}

void run_oracle(CorrelatorEngine& engine, const Options& o, uint32_t g, uint32_t n,
                std::ostream& out) {
    struct Check {
        std::string oracle;
        std::string status;
        std::string detail;
    };
    std::vector<Check> checks;

    AmplitudeDecomposition dec = amplitude(engine, g, n, true, o.threads);
    ClosedFormSet set = fit(engine, g, o);
    AmplitudeDecomposition fitted = closed_form_amplitude(set, n);
    checks.push_back({"fitted", dec.coeffs == fitted.coeffs ? "equal" : "different", ""});

    if (g >= 2 && g <= 4) {
        AmplitudeDecomposition printed = printed_formula(g, n);
        checks.push_back({"printed", dec.coeffs == printed.coeffs ? "equal" : "different", ""});
    } else {
        checks.push_back({"printed", "skipped", "no published table at this genus"});
    }

    if (g <= 3) {
        MSymPoly<Rational> mono = amplitude_monomials(engine, g, n, o.threads);
        BFunction b = build_b_minus(set, n, true);
        std::string bad;
        for (const auto& [key, value] : mono.terms()) {
            std::vector<uint32_t> degrees = key.parts();
            degrees.resize(n, 0);
            if (correlator_from_residue(b, degrees) != value) {
                bad = "first mismatch at degrees " + key.to_string();
                break;
            }
        }
        checks.push_back({"residue", bad.empty() ? "equal" : "different", bad});
    } else {
        checks.push_back({"residue", "skipped", "extraction sweep restricted to genus <= 3"});
    }

    switch (o.format) {
        case Format::text:
            for (const auto& c : checks) {
                out << c.oracle << ": " << c.status;
                if (!c.detail.empty()) out << " (" << c.detail << ")";
                out << "\n";
            }
            break;
        case Format::json: {
            Json j;
            j["g"] = g;
            j["n"] = n;
            Json arr = Json::array();
            for (const auto& c : checks) {
                Json e;
                e["oracle"] = c.oracle;
                e["status"] = c.status;
                if (!c.detail.empty()) e["detail"] = c.detail;
                arr.push_back(std::move(e));
            }
            j["checks"] = std::move(arr);
            out << j.dump() << "\n";
            break;
        }
        case Format::csv:
            csv_row(out, {"oracle", "status", "detail"});
            for (const auto& c : checks) csv_row(out, {c.oracle, c.status, c.detail});
            break;
    }
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact psi-class intersection numbers: correlators, amplitude "
                 "decompositions, coefficient families, and Weil-Petersson volumes"};
    app.require_subcommand(1);

    Options opt;
    std::map<std::string, Format> formats{
        {"text", Format::text}, {"json", Format::json}, {"csv", Format::csv}};
    app.add_option("--format", opt.format, "output format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
        ->capture_default_str();
    app.add_option("--cache", opt.cache_flag,
                   "correlator cache file (WK_CACHE environment variable overrides)");
    app.add_option("--threads", opt.threads, "worker threads for seed tables and sweeps")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
    app.add_option("--seed-max-n", opt.seed_cap,
                   "cap on the seed level used for fitting (0: the completeness bound, "
                   "at most 6g-3)")
        ->capture_default_str();

    uint32_t genus = 0;
    uint32_t npoints = 0;
    std::vector<uint32_t> degrees;
    bool normalized = false;
    std::string wp_path = "kappa";

    CLI::App* c_correlator = app.add_subcommand("correlator", "one intersection number");
    c_correlator->add_option("-g,--genus", genus, "genus")->required();
    c_correlator->add_option("-d,--degrees", degrees, "comma-separated insertion degrees")
        ->required()
        ->delimiter(',');

    CLI::App* c_amplitude = app.add_subcommand("amplitude", "amplitude in the e-basis");
    c_amplitude->add_option("-g,--genus", genus, "genus")->required();
    c_amplitude->add_option("-n,--points", npoints, "number of insertions")->required();
    c_amplitude->add_flag("--normalized", normalized, "scale by 24^g g!");

    CLI::App* c_coeffs = app.add_subcommand("coeffs", "fitted coefficient family table");
    c_coeffs->add_option("-g,--genus", genus, "genus")->required();

    CLI::App* c_formula = app.add_subcommand("formula", "closed amplitude formula in n");
    c_formula->add_option("-g,--genus", genus, "genus")->required();

    CLI::App* c_conjecture =
        app.add_subcommand("conjecture", "check the coefficient length bound");
    c_conjecture->add_option("-g,--genus", genus, "genus")->required();

    CLI::App* c_string = app.add_subcommand("string-check", "string-relation consequences");
    c_string->add_option("-g,--genus", genus, "genus")->required();
    c_string->add_option("-n,--points", npoints, "level to compare against level n+1")
        ->required();

    CLI::App* c_wp = app.add_subcommand("wp", "Weil-Petersson volume polynomial");
    c_wp->add_option("-g,--genus", genus, "genus")->required();
    c_wp->add_option("-n,--points", npoints, "number of boundaries")->required();
    c_wp->add_option("--path", wp_path, "evaluation path")
        ->transform(CLI::IsMember({"kappa", "residue", "both"}))
        ->capture_default_str();

    CLI::App* c_hurwitz =
        app.add_subcommand("hurwitz-onepart", "one-part double Hurwitz polynomial");
    c_hurwitz->add_option("-g,--genus", genus, "genus")->required();
    c_hurwitz->add_option("-n,--points", npoints, "number of variables")->required();

    CLI::App* c_oracle =
        app.add_subcommand("oracle-compare", "cross-check independent evaluation routes");
    c_oracle->add_option("-g,--genus", genus, "genus")->required();
    c_oracle->add_option("-n,--points", npoints, "number of insertions")->required();

    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    std::vector<const char*> argv;
    argv.push_back("wk");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    const char* env_cache = std::getenv("WK_CACHE");
    const std::string cache = env_cache && *env_cache ? std::string(env_cache) : opt.cache_flag;

    try {
        std::optional<CacheLock> lock;
        CorrelatorEngine engine;
        if (!cache.empty()) {
            lock.emplace(cache);
            cache_load(engine, cache);
        }
        if (*c_correlator) run_correlator(engine, opt, genus, degrees, out);
        if (*c_amplitude) run_amplitude(engine, opt, genus, npoints, normalized, out);
        if (*c_coeffs) run_coeffs(engine, opt, genus, out);
        if (*c_formula) run_formula(engine, opt, genus, out);
        if (*c_conjecture) run_conjecture(engine, opt, genus, out);
        if (*c_string) run_string_check(engine, opt, genus, npoints, out);
        if (*c_wp) run_wp(engine, opt, genus, npoints, wp_path, out);
        if (*c_hurwitz) run_hurwitz(opt, genus, npoints, out);
        if (*c_oracle) run_oracle(engine, opt, genus, npoints, out);
        if (!cache.empty()) cache_flush(engine, cache);
    } catch (const domain_error& e) {
        return fail(err, "domain", e.what());
    } catch (const io_error& e) {
        return fail(err, "io", e.what());
    } catch (const integrity_error& e) {
        return fail(err, "integrity", e.what());
    } catch (const std::exception& e) {
        return fail(err, "internal", e.what());
    }
    return 0;
}

}  // namespace wk
