#include "sdesplit/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sdesplit/bridge.hpp"
#include "sdesplit/chen.hpp"
#include "sdesplit/expectation.hpp"
#include "sdesplit/mc.hpp"
#include "sdesplit/report.hpp"
#include "sdesplit/selfcheck.hpp"

namespace sdesplit {
namespace {

using nlohmann::json;

constexpr int kOk = 0, kInputError = 2, kUndecided = 3, kInconsistent = 4;

struct CliError {
    int code;
    std::string message;
};

// Half-integer weight cap "p" or "p/2" -> twice the weight.
int parse_weight2(const std::string& text) {
    auto q = parse_rational(text);
    if (!q || *q < 0) throw CliError{kInputError, "invalid --max-weight '" + text + "'"};
    Rational doubled = *q * 2;
    if (denominator(doubled) != 1)
        throw CliError{kInputError, "--max-weight must be an integer or half-integer"};
    return static_cast<int>(numerator(doubled));
}

struct SchemeInput {
    SchemeSpec scheme;
    std::string source_text;  // for the input digest
};

SchemeInput load_scheme(const std::string& file, const std::string& builtin_name) {
    if (!builtin_name.empty()) {
        SchemeInput in;
        in.scheme = builtin(builtin_name);
        in.source_text = "builtin:" + builtin_name;
        return in;
    }
    if (file.empty()) throw CliError{kInputError, "give a scheme file or --builtin NAME"};
    std::ifstream f(file);
    if (!f) throw CliError{kInputError, "cannot read scheme file '" + file + "'"};
    std::ostringstream buf;
    buf << f.rdbuf();
    SchemeInput in;
    in.source_text = buf.str();
    in.scheme = parse_scheme(in.source_text);
    return in;
}

void require_valid(const SchemeSpec& s, std::ostream& err) {
    auto rep = validate(s);
    for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
    if (!rep.ok()) {
        std::string msg = "invalid scheme:";
        for (const auto& e : rep.errors) msg += "\n  " + e;
        throw CliError{kInputError, msg};
    }
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("SDESPLIT_SEED")) return std::strtoull(env, nullptr, 10);
    return 12345;
}

std::vector<double> parse_h_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw CliError{kInputError, "invalid h value '" + item + "'"};
        }
    }
    return out;
}

void require_ladder(const std::vector<double>& hs, double T) {
    if (hs.size() < 3) throw CliError{kInputError, "h ladder needs at least 3 values"};
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (hs[i] <= 0 || (i > 0 && hs[i] >= hs[i - 1]))
            throw CliError{kInputError, "h ladder must be positive and strictly decreasing"};
        double steps = T / hs[i];
        if (std::abs(steps - std::round(steps)) > 1e-9)
            throw CliError{kInputError, "final time must be a multiple of every h"};
    }
}

void emit(std::ostream& out, const std::string& format, const std::string& command,
          const std::string& input_text, const json& payload, const std::string& text) {
    if (format == "json")
        out << envelope(command, digest(input_text), payload).dump(2) << "\n";
    else
        out << text;
}

int cmd_analyze(const SchemeInput& in, const std::string& mode, int max_weight2,
                const std::string& format, std::ostream& out, std::ostream& err) {
    require_valid(in.scheme, err);
    const Alphabet& al = *in.scheme.system.alphabet;
    json payload = json::object();
    std::ostringstream text;
    int code = kOk;

    if (mode == "strong" || mode == "both") {
        auto r = strong_order(in.scheme, max_weight2);
        payload["strong"] = strong_report_json(r, al);
        text << strong_report_text(r, al);
        if (!r.decided) code = std::max(code, kUndecided);
    }
    if (mode == "weak" || mode == "both") {
        auto r = weak_order(in.scheme, max_weight2 / 2);
        payload["weak"] = weak_report_json(r, al);
        text << weak_report_text(r, al);
        if (r.inconsistent) code = std::max(code, kInconsistent);
        else if (!r.decided) code = std::max(code, kUndecided);

        auto b = barrier_check(in.scheme);
        payload["barrier"] = {{"applicable", b.applicable},
                              {"sigma", b.sigma},
                              {"consistent", b.consistent},
                              {"message", b.message}};
        text << "barrier: " << b.message << "\n";
        if (!b.consistent) code = std::max(code, kInconsistent);
    }
    emit(out, format, "analyze", in.source_text, payload, text.str());
    return code;
}

int cmd_conditions(const std::string& alphabet_spec, const std::string& interp_name,
                   int target_weight2, bool lyndon, std::ostream& out) {
    auto semi = alphabet_spec.find(';');
    if (semi == std::string::npos)
        throw CliError{kInputError, "--alphabet must look like 'a,b;A' (deterministic;stochastic)"};
    auto split = [](const std::string& t) {
        std::vector<std::string> v;
        std::stringstream ss(t);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) v.push_back(item);
        return v;
    };
    AlphabetPtr al;
    try {
        al = Alphabet::make(split(alphabet_spec.substr(0, semi)),
                            split(alphabet_spec.substr(semi + 1)));
    } catch (const std::exception& e) {
        throw CliError{kInputError, e.what()};
    }
    Interpretation interp =
        interp_name == "ito" ? Interpretation::Ito : Interpretation::Stratonovich;
    std::vector<Word> words;
    if (lyndon) {
        words = lyndon_reduced_conditions({al, interp}, target_weight2);
    } else {
        const LetterFilter filter =
            interp == Interpretation::Ito ? extended_letters() : base_letters();
        for (const auto& w : enumerate_words(*al, target_weight2, filter)) {
            if (w.empty()) continue;
            if (interp == Interpretation::Ito && w.back().kind == LetterKind::Barred) continue;
            words.push_back(w);
        }
    }
    for (const auto& w : words)
        out << al->render(w) << "  (weight " << render_order2(w.weight2()) << ")\n";
    if (words.empty()) out << "(no conditions up to this weight)\n";
    return kOk;
}

int cmd_local_error(const SchemeInput& in, int max_weight2, const std::string& format,
                    std::ostream& out, std::ostream& err) {
    require_valid(in.scheme, err);
    const Alphabet& al = *in.scheme.system.alphabet;
    const std::string sym = integral_symbol(in.scheme.system.interpretation);
    auto residuals = local_error_expansion(in.scheme, max_weight2);
    json payload = json::array();
    std::ostringstream text;
    if (residuals.empty()) {
        text << "no residuals up to weight " << render_order2(max_weight2) << "\n";
    } else {
        for (const auto& [w, res] : residuals) {
            payload.push_back({{"word", al.render(w)},
                               {"weight", render_order2(w.weight2())},
                               {"residual", iipoly_json(res, al)},
                               {"residualText", res.str(al, sym)}});
            text << al.render(w) << "  (weight " << render_order2(w.weight2())
                 << "): " << res.str(al, sym) << "\n";
        }
    }
    emit(out, format, "local-error", in.source_text, payload, text.str());
    return kOk;
}

int cmd_convert(const SchemeInput& in, std::ostream& out, std::ostream& err) {
    require_valid(in.scheme, err);
    if (in.scheme.system.interpretation != Interpretation::Ito)
        throw CliError{kInputError, "conversion implemented ito->strat only"};
    auto recipe = convert_system(in.scheme.system);
    const Alphabet& al = *recipe.system.alphabet;
    out << "converted interpretation: " << to_string(recipe.system.interpretation) << "\n";
    for (const auto& c : recipe.corrections)
        out << "  " << al.symbol(c.starred) << ": " << c.recipe << "\n";
    out << recipe.note << "\n";
    for (const auto& l : al.letters())
        if (l.stochastic()) {
            Word AA;
            AA = AA.appended(l).appended(l);
            out << iterated_integral_identity(AA, al) << "\n";
        }
    return kOk;
}

int cmd_verify_mc(const SchemeInput& in, const std::string& system_name,
                  const std::string& mode, const std::string& observable, int paths,
                  const std::string& h_text, std::uint64_t seed, int ref_level, double x0_value,
                  const std::string& format, std::ostream& out, std::ostream& err) {
    require_valid(in.scheme, err);
    mc::SimOptions opts;
    opts.ref_level = ref_level;
    auto hs = parse_h_list(h_text);
    require_ladder(hs, opts.final_time);

    const AlphabetPtr al = in.scheme.system.alphabet;
    mc::FieldSystem sys;
    Eigen::VectorXd x0;
    if (system_name.rfind("witness:", 0) == 0) {
        auto w = al->parse_word(system_name.substr(8));
        if (!w) throw CliError{kInputError, "cannot parse witness word '" + system_name + "'"};
        sys = mc::witness_system(*al, *w);
        x0 = Eigen::VectorXd::Zero(sys.dim);
    } else if (system_name == "ou") {
        sys = mc::ou_system(*al, 1.0, 0.8);
    } else if (system_name == "linear") {
        sys = mc::linear_system(*al, 0.2, 0.5);
    } else if (system_name == "drift-split") {
        sys = mc::drift_split_system(*al, 0.7);
    } else {
        throw CliError{kInputError, "unknown --system '" + system_name +
                                        "' (ou, linear, drift-split, witness:WORD)"};
    }
    if (x0.size() == 0) x0 = Eigen::VectorXd::Constant(sys.dim, x0_value);

    mc::SlopeReport r;
    if (mode == "strong") {
        r = mc::estimate_strong_order(in.scheme, sys, x0, hs, paths, seed, opts);
    } else if (mode == "weak") {
        mc::Observable chi;
        if (observable == "x")
            chi = [](const Eigen::VectorXd& v) { return v[0]; };
        else if (observable == "x2")
            chi = [](const Eigen::VectorXd& v) { return v[0] * v[0]; };
        else
            throw CliError{kInputError, "unknown --observable '" + observable + "' (x, x2)"};
        r = mc::estimate_weak_order(in.scheme, sys, chi, x0, hs, paths, seed, opts);
    } else {
        throw CliError{kInputError, "--mode must be strong or weak"};
    }

    std::string scheme_name = in.scheme.name.empty() ? "custom" : in.scheme.name;
    json payload = slope_report_json(r, scheme_name, system_name);
    std::ostringstream text;
    text << mode << " slope: " << r.slope << " +- " << r.stderr_ << "  (" << r.paths
         << " paths, seed " << r.seed << ", verdict " << r.verdict << ")\n";
    for (std::size_t i = 0; i < r.h_values.size(); ++i)
        text << "  h=" << r.h_values[i] << "  error=" << r.errors[i] << "\n";
    for (const auto& n : r.notes) text << "  note: " << n << "\n";
    emit(out, format, "verify-mc", in.source_text, payload, text.str());
    return r.verdict == "inconclusive" ? kUndecided : kOk;
}

int cmd_selfcheck(int max_weight2, std::ostream& out) {
    auto report = run_selfcheck(max_weight2);
    for (const auto& item : report.items) {
        out << (item.pass ? "pass" : "FAIL") << "  " << item.name;
        if (!item.pass) out << "  (" << item.detail << ")";
        out << "\n";
    }
    if (!report.all_pass()) {
        for (const auto& item : report.items)
            if (!item.pass) {
                out << "first failing property: " << item.name << "\n";
                break;
            }
        return kInconsistent;
    }
    out << "all properties hold up to weight " << render_order2(max_weight2) << "\n";
    return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Order conditions for splitting integrators of split SDE systems"};
    app.require_subcommand(1);

    std::string scheme_file, builtin_name, mode = "both", max_weight = "3", format = "text";
    std::string alphabet_spec, interp_name = "stratonovich";
    bool lyndon = false;

    auto add_scheme_opts = [&](CLI::App* cmd) {
        cmd->add_option("scheme", scheme_file, "scheme JSON file");
        cmd->add_option("--builtin", builtin_name, "catalog scheme name");
        cmd->add_option("--format", format, "text|json")
            ->check(CLI::IsMember({"text", "json"}));
    };

    auto* analyze = app.add_subcommand("analyze", "strong/weak order analysis");
    add_scheme_opts(analyze);
    analyze->add_option("--mode", mode, "strong|weak|both")
        ->check(CLI::IsMember({"strong", "weak", "both"}));
    analyze->add_option("--max-weight", max_weight, "weight cap, integer or half-integer");

    auto* conditions = app.add_subcommand("conditions", "order condition word lists");
    conditions->add_option("--alphabet", alphabet_spec, "letters as 'a,b;A' (det;sto)")
        ->required();
    conditions->add_option("--order", max_weight, "target weight, integer or half-integer");
    conditions->add_option("--interpretation", interp_name, "stratonovich|ito")
        ->check(CLI::IsMember({"stratonovich", "ito"}));
    conditions->add_flag("--lyndon", lyndon, "Lyndon-reduced list");

    auto* local = app.add_subcommand("local-error", "residual expansion table");
    add_scheme_opts(local);
    local->add_option("--max-weight", max_weight, "weight cap, integer or half-integer");

    auto* convert = app.add_subcommand("convert", "Ito system -> Stratonovich system");
    add_scheme_opts(convert);

    std::string system_name = "ou", mc_mode = "strong", observable = "x";
    std::string h_text = "0.125,0.0625,0.03125,0.015625";
    int paths = 2000, ref_level = 5;
    std::uint64_t seed = default_seed();
    double x0_value = 1.0;
    auto* verify = app.add_subcommand("verify-mc", "Monte Carlo order verification");
    add_scheme_opts(verify);
    verify->add_option("--system", system_name, "ou|linear|drift-split|witness:WORD");
    verify->add_option("--mode", mc_mode, "strong|weak");
    verify->add_option("--observable", observable, "x|x2 (weak mode)");
    verify->add_option("--paths", paths, "number of sample paths");
    verify->add_option("--h-list", h_text, "comma-separated decreasing step sizes");
    verify->add_option("--seed", seed, "RNG seed (default from SDESPLIT_SEED)");
    verify->add_option("--ref-level", ref_level, "reference substeps per cell = 2^level");
    verify->add_option("--x0", x0_value, "initial state (each component)");

    std::string check_weight = "2";
    auto* selfcheck = app.add_subcommand("selfcheck", "cross-module property suite");
    selfcheck->add_option("--max-weight", check_weight, "weight cap, integer or half-integer");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream help;
        int code = app.exit(e, help, help);
        (code == 0 ? out : err) << help.str();
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (analyze->parsed())
            return cmd_analyze(load_scheme(scheme_file, builtin_name), mode,
                               parse_weight2(max_weight), format, out, err);
        if (conditions->parsed())
            return cmd_conditions(alphabet_spec, interp_name, parse_weight2(max_weight), lyndon,
                                  out);
        if (local->parsed())
            return cmd_local_error(load_scheme(scheme_file, builtin_name),
                                   parse_weight2(max_weight), format, out, err);
        if (convert->parsed())
            return cmd_convert(load_scheme(scheme_file, builtin_name), out, err);
        if (verify->parsed())
            return cmd_verify_mc(load_scheme(scheme_file, builtin_name), system_name, mc_mode,
                                 observable, paths, h_text, seed, ref_level, x0_value, format,
                                 out, err);
        if (selfcheck->parsed()) return cmd_selfcheck(parse_weight2(check_weight), out);
    } catch (const CliError& e) {
        err << "error: " << e.message << "\n";
        return e.code;
    } catch (const SchemeParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInconsistent;
    }
    return kInputError;
}

}  // namespace sdesplit
