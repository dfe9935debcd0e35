#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sdesplit/bridge.hpp"
#include "sdesplit/chen.hpp"
#include "sdesplit/cli.hpp"
#include "sdesplit/expectation.hpp"
#include "sdesplit/report.hpp"
#include "sdesplit/selfcheck.hpp"

namespace py = pybind11;
using namespace sdesplit;

namespace {

SchemeSpec to_scheme(const std::string& text) {
    if (text.rfind("builtin:", 0) == 0) return builtin(text.substr(8));
    return parse_scheme(text);
}

AlphabetPtr make_alphabet(const std::vector<std::string>& det,
                          const std::vector<std::string>& sto) {
    return Alphabet::make(det, sto);
}

Word parse_word_checked(const Alphabet& al, const std::string& text) {
    auto w = al.parse_word(text);
    if (!w) throw std::invalid_argument("cannot parse word '" + text + "'");
    return *w;
}

std::map<std::string, std::string> poly_dict(const RatWordPoly& p, const Alphabet& al) {
    std::map<std::string, std::string> out;
    for (const auto& [w, c] : p.terms()) out[al.render(w)] = to_string(c);
    return out;
}

}  // namespace

PYBIND11_MODULE(_sdesplit, m) {
    m.doc() = "Symbolic order conditions and Monte Carlo verification for "
              "splitting integrators of split SDE systems";

    m.def("builtin_names", &builtin_names);
    m.def("builtin_scheme", [](const std::string& name) { return serialize_scheme(builtin(name)); });

    m.def("validate_scheme", [](const std::string& text) {
        auto r = validate(to_scheme(text));
        py::dict out;
        out["errors"] = r.errors;
        out["warnings"] = r.warnings;
        out["ok"] = r.ok();
        return out;
    });

    m.def(
        "analyze_strong",
        [](const std::string& text, int max_weight2) {
            auto s = to_scheme(text);
            auto r = strong_order(s, max_weight2);
            return strong_report_json(r, *s.system.alphabet).dump();
        },
        py::arg("scheme"), py::arg("max_weight2") = 6);

    m.def(
        "analyze_weak",
        [](const std::string& text, int max_sigma) {
            auto s = to_scheme(text);
            auto r = weak_order(s, max_sigma);
            return weak_report_json(r, *s.system.alphabet).dump();
        },
        py::arg("scheme"), py::arg("max_sigma") = 3);

    m.def(
        "local_error",
        [](const std::string& text, int max_weight2) {
            auto s = to_scheme(text);
            const Alphabet& al = *s.system.alphabet;
            const std::string sym = integral_symbol(s.system.interpretation);
            std::map<std::string, std::string> out;
            for (const auto& [w, res] : local_error_expansion(s, max_weight2))
                out[al.render(w)] = res.str(al, sym);
            return out;
        },
        py::arg("scheme"), py::arg("max_weight2") = 6);

    m.def(
        "conditions",
        [](const std::vector<std::string>& det, const std::vector<std::string>& sto,
           const std::string& interpretation, int target_weight2, bool lyndon) {
            auto al = make_alphabet(det, sto);
            Interpretation interp =
                interpretation == "ito" ? Interpretation::Ito : Interpretation::Stratonovich;
            std::vector<std::string> out;
            if (lyndon) {
                for (const auto& w : lyndon_reduced_conditions({al, interp}, target_weight2))
                    out.push_back(al->render(w));
            } else {
                const LetterFilter f =
                    interp == Interpretation::Ito ? extended_letters() : base_letters();
                for (const auto& w : enumerate_words(*al, target_weight2, f)) {
                    if (w.empty()) continue;
                    if (interp == Interpretation::Ito && w.back().kind == LetterKind::Barred)
                        continue;
                    out.push_back(al->render(w));
                }
            }
            return out;
        },
        py::arg("det"), py::arg("sto"), py::arg("interpretation") = "stratonovich",
        py::arg("target_weight2") = 4, py::arg("lyndon") = true);

    m.def("shuffle", [](const std::string& u, const std::string& v,
                        const std::vector<std::string>& det, const std::vector<std::string>& sto) {
        auto al = make_alphabet(det, sto);
        return poly_dict(sdesplit::shuffle(parse_word_checked(*al, u), parse_word_checked(*al, v)),
                         *al);
    });

    m.def("quasishuffle",
          [](const std::string& u, const std::string& v, const std::vector<std::string>& det,
             const std::vector<std::string>& sto) {
              auto al = make_alphabet(det, sto);
              return poly_dict(sdesplit::quasishuffle(parse_word_checked(*al, u),
                                                      parse_word_checked(*al, v), *al),
                               *al);
          });

    m.def("rho", [](const std::string& w, const std::vector<std::string>& det,
                    const std::vector<std::string>& sto) {
        auto al = make_alphabet(det, sto);
        return poly_dict(sdesplit::rho(parse_word_checked(*al, w), *al), *al);
    });

    m.def("theta", [](const std::string& w, const std::vector<std::string>& det,
                      const std::vector<std::string>& sto) {
        auto al = make_alphabet(det, sto);
        return poly_dict(sdesplit::theta(parse_word_checked(*al, w), *al), *al);
    });

    m.def("integral_identity", [](const std::string& w, const std::vector<std::string>& det,
                                  const std::vector<std::string>& sto) {
        auto al = make_alphabet(det, sto);
        return iterated_integral_identity(parse_word_checked(*al, w), *al);
    });

    m.def(
        "expected_stratonovich",
        [](const std::string& w, const std::vector<std::string>& det,
           const std::vector<std::string>& sto) {
            auto al = make_alphabet(det, sto);
            return expected_J(parse_word_checked(*al, w)).str();
        },
        "E of the Stratonovich iterated integral of w over one step");

    m.def(
        "expected_ito",
        [](const std::string& w, const std::vector<std::string>& det,
           const std::vector<std::string>& sto) {
            auto al = make_alphabet(det, sto);
            return expected_I(parse_word_checked(*al, w)).str();
        },
        "E of the Ito iterated integral of w over one step");

    m.def("lyndon_words", [](const std::vector<std::string>& det,
                             const std::vector<std::string>& sto, int max_weight2) {
        auto al = make_alphabet(det, sto);
        std::vector<std::string> out;
        for (const auto& w : enumerate_lyndon(*al, max_weight2)) out.push_back(al->render(w));
        return out;
    });

    m.def(
        "selfcheck",
        [](int max_weight2) {
            std::vector<std::tuple<std::string, bool, std::string>> out;
            for (const auto& i : run_selfcheck(max_weight2).items)
                out.emplace_back(i.name, i.pass, i.detail);
            return out;
        },
        py::arg("max_weight2") = 4);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        "Run a CLI invocation in-process; returns (exit_code, stdout, stderr)");
}
