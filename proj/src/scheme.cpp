#include "sdesplit/scheme.hpp"

#include <json.hpp>

#include <set>
#include <sstream>

namespace sdesplit {

using nlohmann::json;

ValidationReport validate(const SchemeSpec& s) {
    ValidationReport r;
    if (!s.system.alphabet || s.system.alphabet->letters(base_letters()).empty())
        r.errors.push_back("system alphabet is empty");
    if (s.stages.empty()) r.errors.push_back("scheme has no stages");
    for (std::size_t i = 0; i < s.stages.size(); ++i) {
        const Stage& st = s.stages[i];
        std::string tag = "stage " + std::to_string(i + 1);
        if (st.letters.empty()) r.errors.push_back(tag + ": empty letter set");
        if (st.c < 0 || st.c > 1) r.errors.push_back(tag + ": c outside [0,1]");
        if (st.d < 0 || st.d > 1) r.errors.push_back(tag + ": d outside [0,1]");
        if (st.c == st.d) r.errors.push_back(tag + ": degenerate interval c = d");
        if (st.has_stochastic() && st.c >= st.d)
            r.errors.push_back(tag + ": stochastic stage evolved backward (requires c < d)");
    }
    if (s.system.alphabet) {
        for (const auto& l : s.system.alphabet->letters(base_letters())) {
            bool used = false;
            for (const auto& st : s.stages) used = used || st.contains(l);
            if (!used)
                r.warnings.push_back("letter " + s.system.alphabet->symbol(l) +
                                     " appears in no stage; its vector field is ignored");
        }
    }
    return r;
}

namespace {

SchemeSpec make_scheme(std::string name, Interpretation interp,
                       const std::vector<std::string>& det, const std::vector<std::string>& sto,
                       const std::vector<std::tuple<std::vector<std::string>, Rational, Rational>>& stages) {
    SchemeSpec s;
    s.name = std::move(name);
    s.system.alphabet = Alphabet::make(det, sto);
    s.system.interpretation = interp;
    for (const auto& [syms, c, d] : stages) {
        Stage st;
        for (const auto& sym : syms) st.letters.push_back(*s.system.alphabet->find(sym));
        st.c = c;
        st.d = d;
        s.stages.push_back(std::move(st));
    }
    return s;
}

const Rational kHalf(1, 2);

}  // namespace

std::vector<std::string> builtin_names() {
    return {"lie-trotter",    "lie-trotter-ito",    "lie-trotter-aA", "lie-trotter-aA-ito",
            "strang-outer-a", "strang-outer-a-ito", "exact-aA",       "counterexample-7.2"};
}

SchemeSpec builtin(const std::string& name) {
    if (name == "lie-trotter" || name == "lie-trotter-ito")
        return make_scheme(name,
                           name == "lie-trotter" ? Interpretation::Stratonovich
                                                 : Interpretation::Ito,
                           {"a", "b"}, {"A"},
                           {{{"a", "A"}, 0, 1}, {{"b"}, 0, 1}});
    if (name == "lie-trotter-aA" || name == "lie-trotter-aA-ito")
        return make_scheme(name,
                           name == "lie-trotter-aA" ? Interpretation::Stratonovich
                                                    : Interpretation::Ito,
                           {"a"}, {"A"}, {{{"a"}, 0, 1}, {{"A"}, 0, 1}});
    if (name == "strang-outer-a" || name == "strang-outer-a-ito")
        return make_scheme(name,
                           name == "strang-outer-a" ? Interpretation::Stratonovich
                                                    : Interpretation::Ito,
                           {"a"}, {"A"},
                           {{{"a"}, 0, kHalf}, {{"A"}, 0, 1}, {{"a"}, kHalf, 1}});
    if (name == "exact-aA")
        return make_scheme(name, Interpretation::Stratonovich, {"a"}, {"A"},
                           {{{"a", "A"}, 0, 1}});
    if (name == "counterexample-7.2")
        return make_scheme(name, Interpretation::Ito, {"a"}, {"A"},
                           {{{"A"}, 0, kHalf}, {{"a"}, 0, 1}, {{"A"}, 0, kHalf}});
    std::ostringstream os;
    os << "unknown scheme '" << name << "'; catalog:";
    for (const auto& n : builtin_names()) os << " " << n;
    throw SchemeParseError(os.str());
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw SchemeParseError(where + ": " + what);
}

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!j.is_object()) fail(where, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail(where, "unknown key '" + it.key() + "'");
}

Rational parse_rational_field(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) fail(where, "float literals are not allowed; use \"p/q\" strings");
    if (j.is_string()) {
        auto r = parse_rational(j.get<std::string>());
        if (!r) fail(where, "malformed rational '" + j.get<std::string>() + "'");
        return *r;
    }
    fail(where, "expected an integer or a \"p/q\" string");
}

std::vector<std::string> parse_symbols(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of letter symbols");
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string()) fail(where, "letter symbols must be strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

}  // namespace

SchemeSpec parse_scheme(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemeParseError(std::string("invalid JSON: ") + e.what());
    }
    require_keys(j, "scheme", {"alphabet", "interpretation", "stages", "name"});
    if (!j.contains("alphabet")) fail("scheme", "missing 'alphabet'");
    if (!j.contains("interpretation")) fail("scheme", "missing 'interpretation'");
    if (!j.contains("stages")) fail("scheme", "missing 'stages'");

    require_keys(j["alphabet"], "alphabet", {"deterministic", "stochastic"});
    std::vector<std::string> det, sto;
    if (j["alphabet"].contains("deterministic"))
        det = parse_symbols(j["alphabet"]["deterministic"], "alphabet.deterministic");
    if (j["alphabet"].contains("stochastic"))
        sto = parse_symbols(j["alphabet"]["stochastic"], "alphabet.stochastic");

    SchemeSpec s;
    try {
        s.system.alphabet = Alphabet::make(det, sto);
    } catch (const std::invalid_argument& e) {
        fail("alphabet", e.what());
    }
    const auto& interp = j["interpretation"];
    if (!interp.is_string()) fail("interpretation", "expected a string");
    if (interp == "stratonovich")
        s.system.interpretation = Interpretation::Stratonovich;
    else if (interp == "ito")
        s.system.interpretation = Interpretation::Ito;
    else
        fail("interpretation", "must be 'stratonovich' or 'ito'");

    if (j.contains("name")) {
        if (!j["name"].is_string()) fail("name", "expected a string");
        s.name = j["name"].get<std::string>();
    }

    if (!j["stages"].is_array()) fail("stages", "expected an array");
    int idx = 0;
    for (const auto& js : j["stages"]) {
        ++idx;
        std::string where = "stages[" + std::to_string(idx) + "]";
        require_keys(js, where, {"letters", "c", "d"});
        if (!js.contains("letters") || !js.contains("c") || !js.contains("d"))
            fail(where, "requires 'letters', 'c', 'd'");
        Stage st;
        for (const auto& sym : parse_symbols(js["letters"], where + ".letters")) {
            auto l = s.system.alphabet->find(sym);
            if (!l) fail(where, "unknown letter " + sym);
            if (l->kind != LetterKind::Deterministic && l->kind != LetterKind::Stochastic)
                fail(where, "letter " + sym + " is not a declared system letter");
            st.letters.push_back(*l);
        }
        st.c = parse_rational_field(js["c"], where + ".c");
        st.d = parse_rational_field(js["d"], where + ".d");
        s.stages.push_back(std::move(st));
    }
    return s;
}

std::string serialize_scheme(const SchemeSpec& s) {
    json j;
    json det = json::array(), sto = json::array();
    for (const auto& l : s.system.alphabet->letters(base_letters())) {
        if (l.kind == LetterKind::Deterministic)
            det.push_back(s.system.alphabet->symbol(l));
        else
            sto.push_back(s.system.alphabet->symbol(l));
    }
    j["alphabet"] = {{"deterministic", det}, {"stochastic", sto}};
    j["interpretation"] = to_string(s.system.interpretation);
    if (!s.name.empty()) j["name"] = s.name;
    j["stages"] = json::array();
    for (const auto& st : s.stages) {
        json js;
        js["letters"] = json::array();
        for (const auto& l : st.letters) js["letters"].push_back(s.system.alphabet->symbol(l));
        js["c"] = to_string(st.c);
        js["d"] = to_string(st.d);
        j["stages"].push_back(js);
    }
    return j.dump(2);
}

}  // namespace sdesplit
