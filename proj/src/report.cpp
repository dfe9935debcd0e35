#include "sdesplit/report.hpp"

#include <cstdint>
#include <sstream>

namespace sdesplit {

using nlohmann::json;

std::string digest(const std::string& content) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : content) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

std::string render_order2(int order2) {
    if (order2 % 2 == 0) return std::to_string(order2 / 2);
    return std::to_string(order2) + "/2";
}

std::string integral_symbol(Interpretation interp) {
    return interp == Interpretation::Stratonovich ? "J" : "I";
}

json iipoly_json(const IIPoly& p, const Alphabet& alphabet) {
    json out = json::array();
    for (const auto& [m, c] : p.terms()) {
        json atoms = json::array();
        for (const auto& a : m.atoms)
            atoms.push_back(json::array({a.cell, alphabet.render(a.word), a.exp}));
        out.push_back({{"monomial", atoms}, {"hPower", m.hpow}, {"coefficient", to_string(c)}});
    }
    return out;
}

json hpoly_json(const HPoly& p) {
    json out = json::array();
    for (const auto& [n, c] : p.terms()) out.push_back({{"hPower", n}, {"coefficient", to_string(c)}});
    return out;
}

json strong_report_json(const StrongOrderReport& r, const Alphabet& alphabet) {
    json failing = json::array();
    const std::string sym = integral_symbol(r.interpretation);
    for (const auto& [w, res] : r.failing)
        failing.push_back({{"word", alphabet.render(w)},
                           {"residual", iipoly_json(res, alphabet)},
                           {"residualText", res.str(alphabet, sym)}});
    json grid = json::array();
    for (const auto& b : r.grid.breakpoints) grid.push_back(to_string(b));
    return {{"mode", "strong"},
            {"interpretation", to_string(r.interpretation)},
            {"decided", r.decided},
            {"order", render_order2(r.order2)},
            {"failing", failing},
            {"grid", grid},
            {"notes", r.notes}};
}

json weak_report_json(const WeakOrderReport& r, const Alphabet& alphabet) {
    json failing = json::array();
    for (const auto& [w, res] : r.failing)
        failing.push_back({{"word", alphabet.render(w)},
                           {"residual", hpoly_json(res)},
                           {"residualText", res.str()}});
    return {{"mode", "weak"},
            {"interpretation", to_string(r.interpretation)},
            {"decided", r.decided},
            {"order", std::to_string(r.order)},
            {"failing", failing},
            {"hypothesis", r.hypothesis},
            {"notes", r.notes}};
}

json slope_report_json(const mc::SlopeReport& r, const std::string& scheme,
                       const std::string& system) {
    return {{"scheme", scheme},
            {"system", system},
            {"hList", r.h_values},
            {"errors", r.errors},
            {"slope", r.slope},
            {"stderr", r.stderr_},
            {"paths", r.paths},
            {"seed", r.seed},
            {"verdict", r.verdict},
            {"notes", r.notes}};
}

std::string strong_report_text(const StrongOrderReport& r, const Alphabet& alphabet) {
    std::ostringstream os;
    const std::string sym = integral_symbol(r.interpretation);
    os << "strong order (" << to_string(r.interpretation) << "): ";
    if (r.decided)
        os << render_order2(r.order2) << "\n";
    else
        os << ">= " << render_order2(r.order2) << " (undecided at this truncation)\n";
    for (const auto& [w, res] : r.failing)
        os << "  residual " << sym << "_" << alphabet.render(w) << ": " << res.str(alphabet, sym)
           << "\n";
    for (const auto& n : r.notes) os << "  note: " << n << "\n";
    return os.str();
}

std::string weak_report_text(const WeakOrderReport& r, const Alphabet& alphabet) {
    std::ostringstream os;
    os << "weak order (" << to_string(r.interpretation) << "): ";
    if (r.decided)
        os << r.order << "\n";
    else
        os << ">= " << r.order << " (undecided at this truncation)\n";
    for (const auto& [w, res] : r.failing)
        os << "  residual E[" << integral_symbol(r.interpretation) << "_" << alphabet.render(w)
           << "]: " << res.str() << "\n";
    os << "  non-overlap hypothesis: " << (r.hypothesis ? "holds" : "violated") << "\n";
    for (const auto& n : r.notes) os << "  note: " << n << "\n";
    return os.str();
}

json envelope(const std::string& command, const std::string& input_digest, json payload) {
    return {{"version", kToolVersion},
            {"command", command},
            {"inputDigest", input_digest},
            {"timestamp", nullptr},
            {"payload", std::move(payload)}};
}

}  // namespace sdesplit
