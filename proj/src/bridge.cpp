#include "sdesplit/bridge.hpp"

#include <sstream>

namespace sdesplit {

RatWordPoly theta(const Word& w, const Alphabet& alphabet) {
    RatWordPoly out = RatWordPoly::unit();
    const Rational half(1, 2);
    for (const auto& l : w.letters()) {
        RatWordPoly img;
        switch (l.kind) {
            case LetterKind::Starred: {
                Letter base = alphabet.base_of(l);
                img.add(Word(alphabet.barred_of(base)), 1);
                img.add(concat(Word(base), Word(base)), -half);
                break;
            }
            case LetterKind::Barred:
                throw std::invalid_argument("theta: input must use starred, not barred letters");
            default:
                img.add(Word(l), 1);
        }
        out = out * img;
    }
    return out;
}

RatWordPoly theta(const RatWordPoly& p, const Alphabet& alphabet) {
    RatWordPoly out;
    for (const auto& [w, c] : p.terms()) out += theta(w, alphabet) * c;
    return out;
}

RatWordPoly rho(const Word& w, const Alphabet& alphabet) {
    RatWordPoly out;
    const Rational mhalf(-1, 2);
    // branch at each position: keep the letter, or absorb a consecutive equal
    // stochastic pair into the starred letter with factor -1/2
    auto rec = [&](auto&& self, std::size_t i, Word acc, Rational c) -> void {
        if (i == w.size()) {
            out.add(std::move(acc), c);
            return;
        }
        const Letter& l = w[i];
        if (l.kind == LetterKind::Starred)
            throw std::invalid_argument("rho: input is an extended-alphabet word");
        if (l.kind == LetterKind::Barred) {
            self(self, i + 1, acc.appended(alphabet.starred_of(alphabet.base_of(l))), c);
            return;
        }
        if (l.stochastic() && i + 1 < w.size() && w[i + 1].id == l.id)
            self(self, i + 2, acc.appended(alphabet.starred_of(l)), c * mhalf);
        self(self, i + 1, acc.appended(l), c);
    };
    rec(rec, 0, Word{}, 1);
    return out;
}

RatWordPoly rho(const RatWordPoly& p, const Alphabet& alphabet) {
    RatWordPoly out;
    for (const auto& [w, c] : p.terms()) out += rho(w, alphabet) * c;
    return out;
}

std::vector<HoffmanViolation> verify_hoffman_iso(const Alphabet& alphabet, int max_weight2) {
    std::vector<HoffmanViolation> out;
    auto words = enumerate_words(alphabet, max_weight2, extended_letters());
    for (std::size_t i = 0; i < words.size(); ++i) {
        for (std::size_t j = i; j < words.size(); ++j) {
            const Word &u = words[i], &v = words[j];
            if (u.weight2() + v.weight2() > max_weight2) continue;
            RatWordPoly lhs = rho(quasishuffle(u, v, alphabet), alphabet);
            RatWordPoly rhs = shuffle(rho(u, alphabet), rho(v, alphabet));
            if (!(lhs == rhs)) out.push_back({u, v, lhs, rhs});
        }
    }
    return out;
}

ConversionRecipe convert_system(const SDESystem& s) {
    if (s.interpretation != Interpretation::Ito)
        throw std::invalid_argument("convert_system: system is already Stratonovich");
    ConversionRecipe r;
    r.system = {s.alphabet, Interpretation::Stratonovich};
    for (const auto& A : s.alphabet->stochastic_letters()) {
        const std::string& sym = s.alphabet->symbol(A);
        r.corrections.push_back({s.alphabet->starred_of(A), A,
                                 "f_" + sym + "* = -(1/2) f_" + sym + "' f_" + sym});
    }
    r.note =
        "Stratonovich system over the same letters plus one starred drift "
        "letter per noise; the original scheme's stages are unchanged, but any "
        "stage containing a drift letter must also apply the corrections.";
    return r;
}

std::string iterated_integral_identity(const Word& w, const Alphabet& alphabet) {
    std::ostringstream os;
    os << "I_" << alphabet.render(w) << " =";
    RatWordPoly p = rho(w, alphabet);
    bool first = true;
    for (const auto& [u, c] : p.terms()) {
        Rational a = c < 0 ? -c : c;
        if (first)
            os << (c < 0 ? " -" : " ");
        else
            os << (c < 0 ? " - " : " + ");
        first = false;
        if (a != 1) os << "(" << to_string(a) << ") ";
        os << "J_" << alphabet.render(u);
    }
    if (first) os << " 0";
    return os.str();
}

}  // namespace sdesplit
