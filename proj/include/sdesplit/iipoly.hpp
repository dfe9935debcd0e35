#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sdesplit/rational.hpp"
#include "sdesplit/words.hpp"

namespace sdesplit {

// An atom is one Lyndon iterated integral over one elementary cell of the
// step; cells are numbered from 1. Scheme coefficients are commutative
// polynomials in these atoms and the step size h.
struct IIAtom {
    int cell = 0;
    Word word;
    int exp = 1;

    friend bool operator==(const IIAtom& a, const IIAtom& b) {
        return a.cell == b.cell && a.word == b.word && a.exp == b.exp;
    }
};

inline bool atom_var_less(const IIAtom& a, const IIAtom& b) {
    if (a.cell != b.cell) return a.cell < b.cell;
    return GradedLess{}(a.word, b.word);
}

struct IIMonomial {
    int hpow = 0;
    std::vector<IIAtom> atoms;  // sorted by (cell, word), exponents positive

    friend bool operator==(const IIMonomial& a, const IIMonomial& b) {
        return a.hpow == b.hpow && a.atoms == b.atoms;
    }
};

struct IIMonomialLess {
    bool operator()(const IIMonomial& a, const IIMonomial& b) const {
        if (a.hpow != b.hpow) return a.hpow < b.hpow;
        auto ia = a.atoms.begin(), ib = b.atoms.begin();
        for (; ia != a.atoms.end() && ib != b.atoms.end(); ++ia, ++ib) {
            if (atom_var_less(*ia, *ib)) return true;
            if (atom_var_less(*ib, *ia)) return false;
            if (ia->exp != ib->exp) return ia->exp < ib->exp;
        }
        return ia == a.atoms.end() && ib != b.atoms.end();
    }
};

class IIPoly {
  public:
    using Terms = std::map<IIMonomial, Rational, IIMonomialLess>;

    IIPoly() = default;
    IIPoly(Rational c) { accumulate({}, std::move(c)); }  // NOLINT: implicit scalar
    IIPoly(int c) : IIPoly(Rational(c)) {}

    static IIPoly h_power(Rational c, int power) {
        IIPoly p;
        p.accumulate({power, {}}, std::move(c));
        return p;
    }
    static IIPoly atom(int cell, const Word& w) {
        IIPoly p;
        p.accumulate({0, {{cell, w, 1}}}, 1);
        return p;
    }

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    Rational coeff(const IIMonomial& m) const {
        auto it = t_.find(m);
        return it == t_.end() ? Rational(0) : it->second;
    }

    void accumulate(IIMonomial m, const Rational& c) {
        if (c == 0) return;
        auto it = t_.find(m);
        if (it == t_.end()) {
            t_.emplace(std::move(m), c);
        } else {
            it->second += c;
            if (it->second == 0) t_.erase(it);
        }
    }

    IIPoly& operator+=(const IIPoly& o) {
        for (const auto& [m, c] : o.t_) accumulate(m, c);
        return *this;
    }
    IIPoly& operator-=(const IIPoly& o) {
        for (const auto& [m, c] : o.t_) accumulate(m, -c);
        return *this;
    }
    friend IIPoly operator+(IIPoly a, const IIPoly& b) { return a += b; }
    friend IIPoly operator-(IIPoly a, const IIPoly& b) { return a -= b; }
    friend IIPoly operator*(const IIPoly& a, const IIPoly& b) {
        IIPoly out;
        for (const auto& [ma, ca] : a.t_)
            for (const auto& [mb, cb] : b.t_) out.accumulate(merge(ma, mb), ca * cb);
        return out;
    }
    friend bool operator==(const IIPoly& a, const IIPoly& b) { return a.t_ == b.t_; }

    static IIMonomial merge(const IIMonomial& a, const IIMonomial& b) {
        IIMonomial out;
        out.hpow = a.hpow + b.hpow;
        out.atoms = a.atoms;
        for (const auto& atom : b.atoms) {
            bool found = false;
            for (auto& o : out.atoms)
                if (o.cell == atom.cell && o.word == atom.word) {
                    o.exp += atom.exp;
                    found = true;
                    break;
                }
            if (!found) out.atoms.push_back(atom);
        }
        std::sort(out.atoms.begin(), out.atoms.end(), atom_var_less);
        return out;
    }

    // Numerical evaluation: atom values from the sampler, h given.
    double eval(const std::function<double(int, const Word&)>& atom_value, double h) const {
        double out = 0;
        for (const auto& [m, c] : t_) {
            double term = static_cast<double>(c);
            for (int i = 0; i < m.hpow; ++i) term *= h;
            for (const auto& a : m.atoms) {
                double v = atom_value(a.cell, a.word);
                for (int i = 0; i < a.exp; ++i) term *= v;
            }
            out += term;
        }
        return out;
    }

    std::string str(const Alphabet& alphabet, const std::string& integral_symbol = "J") const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : t_) {
            Rational a = c < 0 ? -c : c;
            if (first)
                os << (c < 0 ? "-" : "");
            else
                os << (c < 0 ? " - " : " + ");
            first = false;
            bool bare = m.hpow == 0 && m.atoms.empty();
            if (a != 1 || bare) {
                if (denominator(a) == 1)
                    os << numerator(a);
                else
                    os << "(" << to_string(a) << ")";
                if (!bare) os << "*";
            }
            bool need_dot = false;
            if (m.hpow > 0) {
                os << (m.hpow == 1 ? "h" : "h^" + std::to_string(m.hpow));
                need_dot = true;
            }
            for (const auto& at : m.atoms) {
                if (need_dot) os << "*";
                need_dot = true;
                os << integral_symbol << "[" << at.cell << ";" << alphabet.render(at.word) << "]";
                if (at.exp > 1) os << "^" << at.exp;
            }
        }
        return os.str();
    }

  private:
    Terms t_;
};

}  // namespace sdesplit
