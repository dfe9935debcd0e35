#pragma once

#include <map>
#include <string>

#include "sdesplit/rational.hpp"

namespace sdesplit {

// Univariate polynomial in the step size h with exact rational coefficients.
class HPoly {
  public:
    HPoly() = default;
    HPoly(Rational c) {  // NOLINT: implicit from scalars is intended
        if (c != 0) t_[0] = std::move(c);
    }
    HPoly(int c) : HPoly(Rational(c)) {}

    static HPoly monomial(Rational c, int power) {
        HPoly p;
        if (c != 0) p.t_[power] = std::move(c);
        return p;
    }

    const std::map<int, Rational>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    Rational coeff(int power) const {
        auto it = t_.find(power);
        return it == t_.end() ? Rational(0) : it->second;
    }

    HPoly& operator+=(const HPoly& o) {
        for (const auto& [p, c] : o.t_) accumulate(p, c);
        return *this;
    }
    HPoly& operator-=(const HPoly& o) {
        for (const auto& [p, c] : o.t_) accumulate(p, -c);
        return *this;
    }
    friend HPoly operator+(HPoly a, const HPoly& b) { return a += b; }
    friend HPoly operator-(HPoly a, const HPoly& b) { return a -= b; }
    friend HPoly operator*(const HPoly& a, const HPoly& b) {
        HPoly out;
        for (const auto& [pa, ca] : a.t_)
            for (const auto& [pb, cb] : b.t_) out.accumulate(pa + pb, ca * cb);
        return out;
    }
    friend bool operator==(const HPoly& a, const HPoly& b) { return a.t_ == b.t_; }

    std::string str() const {
        if (t_.empty()) return "0";
        std::string s;
        for (const auto& [p, c] : t_) {
            if (!s.empty()) s += " + ";
            if (p == 0) {
                s += to_string(c);
            } else {
                if (c != 1) s += "(" + to_string(c) + ")*";
                s += p == 1 ? "h" : "h^" + std::to_string(p);
            }
        }
        return s;
    }

    void accumulate(int power, const Rational& c) {
        if (c == 0) return;
        auto it = t_.find(power);
        if (it == t_.end()) {
            t_.emplace(power, c);
        } else {
            it->second += c;
            if (it->second == 0) t_.erase(it);
        }
    }

  private:
    std::map<int, Rational> t_;
};

}  // namespace sdesplit
