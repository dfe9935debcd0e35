#pragma once

#include <string>
#include <vector>

#include "sdesplit/rational.hpp"
#include "sdesplit/words.hpp"

namespace sdesplit {

enum class Interpretation { Stratonovich, Ito };

inline std::string to_string(Interpretation i) {
    return i == Interpretation::Stratonovich ? "stratonovich" : "ito";
}

struct SDESystem {
    AlphabetPtr alphabet;
    Interpretation interpretation = Interpretation::Stratonovich;
};

// One stage of a splitting scheme: a letter subset evolved over the fraction
// [c,d] of the step. Stochastic stages must move forward in time; purely
// deterministic stages may run backward (c > d).
struct Stage {
    std::vector<Letter> letters;
    Rational c, d;

    bool has_stochastic() const {
        for (const auto& l : letters)
            if (l.stochastic()) return true;
        return false;
    }
    bool contains(const Letter& l) const {
        for (const auto& m : letters)
            if (m.id == l.id) return true;
        return false;
    }
};

// Stages are applied first-to-last as maps: stage 1 acts first on the state.
// (Operator compositions read right-to-left; the config order is temporal.)
struct SchemeSpec {
    SDESystem system;
    std::vector<Stage> stages;
    std::string name;  // optional, set for catalog schemes
};

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    bool ok() const { return errors.empty(); }
};

ValidationReport validate(const SchemeSpec& s);

// Catalog of built-in schemes.
std::vector<std::string> builtin_names();
SchemeSpec builtin(const std::string& name);

// JSON scheme files; strict schema, exact rationals only.
struct SchemeParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
SchemeSpec parse_scheme(const std::string& json_text);
std::string serialize_scheme(const SchemeSpec& s);

}  // namespace sdesplit
