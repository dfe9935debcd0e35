#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdesplit/rational.hpp"

namespace sdesplit {

enum class LetterKind : std::uint8_t { Deterministic, Stochastic, Barred, Starred };

// A letter is identified by its position in the alphabet's total order.
// Barred (Ito correction) and starred (Ito->Stratonovich drift) letters carry
// the id of the stochastic letter they derive from; they grade as
// deterministic letters (weight 1).
struct Letter {
    std::uint16_t id = 0;
    LetterKind kind = LetterKind::Deterministic;
    std::uint16_t base = 0;  // base stochastic letter for Barred/Starred, else == id

    // Twice the weight, so grading stays in exact integers.
    int weight2() const { return kind == LetterKind::Stochastic ? 1 : 2; }
    bool stochastic() const { return kind == LetterKind::Stochastic; }

    friend bool operator==(const Letter& a, const Letter& b) { return a.id == b.id; }
    friend std::strong_ordering operator<=>(const Letter& a, const Letter& b) {
        return a.id <=> b.id;
    }
};

// A word over an alphabet; the empty word is the multiplicative unit of
// concatenation. Comparison is plain lexicographic in the alphabet order;
// use GradedLess where (weight, lex) ordering is required.
class Word {
  public:
    Word() = default;
    explicit Word(std::vector<Letter> letters) : ls_(std::move(letters)) {}
    explicit Word(Letter l) : ls_{l} {}

    std::size_t size() const { return ls_.size(); }
    bool empty() const { return ls_.empty(); }
    const Letter& operator[](std::size_t i) const { return ls_[i]; }
    const std::vector<Letter>& letters() const { return ls_; }
    const Letter& front() const { return ls_.front(); }
    const Letter& back() const { return ls_.back(); }

    int weight2() const {
        int w = 0;
        for (const auto& l : ls_) w += l.weight2();
        return w;
    }
    Rational weight() const { return Rational(weight2(), 2); }

    Word prefix(std::size_t n) const {
        return Word(std::vector<Letter>(ls_.begin(), ls_.begin() + n));
    }
    Word suffix(std::size_t from) const {
        return Word(std::vector<Letter>(ls_.begin() + from, ls_.end()));
    }
    Word appended(Letter l) const {
        auto v = ls_;
        v.push_back(l);
        return Word(std::move(v));
    }
    Word without_last() const { return prefix(ls_.size() - 1); }

    bool all_deterministic() const {
        return std::none_of(ls_.begin(), ls_.end(),
                            [](const Letter& l) { return l.stochastic(); });
    }
    bool contains_kind(LetterKind k) const {
        return std::any_of(ls_.begin(), ls_.end(),
                           [k](const Letter& l) { return l.kind == k; });
    }

    friend Word concat(const Word& u, const Word& v) {
        std::vector<Letter> ls = u.ls_;
        ls.insert(ls.end(), v.ls_.begin(), v.ls_.end());
        return Word(std::move(ls));
    }

    friend bool operator==(const Word& a, const Word& b) {
        if (a.ls_.size() != b.ls_.size()) return false;
        for (std::size_t i = 0; i < a.ls_.size(); ++i)
            if (a.ls_[i].id != b.ls_[i].id) return false;
        return true;
    }
    friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
        std::size_t n = std::min(a.ls_.size(), b.ls_.size());
        for (std::size_t i = 0; i < n; ++i)
            if (auto c = a.ls_[i].id <=> b.ls_[i].id; c != 0) return c;
        return a.ls_.size() <=> b.ls_.size();
    }

  private:
    std::vector<Letter> ls_;
};

// (weight, lex) order; the canonical iteration order of all series containers,
// so reports and serialized output are reproducible.
struct GradedLess {
    bool operator()(const Word& a, const Word& b) const {
        if (int wa = a.weight2(), wb = b.weight2(); wa != wb) return wa < wb;
        return a < b;
    }
};

// (length, lex) order; used where products preserve letter count (shuffle).
struct LengthLexLess {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

// Predicate selecting the sub-alphabet a word may use.
using LetterFilter = std::function<bool(const Letter&)>;

inline LetterFilter base_letters() {
    return [](const Letter& l) {
        return l.kind == LetterKind::Deterministic || l.kind == LetterKind::Stochastic;
    };
}
inline LetterFilter extended_letters() {
    return [](const Letter& l) { return l.kind != LetterKind::Starred; };
}
inline LetterFilter star_letters() {
    return [](const Letter& l) { return l.kind != LetterKind::Barred; };
}
inline LetterFilter all_letters() {
    return [](const Letter&) { return true; };
}

// The master alphabet: declared deterministic and stochastic letters, with a
// barred and a starred companion inserted right after each stochastic letter.
// The declared order is the total order used for all lexicographic
// comparisons; it is fixed for the lifetime of an analysis.
class Alphabet {
  public:
    struct Entry {
        std::string symbol;
        Letter letter;
    };

    static std::shared_ptr<const Alphabet> make(const std::vector<std::string>& det,
                                                const std::vector<std::string>& sto) {
        auto a = std::make_shared<Alphabet>();
        for (const auto& s : det) a->add(s, LetterKind::Deterministic, 0);
        for (const auto& s : sto) {
            std::uint16_t id = a->add(s, LetterKind::Stochastic, 0);
            a->add(s + "~", LetterKind::Barred, id);
            a->add(s + "*", LetterKind::Starred, id);
        }
        if (a->entries_.empty()) throw std::invalid_argument("alphabet must be nonempty");
        return a;
    }

    // Same symbols, every letter deterministic; used when a stochastic system
    // is reinterpreted as an ODE system for deterministic-order comparisons.
    std::shared_ptr<const Alphabet> deterministic_clone() const {
        auto a = std::make_shared<Alphabet>();
        for (const auto& e : entries_)
            if (e.letter.kind == LetterKind::Deterministic ||
                e.letter.kind == LetterKind::Stochastic)
                a->add(e.symbol, LetterKind::Deterministic, 0);
        return a;
    }

    std::size_t size() const { return entries_.size(); }
    const Entry& entry(std::size_t id) const { return entries_.at(id); }
    const std::string& symbol(const Letter& l) const { return entries_.at(l.id).symbol; }
    Letter letter(std::size_t id) const { return entries_.at(id).letter; }

    std::optional<Letter> find(const std::string& symbol) const {
        for (const auto& e : entries_)
            if (e.symbol == symbol) return e.letter;
        return std::nullopt;
    }

    Letter barred_of(const Letter& sto) const { return companion(sto, LetterKind::Barred); }
    Letter starred_of(const Letter& sto) const { return companion(sto, LetterKind::Starred); }
    Letter base_of(const Letter& l) const { return entries_.at(l.base).letter; }

    std::vector<Letter> letters(const LetterFilter& f = all_letters()) const {
        std::vector<Letter> out;
        for (const auto& e : entries_)
            if (f(e.letter)) out.push_back(e.letter);
        return out;
    }
    std::vector<Letter> stochastic_letters() const {
        return letters([](const Letter& l) { return l.stochastic(); });
    }

    std::string render(const Word& w) const {
        if (w.empty()) return "1";
        std::string s;
        for (const auto& l : w.letters()) s += symbol(l);
        return s;
    }

    // Parses a word written as a sequence of letter symbols. Base symbols may
    // be several characters; barred/starred are the base symbol followed by
    // '~' or '*'. Longest-match, scanning left to right.
    std::optional<Word> parse_word(const std::string& text) const {
        if (text == "1") return Word{};
        std::vector<Letter> ls;
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::optional<Letter> best;
            std::size_t best_len = 0;
            for (const auto& e : entries_) {
                const auto& sym = e.symbol;
                if (sym.size() > best_len && text.compare(pos, sym.size(), sym) == 0) {
                    best = e.letter;
                    best_len = sym.size();
                }
            }
            if (!best) return std::nullopt;
            ls.push_back(*best);
            pos += best_len;
        }
        return Word(std::move(ls));
    }

    std::uint16_t add(const std::string& symbol, LetterKind kind, std::uint16_t base) {
        if (find(symbol)) throw std::invalid_argument("duplicate letter symbol: " + symbol);
        std::uint16_t id = static_cast<std::uint16_t>(entries_.size());
        Letter l{id, kind, kind == LetterKind::Barred || kind == LetterKind::Starred ? base : id};
        entries_.push_back({symbol, l});
        return id;
    }

  private:
    Letter companion(const Letter& sto, LetterKind k) const {
        for (const auto& e : entries_)
            if (e.letter.kind == k && e.letter.base == sto.id) return e.letter;
        throw std::invalid_argument("letter has no companion of requested kind");
    }

    std::vector<Entry> entries_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

// All words of weight <= max_weight2/2 over the filtered letters, each
// exactly once, sorted by (weight, lex).
inline std::vector<Word> enumerate_words(const Alphabet& alphabet, int max_weight2,
                                         const LetterFilter& filter = base_letters()) {
    auto ls = alphabet.letters(filter);
    if (ls.empty()) throw std::invalid_argument("enumerate_words: empty alphabet");
    if (max_weight2 < 0) throw std::invalid_argument("enumerate_words: negative weight cap");
    std::vector<Word> out;
    std::vector<Letter> cur;
    auto rec = [&](auto&& self, int remaining2) -> void {
        out.emplace_back(cur);
        for (const auto& l : ls) {
            if (l.weight2() > remaining2) continue;
            cur.push_back(l);
            self(self, remaining2 - l.weight2());
            cur.pop_back();
        }
    };
    rec(rec, max_weight2);
    std::sort(out.begin(), out.end(), GradedLess{});
    return out;
}

// True iff w is strictly smaller than every proper rotation of itself.
inline bool is_lyndon(const Word& w) {
    if (w.empty()) throw std::invalid_argument("is_lyndon: empty word");
    const std::size_t n = w.size();
    for (std::size_t r = 1; r < n; ++r) {
        // compare w with its rotation by r
        std::strong_ordering c = std::strong_ordering::equal;
        for (std::size_t i = 0; i < n; ++i) {
            c = w[i].id <=> w[(i + r) % n].id;
            if (c != 0) break;
        }
        if (c >= 0) return false;
    }
    return true;
}

inline std::vector<Word> enumerate_lyndon(const Alphabet& alphabet, int max_weight2,
                                          const LetterFilter& filter = base_letters()) {
    std::vector<Word> out;
    for (const auto& w : enumerate_words(alphabet, max_weight2, filter))
        if (!w.empty() && is_lyndon(w)) out.push_back(w);
    return out;
}

// Duval's algorithm: the unique factorization of w into a lexicographically
// nonincreasing sequence of Lyndon words.
inline std::vector<Word> lyndon_factorization(const Word& w) {
    if (w.empty()) throw std::invalid_argument("lyndon_factorization: empty word");
    std::vector<Word> out;
    const std::size_t n = w.size();
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1, k = i;
        while (j < n && w[k].id <= w[j].id) {
            if (w[k].id < w[j].id)
                k = i;
            else
                ++k;
            ++j;
        }
        while (i <= k) {
            out.push_back(Word(std::vector<Letter>(w.letters().begin() + i,
                                                   w.letters().begin() + i + (j - k))));
            i += j - k;
        }
    }
    return out;
}

// All length(w)+1 splittings w = uv, in left-to-right order of the cut.
inline std::vector<std::pair<Word, Word>> deconcatenations(const Word& w) {
    std::vector<std::pair<Word, Word>> out;
    out.reserve(w.size() + 1);
    for (std::size_t i = 0; i <= w.size(); ++i) out.emplace_back(w.prefix(i), w.suffix(i));
    return out;
}

}  // namespace sdesplit
