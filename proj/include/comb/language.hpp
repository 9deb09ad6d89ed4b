#pragma once

// Languages of representative words, combing types and combing specs.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "comb/fsa.hpp"
#include "comb/group.hpp"
#include "comb/travel.hpp"

namespace comb {

enum class Synchronicity { Synchronous, Bounded, Asynchronous };

/// One of the six combing classes. The order Synchronous < Bounded <
/// Asynchronous and bicombing < combing runs from stronger to weaker.
struct CombingType {
  Synchronicity sync = Synchronicity::Asynchronous;
  bool two_sided = false;

  bool operator==(const CombingType&) const = default;

  /// True when every language of this type also has type `weaker`.
  bool implies(const CombingType& weaker) const {
    if (!two_sided && weaker.two_sided) return false;
    return static_cast<int>(sync) <= static_cast<int>(weaker.sync);
  }

  std::string to_string() const {
    std::string s = sync == Synchronicity::Synchronous ? "sync"
                    : sync == Synchronicity::Bounded   ? "bounded"
                                                       : "async";
    return s + (two_sided ? "-bicombing" : "-combing");
  }

  /// Accepts `sync`, `bounded`, `async`, optionally suffixed by `-combing` or
  /// `-bicombing` (or `-bi`).
  static CombingType parse(const std::string& text) {
    CombingType t;
    std::string head = text, tail;
    if (auto dash = text.find('-'); dash != std::string::npos) {
      head = text.substr(0, dash);
      tail = text.substr(dash + 1);
    }
    if (head == "sync" || head == "synchronous") t.sync = Synchronicity::Synchronous;
    else if (head == "bounded") t.sync = Synchronicity::Bounded;
    else if (head == "async" || head == "asynchronous") t.sync = Synchronicity::Asynchronous;
    else throw Error(ErrorCode::InvalidParams, "unknown combing type '" + text + "'");
    if (tail == "bicombing" || tail == "bi") t.two_sided = true;
    else if (!tail.empty() && tail != "combing")
      throw Error(ErrorCode::InvalidParams, "unknown combing type '" + text + "'");
    return t;
  }

  static std::vector<CombingType> all() {
    std::vector<CombingType> out;
    for (auto s : {Synchronicity::Synchronous, Synchronicity::Bounded, Synchronicity::Asynchronous})
      for (bool b : {true, false}) out.push_back({s, b});
    return out;
  }
};

/// A language for a group over its generating set. `member` and `enumerate`
/// are always present; the carrier is present for regular languages and the
/// lookup when representatives can be retrieved directly.
struct Language {
  using Member = std::function<bool(const Word&)>;
  using Enumerate = std::function<std::vector<Word>(std::size_t)>;
  using Lookup = std::function<std::optional<Word>(const Element&)>;

  GeneratorSet alphabet;
  Member member;
  Enumerate enumerate;  ///< all members of length <= n, shortlex sorted
  std::shared_ptr<const Fsa> carrier;
  Lookup lookup;
  std::string name;

  bool regular() const noexcept { return carrier != nullptr; }

  static Language from_fsa(GeneratorSet gens, Fsa a, std::string name = "fsa") {
    if (a.alphabet() != gens.names())
      throw Error(ErrorCode::AlphabetMismatch, "automaton alphabet differs from generators");
    auto fsa = std::make_shared<const Fsa>(trim(std::move(a)));
    Language l;
    l.alphabet = std::move(gens);
    l.carrier = fsa;
    l.member = [fsa](const Word& w) { return fsa->accepts(w); };
    l.enumerate = [fsa](std::size_t n) { return comb::enumerate(*fsa, n); };
    l.name = std::move(name);
    return l;
  }

  /// Member and enumerate derived from a bijective, geodesic representative
  /// function: w is a member iff it is the representative of its element.
  static Language from_geodesic_lookup(GeneratorSet gens, ModelPtr model,
                                       std::function<Word(const Element&)> rep,
                                       std::string name) {
    Language l;
    l.alphabet = std::move(gens);
    l.name = std::move(name);
    l.member = [model, rep](const Word& w) { return rep(evaluate(*model, w)) == w; };
    l.enumerate = [model, rep](std::size_t n) {
      Ball b = ball(*model, static_cast<int>(n));
      std::vector<Word> out;
      out.reserve(b.size());
      for (const auto& e : b.entries()) out.push_back(rep(e.element));
      std::sort(out.begin(), out.end(), shortlex_less);
      return out;
    };
    l.lookup = [rep](const Element& g) -> std::optional<Word> { return rep(g); };
    return l;
  }
};

/// The language of words u·v, u ∈ a, v ∈ b over a common alphabet.
inline Language concat_languages(const Language& a, const Language& b, std::string name) {
  if (!a.alphabet.same_names(b.alphabet))
    throw Error(ErrorCode::AlphabetMismatch, "concatenated languages need one alphabet");
  Language l;
  l.alphabet = a.alphabet;
  l.name = std::move(name);
  if (a.carrier && b.carrier) {
    auto fsa = std::make_shared<const Fsa>(concatenation(*a.carrier, *b.carrier));
    l.carrier = fsa;
    l.member = [fsa](const Word& w) { return fsa->accepts(w); };
    l.enumerate = [fsa](std::size_t n) { return comb::enumerate(*fsa, n); };
    return l;
  }
  auto ma = a.member, mb = b.member;
  auto ea = a.enumerate, eb = b.enumerate;
  l.member = [ma, mb](const Word& w) {
    for (std::size_t k = 0; k <= w.size(); ++k)
      if (ma(prefix(w, k)) && mb(Word(w.begin() + static_cast<std::ptrdiff_t>(k), w.end())))
        return true;
    return false;
  };
  l.enumerate = [ea, eb](std::size_t n) {
    std::vector<Word> left = ea(n), right = eb(n), out;
    for (const auto& u : left)
      for (const auto& v : right)
        if (u.size() + v.size() <= n) out.push_back(concat(u, v));
    std::sort(out.begin(), out.end(), shortlex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  return l;
}

/// Re-expresses a language over a new alphabet via an injective letter map.
inline Language relabel_language(const Language& l, GeneratorSet gens,
                                 const std::vector<Letter>& map, std::string name) {
  if (map.size() != l.alphabet.size())
    throw Error(ErrorCode::InvalidParams, "relabeling needs an image for every letter");
  std::vector<std::optional<Letter>> back(gens.size());
  for (Letter x = 0; x < map.size(); ++x) {
    if (map[x] >= gens.size()) throw Error(ErrorCode::InvalidParams, "relabeling out of range");
    if (back[map[x]]) throw Error(ErrorCode::InvalidParams, "relabeling must be injective");
    back[map[x]] = x;
  }
  auto forward = [map](const Word& w) {
    Word out;
    out.reserve(w.size());
    for (Letter x : w) out.push_back(map[x]);
    return out;
  };
  Language out;
  out.alphabet = std::move(gens);
  out.name = std::move(name);
  if (l.carrier)
    out.carrier = std::make_shared<const Fsa>(relabel(*l.carrier, out.alphabet.names(), map));
  auto member = l.member;
  out.member = [member, back](const Word& w) {
    Word orig;
    for (Letter y : w) {
      if (y >= back.size() || !back[y]) return false;
      orig.push_back(*back[y]);
    }
    return member(orig);
  };
  auto en = l.enumerate;
  out.enumerate = [en, forward](std::size_t n) {
    std::vector<Word> words;
    for (const auto& w : en(n)) words.push_back(forward(w));
    std::sort(words.begin(), words.end(), shortlex_less);
    return words;
  };
  return out;
}

struct CombingSpec {
  Language language;
  ModelPtr model;
  CombingType claimed;
  std::optional<FellowTravelParams> params;

  void validate() const {
    if (!model) throw Error(ErrorCode::InvalidParams, "combing spec needs a model");
    if (!language.alphabet.same_names(model->generators()))
      throw Error(ErrorCode::AlphabetMismatch, "language alphabet differs from model generators");
    if (params) params->validate();
  }
};

}  // namespace comb
