#pragma once

// Computable models of finitely generated groups: inverse-closed generating
// sets, words, canonical element keys, Cayley-ball enumeration and graph
// distance.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "comb/error.hpp"

namespace comb {

using Letter = std::uint32_t;
using Word = std::vector<Letter>;

/// Group elements are small integer tuples. Models normalize eagerly, so the
/// tuple is usually already canonical; `GroupModel::key` has the final say.
using Element = std::vector<std::int64_t>;
using Key = Element;

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ k.size();
    for (auto v : k) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::uint64_t h = 0x84222325cbf29ce4ULL ^ w.size();
    for (auto v : w) h = (h ^ v) * 0x100000001b3ULL;
    return static_cast<std::size_t>(h);
  }
};

template <class V>
using KeyMap = std::unordered_map<Key, V, KeyHash>;
using KeySet = std::unordered_set<Key, KeyHash>;

struct Generator {
  std::string name;
  Letter inverse = 0;
  bool is_identity = false;
};

/// An inverse-closed generating set. Letters are indices into the set; the
/// order of letters is the order used by every shortlex comparison.
class GeneratorSet {
 public:
  GeneratorSet() = default;

  explicit GeneratorSet(std::vector<Generator> gens) : gens_(std::move(gens)) { validate(); }

  std::size_t size() const noexcept { return gens_.size(); }
  const Generator& operator[](Letter x) const { return gens_.at(x); }
  const std::string& name(Letter x) const { return gens_.at(x).name; }
  Letter inverse(Letter x) const { return gens_.at(x).inverse; }
  bool is_identity(Letter x) const { return gens_.at(x).is_identity; }
  const std::vector<Generator>& all() const noexcept { return gens_; }

  std::optional<Letter> identity_letter() const {
    for (Letter i = 0; i < gens_.size(); ++i)
      if (gens_[i].is_identity) return i;
    return std::nullopt;
  }

  std::optional<Letter> find(std::string_view name) const {
    for (Letter i = 0; i < gens_.size(); ++i)
      if (gens_[i].name == name) return i;
    return std::nullopt;
  }

  Letter require(std::string_view name) const {
    if (auto x = find(name)) return *x;
    throw Error(ErrorCode::UnknownGenerator, std::string(name));
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(gens_.size());
    for (const auto& g : gens_) out.push_back(g.name);
    return out;
  }

  bool same_names(const GeneratorSet& other) const { return names() == other.names(); }

  /// Parses space-separated tokens. A token is a generator name, or
  /// `name^k` for a non-zero integer k (negative powers use the inverse).
  /// The literal `1` is the empty word.
  Word parse(std::string_view text) const {
    Word out;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
      if (tok == "1") continue;
      if (auto x = find(tok)) {
        out.push_back(*x);
        continue;
      }
      auto caret = tok.rfind('^');
      if (caret == std::string::npos || caret == 0)
        throw Error(ErrorCode::UnknownGenerator, tok);
      std::string base = tok.substr(0, caret);
      std::string_view exp_text = std::string_view(tok).substr(caret + 1);
      long long exp = 0;
      auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exp);
      if (ec != std::errc() || ptr != exp_text.data() + exp_text.size() || exp == 0)
        throw Error(ErrorCode::UnknownGenerator, tok);
      Letter x = require(base);
      Letter y = exp > 0 ? x : inverse(x);
      for (long long i = 0; i < (exp > 0 ? exp : -exp); ++i) out.push_back(y);
    }
    return out;
  }

  std::string format(const Word& w) const {
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += ' ';
      out += name(w[i]);
    }
    return out;
  }

  /// Builds `names[i]` paired with `names[i]^-1` for every i; `self_inverse`
  /// lists names that are their own inverse and get a single letter.
  static GeneratorSet with_inverses(const std::vector<std::string>& names,
                                    const std::vector<std::string>& self_inverse = {}) {
    std::vector<Generator> gens;
    for (const auto& n : names) {
      bool self = std::find(self_inverse.begin(), self_inverse.end(), n) != self_inverse.end();
      auto idx = static_cast<Letter>(gens.size());
      if (self) {
        gens.push_back({n, idx, false});
      } else {
        gens.push_back({n, idx + 1, false});
        gens.push_back({n + "^-1", idx, false});
      }
    }
    return GeneratorSet(std::move(gens));
  }

 private:
  void validate() const {
    int identities = 0;
    for (Letter i = 0; i < gens_.size(); ++i) {
      const auto& g = gens_[i];
      if (g.name.empty() || std::any_of(g.name.begin(), g.name.end(),
                                        [](unsigned char c) { return std::isspace(c); }))
        throw Error(ErrorCode::InvalidGenerators, "bad generator name '" + g.name + "'");
      if (g.name == "1" || g.name == "$")
        throw Error(ErrorCode::InvalidGenerators, "reserved generator name '" + g.name + "'");
      if (g.inverse >= gens_.size() || gens_[g.inverse].inverse != i)
        throw Error(ErrorCode::InvalidGenerators, "generating set not inverse closed at " + g.name);
      if (g.is_identity) {
        ++identities;
        if (g.inverse != i)
          throw Error(ErrorCode::InvalidGenerators, "identity letter must be self-inverse");
      }
      for (Letter j = 0; j < i; ++j)
        if (gens_[j].name == g.name)
          throw Error(ErrorCode::InvalidGenerators, "duplicate generator " + g.name);
    }
    if (identities > 1) throw Error(ErrorCode::InvalidGenerators, "more than one identity letter");
  }

  std::vector<Generator> gens_;
};

inline Word inverse_word(const GeneratorSet& gens, const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& x : out) x = gens.inverse(x);
  return out;
}

inline Word concat(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline Word prefix(const Word& w, std::size_t t) {
  return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(std::min(t, w.size())));
}

/// Shortlex order: shorter first, then lexicographic by letter index.
inline bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

/// A computable group with an inverse-closed generating set. Elements are
/// equal exactly when their keys are equal. Implementations are immutable and
/// `act`/`key` are pure.
class GroupModel {
 public:
  virtual ~GroupModel() = default;

  virtual const GeneratorSet& generators() const = 0;
  virtual Element identity() const = 0;
  /// Right multiplication g·x.
  virtual Element act(const Element& g, Letter x) const = 0;
  virtual Key key(const Element& g) const { return g; }
  virtual std::string describe() const = 0;
};

using ModelPtr = std::shared_ptr<const GroupModel>;

inline void check_letter(const GroupModel& model, Letter x) {
  if (x >= model.generators().size())
    throw Error(ErrorCode::UnknownGenerator, "letter index " + std::to_string(x));
}

/// start · w, folding `act` left to right.
inline Element apply_word(const GroupModel& model, Element start, const Word& w) {
  for (Letter x : w) {
    check_letter(model, x);
    start = model.act(start, x);
  }
  return start;
}

inline Element evaluate(const GroupModel& model, const Word& w) {
  return apply_word(model, model.identity(), w);
}

inline bool equal_in_group(const GroupModel& model, const Element& g, const Element& h) {
  return model.key(g) == model.key(h);
}

inline bool is_identity_element(const GroupModel& model, const Element& g) {
  return model.key(g) == model.key(model.identity());
}

/// Cayley-graph distance d(g, h), or nullopt when it exceeds `cutoff`.
/// Bidirectional breadth-first search; both frontiers expand through `act`
/// (the generating set is inverse closed, so edges are undirected).
inline std::optional<int> distance(const GroupModel& model, const Element& g, const Element& h,
                                   int cutoff) {
  if (cutoff < 0) throw Error(ErrorCode::InvalidParams, "distance cutoff must be >= 0");
  Key kg = model.key(g), kh = model.key(h);
  if (kg == kh) return 0;
  const auto n = static_cast<Letter>(model.generators().size());
  KeyMap<int> seen_a{{kg, 0}}, seen_b{{kh, 0}};
  std::vector<Element> front_a{g}, front_b{h};
  int depth_a = 0, depth_b = 0;
  while (depth_a + depth_b < cutoff && !front_a.empty() && !front_b.empty()) {
    bool grow_a = front_a.size() <= front_b.size();
    auto& front = grow_a ? front_a : front_b;
    auto& seen = grow_a ? seen_a : seen_b;
    auto& other = grow_a ? seen_b : seen_a;
    int& depth = grow_a ? depth_a : depth_b;
    ++depth;
    std::vector<Element> next;
    for (const auto& el : front) {
      for (Letter x = 0; x < n; ++x) {
        Element nb = model.act(el, x);
        Key k = model.key(nb);
        if (auto it = other.find(k); it != other.end()) return depth + it->second;
        if (seen.emplace(k, depth).second) next.push_back(std::move(nb));
      }
    }
    front = std::move(next);
  }
  return std::nullopt;
}

inline std::optional<int> geodesic_length(const GroupModel& model, const Word& w, int cutoff) {
  return distance(model, model.identity(), evaluate(model, w), cutoff);
}

inline constexpr std::size_t kDefaultBallLimit = 10'000'000;

/// The closed ball of radius r about e, in breadth-first order. Each entry
/// keeps a BFS parent so that a shortlex-least geodesic word can be rebuilt.
class Ball {
 public:
  struct Entry {
    Element element;
    Key key;
    int distance = 0;
    std::size_t parent = 0;
    Letter via = 0;
  };

  int radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const Entry& operator[](std::size_t i) const { return entries_.at(i); }

  std::optional<std::size_t> index_of(const Key& k) const {
    if (auto it = index_.find(k); it != index_.end()) return it->second;
    return std::nullopt;
  }
  bool contains(const Key& k) const { return index_.count(k) != 0; }

  Word geodesic(std::size_t i) const {
    Word w;
    while (i != 0) {
      w.push_back(entries_[i].via);
      i = entries_[i].parent;
    }
    std::reverse(w.begin(), w.end());
    return w;
  }

  std::size_t count_within(int r) const {
    return static_cast<std::size_t>(std::count_if(
        entries_.begin(), entries_.end(), [r](const Entry& e) { return e.distance <= r; }));
  }

 private:
  friend Ball ball(const GroupModel&, int, std::size_t);
  int radius_ = 0;
  std::vector<Entry> entries_;
  KeyMap<std::size_t> index_;
};

inline Ball ball(const GroupModel& model, int radius, std::size_t limit = kDefaultBallLimit) {
  if (radius < 0) throw Error(ErrorCode::InvalidParams, "ball radius must be >= 0");
  Ball b;
  b.radius_ = radius;
  Element e = model.identity();
  Key ke = model.key(e);
  b.entries_.push_back({e, ke, 0, 0, 0});
  b.index_.emplace(ke, 0);
  const auto n = static_cast<Letter>(model.generators().size());
  std::size_t layer_begin = 0;
  for (int d = 1; d <= radius; ++d) {
    std::size_t layer_end = b.entries_.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (Letter x = 0; x < n; ++x) {
        Element nb = model.act(b.entries_[i].element, x);
        Key k = model.key(nb);
        if (b.index_.count(k)) continue;
        if (b.entries_.size() >= limit)
          throw Error(ErrorCode::BallTooLarge,
                      "ball of radius " + std::to_string(radius) + " exceeds " +
                          std::to_string(limit) + " elements");
        b.index_.emplace(k, b.entries_.size());
        b.entries_.push_back({std::move(nb), std::move(k), d, i, x});
      }
    }
    layer_begin = layer_end;
    if (layer_begin == b.entries_.size()) break;
  }
  return b;
}

inline std::string format_key(const Key& k) {
  std::string out = "(";
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(k[i]);
  }
  return out + ")";
}

}  // namespace comb
