#pragma once

// Finite state acceptors and the regular-language operation suite:
// closure operations, decisions, homomorphisms and inverse homomorphisms.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "comb/error.hpp"
#include "comb/group.hpp"

namespace comb {

using State = std::uint32_t;
using Symbol = Letter;
inline constexpr Symbol kEpsilon = std::numeric_limits<Symbol>::max();

struct Edge {
  Symbol symbol;
  State to;
  bool operator<(const Edge& o) const {
    return symbol != o.symbol ? symbol < o.symbol : to < o.to;
  }
  bool operator==(const Edge&) const = default;
};

/// Nondeterministic acceptor over a finite alphabet of tokens. Symbol
/// `kEpsilon` marks an epsilon transition.
class Fsa {
 public:
  Fsa() = default;
  explicit Fsa(std::vector<std::string> alphabet) : alphabet_(std::move(alphabet)) {}

  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  std::size_t alphabet_size() const noexcept { return alphabet_.size(); }
  std::size_t num_states() const noexcept { return out_.size(); }

  State add_state(bool initial = false, bool accepting = false) {
    out_.emplace_back();
    initial_.push_back(initial);
    accepting_.push_back(accepting);
    return static_cast<State>(out_.size() - 1);
  }

  void add_transition(State from, Symbol sym, State to) {
    if (from >= num_states() || to >= num_states())
      throw Error(ErrorCode::InvalidParams, "transition references an undeclared state");
    if (sym != kEpsilon && sym >= alphabet_.size())
      throw Error(ErrorCode::InvalidParams, "transition references an undeclared symbol");
    out_[from].push_back({sym, to});
  }

  void set_initial(State q, bool v = true) { initial_.at(q) = v; }
  void set_accepting(State q, bool v = true) { accepting_.at(q) = v; }
  bool is_initial(State q) const { return initial_.at(q); }
  bool is_accepting(State q) const { return accepting_.at(q); }
  const std::vector<Edge>& edges(State q) const { return out_.at(q); }

  std::vector<State> initial_states() const {
    std::vector<State> v;
    for (State q = 0; q < num_states(); ++q)
      if (initial_[q]) v.push_back(q);
    return v;
  }

  std::size_t num_transitions() const {
    std::size_t n = 0;
    for (const auto& e : out_) n += e.size();
    return n;
  }

  bool has_epsilon() const {
    for (const auto& es : out_)
      for (const auto& e : es)
        if (e.symbol == kEpsilon) return true;
    return false;
  }

  bool is_deterministic() const {
    if (initial_states().size() > 1) return false;
    for (const auto& es : out_) {
      std::set<Symbol> seen;
      for (const auto& e : es)
        if (e.symbol == kEpsilon || !seen.insert(e.symbol).second) return false;
    }
    return true;
  }

  std::optional<Symbol> symbol_of(std::string_view token) const {
    for (Symbol s = 0; s < alphabet_.size(); ++s)
      if (alphabet_[s] == token) return s;
    return std::nullopt;
  }

  std::set<State> closure(std::set<State> states) const {
    std::vector<State> stack(states.begin(), states.end());
    while (!stack.empty()) {
      State q = stack.back();
      stack.pop_back();
      for (const auto& e : out_[q])
        if (e.symbol == kEpsilon && states.insert(e.to).second) stack.push_back(e.to);
    }
    return states;
  }

  std::set<State> step(const std::set<State>& states, Symbol sym) const {
    std::set<State> next;
    for (State q : states)
      for (const auto& e : out_[q])
        if (e.symbol == sym) next.insert(e.to);
    return closure(std::move(next));
  }

  /// Membership by subset simulation.
  bool accepts(const Word& w) const {
    auto init = initial_states();
    std::set<State> cur = closure({init.begin(), init.end()});
    for (Symbol s : w) {
      if (s >= alphabet_.size()) return false;
      cur = step(cur, s);
      if (cur.empty()) return false;
    }
    return std::any_of(cur.begin(), cur.end(), [&](State q) { return accepting_[q]; });
  }

  void sort_edges() {
    for (auto& es : out_) {
      std::sort(es.begin(), es.end());
      es.erase(std::unique(es.begin(), es.end()), es.end());
    }
  }

 private:
  std::vector<std::string> alphabet_;
  std::vector<std::vector<Edge>> out_;
  std::vector<char> initial_;
  std::vector<char> accepting_;
};

inline void require_same_alphabet(const Fsa& a, const Fsa& b) {
  if (a.alphabet() != b.alphabet())
    throw Error(ErrorCode::AlphabetMismatch, "automata have different alphabets");
}

/// Keeps only states that are reachable and co-reachable.
inline Fsa trim(const Fsa& a) {
  const std::size_t n = a.num_states();
  std::vector<char> fwd(n, 0), bwd(n, 0);
  std::vector<State> stack = a.initial_states();
  for (State q : stack) fwd[q] = 1;
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    for (const auto& e : a.edges(q))
      if (!fwd[e.to]) fwd[e.to] = 1, stack.push_back(e.to);
  }
  std::vector<std::vector<State>> rev(n);
  for (State q = 0; q < n; ++q)
    for (const auto& e : a.edges(q)) rev[e.to].push_back(q);
  for (State q = 0; q < n; ++q)
    if (a.is_accepting(q)) bwd[q] = 1, stack.push_back(q);
  while (!stack.empty()) {
    State q = stack.back();
    stack.pop_back();
    for (State p : rev[q])
      if (!bwd[p]) bwd[p] = 1, stack.push_back(p);
  }
  Fsa out(a.alphabet());
  std::vector<State> map(n, kEpsilon);
  for (State q = 0; q < n; ++q)
    if (fwd[q] && bwd[q]) map[q] = out.add_state(a.is_initial(q), a.is_accepting(q));
  for (State q = 0; q < n; ++q) {
    if (map[q] == kEpsilon) continue;
    for (const auto& e : a.edges(q))
      if (map[e.to] != kEpsilon) out.add_transition(map[q], e.symbol, map[e.to]);
  }
  out.sort_edges();
  return out;
}

inline Fsa remove_epsilon(const Fsa& a) {
  if (!a.has_epsilon()) return a;
  Fsa out(a.alphabet());
  const std::size_t n = a.num_states();
  std::vector<std::set<State>> cl(n);
  for (State q = 0; q < n; ++q) cl[q] = a.closure({q});
  for (State q = 0; q < n; ++q) {
    bool acc = std::any_of(cl[q].begin(), cl[q].end(), [&](State p) { return a.is_accepting(p); });
    out.add_state(a.is_initial(q), acc);
  }
  for (State q = 0; q < n; ++q)
    for (State p : cl[q])
      for (const auto& e : a.edges(p))
        if (e.symbol != kEpsilon) out.add_transition(q, e.symbol, e.to);
  return trim(out);
}

/// Subset construction. The result has one initial state; with
/// `complete` every state has a transition on every symbol.
inline Fsa determinize(const Fsa& a, bool complete = false) {
  const std::size_t k = a.alphabet_size();
  Fsa out(a.alphabet());
  auto init = a.initial_states();
  std::map<std::set<State>, State> index;
  std::deque<std::set<State>> queue;
  auto intern = [&](std::set<State> s) {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    bool acc = std::any_of(s.begin(), s.end(), [&](State q) { return a.is_accepting(q); });
    State id = out.add_state(index.empty(), acc);
    index.emplace(s, id);
    queue.push_back(std::move(s));
    return id;
  };
  intern(a.closure({init.begin(), init.end()}));
  while (!queue.empty()) {
    std::set<State> cur = std::move(queue.front());
    queue.pop_front();
    State from = index.at(cur);
    for (Symbol s = 0; s < k; ++s) {
      std::set<State> next = a.step(cur, s);
      if (next.empty() && !complete) continue;
      State to = intern(std::move(next));
      out.add_transition(from, s, to);
    }
  }
  return out;
}

/// Deterministic and complete; the only form `complement` flips.
inline Fsa complete_dfa(const Fsa& a) { return determinize(a, true); }

inline Fsa complement(const Fsa& a) {
  Fsa d = complete_dfa(a);
  for (State q = 0; q < d.num_states(); ++q) d.set_accepting(q, !d.is_accepting(q));
  return trim(d);
}

inline Fsa union_of(const Fsa& a, const Fsa& b) {
  require_same_alphabet(a, b);
  Fsa out(a.alphabet());
  for (State q = 0; q < a.num_states(); ++q) out.add_state(a.is_initial(q), a.is_accepting(q));
  const auto off = static_cast<State>(a.num_states());
  for (State q = 0; q < b.num_states(); ++q) out.add_state(b.is_initial(q), b.is_accepting(q));
  for (State q = 0; q < a.num_states(); ++q)
    for (const auto& e : a.edges(q)) out.add_transition(q, e.symbol, e.to);
  for (State q = 0; q < b.num_states(); ++q)
    for (const auto& e : b.edges(q)) out.add_transition(q + off, e.symbol, e.to + off);
  return trim(out);
}

inline Fsa intersection(const Fsa& a0, const Fsa& b0) {
  require_same_alphabet(a0, b0);
  Fsa a = remove_epsilon(a0), b = remove_epsilon(b0);
  Fsa out(a.alphabet());
  std::map<std::pair<State, State>, State> index;
  std::deque<std::pair<State, State>> queue;
  auto intern = [&](State p, State q, bool init) {
    auto it = index.find({p, q});
    if (it != index.end()) return it->second;
    State id = out.add_state(init, a.is_accepting(p) && b.is_accepting(q));
    index.emplace(std::pair{p, q}, id);
    queue.emplace_back(p, q);
    return id;
  };
  for (State p : a.initial_states())
    for (State q : b.initial_states()) intern(p, q, true);
  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    State from = index.at({p, q});
    for (const auto& ea : a.edges(p))
      for (const auto& eb : b.edges(q))
        if (ea.symbol == eb.symbol) out.add_transition(from, ea.symbol, intern(ea.to, eb.to, false));
  }
  return trim(out);
}

inline Fsa difference(const Fsa& a, const Fsa& b) { return intersection(a, complement(b)); }

inline Fsa concatenation(const Fsa& a, const Fsa& b) {
  require_same_alphabet(a, b);
  Fsa out(a.alphabet());
  for (State q = 0; q < a.num_states(); ++q) out.add_state(a.is_initial(q), false);
  const auto off = static_cast<State>(a.num_states());
  for (State q = 0; q < b.num_states(); ++q) out.add_state(false, b.is_accepting(q));
  for (State q = 0; q < a.num_states(); ++q) {
    for (const auto& e : a.edges(q)) out.add_transition(q, e.symbol, e.to);
    if (a.is_accepting(q))
      for (State p : b.initial_states()) out.add_transition(q, kEpsilon, p + off);
  }
  for (State q = 0; q < b.num_states(); ++q)
    for (const auto& e : b.edges(q)) out.add_transition(q + off, e.symbol, e.to + off);
  return trim(out);
}

/// L⁺ = ∪_{n>0} Lⁿ.
inline Fsa plus(const Fsa& a) {
  Fsa out(a.alphabet());
  for (State q = 0; q < a.num_states(); ++q) out.add_state(a.is_initial(q), a.is_accepting(q));
  auto init = a.initial_states();
  for (State q = 0; q < a.num_states(); ++q) {
    for (const auto& e : a.edges(q)) out.add_transition(q, e.symbol, e.to);
    if (a.is_accepting(q))
      for (State p : init) out.add_transition(q, kEpsilon, p);
  }
  return trim(out);
}

/// L* = {ε} ∪ L⁺.
inline Fsa star(const Fsa& a) {
  Fsa p = plus(a);
  Fsa out(a.alphabet());
  State s = out.add_state(true, true);
  for (State q = 0; q < p.num_states(); ++q) out.add_state(false, p.is_accepting(q));
  for (State q = 0; q < p.num_states(); ++q) {
    if (p.is_initial(q)) out.add_transition(s, kEpsilon, q + 1);
    for (const auto& e : p.edges(q)) out.add_transition(q + 1, e.symbol, e.to + 1);
  }
  return trim(out);
}

inline Fsa empty_language(std::vector<std::string> alphabet) { return Fsa(std::move(alphabet)); }

inline Fsa universal_language(std::vector<std::string> alphabet) {
  Fsa out(std::move(alphabet));
  State q = out.add_state(true, true);
  for (Symbol s = 0; s < out.alphabet_size(); ++s) out.add_transition(q, s, q);
  return out;
}

/// Finite language as a trie.
inline Fsa from_words(std::vector<std::string> alphabet, const std::vector<Word>& words) {
  Fsa out(std::move(alphabet));
  State root = out.add_state(true, false);
  std::map<std::pair<State, Symbol>, State> child;
  for (const auto& w : words) {
    State q = root;
    for (Symbol s : w) {
      auto it = child.find({q, s});
      if (it == child.end()) {
        State n = out.add_state();
        out.add_transition(q, s, n);
        it = child.emplace(std::pair{q, s}, n).first;
      }
      q = it->second;
    }
    out.set_accepting(q);
  }
  return trim(out);
}

/// Re-expresses `a` over a larger alphabet that contains all its tokens.
inline Fsa with_alphabet(const Fsa& a, const std::vector<std::string>& alphabet) {
  std::vector<Symbol> map(a.alphabet_size());
  for (Symbol s = 0; s < a.alphabet_size(); ++s) {
    auto it = std::find(alphabet.begin(), alphabet.end(), a.alphabet()[s]);
    if (it == alphabet.end())
      throw Error(ErrorCode::AlphabetMismatch, "token " + a.alphabet()[s] + " missing");
    map[s] = static_cast<Symbol>(it - alphabet.begin());
  }
  Fsa out(alphabet);
  for (State q = 0; q < a.num_states(); ++q) out.add_state(a.is_initial(q), a.is_accepting(q));
  for (State q = 0; q < a.num_states(); ++q)
    for (const auto& e : a.edges(q))
      out.add_transition(q, e.symbol == kEpsilon ? kEpsilon : map[e.symbol], e.to);
  return out;
}

/// Renames symbols by a letter map into a new alphabet (ε where the map says so).
inline Fsa relabel(const Fsa& a, const std::vector<std::string>& alphabet,
                   const std::vector<Symbol>& map) {
  Fsa out(alphabet);
  for (State q = 0; q < a.num_states(); ++q) out.add_state(a.is_initial(q), a.is_accepting(q));
  for (State q = 0; q < a.num_states(); ++q)
    for (const auto& e : a.edges(q))
      out.add_transition(q, e.symbol == kEpsilon ? kEpsilon : map.at(e.symbol), e.to);
  return trim(out);
}

enum class CombineOp { Union, Intersection, Concatenation, Star, Plus, Complement, IntersectRegular };

inline Fsa regular_combine(CombineOp op, const Fsa& a, const Fsa* b = nullptr) {
  auto need_b = [&]() -> const Fsa& {
    if (!b) throw Error(ErrorCode::InvalidParams, "binary operation needs a second automaton");
    return *b;
  };
  switch (op) {
    case CombineOp::Union: return union_of(a, need_b());
    case CombineOp::Intersection:
    case CombineOp::IntersectRegular: return intersection(a, need_b());
    case CombineOp::Concatenation: return concatenation(a, need_b());
    case CombineOp::Star: return star(a);
    case CombineOp::Plus: return plus(a);
    case CombineOp::Complement: return complement(a);
  }
  throw Error(ErrorCode::InvalidParams, "unknown operation");
}

inline bool is_empty(const Fsa& a) { return trim(a).num_states() == 0; }

/// Finiteness: an epsilon-free trim automaton accepts infinitely many words
/// iff it has a cycle.
inline bool is_finite(const Fsa& a) {
  Fsa t = trim(remove_epsilon(a));
  const std::size_t n = t.num_states();
  std::vector<int> color(n, 0);
  for (State s = 0; s < n; ++s) {
    if (color[s]) continue;
    std::vector<std::pair<State, std::size_t>> stack{{s, 0}};
    color[s] = 1;
    while (!stack.empty()) {
      auto& [q, i] = stack.back();
      if (i < t.edges(q).size()) {
        State p = t.edges(q)[i++].to;
        if (color[p] == 1) return false;
        if (color[p] == 0) {
          color[p] = 1;
          stack.emplace_back(p, 0);
        }
      } else {
        color[q] = 2;
        stack.pop_back();
      }
    }
  }
  return true;
}

inline bool equivalent(const Fsa& a, const Fsa& b) {
  require_same_alphabet(a, b);
  return is_empty(intersection(a, complement(b))) && is_empty(intersection(b, complement(a)));
}

enum class DecideOp { Member, Empty, Finite, Equivalent };

inline bool regular_decide(DecideOp op, const Fsa& a, const Word* w = nullptr,
                           const Fsa* b = nullptr) {
  switch (op) {
    case DecideOp::Member:
      if (!w) throw Error(ErrorCode::InvalidParams, "member needs a word");
      return a.accepts(*w);
    case DecideOp::Empty: return is_empty(a);
    case DecideOp::Finite: return is_finite(a);
    case DecideOp::Equivalent:
      if (!b) throw Error(ErrorCode::InvalidParams, "equivalent needs a second automaton");
      return equivalent(a, *b);
  }
  throw Error(ErrorCode::InvalidParams, "unknown decision");
}

/// All accepted words of length <= max_len, in shortlex order.
inline std::vector<Word> enumerate(const Fsa& a, std::size_t max_len) {
  Fsa d = trim(determinize(a));
  std::vector<Word> out;
  if (d.num_states() == 0) return out;
  // Shortest distance from each state to acceptance prunes the search.
  const std::size_t n = d.num_states();
  std::vector<std::size_t> to_accept(n, std::numeric_limits<std::size_t>::max());
  std::vector<std::vector<State>> rev(n);
  for (State q = 0; q < n; ++q)
    for (const auto& e : d.edges(q)) rev[e.to].push_back(q);
  std::deque<State> queue;
  for (State q = 0; q < n; ++q)
    if (d.is_accepting(q)) to_accept[q] = 0, queue.push_back(q);
  while (!queue.empty()) {
    State q = queue.front();
    queue.pop_front();
    for (State p : rev[q])
      if (to_accept[p] == std::numeric_limits<std::size_t>::max())
        to_accept[p] = to_accept[q] + 1, queue.push_back(p);
  }
  State start = d.initial_states().front();
  Word cur;
  auto dfs = [&](auto&& self, State q) -> void {
    if (d.is_accepting(q)) out.push_back(cur);
    if (cur.size() == max_len) return;
    for (const auto& e : d.edges(q)) {
      if (cur.size() + 1 + to_accept[e.to] > max_len) continue;
      cur.push_back(e.symbol);
      self(self, e.to);
      cur.pop_back();
    }
  };
  dfs(dfs, start);
  std::sort(out.begin(), out.end(), shortlex_less);
  return out;
}

/// The shortlex-least accepted word, if any.
inline std::optional<Word> shortlex_least(const Fsa& a) {
  Fsa d = trim(determinize(a));
  if (d.num_states() == 0) return std::nullopt;
  const std::size_t n = d.num_states();
  std::vector<std::size_t> dist(n, std::numeric_limits<std::size_t>::max());
  std::vector<std::vector<State>> rev(n);
  for (State q = 0; q < n; ++q)
    for (const auto& e : d.edges(q)) rev[e.to].push_back(q);
  std::deque<State> queue;
  for (State q = 0; q < n; ++q)
    if (d.is_accepting(q)) dist[q] = 0, queue.push_back(q);
  while (!queue.empty()) {
    State q = queue.front();
    queue.pop_front();
    for (State p : rev[q])
      if (dist[p] == std::numeric_limits<std::size_t>::max()) dist[p] = dist[q] + 1, queue.push_back(p);
  }
  State q = d.initial_states().front();
  Word w;
  while (dist[q] != 0) {
    // Deterministic edges are sorted by symbol after trim.
    for (const auto& e : d.edges(q)) {
      if (dist[e.to] + 1 == dist[q]) {
        w.push_back(e.symbol);
        q = e.to;
        break;
      }
    }
  }
  return w;
}

enum class HomMode { General, EpsilonFree, LimitedDeletion };

struct Homomorphism {
  std::vector<Word> image;  ///< one output word per input symbol
  HomMode mode = HomMode::General;
  std::size_t max_deletions = 0;  ///< k for LimitedDeletion
};

/// Longest run of consecutive erased symbols along accepted words, or nullopt
/// when unbounded. Exact on the trim epsilon-free automaton.
inline std::optional<std::size_t> max_consecutive_deletions(const Fsa& a,
                                                            const std::vector<Word>& image) {
  Fsa t = trim(remove_epsilon(a));
  const std::size_t n = t.num_states();
  std::vector<std::vector<State>> erase(n);
  for (State q = 0; q < n; ++q)
    for (const auto& e : t.edges(q))
      if (image.at(e.symbol).empty()) erase[q].push_back(e.to);
  std::vector<int> color(n, 0);
  std::vector<std::size_t> longest(n, 0);
  bool cyclic = false;
  auto dfs = [&](auto&& self, State q) -> void {
    color[q] = 1;
    for (State p : erase[q]) {
      if (color[p] == 1) cyclic = true;
      else if (color[p] == 0) self(self, p);
      if (cyclic) return;
      longest[q] = std::max(longest[q], longest[p] + 1);
    }
    color[q] = 2;
  };
  for (State q = 0; q < n && !cyclic; ++q)
    if (!color[q]) dfs(dfs, q);
  if (cyclic) return std::nullopt;
  std::size_t best = 0;
  for (auto v : longest) best = std::max(best, v);
  return best;
}

/// Image of L(A) under a letter-to-word homomorphism into `out_alphabet`.
inline Fsa apply_homomorphism(const Fsa& a0, const std::vector<std::string>& out_alphabet,
                              const Homomorphism& h) {
  if (h.image.size() != a0.alphabet_size())
    throw Error(ErrorCode::InvalidParams, "homomorphism must give one image per symbol");
  for (const auto& w : h.image)
    for (Symbol s : w)
      if (s >= out_alphabet.size()) throw Error(ErrorCode::InvalidParams, "image symbol out of range");
  if (h.mode == HomMode::EpsilonFree) {
    for (Symbol s = 0; s < h.image.size(); ++s)
      if (h.image[s].empty())
        throw Error(ErrorCode::ModeViolation, "epsilon-free homomorphism erases " + a0.alphabet()[s]);
  }
  if (h.mode == HomMode::LimitedDeletion) {
    auto run = max_consecutive_deletions(a0, h.image);
    if (!run || *run > h.max_deletions)
      throw Error(ErrorCode::ModeViolation,
                  "accepted word with more than " + std::to_string(h.max_deletions) +
                      " consecutive deletions");
  }
  Fsa a = remove_epsilon(a0);
  Fsa out(out_alphabet);
  for (State q = 0; q < a.num_states(); ++q) out.add_state(a.is_initial(q), a.is_accepting(q));
  for (State q = 0; q < a.num_states(); ++q) {
    for (const auto& e : a.edges(q)) {
      const Word& img = h.image[e.symbol];
      if (img.empty()) {
        out.add_transition(q, kEpsilon, e.to);
        continue;
      }
      State cur = q;
      for (std::size_t i = 0; i < img.size(); ++i) {
        State next = i + 1 == img.size() ? e.to : out.add_state();
        out.add_transition(cur, img[i], next);
        cur = next;
      }
    }
  }
  return trim(out);
}

/// {w over X : h(w) ∈ L(A)} where `image[x]` is a word over A's alphabet.
inline Fsa apply_inverse_homomorphism(const Fsa& a0, const std::vector<std::string>& in_alphabet,
                                      const std::vector<Word>& image) {
  if (image.size() != in_alphabet.size())
    throw Error(ErrorCode::InvalidParams, "inverse homomorphism needs an image for every letter");
  Fsa a = remove_epsilon(a0);
  Fsa out(in_alphabet);
  for (State q = 0; q < a.num_states(); ++q) out.add_state(a.is_initial(q), a.is_accepting(q));
  for (State q = 0; q < a.num_states(); ++q) {
    for (Symbol x = 0; x < image.size(); ++x) {
      std::set<State> cur{q};
      for (Symbol s : image[x]) {
        cur = a.step(cur, s);
        if (cur.empty()) break;
      }
      for (State p : cur) out.add_transition(q, x, p);
    }
  }
  return trim(out);
}

}  // namespace comb
