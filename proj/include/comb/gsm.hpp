#pragma once

// Generalised sequential machines: automata that read one input symbol per
// transition and emit a finite output word.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "comb/fsa.hpp"

namespace comb {

struct GsmEdge {
  State from;
  Symbol input;
  State to;
  Word output;
};

class Gsm {
 public:
  Gsm() = default;
  Gsm(std::vector<std::string> input_alphabet, std::vector<std::string> output_alphabet)
      : in_(std::move(input_alphabet)), out_(std::move(output_alphabet)) {}

  const std::vector<std::string>& input_alphabet() const noexcept { return in_; }
  const std::vector<std::string>& output_alphabet() const noexcept { return out_; }
  std::size_t num_states() const noexcept { return initial_.size(); }
  const std::vector<GsmEdge>& transitions() const noexcept { return edges_; }

  State add_state(bool initial = false, bool accepting = false) {
    initial_.push_back(initial);
    accepting_.push_back(accepting);
    by_state_.emplace_back();
    return static_cast<State>(initial_.size() - 1);
  }

  void add_transition(State from, Symbol input, State to, Word output) {
    if (from >= num_states() || to >= num_states())
      throw Error(ErrorCode::InvalidParams, "transition references an undeclared state");
    if (input >= in_.size())
      throw Error(ErrorCode::InvalidParams, "transition references an undeclared input symbol");
    for (Symbol s : output)
      if (s >= out_.size())
        throw Error(ErrorCode::InvalidParams, "transition references an undeclared output symbol");
    by_state_[from].push_back(edges_.size());
    edges_.push_back({from, input, to, std::move(output)});
  }

  void set_initial(State q, bool v = true) { initial_.at(q) = v; }
  void set_accepting(State q, bool v = true) { accepting_.at(q) = v; }
  bool is_initial(State q) const { return initial_.at(q); }
  bool is_accepting(State q) const { return accepting_.at(q); }
  const std::vector<std::size_t>& edges_from(State q) const { return by_state_.at(q); }

  bool is_epsilon_free() const {
    for (const auto& e : edges_)
      if (e.output.empty()) return false;
    return true;
  }

  /// Outputs of all accepting runs on w.
  std::set<Word> run(const Word& w) const {
    std::set<std::pair<State, Word>> cur;
    for (State q = 0; q < num_states(); ++q)
      if (initial_[q]) cur.insert({q, {}});
    for (Symbol s : w) {
      std::set<std::pair<State, Word>> next;
      for (const auto& [q, out] : cur)
        for (std::size_t id : by_state_[q]) {
          const auto& e = edges_[id];
          if (e.input == s) next.insert({e.to, concat(out, e.output)});
        }
      cur = std::move(next);
      if (cur.empty()) break;
    }
    std::set<Word> result;
    for (const auto& [q, out] : cur)
      if (accepting_[q]) result.insert(out);
    return result;
  }

 private:
  std::vector<std::string> in_, out_;
  std::vector<char> initial_, accepting_;
  std::vector<GsmEdge> edges_;
  std::vector<std::vector<std::size_t>> by_state_;
};

inline std::set<Word> gsm_run(const Gsm& m, const Word& w) { return m.run(w); }

/// Image of L(A) under M: product of M with A, each transition expanded
/// into a chain emitting the output word.
inline Fsa gsm_image(const Gsm& m, const Fsa& a0) {
  if (m.input_alphabet() != a0.alphabet())
    throw Error(ErrorCode::AlphabetMismatch, "GSM input alphabet differs from automaton alphabet");
  Fsa a = remove_epsilon(a0);
  Fsa out(m.output_alphabet());
  std::map<std::pair<State, State>, State> index;
  std::vector<std::pair<State, State>> queue;
  auto intern = [&](State p, State q, bool init) {
    auto it = index.find({p, q});
    if (it != index.end()) return it->second;
    State id = out.add_state(init, m.is_accepting(p) && a.is_accepting(q));
    index.emplace(std::pair{p, q}, id);
    queue.emplace_back(p, q);
    return id;
  };
  for (State p = 0; p < m.num_states(); ++p)
    if (m.is_initial(p))
      for (State q : a.initial_states()) intern(p, q, true);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto [p, q] = queue[head];
    State from = index.at({p, q});
    for (std::size_t id : m.edges_from(p)) {
      const auto& e = m.transitions()[id];
      for (const auto& ea : a.edges(q)) {
        if (ea.symbol != e.input) continue;
        State to = intern(e.to, ea.to, false);
        if (e.output.empty()) {
          out.add_transition(from, kEpsilon, to);
          continue;
        }
        State cur = from;
        for (std::size_t i = 0; i < e.output.size(); ++i) {
          State next = i + 1 == e.output.size() ? to : out.add_state();
          out.add_transition(cur, e.output[i], next);
          cur = next;
        }
      }
    }
  }
  return trim(out);
}

/// The GSM copying its input.
inline Gsm identity_gsm(const std::vector<std::string>& alphabet) {
  Gsm m(alphabet, alphabet);
  State q = m.add_state(true, true);
  for (Symbol s = 0; s < alphabet.size(); ++s) m.add_transition(q, s, q, {s});
  return m;
}

}  // namespace comb
