#pragma once

// The word-difference machine D_K: a two-string automaton whose states are
// the elements of the radius-K ball. Reading the padded pair (x, x') moves
// the difference d to x⁻¹·d·x'.

#include <optional>
#include <vector>

#include "comb/fsa.hpp"
#include "comb/group.hpp"

namespace comb {

class DifferenceMachine {
 public:
  static constexpr std::int32_t kReject = -1;

  DifferenceMachine(ModelPtr model, int k, std::size_t ball_limit = kDefaultBallLimit)
      : model_(std::move(model)), k_(k), ball_(comb::ball(*model_, k, ball_limit)) {
    if (k < 0) throw Error(ErrorCode::InvalidParams, "K must be >= 0");
    const GroupModel& m = *model_;
    const std::size_t n = m.generators().size();
    const std::size_t states = ball_.size();
    right_.assign(states * n, kReject);
    left_.assign(states * n, kReject);
    table_.assign(states * (n + 1) * (n + 1), kReject);
    auto lookup = [&](const Element& g) -> std::int32_t {
      auto i = ball_.index_of(m.key(g));
      return i ? static_cast<std::int32_t>(*i) : kReject;
    };
    for (std::size_t i = 0; i < states; ++i) {
      const Element& d = ball_[i].element;
      Word dw = ball_.geodesic(i);
      for (Letter x = 0; x < n; ++x) {
        right_[i * n + x] = lookup(m.act(d, x));
        Element xd = apply_word(m, m.act(m.identity(), m.generators().inverse(x)), dw);
        left_[i * n + x] = lookup(xd);
      }
      // Pair transitions; index n stands for the padding symbol $.
      for (std::size_t x = 0; x <= n; ++x) {
        Element xd = x == n ? d
                            : apply_word(m, m.act(m.identity(), m.generators().inverse(static_cast<Letter>(x))), dw);
        for (std::size_t xp = 0; xp <= n; ++xp) {
          if (x == n && xp == n) continue;
          Element t = xp == n ? xd : m.act(xd, static_cast<Letter>(xp));
          table_[(i * (n + 1) + x) * (n + 1) + xp] = lookup(t);
        }
      }
    }
  }

  int K() const noexcept { return k_; }
  const GroupModel& model() const noexcept { return *model_; }
  const ModelPtr& model_ptr() const noexcept { return model_; }
  const Ball& states() const noexcept { return ball_; }
  std::size_t num_states() const noexcept { return ball_.size(); }
  std::size_t pad() const noexcept { return model_->generators().size(); }

  /// Transition on the padded pair (x, x'); `pad()` denotes $. ($,$) rejects.
  std::int32_t transition(std::size_t state, std::size_t x, std::size_t xp) const {
    const std::size_t n1 = pad() + 1;
    return table_.at((state * n1 + x) * n1 + xp);
  }
  /// d·x', or kReject when outside the ball.
  std::int32_t right(std::size_t state, Letter x) const { return right_.at(state * pad() + x); }
  /// x⁻¹·d, or kReject when outside the ball.
  std::int32_t left_inverse(std::size_t state, Letter x) const {
    return left_.at(state * pad() + x);
  }

 private:
  ModelPtr model_;
  int k_;
  Ball ball_;
  std::vector<std::int32_t> right_, left_, table_;
};

inline DifferenceMachine build_difference_machine(ModelPtr model, int k) {
  return DifferenceMachine(std::move(model), k);
}

/// Feeds the $-padded pair (v, w) letterwise. Returns the state index of the
/// terminal difference v⁻¹w, or nullopt when some prefix difference leaves
/// the ball.
inline std::optional<std::size_t> run_difference_machine_index(const DifferenceMachine& d,
                                                               const Word& v, const Word& w) {
  const std::size_t len = std::max(v.size(), w.size());
  const std::size_t n = d.pad();
  for (Letter x : v) check_letter(d.model(), x);
  for (Letter x : w) check_letter(d.model(), x);
  std::int32_t s = 0;
  for (std::size_t t = 0; t < len; ++t) {
    std::size_t x = t < v.size() ? v[t] : n;
    std::size_t xp = t < w.size() ? w[t] : n;
    s = d.transition(static_cast<std::size_t>(s), x, xp);
    if (s == DifferenceMachine::kReject) return std::nullopt;
  }
  return static_cast<std::size_t>(s);
}

inline std::optional<Element> run_difference_machine(const DifferenceMachine& d, const Word& v,
                                                     const Word& w) {
  auto s = run_difference_machine_index(d, v, w);
  if (!s) return std::nullopt;
  return d.states()[*s].element;
}

/// Words v that asynchronously K-fellow travel with w and satisfy w⁻¹v =
/// target. States are (position in w, difference w(i)⁻¹v(j)); reading a
/// letter x' of v moves d to d·x', an epsilon move advances along w.
inline Fsa async_companions(const DifferenceMachine& d, const Word& w, const Element& target) {
  const GroupModel& m = d.model();
  auto t = d.states().index_of(m.key(target));
  if (!t) throw Error(ErrorCode::TargetOutsideBall, "target " + format_key(m.key(target)) +
                                                        " is outside the radius-" +
                                                        std::to_string(d.K()) + " ball");
  for (Letter x : w) check_letter(m, x);
  const std::size_t n = m.generators().size();
  const std::size_t s = d.num_states();
  Fsa a(m.generators().names());
  for (std::size_t i = 0; i <= w.size(); ++i)
    for (std::size_t q = 0; q < s; ++q) a.add_state(i == 0 && q == 0, i == w.size() && q == *t);
  auto id = [s](std::size_t i, std::size_t q) { return static_cast<State>(i * s + q); };
  for (std::size_t i = 0; i <= w.size(); ++i) {
    for (std::size_t q = 0; q < s; ++q) {
      for (Letter x = 0; x < n; ++x) {
        auto r = d.right(q, x);
        if (r != DifferenceMachine::kReject) a.add_transition(id(i, q), x, id(i, static_cast<std::size_t>(r)));
      }
      if (i < w.size()) {
        auto l = d.left_inverse(q, w[i]);
        if (l != DifferenceMachine::kReject)
          a.add_transition(id(i, q), kEpsilon, id(i + 1, static_cast<std::size_t>(l)));
      }
    }
  }
  return trim(a);
}

}  // namespace comb
