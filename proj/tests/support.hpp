#pragma once

// Independent oracles shared by the unit and acceptance tests. None of them
// goes through the machinery it is used to check.

#include <algorithm>
#include <array>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "comb/comb.hpp"

namespace oracle {

using comb::Letter;
using comb::Word;

/// Every word over `n` letters with length <= max_len.
inline std::vector<Word> all_words(std::size_t n, std::size_t max_len) {
  std::vector<Word> out{{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (Letter x = 0; x < n; ++x) {
        Word w = out[i];
        w.push_back(x);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

/// Plain breadth-first distance from e, no memo.
inline int bfs_norm(const comb::GroupModel& m, const comb::Element& g, int cap = 64) {
  comb::Key target = m.key(g);
  comb::KeySet seen{m.key(m.identity())};
  std::vector<comb::Element> layer{m.identity()};
  for (int d = 0; d <= cap; ++d) {
    for (const auto& h : layer)
      if (m.key(h) == target) return d;
    std::vector<comb::Element> next;
    for (const auto& h : layer)
      for (Letter x = 0; x < m.generators().size(); ++x) {
        auto y = m.act(h, x);
        if (seen.insert(m.key(y)).second) next.push_back(y);
      }
    layer = std::move(next);
  }
  return -1;
}

/// d(v(i), w(j)) with elements recomputed from scratch.
inline int prefix_distance(const comb::GroupModel& m, const Word& v, std::size_t i, const Word& w,
                           std::size_t j) {
  auto a = comb::evaluate(m, comb::prefix(v, i));
  auto b = comb::evaluate(m, comb::prefix(w, j));
  auto d = comb::distance(m, a, b, 64);
  return d ? *d : 1 << 20;
}

/// Minimax over all monotone unit-step lattice paths, by exhaustive
/// recursion.
inline int brute_async(const comb::GroupModel& m, const Word& v, const Word& w) {
  std::vector<std::vector<int>> d(v.size() + 1, std::vector<int>(w.size() + 1));
  for (std::size_t i = 0; i <= v.size(); ++i)
    for (std::size_t j = 0; j <= w.size(); ++j) d[i][j] = prefix_distance(m, v, i, w, j);
  int best = 1 << 20;
  std::function<void(std::size_t, std::size_t, int)> go = [&](std::size_t i, std::size_t j, int worst) {
    worst = std::max(worst, d[i][j]);
    if (worst >= best) return;
    if (i == v.size() && j == w.size()) {
      best = worst;
      return;
    }
    if (i < v.size()) go(i + 1, j, worst);
    if (j < w.size()) go(i, j + 1, worst);
  };
  go(0, 0, 0);
  return best;
}

/// Exhaustive bounded check: some monotone path within K and with runs of
/// equal steps no longer than M.
inline bool brute_bounded(const comb::GroupModel& m, const Word& v, const Word& w, int k, int mm) {
  bool found = false;
  std::function<void(std::size_t, std::size_t, int, int)> go = [&](std::size_t i, std::size_t j, int dir,
                                                                    int run) {
    if (found || run > mm || prefix_distance(m, v, i, w, j) > k) return;
    if (i == v.size() && j == w.size()) {
      found = true;
      return;
    }
    if (i < v.size()) go(i + 1, j, 0, dir == 0 ? run + 1 : 1);
    if (j < w.size()) go(i, j + 1, 1, dir == 1 ? run + 1 : 1);
  };
  go(0, 0, -1, 0);
  return found;
}

/// Set of words of length <= n accepted by simulation.
inline std::set<Word> slice(const comb::Fsa& a, std::size_t n) {
  std::set<Word> out;
  for (const auto& w : all_words(a.alphabet_size(), n))
    if (a.accepts(w)) out.insert(w);
  return out;
}

/// Random automaton with up to `states` states, a few epsilon moves.
inline comb::Fsa random_fsa(std::mt19937& rng, std::vector<std::string> alphabet, std::size_t states) {
  comb::Fsa a(alphabet);
  std::uniform_int_distribution<std::size_t> ns(1, states);
  std::size_t n = ns(rng);
  std::bernoulli_distribution coin(0.35), eps(0.08);
  for (std::size_t q = 0; q < n; ++q) a.add_state(q == 0, coin(rng));
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p = 0; p < n; ++p) {
      for (comb::Symbol s = 0; s < alphabet.size(); ++s)
        if (coin(rng)) a.add_transition(static_cast<comb::State>(q), s, static_cast<comb::State>(p));
      if (eps(rng)) a.add_transition(static_cast<comb::State>(q), comb::kEpsilon, static_cast<comb::State>(p));
    }
  return a;
}

/// 3×3 integer matrices for the Heisenberg and U_3 oracles.
using Mat = std::vector<std::vector<std::int64_t>>;

inline Mat identity(std::size_t n) {
  Mat m(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline Mat mul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size();
  Mat c(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

/// Elementary matrix I + s·e_ij.
inline Mat elementary(std::size_t n, std::size_t i, std::size_t j, std::int64_t s) {
  Mat m = identity(n);
  m[i][j] = s;
  return m;
}

inline Word random_word(std::mt19937& rng, std::size_t letters, std::size_t len) {
  std::uniform_int_distribution<Letter> pick(0, static_cast<Letter>(letters - 1));
  Word w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(pick(rng));
  return w;
}

}  // namespace oracle
