#pragma once

// Discrete fellow-traveller checks. Words are compared through their prefix
// elements v(i), w(j); an asynchronous comparison is a monotone lattice path
// from (0,0) to (l(v), l(w)) with unit steps.

#include <algorithm>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "comb/group.hpp"

namespace comb {

struct FellowTravelParams {
  int K = 0;
  std::optional<int> M;
  std::optional<int> epsilon;

  void validate() const {
    if (K < 0) throw Error(ErrorCode::InvalidParams, "K must be >= 0");
    if (M && *M < 1) throw Error(ErrorCode::InvalidParams, "M must be >= 1");
    if (epsilon && *epsilon < 0) throw Error(ErrorCode::InvalidParams, "epsilon must be >= 0");
  }
};

enum class TravelKind { Synchronous, Asynchronous, Bounded };

struct TravelWitness {
  TravelKind kind = TravelKind::Asynchronous;
  int K = 0;
  std::optional<int> M;
  std::vector<std::pair<std::size_t, std::size_t>> path;
};

/// Memoized d(e, g) keyed by canonical key. Not thread safe; use one per
/// worker.
class DistanceOracle {
 public:
  explicit DistanceOracle(const GroupModel& model) : model_(model) {}

  const GroupModel& model() const noexcept { return model_; }

  /// d(e, g) if at most `cutoff`, else nullopt.
  std::optional<int> norm(const Element& g, int cutoff) {
    Key k = model_.key(g);
    if (auto it = cache_.find(k); it != cache_.end()) {
      const auto [value, searched] = it->second;
      if (value >= 0) return value <= cutoff ? std::optional<int>(value) : std::nullopt;
      if (cutoff <= searched) return std::nullopt;
    }
    auto d = distance(model_, model_.identity(), g, cutoff);
    cache_[std::move(k)] = {d ? *d : -1, cutoff};
    return d;
  }

  std::size_t cache_size() const noexcept { return cache_.size(); }

 private:
  const GroupModel& model_;
  KeyMap<std::pair<int, int>> cache_;  // (distance or -1, cutoff searched)
};

/// Grid of prefix distances d(v(i), w(j)) = d(e, v(i)⁻¹w(j)).
class DistanceGrid {
 public:
  static constexpr int kFar = std::numeric_limits<int>::max();

  /// Entries beyond `cutoff` are stored as kFar.
  DistanceGrid(DistanceOracle& oracle, const Word& v, const Word& w, int cutoff)
      : rows_(v.size() + 1), cols_(w.size() + 1), cells_(rows_ * cols_, kFar) {
    const GroupModel& m = oracle.model();
    const GeneratorSet& gens = m.generators();
    for (std::size_t i = 0; i < rows_; ++i) {
      Element g = evaluate(m, inverse_word(gens, prefix(v, i)));
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j > 0) g = m.act(g, w[j - 1]);
        if (auto d = oracle.norm(g, cutoff)) cells_[i * cols_ + j] = *d;
      }
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  int at(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }

 private:
  std::size_t rows_, cols_;
  std::vector<int> cells_;
};

namespace detail {

inline int default_cutoff(const Word& v, const Word& w, std::optional<int> cutoff) {
  return cutoff ? *cutoff : static_cast<int>(v.size() + w.size());
}

inline void check_words(const GroupModel& model, const Word& v, const Word& w) {
  for (Letter x : v) check_letter(model, x);
  for (Letter x : w) check_letter(model, x);
}

inline void cutoff_exceeded(int cutoff) {
  throw Error(ErrorCode::DistanceCutoffExceeded,
              "prefix distance exceeds cutoff " + std::to_string(cutoff));
}

}  // namespace detail

/// max_t d(v(t), w(t)).
inline int sync_kmin(DistanceOracle& oracle, const Word& v, const Word& w,
                     std::optional<int> cutoff = std::nullopt) {
  const GroupModel& m = oracle.model();
  detail::check_words(m, v, w);
  const int c = detail::default_cutoff(v, w, cutoff);
  const GeneratorSet& gens = m.generators();
  const std::size_t len = std::max(v.size(), w.size());
  // v(t)⁻¹w(t) is updated as x⁻¹·d·x'.
  Word diff;  // a word for the current difference
  int best = 0;
  for (std::size_t t = 1; t <= len; ++t) {
    if (t <= v.size()) diff.insert(diff.begin(), gens.inverse(v[t - 1]));
    if (t <= w.size()) diff.push_back(w[t - 1]);
    auto d = oracle.norm(evaluate(m, diff), c);
    if (!d) detail::cutoff_exceeded(c);
    best = std::max(best, *d);
  }
  return best;
}

inline int sync_kmin(const GroupModel& model, const Word& v, const Word& w,
                     std::optional<int> cutoff = std::nullopt) {
  DistanceOracle oracle(model);
  return sync_kmin(oracle, v, w, cutoff);
}

/// Bottleneck path over a precomputed grid.
inline std::pair<int, TravelWitness> async_kmin(const DistanceGrid& grid) {
  const std::size_t r = grid.rows(), c = grid.cols();
  std::vector<int> best(r * c, DistanceGrid::kFar);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      int prev = (i == 0 && j == 0) ? 0 : DistanceGrid::kFar;
      if (i > 0) prev = std::min(prev, best[(i - 1) * c + j]);
      if (j > 0) prev = std::min(prev, best[i * c + j - 1]);
      best[i * c + j] = std::max(prev, grid.at(i, j));
    }
  }
  TravelWitness wit;
  wit.kind = TravelKind::Asynchronous;
  wit.K = best[r * c - 1];
  std::size_t i = r - 1, j = c - 1;
  wit.path.emplace_back(i, j);
  while (i > 0 || j > 0) {
    // Prefer the predecessor with the smaller bottleneck; ties go to (i-1, j).
    if (i > 0 && (j == 0 || best[(i - 1) * c + j] <= best[i * c + j - 1]))
      --i;
    else
      --j;
    wit.path.emplace_back(i, j);
  }
  std::reverse(wit.path.begin(), wit.path.end());
  return {wit.K, std::move(wit)};
}

/// Bottleneck of the path alternating v-steps and w-steps, or cutoff + 1.
inline int staircase_bound(DistanceOracle& oracle, const Word& v, const Word& w, int cutoff) {
  const GroupModel& m = oracle.model();
  const GeneratorSet& gens = m.generators();
  Word diff;  // v(i)⁻¹w(j)
  std::size_t i = 0, j = 0;
  int best = 0;
  while (i < v.size() || j < w.size()) {
    if (i < v.size() && (i <= j || j == w.size()))
      diff.insert(diff.begin(), gens.inverse(v[i++]));
    else
      diff.push_back(w[j++]);
    auto d = oracle.norm(evaluate(m, diff), cutoff);
    if (!d) return cutoff + 1;
    best = std::max(best, *d);
  }
  return best;
}

/// Minimal K admitting a monotone lattice path, with a witness path.
inline std::pair<int, TravelWitness> async_kmin(DistanceOracle& oracle, const Word& v,
                                                const Word& w,
                                                std::optional<int> cutoff = std::nullopt) {
  detail::check_words(oracle.model(), v, w);
  const int c = detail::default_cutoff(v, w, cutoff);
  // The alternating staircase bounds the answer, so farther cells never matter.
  const int bound = std::min(c, staircase_bound(oracle, v, w, c));
  DistanceGrid grid(oracle, v, w, bound);
  auto result = async_kmin(grid);
  if (result.first == DistanceGrid::kFar) detail::cutoff_exceeded(c);
  return result;
}

inline std::pair<int, TravelWitness> async_kmin(const GroupModel& model, const Word& v,
                                                const Word& w,
                                                std::optional<int> cutoff = std::nullopt) {
  DistanceOracle oracle(model);
  return async_kmin(oracle, v, w, cutoff);
}

/// A path with all cells <= K and at most M consecutive equal steps, if any.
inline std::optional<TravelWitness> bounded_async_path(const DistanceGrid& grid, int k, int m) {
  if (k < 0 || m < 1) throw Error(ErrorCode::InvalidParams, "bounded check needs K >= 0, M >= 1");
  const std::size_t r = grid.rows(), c = grid.cols();
  const auto mm = static_cast<std::size_t>(m);
  // reach[(i, j, dir, run)] where dir 0 = step in v, 1 = step in w, run in 1..M.
  auto idx = [&](std::size_t i, std::size_t j, std::size_t dir, std::size_t run) {
    return ((i * c + j) * 2 + dir) * mm + (run - 1);
  };
  std::vector<char> reach(r * c * 2 * mm, 0);
  if (grid.at(0, 0) > k) return std::nullopt;
  auto ok = [&](std::size_t i, std::size_t j) { return grid.at(i, j) <= k; };
  auto step_from = [&](std::size_t i, std::size_t j, std::size_t dir, std::size_t run) {
    // Predecessor state info is implicit; this marks the successor.
    for (std::size_t nd = 0; nd < 2; ++nd) {
      std::size_t ni = i + (nd == 0), nj = j + (nd == 1);
      if (ni >= r || nj >= c || !ok(ni, nj)) continue;
      std::size_t nrun = (run != 0 && nd == dir) ? run + 1 : 1;
      if (nrun > mm) continue;
      reach[idx(ni, nj, nd, nrun)] = 1;
    }
  };
  step_from(0, 0, 0, 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      for (std::size_t dir = 0; dir < 2; ++dir)
        for (std::size_t run = 1; run <= mm; ++run)
          if (reach[idx(i, j, dir, run)]) step_from(i, j, dir, run);
  TravelWitness wit;
  wit.kind = TravelKind::Bounded;
  wit.K = k;
  wit.M = m;
  if (r == 1 && c == 1) {
    wit.path.emplace_back(0, 0);
    return wit;
  }
  // Backtrack from any reached terminal state.
  std::size_t i = r - 1, j = c - 1, dir = 2, run = 0;
  for (std::size_t d = 0; d < 2 && dir == 2; ++d)
    for (std::size_t u = 1; u <= mm; ++u)
      if (reach[idx(i, j, d, u)]) {
        dir = d;
        run = u;
        break;
      }
  if (dir == 2) return std::nullopt;
  wit.path.emplace_back(i, j);
  while (i > 0 || j > 0) {
    std::size_t pi = i - (dir == 0), pj = j - (dir == 1);
    if (pi == 0 && pj == 0) {
      i = pi;
      j = pj;
      wit.path.emplace_back(i, j);
      break;
    }
    bool found = false;
    if (run > 1 && reach[idx(pi, pj, dir, run - 1)]) {
      --run;
      found = true;
    } else if (run == 1) {
      std::size_t od = 1 - dir;
      for (std::size_t u = 1; u <= mm && !found; ++u)
        if (reach[idx(pi, pj, od, u)]) {
          dir = od;
          run = u;
          found = true;
        }
    }
    if (!found) throw Error(ErrorCode::InvalidParams, "bounded path backtrack failed");
    i = pi;
    j = pj;
    wit.path.emplace_back(i, j);
  }
  std::reverse(wit.path.begin(), wit.path.end());
  return wit;
}

inline bool bounded_async_check(DistanceOracle& oracle, const Word& v, const Word& w, int k,
                                int m) {
  detail::check_words(oracle.model(), v, w);
  if (k < 0 || m < 1) throw Error(ErrorCode::InvalidParams, "bounded check needs K >= 0, M >= 1");
  DistanceGrid grid(oracle, v, w, k + 1);
  return bounded_async_path(grid, k, m).has_value();
}

inline bool bounded_async_check(const GroupModel& model, const Word& v, const Word& w, int k,
                                int m) {
  DistanceOracle oracle(model);
  return bounded_async_check(oracle, v, w, k, m);
}

/// Least M for which the bounded check passes at K, or nullopt when even the
/// unbounded check fails.
inline std::optional<int> bounded_mmin(const DistanceGrid& grid, int k) {
  const int top = static_cast<int>(grid.rows() + grid.cols());
  if (!bounded_async_path(grid, k, std::max(top, 1))) return std::nullopt;
  int lo = 1, hi = std::max(top, 1);
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (bounded_async_path(grid, k, mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace comb
