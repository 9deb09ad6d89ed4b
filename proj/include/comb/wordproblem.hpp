#pragma once

// The word problem solved from a combing: find a representative of e from
// a seed word, push the letters of v one at a time through the
// multiplier step, then compare with the representative of e.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>

#include "comb/difference_machine.hpp"
#include "comb/fsa.hpp"
#include "comb/language.hpp"

namespace comb {

class WpContext {
 public:
  /// `k` is the fellow-traveller constant of the spec; the seed defaults to
  /// the shortest member of L. Procedural languages search up to
  /// `search_bound`.
  WpContext(CombingSpec spec, int k, std::optional<Word> seed = std::nullopt,
            std::size_t search_bound = 12)
      : spec_(std::move(spec)),
        d_(std::make_shared<const DifferenceMachine>(spec_.model, k)),
        search_bound_(search_bound),
        cache_(std::make_shared<Cache>()) {
    spec_.validate();
    if (seed) {
      if (!spec_.language.member(*seed)) throw Error(ErrorCode::InvalidParams, "seed is not in L");
      seed_ = *seed;
    } else {
      auto words = spec_.language.enumerate(search_bound_);
      if (words.empty()) throw Error(ErrorCode::NotFoundWithinBound, "L has no word within the bound");
      seed_ = words.front();
    }
  }

  const CombingSpec& spec() const noexcept { return spec_; }
  const DifferenceMachine& machine() const noexcept { return *d_; }
  const Word& seed() const noexcept { return seed_; }
  std::size_t search_bound() const noexcept { return search_bound_; }

  /// Treat L as bijective: triviality is then string equality with w_e.
  bool bijective = false;

  struct Cache {
    std::mutex mutex;
    std::map<std::pair<Word, Letter>, Word> steps;
    std::optional<Word> identity_rep;
  };
  Cache& cache() const { return *cache_; }

 private:
  CombingSpec spec_;
  std::shared_ptr<const DifferenceMachine> d_;
  Word seed_;
  std::size_t search_bound_;
  std::shared_ptr<Cache> cache_;
};

namespace detail {

inline Word multiplier_uncached(const WpContext& ctx, const Word& u, const Element& ux,
                                const Element& target) {
  const Language& l = ctx.spec().language;
  const GroupModel& m = *ctx.spec().model;
  if (l.carrier) {
    Fsa companions = async_companions(ctx.machine(), u, target);
    auto w = shortlex_least(intersection(*l.carrier, companions));
    if (!w)
      throw Error(ErrorCode::NotFoundWithinBound,
                  "no fellow-travelling representative of u·x; K may be too small");
    return *w;
  }
  if (l.lookup) {
    if (auto w = l.lookup(ux)) return *w;
  }
  for (const auto& w : l.enumerate(ctx.search_bound()))
    if (equal_in_group(m, evaluate(m, w), ux)) return w;
  throw Error(ErrorCode::NotFoundWithinBound,
              "no representative of u·x up to length " + std::to_string(ctx.search_bound()));
}

}  // namespace detail

/// Some u' ∈ L with u' = u·x, x a generator (identity letters give u·e).
/// Regular languages take the shortlex-least word of L ∩ companions(u).
inline Word step_multiplier(const WpContext& ctx, const Word& u, Letter x) {
  const GroupModel& m = *ctx.spec().model;
  check_letter(m, x);
  auto& cache = ctx.cache();
  {
    std::lock_guard lock(cache.mutex);
    auto it = cache.steps.find({u, x});
    if (it != cache.steps.end()) return it->second;
  }
  Element target = m.act(m.identity(), x);
  Element ux = m.act(evaluate(m, u), x);
  Word w = detail::multiplier_uncached(ctx, u, ux, target);
  std::lock_guard lock(cache.mutex);
  cache.steps.emplace(std::pair{u, x}, w);
  return w;
}

/// w_e: the seed with its letters peeled off right to left.
inline Word identity_representative(const WpContext& ctx) {
  auto& cache = ctx.cache();
  {
    std::lock_guard lock(cache.mutex);
    if (cache.identity_rep) return *cache.identity_rep;
  }
  const GeneratorSet& gens = ctx.spec().model->generators();
  Word w = ctx.seed();
  for (std::size_t i = ctx.seed().size(); i-- > 0;) w = step_multiplier(ctx, w, gens.inverse(ctx.seed()[i]));
  std::lock_guard lock(cache.mutex);
  cache.identity_rep = w;
  return w;
}

/// w_v ∈ L with w_v = v.
inline Word reduce_to_normal(const WpContext& ctx, const Word& v) {
  for (Letter x : v) check_letter(*ctx.spec().model, x);
  Word w = identity_representative(ctx);
  for (Letter y : v) w = step_multiplier(ctx, w, y);
  return w;
}

/// Whether a member w of L represents e: string equality with w_e for
/// bijective L, otherwise acceptance by the companions of w_e with target e.
inline bool represents_identity(const WpContext& ctx, const Word& w) {
  Word we = identity_representative(ctx);
  if (w == we) return true;
  if (ctx.bijective) return false;
  const GroupModel& m = *ctx.spec().model;
  return async_companions(ctx.machine(), we, m.identity()).accepts(w);
}

inline bool is_trivial(const WpContext& ctx, const Word& v) {
  return represents_identity(ctx, reduce_to_normal(ctx, v));
}

}  // namespace comb
