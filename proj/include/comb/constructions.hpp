#pragma once

// Combing constructions: shortlex bijectivization, finite variations
// (quotients, lifts, overgroups, identity letters, change of generators,
// subgroups), free and direct products, central and split extensions.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "comb/difference_machine.hpp"
#include "comb/fsa.hpp"
#include "comb/gsm.hpp"
#include "comb/language.hpp"
#include "comb/models.hpp"
#include "comb/travel.hpp"
#include "comb/verify.hpp"

namespace comb {

namespace detail {

inline std::vector<Letter> map_by_name(const GeneratorSet& from, const GeneratorSet& to) {
  std::vector<Letter> map;
  for (Letter x = 0; x < from.size(); ++x) map.push_back(to.require(from.name(x)));
  return map;
}

/// Language built from an enumerator alone: members are what the
/// enumerator lists at their own length.
inline Language enumerated_language(GeneratorSet gens, Language::Enumerate en, std::string name) {
  Language l;
  l.alphabet = std::move(gens);
  l.name = std::move(name);
  l.enumerate = en;
  l.member = [en](const Word& w) {
    auto words = en(w.size());
    return std::binary_search(words.begin(), words.end(), w, shortlex_less);
  };
  return l;
}

inline void sort_unique(std::vector<Word>& words) {
  std::sort(words.begin(), words.end(), shortlex_less);
  words.erase(std::unique(words.begin(), words.end()), words.end());
}

}  // namespace detail

/// Relabels a language into another generating set by generator name.
inline Language relabel_by_name(const Language& l, const GeneratorSet& gens, std::string name) {
  return relabel_language(l, gens, detail::map_by_name(l.alphabet, gens), std::move(name));
}

// ---------------------------------------------------------------------------
// Shortlex bijectivization

/// Keeps v ∈ L unless some strictly shortlex-smaller w ∈ L equals v in G
/// and synchronously K-fellow travels with it.
inline Language bijectivize_shortlex(const Language& l, ModelPtr model, int k) {
  if (!l.carrier) throw Error(ErrorCode::NotRegular, "bijectivization needs a regular carrier");
  DifferenceMachine d(model, k);
  Fsa ld = trim(determinize(*l.carrier));
  const std::size_t n = l.alphabet.size();
  const std::size_t pad = d.pad();
  if (ld.num_states() == 0) return l;
  auto delta = [&](State p, Symbol s) -> std::optional<State> {
    for (const auto& e : ld.edges(p))
      if (e.symbol == s) return e.to;
    return std::nullopt;
  };
  // (w-state, v-state, difference, comparison, w ended); comparison 0 equal,
  // 1 w < v, 2 w > v at the first differing position.
  using Tuple = std::tuple<State, State, std::int32_t, int, bool>;
  constexpr State kEnded = kEpsilon;
  Fsa p(ld.alphabet());
  std::map<Tuple, State> index;
  std::vector<Tuple> queue;
  auto intern = [&](const Tuple& t) {
    auto it = index.find(t);
    if (it != index.end()) return it->second;
    auto [wp, vq, diff, cmp, ended] = t;
    bool acc = ld.is_accepting(vq) && diff == 0 &&
               (ended || (ld.is_accepting(wp) && cmp == 1));
    State s = p.add_state(index.empty(), acc);
    index.emplace(t, s);
    queue.push_back(t);
    return s;
  };
  State q0 = ld.initial_states().front();
  intern({q0, q0, 0, 0, false});
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto [wp, vq, diff, cmp, ended] = queue[head];
    State from = index.at(queue[head]);
    for (Symbol xv = 0; xv < n; ++xv) {
      auto vq2 = delta(vq, xv);
      if (!vq2) continue;
      if (!ended) {
        for (Symbol xw = 0; xw < n; ++xw) {
          auto wp2 = delta(wp, xw);
          if (!wp2) continue;
          auto d2 = d.transition(static_cast<std::size_t>(diff), xw, xv);
          if (d2 == DifferenceMachine::kReject) continue;
          int c2 = cmp != 0 ? cmp : (xw < xv ? 1 : xw > xv ? 2 : 0);
          p.add_transition(from, xv, intern({*wp2, *vq2, d2, c2, false}));
        }
      }
      if (ended || ld.is_accepting(wp)) {
        auto d2 = d.transition(static_cast<std::size_t>(diff), pad, xv);
        if (d2 == DifferenceMachine::kReject) continue;
        p.add_transition(from, xv, intern({kEnded, *vq2, d2, 0, true}));
      }
    }
  }
  Fsa l0 = intersection(*l.carrier, complement(trim(p)));
  return Language::from_fsa(l.alphabet, std::move(l0), "bijective(" + l.name + ")");
}

// ---------------------------------------------------------------------------
// Finite variations

namespace detail {

inline KeySet subgroup_keys(const GroupModel& g, const std::vector<Word>& words) {
  KeySet keys{g.key(g.identity())};
  for (const auto& w : words) keys.insert(g.key(evaluate(g, w)));
  return keys;
}

}  // namespace detail

/// Checks that the words list a finite normal subgroup of G.
inline void check_finite_normal(const GroupModel& g, const std::vector<Word>& n_words) {
  KeySet keys = detail::subgroup_keys(g, n_words);
  std::vector<Word> all = n_words;
  all.push_back({});
  for (const auto& a : all)
    for (const auto& b : all)
      if (!keys.count(g.key(evaluate(g, concat(a, b)))))
        throw Error(ErrorCode::NotNormal, "N is not closed under multiplication");
  const GeneratorSet& gens = g.generators();
  for (Letter x = 0; x < gens.size(); ++x)
    for (const auto& w : all) {
      Word conj = concat(concat(Word{gens.inverse(x)}, w), Word{x});
      if (!keys.count(g.key(evaluate(g, conj))))
        throw Error(ErrorCode::NotNormal,
                    "conjugate of " + gens.format(w) + " by " + gens.name(x) + " leaves N");
    }
}

struct QuotientResult {
  Language language;
  std::shared_ptr<const QuotientModel> model;
};

/// The same strings over the primed generators of G/N.
inline QuotientResult quotient_by_finite_normal(const Language& l, ModelPtr g,
                                                const std::vector<Word>& n_words) {
  check_finite_normal(*g, n_words);
  auto q = std::make_shared<const QuotientModel>(g, n_words);
  std::vector<Letter> id(l.alphabet.size());
  for (Letter x = 0; x < id.size(); ++x) id[x] = x;
  Language out = relabel_language(l, q->generators(), id, "quotient(" + l.name + ")");
  return {std::move(out), q};
}

struct GeneratedResult {
  Language language;
  std::shared_ptr<const WordGeneratedModel> model;
};

/// L''·N over Z ∪ N, where Z lifts the quotient generators (one spec per
/// letter of `lq`, in order) and N lists the non-identity elements of N.
inline GeneratedResult lift_from_quotient(const Language& lq, ModelPtr g,
                                          const std::vector<WordGeneratedModel::Spec>& lifts,
                                          const std::vector<WordGeneratedModel::Spec>& n_elements) {
  if (lifts.size() != lq.alphabet.size())
    throw Error(ErrorCode::InvalidParams, "lift needs one generator per quotient letter");
  std::vector<WordGeneratedModel::Spec> specs = lifts;
  specs.insert(specs.end(), n_elements.begin(), n_elements.end());
  auto j = std::make_shared<const WordGeneratedModel>(g, specs);
  std::vector<Letter> id(lq.alphabet.size());
  for (Letter x = 0; x < id.size(); ++x) id[x] = x;
  Language lifted = relabel_language(lq, j->generators(), id, "lift");
  std::vector<Word> n_words{{}};
  for (std::size_t i = 0; i < n_elements.size(); ++i)
    n_words.push_back({static_cast<Letter>(lifts.size() + i)});
  Language n_lang = Language::from_fsa(j->generators(), from_words(j->generators().names(), n_words), "N");
  return {concat_languages(lifted, n_lang, "lift(" + lq.name + ")"), j};
}

/// Right coset representatives of a subgroup: every element lies in exactly
/// one coset H·t_i, and `coset_of` names it.
struct Transversal {
  enum class Side { Left, Right };
  std::vector<Word> reps;          ///< words over the ambient generators; reps[0] is e
  std::vector<std::string> names;  ///< letter names for the representatives
  Side side = Side::Right;
  std::function<std::optional<std::size_t>(const Element&)> coset_of;

  /// Rejects left-sided data, a non-trivial first representative, or
  /// representatives that do not name their own cosets.
  void validate(const GroupModel& ambient) const {
    if (side != Side::Right)
      throw Error(ErrorCode::InvalidParams, "only right transversals (cosets H·t) are supported");
    if (reps.empty() || !is_identity_element(ambient, evaluate(ambient, reps[0])))
      throw Error(ErrorCode::InvalidParams, "the first representative must be e");
    if (!coset_of) throw Error(ErrorCode::InvalidParams, "transversal needs a coset function");
    for (std::size_t i = 0; i < reps.size(); ++i) {
      auto c = coset_of(evaluate(ambient, reps[i]));
      if (!c || *c != i)
        throw Error(ErrorCode::InvalidParams, "representatives are not in distinct cosets");
    }
  }

  /// Every element of the radius-r ball lies in a listed coset.
  void check_complete(const GroupModel& ambient, int radius) const {
    Ball b = ball(ambient, radius);
    for (const auto& e : b.entries()) {
      auto c = coset_of(e.element);
      if (!c || *c >= reps.size())
        throw Error(ErrorCode::IndexNotFinite,
                    "element " + format_key(e.key) + " lies in no listed coset");
    }
  }
};

/// L·T over X ∪ T for an overgroup J ⊇ G of finite index. `gen_words` gives
/// each letter of L as a word over J.
inline GeneratedResult extend_to_overgroup(const Language& l, ModelPtr j_model,
                                           const std::vector<Word>& gen_words,
                                           const Transversal& t, int check_radius) {
  if (gen_words.size() != l.alphabet.size())
    throw Error(ErrorCode::InvalidParams, "overgroup needs a J-word for every letter of L");
  t.validate(*j_model);
  t.check_complete(*j_model, check_radius);
  std::vector<WordGeneratedModel::Spec> specs;
  for (Letter x = 0; x < gen_words.size(); ++x) specs.push_back({l.alphabet.name(x), gen_words[x]});
  for (std::size_t i = 1; i < t.reps.size(); ++i) specs.push_back({t.names.at(i), t.reps[i]});
  auto model = std::make_shared<const WordGeneratedModel>(j_model, specs);
  std::vector<Letter> id(l.alphabet.size());
  for (Letter x = 0; x < id.size(); ++x) id[x] = x;
  Language base = relabel_language(l, model->generators(), id, l.name);
  std::vector<Word> t_words{{}};
  for (std::size_t i = 1; i < t.reps.size(); ++i)
    t_words.push_back({static_cast<Letter>(l.alphabet.size() + i - 1)});
  Language t_lang = Language::from_fsa(model->generators(), from_words(model->generators().names(), t_words), "T");
  return {concat_languages(base, t_lang, "overgroup(" + l.name + ")"), model};
}

/// The GSM of the identity-letter removal: it counts occurrences of the
/// identity letter, emits w_e at every m-th one and a deletion marker
/// otherwise. Output alphabet: `out` names followed by the marker "#".
inline Gsm identity_removal_gsm(const GeneratorSet& in, const GeneratorSet& out, std::size_t m,
                                const Word& w_e) {
  auto e = in.identity_letter();
  if (!e) throw Error(ErrorCode::InvalidParams, "input alphabet has no identity letter");
  std::vector<std::string> out_alpha = out.names();
  out_alpha.push_back("#");
  const auto marker = static_cast<Symbol>(out.size());
  Gsm g(in.names(), out_alpha);
  for (std::size_t i = 0; i < m; ++i) g.add_state(i == 0, true);
  for (State s = 0; s < m; ++s) {
    for (Letter x = 0; x < in.size(); ++x) {
      if (x == *e) {
        State next = static_cast<State>((s + 1) % m);
        g.add_transition(s, x, next, next == 0 ? w_e : Word{marker});
      } else {
        g.add_transition(s, x, s, {out.require(in.name(x))});
      }
    }
  }
  return g;
}

/// Replaces every m-th occurrence of the identity letter by w_e and deletes
/// the others. `out` is X, the input alphabet without its identity letter.
inline Language remove_identity_letters(const Language& l, const GeneratorSet& out,
                                        std::size_t m, const Word& w_e,
                                        const GroupModel* out_model = nullptr) {
  if (m < 1) throw Error(ErrorCode::InvalidParams, "m must be >= 1");
  if (w_e.size() != m) throw Error(ErrorCode::InvalidParams, "w_e must have length m");
  if (out_model && !is_identity_element(*out_model, evaluate(*out_model, w_e)))
    throw Error(ErrorCode::InvalidParams, "w_e does not evaluate to e");
  Gsm g = identity_removal_gsm(l.alphabet, out, m, w_e);
  Homomorphism h;
  for (Symbol s = 0; s < out.size(); ++s) h.image.push_back({s});
  h.image.push_back({});
  h.mode = HomMode::LimitedDeletion;
  h.max_deletions = m - 1;
  const std::string name = "no_identity(" + l.name + ")";
  if (l.carrier) {
    Fsa img = gsm_image(g, *l.carrier);
    return Language::from_fsa(out, apply_homomorphism(img, out.names(), h), name);
  }
  auto en = l.enumerate;
  auto marker = static_cast<Symbol>(out.size());
  // An output of length n comes from an input with at most n + m - 1 identity letters.
  auto enumerate = [en, g, marker, m](std::size_t n) {
    std::vector<Word> words;
    for (const auto& w : en(2 * n + m))
      for (const auto& o : g.run(w)) {
        Word cut;
        for (Symbol s : o)
          if (s != marker) cut.push_back(s);
        if (cut.size() <= n) words.push_back(std::move(cut));
      }
    detail::sort_unique(words);
    return words;
  };
  return detail::enumerated_language(out, enumerate, name);
}

/// Applies x ↦ w_x, each image padded with the identity letter of Y to a
/// common length m. Missing images of inverse letters are the inverse words.
inline Language change_generators(const Language& l, const GeneratorSet& y,
                                  std::vector<std::optional<Word>> images,
                                  std::optional<std::size_t> m = std::nullopt,
                                  const GroupModel* x_model = nullptr,
                                  const GroupModel* y_model = nullptr) {
  const GeneratorSet& x = l.alphabet;
  if (images.size() != x.size())
    throw Error(ErrorCode::InvalidParams, "change of generators needs an entry per letter");
  for (Letter a = 0; a < x.size(); ++a)
    if (!images[a] && images[x.inverse(a)]) images[a] = inverse_word(y, *images[x.inverse(a)]);
  std::size_t longest = 1;
  for (Letter a = 0; a < x.size(); ++a) {
    if (!images[a]) throw Error(ErrorCode::InvalidParams, "no image for " + x.name(a));
    longest = std::max(longest, images[a]->size());
  }
  const std::size_t len = m.value_or(longest);
  auto pad = y.identity_letter();
  std::vector<Word> padded;
  for (Letter a = 0; a < x.size(); ++a) {
    Word w = *images[a];
    if (w.size() > len)
      throw Error(ErrorCode::LengthNotEqualizable,
                  "image of " + x.name(a) + " is longer than " + std::to_string(len));
    if (w.size() < len && !pad)
      throw Error(ErrorCode::LengthNotEqualizable, "Y has no identity letter to pad with");
    while (w.size() < len) w.push_back(*pad);
    if (x_model && y_model &&
        !equal_in_group(*x_model, evaluate(*x_model, {a}), evaluate(*y_model, w)))
      throw Error(ErrorCode::InvalidParams, "image of " + x.name(a) + " does not evaluate to it");
    padded.push_back(std::move(w));
  }
  const std::string name = "regenerated(" + l.name + ")";
  if (l.carrier) {
    Homomorphism h{padded, HomMode::EpsilonFree, 0};
    return Language::from_fsa(y, apply_homomorphism(*l.carrier, y.names(), h), name);
  }
  auto en = l.enumerate;
  auto enumerate = [en, padded, len](std::size_t n) {
    std::vector<Word> words;
    for (const auto& w : en(n / len)) {
      Word o;
      for (Letter a : w) o = concat(std::move(o), padded[a]);
      words.push_back(std::move(o));
    }
    detail::sort_unique(words);
    return words;
  };
  return detail::enumerated_language(y, enumerate, name);
}

struct SchreierResult {
  Language language;
  std::shared_ptr<const WordGeneratedModel> model;  ///< H with Schreier generators
  Gsm gsm;
};

/// φ(L) for a subgroup H ≤ G: the GSM rewrites t·x to y_{tx}·t_x and accepts
/// when the final representative is e.
inline SchreierResult schreier_subgroup_combing(const Language& l, ModelPtr g, const Transversal& t) {
  const GroupModel& gm = *g;
  const GeneratorSet& x = l.alphabet;
  if (!x.same_names(gm.generators()))
    throw Error(ErrorCode::AlphabetMismatch, "language alphabet differs from G's generators");
  t.validate(gm);
  const std::size_t nt = t.reps.size();
  std::vector<std::vector<std::size_t>> next(nt, std::vector<std::size_t>(x.size()));
  std::vector<std::vector<std::size_t>> y_of(nt, std::vector<std::size_t>(x.size()));
  std::vector<WordGeneratedModel::Spec> specs;
  KeyMap<std::size_t> by_key;
  std::size_t counter = 0;
  for (std::size_t i = 0; i < nt; ++i) {
    for (Letter a = 0; a < x.size(); ++a) {
      Word tx = concat(t.reps[i], Word{a});
      auto c = t.coset_of(evaluate(gm, tx));
      if (!c || *c >= nt) throw Error(ErrorCode::IndexNotFinite, "t·x lies in no listed coset");
      next[i][a] = *c;
      Word y = concat(tx, inverse_word(gm.generators(), t.reps[*c]));
      Key k = gm.key(evaluate(gm, y));
      auto it = by_key.find(k);
      if (it == by_key.end()) {
        bool ident = k == gm.key(gm.identity());
        specs.push_back({ident ? "e" : "y" + std::to_string(++counter), y});
        it = by_key.emplace(k, specs.size() - 1).first;
      }
      y_of[i][a] = it->second;
    }
  }
  auto h = std::make_shared<const WordGeneratedModel>(g, specs);
  Gsm m(x.names(), h->generators().names());
  for (std::size_t i = 0; i < nt; ++i) m.add_state(i == 0, i == 0);
  for (std::size_t i = 0; i < nt; ++i)
    for (Letter a = 0; a < x.size(); ++a)
      m.add_transition(static_cast<State>(i), a, static_cast<State>(next[i][a]),
                       {static_cast<Symbol>(y_of[i][a])});
  const std::string name = "schreier(" + l.name + ")";
  if (l.carrier)
    return {Language::from_fsa(h->generators(), gsm_image(m, *l.carrier), name), h, m};
  auto en = l.enumerate;
  auto enumerate = [en, m](std::size_t n) {
    std::vector<Word> words;
    for (const auto& w : en(n))
      for (const auto& o : m.run(w)) words.push_back(o);
    detail::sort_unique(words);
    return words;
  };
  return {detail::enumerated_language(h->generators(), enumerate, name), h, m};
}

// ---------------------------------------------------------------------------
// Products

struct ProductResult {
  Language language;
  ModelPtr model;
  std::vector<CombingType> promised;
};

/// Non-empty words of L evaluating to e, up to `bound`.
inline std::vector<Word> identity_representatives(const Language& l, const GroupModel& g,
                                                  std::size_t bound) {
  std::vector<Word> out;
  for (const auto& w : l.enumerate(bound))
    if (!w.empty() && is_identity_element(g, evaluate(g, w))) out.push_back(w);
  return out;
}

/// Alternating products of blocks drawn from L'_1\{ε} and L'_2\{ε}, where
/// L'_i drops the non-trivial representatives of e found up to
/// `identity_bound`.
inline ProductResult free_product(const Language& l1, const Language& l2, ModelPtr m1, ModelPtr m2,
                                  std::size_t identity_bound, CombingType claimed) {
  if (claimed.sync == Synchronicity::Synchronous) {
    bool b1 = classify_flags(l1, *m1, std::max<std::size_t>(identity_bound, 1)).bijective;
    bool b2 = classify_flags(l2, *m2, std::max<std::size_t>(identity_bound, 1)).bijective;
    if (!b1 || !b2)
      throw Error(ErrorCode::SynchronousRequiresBijective,
                  "synchronous free product needs bijective factor combings");
  }
  auto model = std::make_shared<const FreeProductModel>(m1, m2);
  const GeneratorSet& gens = model->generators();
  const auto off = static_cast<Letter>(l1.alphabet.size());
  std::vector<Letter> map1(l1.alphabet.size()), map2(l2.alphabet.size());
  for (Letter x = 0; x < map1.size(); ++x) map1[x] = x;
  for (Letter x = 0; x < map2.size(); ++x) map2[x] = off + x;
  Language r1 = relabel_language(l1, gens, map1, l1.name);
  Language r2 = relabel_language(l2, gens, map2, l2.name);
  auto ids1 = identity_representatives(l1, *m1, identity_bound);
  auto ids2 = identity_representatives(l2, *m2, identity_bound);
  const std::string name = "free_product(" + l1.name + "," + l2.name + ")";
  ProductResult res;
  res.model = model;
  res.promised = {claimed};
  if (r1.carrier && r2.carrier) {
    auto drop = [&](const Fsa& c, const std::vector<Word>& ids, const std::vector<Letter>& map) {
      std::vector<Word> bad{{}};
      for (const auto& w : ids) {
        Word o;
        for (Letter x : w) o.push_back(map[x]);
        bad.push_back(o);
      }
      return difference(c, from_words(gens.names(), bad));
    };
    Fsa b1 = drop(*r1.carrier, ids1, map1), b2 = drop(*r2.carrier, ids2, map2);
    Fsa eps = from_words(gens.names(), {Word{}});
    Fsa lang = concatenation(concatenation(union_of(eps, b2), star(concatenation(b1, b2))),
                             union_of(eps, b1));
    res.language = Language::from_fsa(gens, std::move(lang), name);
    return res;
  }
  // Procedural: maximal runs over one factor alphabet are the blocks.
  auto mem1 = r1.member, mem2 = r2.member;
  auto in_first = [off](Letter x) { return x < off; };
  auto is_block = [=](const Word& run, bool first) {
    const GroupModel& g = *model;
    if (run.empty() || !(first ? mem1(run) : mem2(run))) return false;
    return !is_identity_element(g, evaluate(g, run));
  };
  Language l;
  l.alphabet = gens;
  l.name = name;
  l.member = [=](const Word& w) {
    std::size_t i = 0;
    while (i < w.size()) {
      bool first = in_first(w[i]);
      std::size_t j = i;
      while (j < w.size() && in_first(w[j]) == first) ++j;
      if (!is_block(Word(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(j)), first))
        return false;
      i = j;
    }
    return true;
  };
  auto en1 = r1.enumerate, en2 = r2.enumerate;
  l.enumerate = [=](std::size_t n) {
    std::vector<Word> blocks[2];
    for (const auto& w : en1(n))
      if (is_block(w, true)) blocks[0].push_back(w);
    for (const auto& w : en2(n))
      if (is_block(w, false)) blocks[1].push_back(w);
    std::vector<Word> out{{}};
    std::function<void(const Word&, int)> grow = [&](const Word& cur, int last) {
      for (int f = 0; f < 2; ++f) {
        if (f == last) continue;
        for (const auto& b : blocks[f]) {
          if (cur.size() + b.size() > n) continue;
          Word next = concat(cur, b);
          out.push_back(next);
          grow(next, f);
        }
      }
    };
    grow({}, -1);
    detail::sort_unique(out);
    return out;
  };
  res.language = std::move(l);
  return res;
}

/// Types guaranteed for L₁L₂: asynchronous (bicombing if both are), and the
/// weaker of the two synchronicities when L₁ is near geodesic.
inline std::vector<CombingType> direct_product_types(CombingType t1, CombingType t2,
                                                     bool l1_near_geodesic) {
  std::vector<CombingType> out{{Synchronicity::Asynchronous, t1.two_sided && t2.two_sided}};
  auto weaker = static_cast<Synchronicity>(std::max(static_cast<int>(t1.sync), static_cast<int>(t2.sync)));
  if (l1_near_geodesic && weaker != Synchronicity::Asynchronous) out.push_back({weaker, false});
  return out;
}

inline ProductResult direct_product(const Language& l1, const Language& l2, ModelPtr m1, ModelPtr m2,
                                    CombingType t1 = {}, CombingType t2 = {},
                                    bool l1_near_geodesic = false) {
  auto model = std::make_shared<const DirectProductModel>(m1, m2);
  const GeneratorSet& gens = model->generators();
  const auto off = static_cast<Letter>(l1.alphabet.size());
  std::vector<Letter> map1(l1.alphabet.size()), map2(l2.alphabet.size());
  for (Letter x = 0; x < map1.size(); ++x) map1[x] = x;
  for (Letter x = 0; x < map2.size(); ++x) map2[x] = off + x;
  Language r1 = relabel_language(l1, gens, map1, l1.name);
  Language r2 = relabel_language(l2, gens, map2, l2.name);
  Language l = concat_languages(r1, r2, "direct_product(" + l1.name + "," + l2.name + ")");
  if (l1.lookup && l2.lookup) {
    auto lk1 = l1.lookup, lk2 = l2.lookup;
    auto dp = model;
    l.lookup = [=](const Element& g) -> std::optional<Word> {
      auto [a, b] = dp->components(g);
      auto u = lk1(a), v = lk2(b);
      if (!u || !v) return std::nullopt;
      Word out;
      for (Letter x : *u) out.push_back(map1[x]);
      for (Letter x : *v) out.push_back(map2[x]);
      return out;
    };
  }
  return {std::move(l), model, direct_product_types(t1, t2, l1_near_geodesic)};
}

// ---------------------------------------------------------------------------
// Central extensions

struct CocycleData {
  ModelPtr h_model;
  std::shared_ptr<const AbelianModel> a_model;
  CentralExtensionModel::Cocycle sigma;
  std::vector<Element> values;  ///< the finite set σ(H, X)
  /// witnesses[x][i] accepts {v : σ(v, x) = values[i]}, over X.
  std::vector<std::vector<Fsa>> witnesses;
};

struct CentralExtensionResult {
  Language language;  ///< L'' = L'·L_A
  Language prime;     ///< L'
  std::shared_ptr<const CentralExtensionModel> model;
  Gsm gsm;
  std::vector<CombingType> promised;
};

namespace detail {

inline std::string value_tag(const Element& a) {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(a[i]);
  }
  return s;
}

}  // namespace detail

/// Letter name used for y_{x,a}.
inline std::string y_letter_name(const std::string& x, const Element& a) {
  return "y[" + x + ";" + detail::value_tag(a) + "]";
}

/// Checks normalization and that the witnesses partition the slice of L
/// correctly.
inline void check_cocycle(const Language& l, const CocycleData& data, std::size_t slice_len) {
  const GroupModel& h = *data.h_model;
  const AbelianModel& a = *data.a_model;
  const GeneratorSet& x = l.alphabet;
  if (data.witnesses.size() != x.size())
    throw Error(ErrorCode::InvalidParams, "need witnesses for every generator");
  Ball b = ball(h, 2);
  for (const auto& e : b.entries()) {
    if (!is_identity_element(a, data.sigma(h.identity(), e.element)) ||
        !is_identity_element(a, data.sigma(e.element, h.identity())))
      throw Error(ErrorCode::InvalidParams, "cocycle is not normalized");
  }
  for (const auto& v : l.enumerate(slice_len)) {
    Element hv = evaluate(h, v);
    for (Letter xi = 0; xi < x.size(); ++xi) {
      if (data.witnesses[xi].size() != data.values.size())
        throw Error(ErrorCode::InvalidParams, "need one witness per cocycle value");
      int hits = 0;
      std::size_t which = 0;
      for (std::size_t i = 0; i < data.values.size(); ++i)
        if (data.witnesses[xi][i].accepts(v)) ++hits, which = i;
      if (hits != 1)
        throw Error(ErrorCode::WitnessPartitionViolation,
                    "witnesses for " + x.name(xi) + " accept " + x.format(v) + " " +
                        std::to_string(hits) + " times");
      Element expect = data.sigma(hv, h.act(h.identity(), xi));
      if (a.normalize(expect) != a.normalize(data.values[which]))
        throw Error(ErrorCode::WitnessPartitionViolation,
                    "witness for " + x.name(xi) + " misclassifies " + x.format(v));
    }
  }
}

/// L'' = L'·L_A for the central extension of A by H defined by σ; L' is the
/// image of L under the GSM that tracks all witness automata.
inline CentralExtensionResult central_extension(const Language& l, const CocycleData& data,
                                                const Language& l_a, CombingType l_type = {},
                                                bool near_geodesic = false,
                                                std::size_t slice_len = 6) {
  check_cocycle(l, data, slice_len);
  const GeneratorSet& x = l.alphabet;
  const GeneratorSet& z = data.a_model->generators();
  if (!l_a.alphabet.same_names(z))
    throw Error(ErrorCode::AlphabetMismatch, "L_A must be over A's generators");
  const std::size_t nv = data.values.size();
  std::vector<CentralExtensionModel::LetterSpec> specs;
  for (Letter xi = 0; xi < x.size(); ++xi)
    for (std::size_t i = 0; i < nv; ++i)
      specs.push_back({y_letter_name(x.name(xi), data.values[i]), xi, data.a_model->negate(data.values[i])});
  for (Letter zi = 0; zi < z.size(); ++zi)
    specs.push_back({z.name(zi), std::nullopt, data.a_model->act(data.a_model->identity(), zi)});
  auto model = std::make_shared<const CentralExtensionModel>(data.h_model, data.a_model, data.sigma, specs);
  const GeneratorSet& gens = model->generators();

  // GSM over the product of the (determinized) witness automata.
  std::vector<Fsa> w;
  for (Letter xi = 0; xi < x.size(); ++xi)
    for (std::size_t i = 0; i < nv; ++i) w.push_back(trim(determinize(data.witnesses[xi][i])));
  auto step = [&](std::size_t c, std::int64_t s, Symbol a) -> std::int64_t {
    if (s < 0) return -1;
    for (const auto& e : w[c].edges(static_cast<State>(s)))
      if (e.symbol == a) return e.to;
    return -1;
  };
  Gsm m(x.names(), gens.names());
  std::map<std::vector<std::int64_t>, State> index;
  std::vector<std::vector<std::int64_t>> queue;
  auto intern = [&](std::vector<std::int64_t> t) {
    auto it = index.find(t);
    if (it != index.end()) return it->second;
    State s = m.add_state(index.empty(), true);
    index.emplace(t, s);
    queue.push_back(std::move(t));
    return s;
  };
  std::vector<std::int64_t> init;
  for (const auto& a : w) init.push_back(a.num_states() ? static_cast<std::int64_t>(a.initial_states().front()) : -1);
  intern(init);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto cur = queue[head];
    State from = index.at(cur);
    for (Letter xi = 0; xi < x.size(); ++xi) {
      for (std::size_t i = 0; i < nv; ++i) {
        std::size_t c = xi * nv + i;
        if (cur[c] < 0 || !w[c].is_accepting(static_cast<State>(cur[c]))) continue;
        std::vector<std::int64_t> nxt(cur.size());
        for (std::size_t k = 0; k < cur.size(); ++k) nxt[k] = step(k, cur[k], xi);
        m.add_transition(from, xi, intern(std::move(nxt)), {static_cast<Symbol>(c)});
      }
    }
  }

  CentralExtensionResult res;
  res.model = model;
  res.gsm = m;
  const std::string name = "central_extension(" + l.name + ")";
  if (l.carrier) {
    res.prime = Language::from_fsa(gens, gsm_image(m, *l.carrier), "prime(" + l.name + ")");
  } else {
    auto en = l.enumerate;
    auto enumerate = [en, m](std::size_t n) {
      std::vector<Word> words;
      for (const auto& v : en(n))
        for (const auto& o : m.run(v)) words.push_back(o);
      detail::sort_unique(words);
      return words;
    };
    res.prime = detail::enumerated_language(gens, enumerate, "prime(" + l.name + ")");
  }
  Language la = relabel_by_name(l_a, gens, l_a.name);
  res.language = concat_languages(res.prime, la, name);
  res.promised = {{Synchronicity::Asynchronous, l_type.two_sided}};
  if (near_geodesic && l_type.sync != Synchronicity::Asynchronous)
    res.promised.push_back({l_type.sync, false});
  return res;
}

// ---------------------------------------------------------------------------
// Split extensions

struct ActionData {
  ModelPtr h_model, n_model;
  ActionFn action;  ///< (H-letter y, n) ↦ n^y
  /// act_gen[y][x] is a word over N's generators for x^y.
  std::vector<std::vector<Word>> act_gen;
};

/// Fills act_gen from the element action and a representative lookup.
inline ActionData make_action_data(ModelPtr h, ModelPtr n, ActionFn action,
                                   const Language::Lookup& lookup_n) {
  if (!lookup_n) throw Error(ErrorCode::MissingLookup, "L_N has no representative lookup");
  ActionData d{h, n, action, {}};
  const GeneratorSet& y = h->generators();
  const GeneratorSet& x = n->generators();
  d.act_gen.assign(y.size(), std::vector<Word>(x.size()));
  for (Letter yi = 0; yi < y.size(); ++yi)
    for (Letter xi = 0; xi < x.size(); ++xi) {
      auto w = lookup_n(action(yi, n->act(n->identity(), xi)));
      if (!w) throw Error(ErrorCode::MissingLookup, "no representative for a generator image");
      d.act_gen[yi][xi] = *w;
    }
  return d;
}

/// Checks that act_gen extends to automorphisms matching the element action
/// on the radius-r ball of N, and that y⁻¹ undoes y.
inline void check_action(const ActionData& d, int radius) {
  const GroupModel& n = *d.n_model;
  const GeneratorSet& y = d.h_model->generators();
  Ball b = ball(n, radius);
  for (std::size_t i = 0; i < b.size(); ++i) {
    Word word = b.geodesic(i);
    for (Letter yi = 0; yi < y.size(); ++yi) {
      Word img;
      for (Letter xi : word) img = concat(std::move(img), d.act_gen[yi][xi]);
      Element via_words = evaluate(n, img);
      if (!equal_in_group(n, via_words, d.action(yi, b[i].element)))
        throw Error(ErrorCode::InvalidParams, "act_gen disagrees with the action at " + format_key(b[i].key));
      if (!equal_in_group(n, d.action(y.inverse(yi), via_words), b[i].element))
        throw Error(ErrorCode::InvalidParams, "action of " + y.name(yi) + " is not inverted by its inverse");
    }
  }
}

struct SplitExtensionResult {
  Language language;
  std::shared_ptr<const SemidirectProductModel> model;
};

/// L_G = L_H·L_N for H ⋉ N.
inline SplitExtensionResult split_extension(const Language& l_h, const Language& l_n,
                                            const ActionData& action) {
  if (!l_n.lookup) throw Error(ErrorCode::MissingLookup, "L_N has no representative lookup");
  auto model = std::make_shared<const SemidirectProductModel>(action.h_model, action.n_model, action.action);
  const GeneratorSet& gens = model->generators();
  const auto off = static_cast<Letter>(l_h.alphabet.size());
  std::vector<Letter> map_h(l_h.alphabet.size()), map_n(l_n.alphabet.size());
  for (Letter x = 0; x < map_h.size(); ++x) map_h[x] = x;
  for (Letter x = 0; x < map_n.size(); ++x) map_n[x] = off + x;
  Language rh = relabel_language(l_h, gens, map_h, l_h.name);
  Language rn = relabel_language(l_n, gens, map_n, l_n.name);
  Language l = concat_languages(rh, rn, "split(" + l_h.name + "," + l_n.name + ")");
  if (l_h.lookup) {
    auto lh = l_h.lookup, ln = l_n.lookup;
    l.lookup = [=](const Element& g) -> std::optional<Word> {
      auto [h, n] = model->components(g);
      auto u = lh(h), v = ln(n);
      if (!u || !v) return std::nullopt;
      Word out;
      for (Letter x : *u) out.push_back(map_h[x]);
      for (Letter x : *v) out.push_back(map_n[x]);
      return out;
    };
  }
  return {std::move(l), model};
}

struct StarReport {
  int max_K = 0;
  std::size_t checked = 0;
  std::optional<Element> worst_n;
  std::optional<Letter> worst_y;
  std::optional<Word> worst_rep, worst_image;
};

/// Condition (*): v_{n^y} asynchronously fellow travels with the image of
/// v_n under y, for n in the radius-r ball of N and every H-generator y.
/// Representatives longer than `len_bound` are skipped.
inline StarReport check_condition_star(const Language& l_n, const ActionData& d, int radius,
                                       std::size_t len_bound) {
  if (radius < 1) throw Error(ErrorCode::InvalidParams, "radius must be >= 1");
  if (!l_n.lookup) throw Error(ErrorCode::MissingLookup, "L_N has no representative lookup");
  const GroupModel& n = *d.n_model;
  const GeneratorSet& y = d.h_model->generators();
  Ball b = ball(n, radius);
  DistanceOracle oracle(n);
  StarReport rep;
  for (const auto& e : b.entries()) {
    auto vn = l_n.lookup(e.element);
    if (!vn || vn->size() > len_bound) continue;
    for (Letter yi = 0; yi < y.size(); ++yi) {
      Word image;
      for (Letter xi : *vn) {
        auto piece = l_n.lookup(evaluate(n, d.act_gen[yi][xi]));
        if (!piece) throw Error(ErrorCode::MissingLookup, "no representative for a generator image");
        image = concat(std::move(image), *piece);
      }
      auto target = l_n.lookup(d.action(yi, e.element));
      if (!target) throw Error(ErrorCode::MissingLookup, "no representative for n^y");
      int k = async_kmin(oracle, *target, image).first;
      ++rep.checked;
      if (k > rep.max_K || !rep.worst_n) {
        rep.max_K = std::max(rep.max_K, k);
        rep.worst_n = e.element;
        rep.worst_y = yi;
        rep.worst_rep = *target;
        rep.worst_image = image;
      }
    }
  }
  return rep;
}

}  // namespace comb
