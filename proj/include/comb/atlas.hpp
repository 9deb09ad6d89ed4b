#pragma once

// Built-in groups and combings: shortlex languages, the straight-line
// language of Z^n, and split-extension combings of nilpotent and soluble
// examples.

#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "comb/constructions.hpp"
#include "comb/language.hpp"
#include "comb/models.hpp"

namespace comb {

/// A model with its generators renamed; structure is untouched.
class RenamedModel final : public GroupModel {
 public:
  RenamedModel(ModelPtr base, const std::vector<std::string>& names) : base_(std::move(base)) {
    std::vector<Generator> gens = base_->generators().all();
    if (names.size() != gens.size()) throw Error(ErrorCode::InvalidParams, "one name per generator");
    for (std::size_t i = 0; i < gens.size(); ++i) gens[i].name = names[i];
    gens_ = GeneratorSet(std::move(gens));
  }
  const GeneratorSet& generators() const override { return gens_; }
  Element identity() const override { return base_->identity(); }
  Element act(const Element& g, Letter x) const override { return base_->act(g, x); }
  Key key(const Element& g) const override { return base_->key(g); }
  std::string describe() const override { return base_->describe(); }
  const ModelPtr& base_ptr() const noexcept { return base_; }

 private:
  ModelPtr base_;
  GeneratorSet gens_;
};

namespace detail {

inline std::vector<std::string> trim_split(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::int64_t parse_int(const std::string& s, const std::string& what) {
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') throw Error(ErrorCode::InvalidParams, "bad integer '" + s + "' in " + what);
  return v;
}

/// Suffixes the second factor's names with primes until they are disjoint
/// from the first factor's.
inline ModelPtr disjoint_names(const ModelPtr& first, ModelPtr second) {
  auto taken = first->generators().names();
  auto names = second->generators().names();
  auto clash = [&] {
    for (const auto& n : names)
      if (std::find(taken.begin(), taken.end(), n) != taken.end()) return true;
    return false;
  };
  if (!clash()) return second;
  while (clash()) {
    for (auto& n : names) {
      auto pos = n.find("^-1");
      if (pos == std::string::npos) n += "'";
      else n.insert(pos, "'");
    }
  }
  return std::make_shared<const RenamedModel>(std::move(second), names);
}

}  // namespace detail

/// Finite group read from a JSON file
/// `{"table": [[...]], "generators": [{"name": "a", "element": 1}, ...]}`.
inline ModelPtr read_finite_group(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path);
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    auto table = j.at("table").get<std::vector<std::vector<std::size_t>>>();
    std::vector<std::pair<std::string, std::size_t>> gens;
    for (const auto& g : j.at("generators"))
      gens.emplace_back(g.at("name").get<std::string>(), g.at("element").get<std::size_t>());
    return std::make_shared<const FiniteGroupModel>(std::move(table), std::move(gens));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
}

inline ModelPtr sol_example_group(std::vector<std::vector<std::int64_t>> matrix = {{0, 1}, {1, 1}}) {
  auto h = AbelianModel::free_abelian(1, {"x"});
  auto n = AbelianModel::free_abelian(2, {"y", "z"});
  return std::make_shared<const SemidirectProductModel>(h, n, linear_z_action(std::move(matrix)));
}

/// Group ids: free_abelian:n, free:n, cyclic:n, finite:<file.json>,
/// heisenberg:n, uut:n, free_nilpotent2:k, sol, semidirect:a,b,c,d
/// (the matrix [[a,b],[c,d]] acting on Z² = ⟨y,z⟩ by ⟨x⟩), and the
/// composites direct(G,H), free(G,H).
inline ModelPtr builtin_group(const std::string& id) {
  std::string name = id, arg;
  auto paren = id.find('(');
  auto colon = id.find(':');
  if (paren != std::string::npos && (colon == std::string::npos || paren < colon)) {
    if (id.back() != ')') throw Error(ErrorCode::InvalidParams, "unbalanced group id '" + id + "'");
    name = id.substr(0, paren);
    auto parts = detail::trim_split(id.substr(paren + 1, id.size() - paren - 2), ',');
    if (parts.size() != 2) throw Error(ErrorCode::InvalidParams, name + "(...) takes two groups");
    ModelPtr a = builtin_group(parts[0]);
    ModelPtr b = detail::disjoint_names(a, builtin_group(parts[1]));
    if (name == "direct") return std::make_shared<const DirectProductModel>(a, b);
    if (name == "free") return std::make_shared<const FreeProductModel>(a, b);
    throw Error(ErrorCode::InvalidParams, "unknown composite '" + name + "'");
  }
  if (colon != std::string::npos) {
    name = id.substr(0, colon);
    arg = id.substr(colon + 1);
  }
  auto count = [&](std::int64_t min) {
    if (arg.empty()) throw Error(ErrorCode::InvalidParams, name + " needs a parameter");
    auto v = detail::parse_int(arg, id);
    if (v < min) throw Error(ErrorCode::InvalidParams, name + " parameter must be >= " + std::to_string(min));
    return static_cast<std::size_t>(v);
  };
  if (name == "free_abelian") return AbelianModel::free_abelian(count(1));
  if (name == "free") return FreeGroupModel::of_rank(count(1));
  if (name == "cyclic") return AbelianModel::cyclic(static_cast<std::int64_t>(count(2)), "a");
  if (name == "finite") return read_finite_group(arg);
  if (name == "heisenberg") return std::make_shared<const HeisenbergModel>(count(1));
  if (name == "uut") return std::make_shared<const UutModel>(count(2));
  if (name == "free_nilpotent2") return std::make_shared<const FreeNilpotent2Model>(count(1));
  if (name == "sol") return sol_example_group();
  if (name == "semidirect") {
    auto parts = detail::trim_split(arg, ',');
    if (parts.size() != 4) throw Error(ErrorCode::InvalidParams, "semidirect needs a,b,c,d");
    std::vector<std::int64_t> v;
    for (const auto& p : parts) v.push_back(detail::parse_int(p, id));
    return sol_example_group({{v[0], v[1]}, {v[2], v[3]}});
  }
  throw Error(ErrorCode::InvalidParams, "unknown group '" + id + "'");
}

// ---------------------------------------------------------------------------
// Shortlex languages

/// Z^n: a_1^{k_1} … a_n^{k_n}, each factor a power of a generator or of its
/// inverse.
inline Language shortlex_free_abelian(const AbelianModel& z) {
  const GeneratorSet& gens = z.generators();
  auto names = gens.names();
  Fsa lang = from_words(names, {Word{}});
  for (std::size_t i = 0; i < z.rank(); ++i) {
    if (z.moduli()[i] != 0) throw Error(ErrorCode::InvalidParams, "shortlex_free_abelian needs a free abelian model");
    Fsa pos = star(from_words(names, {Word{static_cast<Letter>(2 * i)}}));
    Fsa neg = star(from_words(names, {Word{static_cast<Letter>(2 * i + 1)}}));
    lang = concatenation(lang, union_of(pos, neg));
  }
  Language l = Language::from_fsa(gens, determinize(lang), "shortlex");
  l.lookup = [gens](const Element& g) -> std::optional<Word> {
    Word w;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::int64_t k = 0; k < std::abs(g[i]); ++k)
        w.push_back(static_cast<Letter>(2 * i + (g[i] < 0 ? 1 : 0)));
    return w;
  };
  return l;
}

/// Freely reduced words.
inline Language shortlex_free(const GeneratorSet& gens) {
  Fsa a(gens.names());
  State start = a.add_state(true, true);
  std::vector<State> last;
  for (Letter x = 0; x < gens.size(); ++x) last.push_back(a.add_state(false, true));
  for (Letter x = 0; x < gens.size(); ++x) {
    a.add_transition(start, x, last[x]);
    for (Letter y = 0; y < gens.size(); ++y)
      if (gens.inverse(y) != x) a.add_transition(last[y], x, last[x]);
  }
  Language l = Language::from_fsa(gens, std::move(a), "shortlex");
  l.lookup = [](const Element& g) -> std::optional<Word> {
    Word w;
    for (auto v : g) w.push_back(static_cast<Letter>(v));
    return w;
  };
  return l;
}

/// Shortlex-least geodesics of a finite group, read off a saturated ball.
inline Language shortlex_finite(ModelPtr model, std::size_t max_order = 100000) {
  Ball b = ball(*model, 1);
  for (int r = 1;; ++r) {
    Ball next = ball(*model, r + 1);
    if (next.size() == b.size()) break;
    if (next.size() > max_order) throw Error(ErrorCode::BallTooLarge, "group is not small and finite");
    b = std::move(next);
  }
  std::vector<Word> words;
  KeyMap<Word> by_key;
  for (std::size_t i = 0; i < b.size(); ++i) {
    words.push_back(b.geodesic(i));
    by_key.emplace(b[i].key, words.back());
  }
  Language l = Language::from_fsa(model->generators(), from_words(model->generators().names(), words), "shortlex");
  l.lookup = [model, by_key](const Element& g) -> std::optional<Word> {
    auto it = by_key.find(model->key(g));
    if (it == by_key.end()) return std::nullopt;
    return it->second;
  };
  return l;
}

// ---------------------------------------------------------------------------
// Straight-line language of Z^n

namespace detail {

/// |p|²|g|² − (p·g)²: the squared distance from p to the line through g,
/// scaled by |g|². Exact on monotone lattice points, which project inside
/// the segment [0, g].
inline __int128 line_deviation(const std::vector<std::int64_t>& p, const std::vector<std::int64_t>& g) {
  __int128 pp = 0, gg = 0, pg = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    pp += static_cast<__int128>(p[i]) * p[i];
    gg += static_cast<__int128>(g[i]) * g[i];
    pg += static_cast<__int128>(p[i]) * g[i];
  }
  return pp * gg - pg * pg;
}

}  // namespace detail

/// Among geodesic staircase words for g, the one minimising the largest
/// vertex-to-segment distance, ties broken lexicographically with
/// a_1 < a_1⁻¹ < a_2 < …. Letters are 2i (+) and 2i+1 (−).
inline Word zn_straightline_word(std::size_t n, const std::vector<std::int64_t>& g) {
  if (n < 1) throw Error(ErrorCode::InvalidParams, "n must be >= 1");
  if (g.size() != n) throw Error(ErrorCode::InvalidParams, "vector has the wrong dimension");
  // Lattice points p with 0 <= |p_i| <= |g_i|, sign following g, indexed
  // mixed-radix by the absolute coordinates.
  std::vector<std::size_t> extent(n), stride(n);
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    extent[i] = static_cast<std::size_t>(std::abs(g[i])) + 1;
    stride[i] = total;
    total *= extent[i];
  }
  auto point = [&](std::size_t idx) {
    std::vector<std::int64_t> p(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto a = static_cast<std::int64_t>((idx / stride[i]) % extent[i]);
      p[i] = g[i] < 0 ? -a : a;
    }
    return p;
  };
  // best[p]: minimal achievable max deviation over paths from p to g.
  std::vector<__int128> dev(total), best(total);
  for (std::size_t idx = 0; idx < total; ++idx) dev[idx] = detail::line_deviation(point(idx), g);
  for (std::size_t k = total; k-- > 0;) {
    __int128 onward = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if ((k / stride[i]) % extent[i] + 1 < extent[i]) {
        __int128 b = best[k + stride[i]];
        if (onward < 0 || b < onward) onward = b;
      }
    }
    best[k] = onward < 0 ? dev[k] : std::max(dev[k], onward);
  }
  const __int128 target = best[0];
  Word w;
  std::size_t cur = 0;
  while (cur != total - 1) {
    for (std::size_t i = 0; i < n; ++i) {
      if ((cur / stride[i]) % extent[i] + 1 >= extent[i]) continue;
      if (best[cur + stride[i]] <= target) {
        w.push_back(static_cast<Letter>(2 * i + (g[i] < 0 ? 1 : 0)));
        cur += stride[i];
        break;
      }
    }
  }
  return w;
}

/// Largest vertex-to-segment distance of a path, squared and scaled by |g|².
inline __int128 path_deviation(const AbelianModel& z, const Word& w) {
  Element g = evaluate(z, w);
  Element p = z.identity();
  __int128 worst = 0;
  for (Letter x : w) {
    p = z.act(p, x);
    worst = std::max(worst, detail::line_deviation(p, g));
  }
  return worst;
}

/// The straight-line language over a free abelian model.
inline Language zn_straightline(std::shared_ptr<const AbelianModel> z) {
  for (auto m : z->moduli())
    if (m != 0) throw Error(ErrorCode::InvalidParams, "straight-line language needs Z^n");
  const std::size_t n = z->rank();
  auto rep = [n](const Element& g) { return zn_straightline_word(n, g); };
  return Language::from_geodesic_lookup(z->generators(), z, rep, "straightline");
}

// ---------------------------------------------------------------------------
// Split-extension combings assembled over a concrete model

/// G = H ⋉ N with H and N named by generators of G. `decompose` writes g as
/// h·n.
struct SplitPlan {
  ModelPtr g;
  CombingSpec h;                              ///< combing of H over its own model
  std::shared_ptr<const AbelianModel> n;      ///< N, free abelian
  std::function<std::pair<Element, Element>(const Element&)> decompose;
};

struct SplitAssembly {
  CombingSpec spec;  ///< over g
  ActionData action;
  Language l_n;
};

namespace detail {

inline Word abelian_power_word(const Element& v) {
  Word w;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::int64_t k = 0; k < std::abs(v[i]); ++k)
      w.push_back(static_cast<Letter>(2 * i + (v[i] < 0 ? 1 : 0)));
  return w;
}

}  // namespace detail

/// Derives the action n ↦ y⁻¹ny inside G, validates it, and assembles
/// L_H·L_N with L_N the straight-line language.
inline SplitAssembly assemble_split(const SplitPlan& plan, int action_check_radius = 2) {
  const GroupModel& g = *plan.g;
  const GeneratorSet& gg = g.generators();
  auto h_to_g = detail::map_by_name(plan.h.model->generators(), gg);
  auto n_to_g = detail::map_by_name(plan.n->generators(), gg);
  ModelPtr gp = plan.g;
  auto decompose = plan.decompose;
  ModelPtr hm = plan.h.model;
  ActionFn action = [gp, hm, decompose, h_to_g, n_to_g](Letter y, const Element& n) {
    const GroupModel& gm = *gp;
    Word w{gm.generators().inverse(h_to_g.at(y))};
    for (Letter x : detail::abelian_power_word(n)) w.push_back(n_to_g[x]);
    w.push_back(h_to_g.at(y));
    auto [h, np] = decompose(evaluate(gm, w));
    if (!is_identity_element(*hm, h))
      throw Error(ErrorCode::NotNormal, "conjugate of an N element leaves N");
    return np;
  };
  Language l_n = zn_straightline(plan.n);
  SplitAssembly out{{}, make_action_data(plan.h.model, plan.n, action, l_n.lookup), l_n};
  check_action(out.action, action_check_radius);
  auto res = split_extension(plan.h.language, l_n, out.action);
  Language l = relabel_by_name(res.language, gg, "split(" + plan.h.language.name + ",straightline)");
  if (plan.h.language.lookup) {
    auto lh = plan.h.language.lookup, ln = l_n.lookup;
    l.lookup = [=](const Element& e) -> std::optional<Word> {
      auto [h, n] = decompose(e);
      auto u = lh(h), v = ln(n);
      if (!u || !v) return std::nullopt;
      Word w;
      for (Letter x : *u) w.push_back(h_to_g[x]);
      for (Letter x : *v) w.push_back(n_to_g[x]);
      return w;
    };
  }
  out.spec = {std::move(l), plan.g, {Synchronicity::Asynchronous, false}, std::nullopt};
  out.l_n = std::move(l_n);
  return out;
}

inline CombingSpec shortlex_combing_for(ModelPtr model, std::shared_ptr<const AbelianModel> z) {
  return {shortlex_free_abelian(*z), model, {Synchronicity::Synchronous, true}, std::nullopt};
}

/// G_n = ⟨a_i⟩ ⋉ ⟨b_i, c⟩, with (α, β, γ) = (α, 0, 0)·(0, β, γ − α·β).
inline SplitAssembly heisenberg_split(std::size_t n) {
  auto g = std::make_shared<const HeisenbergModel>(n);
  auto names = g->generators().names();
  std::vector<std::string> a_names, n_names;
  for (std::size_t i = 0; i < n; ++i) a_names.push_back(names[2 * i]);
  for (std::size_t i = n; i <= 2 * n; ++i) n_names.push_back(names[2 * i]);
  auto h = AbelianModel::free_abelian(n, a_names);
  SplitPlan plan;
  plan.g = g;
  plan.h = shortlex_combing_for(h, h);
  plan.n = AbelianModel::free_abelian(n + 1, n_names);
  plan.decompose = [n](const Element& e) {
    Element alpha(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(n));
    Element rest(e.begin() + static_cast<std::ptrdiff_t>(n), e.end());
    for (std::size_t i = 0; i < n; ++i) rest[n] -= alpha[i] * rest[i];
    return std::pair{alpha, rest};
  };
  return assemble_split(plan);
}

inline CombingSpec uut_combing(std::size_t n);

/// U_n = U_{n−1} ⋉ Z^{n−1}, the normal factor being the right-hand column.
inline SplitAssembly uut_split(std::size_t n) {
  if (n < 3) throw Error(ErrorCode::InvalidParams, "uut split needs n >= 3");
  auto g = std::make_shared<const UutModel>(n);
  auto top = std::make_shared<const UutModel>(n - 1);
  std::vector<std::string> col;
  for (std::size_t i = 0; i + 1 < n; ++i) col.push_back(UutModel::entry_name(i, n - 1));
  SplitPlan plan;
  plan.g = g;
  plan.h = uut_combing(n - 1);
  plan.n = AbelianModel::free_abelian(n - 1, col);
  plan.decompose = [g, top, n](const Element& e) {
    Element h = top->identity();
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = i + 1; j + 1 < n; ++j) h[top->slot(i, j)] = g->entry(e, i, j);
    // Solve h_top·v = c by back substitution.
    Element v(n - 1, 0);
    for (std::size_t i = n - 1; i-- > 0;) {
      std::int64_t s = g->entry(e, i, n - 1);
      for (std::size_t j = i + 1; j + 1 < n; ++j) s -= g->entry(e, i, j) * v[j];
      v[i] = s;
    }
    return std::pair{h, v};
  };
  return assemble_split(plan);
}

inline CombingSpec uut_combing(std::size_t n) {
  if (n == 2) {
    auto g = std::make_shared<const UutModel>(2);
    auto z = AbelianModel::free_abelian(1, {UutModel::entry_name(0, 1)});
    Language l = shortlex_free_abelian(*z);
    return {relabel_by_name(l, g->generators(), "shortlex"), g, {Synchronicity::Synchronous, true}, std::nullopt};
  }
  auto a = uut_split(n);
  return a.spec;
}

inline CombingSpec free_nilpotent2_combing(std::size_t k);

/// N_{k,2} = N_{k−1,2} ⋉ ⟨x_k, c_ik⟩.
inline SplitAssembly free_nilpotent2_split(std::size_t k) {
  if (k < 2) throw Error(ErrorCode::InvalidParams, "free_nilpotent2 split needs k >= 2");
  auto g = std::make_shared<const FreeNilpotent2Model>(k);
  auto sub = std::make_shared<const FreeNilpotent2Model>(k - 1);
  std::vector<std::string> n_names{"x" + std::to_string(k)};
  for (std::size_t i = 0; i + 1 < k; ++i) n_names.push_back("c" + std::to_string(i + 1) + std::to_string(k));
  SplitPlan plan;
  plan.g = g;
  plan.h = free_nilpotent2_combing(k - 1);
  plan.n = AbelianModel::free_abelian(k, n_names);
  plan.decompose = [g, sub, k](const Element& e) {
    Element h = sub->identity();
    for (std::size_t i = 0; i + 1 < k; ++i) h[i] = e[i];
    for (std::size_t i = 0; i + 1 < k; ++i)
      for (std::size_t j = i + 1; j + 1 < k; ++j) h[sub->comm_slot(i, j)] = e[g->comm_slot(i, j)];
    Element n{e[k - 1]};
    for (std::size_t i = 0; i + 1 < k; ++i) n.push_back(e[g->comm_slot(i, k - 1)]);
    return std::pair{h, n};
  };
  return assemble_split(plan);
}

inline CombingSpec free_nilpotent2_combing(std::size_t k) {
  if (k == 1) {
    auto g = std::make_shared<const FreeNilpotent2Model>(1);
    auto z = AbelianModel::free_abelian(1, {"x1"});
    return {relabel_by_name(shortlex_free_abelian(*z), g->generators(), "shortlex"), g,
            {Synchronicity::Synchronous, true}, std::nullopt};
  }
  return free_nilpotent2_split(k).spec;
}

/// ⟨x⟩ ⋉ ⟨y, z⟩ with the given matrix action.
inline SplitAssembly sol_split(std::vector<std::vector<std::int64_t>> matrix = {{0, 1}, {1, 1}}) {
  auto g = std::static_pointer_cast<const SemidirectProductModel>(sol_example_group(std::move(matrix)));
  auto h = std::static_pointer_cast<const AbelianModel>(g->h_model());
  SplitPlan plan;
  plan.g = g;
  plan.h = shortlex_combing_for(h, h);
  plan.n = std::static_pointer_cast<const AbelianModel>(g->n_model());
  plan.decompose = [g](const Element& e) { return g->components(e); };
  return assemble_split(plan);
}

/// Names accepted by builtin_combing.
inline std::vector<std::string> builtin_combing_names() {
  return {"auto", "shortlex", "straightline", "heisenberg", "uut", "free_nilpotent2", "sol"};
}

/// The combing `language` for the group `group_id`. `auto` picks the
/// natural combing of the group, recursing through direct and free
/// products.
inline CombingSpec builtin_combing(const std::string& language, const std::string& group_id) {
  ModelPtr model = builtin_group(group_id);
  const std::string head = group_id.substr(0, group_id.find_first_of(":("));
  const bool composite = group_id.size() > head.size() && group_id[head.size()] == '(';
  auto param = [&]() -> std::size_t {
    auto c = group_id.find(':');
    return c == std::string::npos ? 0 : static_cast<std::size_t>(detail::parse_int(group_id.substr(c + 1), group_id));
  };
  auto expect = [&](const std::string& want) {
    if (head != want)
      throw Error(ErrorCode::InvalidParams, "combing '" + language + "' needs a " + want + " group, got " + group_id);
  };
  const CombingType sync_bi{Synchronicity::Synchronous, true};
  if (language == "auto") {
    if (composite) {
      auto inner = detail::trim_split(group_id.substr(head.size() + 1, group_id.size() - head.size() - 2), ',');
      CombingSpec a = builtin_combing("auto", inner[0]);
      CombingSpec b = builtin_combing("auto", inner[1]);
      ModelPtr b_model = detail::disjoint_names(a.model, b.model);
      Language lb = relabel_language(b.language, b_model->generators(),
                                     [&] {
                                       std::vector<Letter> id(b.language.alphabet.size());
                                       for (Letter x = 0; x < id.size(); ++x) id[x] = x;
                                       return id;
                                     }(),
                                     b.language.name);
      lb.lookup = b.language.lookup;
      ProductResult r = head == "direct"
                            ? direct_product(a.language, lb, a.model, b_model, a.claimed, b.claimed,
                                             a.claimed.sync == Synchronicity::Synchronous)
                            : free_product(a.language, lb, a.model, b_model, 4,
                                           a.claimed.implies(b.claimed) ? b.claimed : a.claimed);
      return {std::move(r.language), r.model, r.promised.back(), std::nullopt};
    }
    if (head == "free_abelian" || head == "free" || head == "cyclic" || head == "finite")
      return builtin_combing("shortlex", group_id);
    return builtin_combing(head == "semidirect" ? "sol" : head, group_id);
  }
  if (language == "shortlex") {
    if (composite) throw Error(ErrorCode::InvalidParams, "use 'auto' for composite group " + group_id);
    if (head == "free_abelian")
      return {shortlex_free_abelian(*std::static_pointer_cast<const AbelianModel>(model)), model, sync_bi, std::nullopt};
    if (head == "free") return {shortlex_free(model->generators()), model, sync_bi, std::nullopt};
    if (head == "cyclic" || head == "finite") return {shortlex_finite(model), model, sync_bi, std::nullopt};
    if (head == "uut" && param() == 2) return uut_combing(2);
    if (head == "free_nilpotent2" && param() == 1) return free_nilpotent2_combing(1);
    throw Error(ErrorCode::InvalidParams, "no shortlex combing built in for " + group_id);
  }
  if (language == "straightline") {
    expect("free_abelian");
    return {zn_straightline(std::static_pointer_cast<const AbelianModel>(model)), model,
            {Synchronicity::Asynchronous, true}, std::nullopt};
  }
  if (language == "heisenberg") {
    expect("heisenberg");
    return heisenberg_split(param()).spec;
  }
  if (language == "uut") {
    expect("uut");
    return uut_combing(param());
  }
  if (language == "free_nilpotent2") {
    expect("free_nilpotent2");
    return free_nilpotent2_combing(param());
  }
  if (language == "sol") {
    if (head == "sol") return sol_split().spec;
    expect("semidirect");
    auto parts = detail::trim_split(group_id.substr(group_id.find(':') + 1), ',');
    std::vector<std::int64_t> v;
    for (const auto& p : parts) v.push_back(detail::parse_int(p, group_id));
    return sol_split({{v[0], v[1]}, {v[2], v[3]}}).spec;
  }
  throw Error(ErrorCode::InvalidParams, "unknown builtin combing '" + language + "'");
}

}  // namespace comb
