#pragma once

// Built-in group models. Every model normalizes eagerly, so elements are
// canonical integer tuples and `key` is cheap.

#include <functional>
#include <map>
#include <numeric>

#include "comb/group.hpp"

namespace comb {

namespace detail {

inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::string default_letter_name(std::size_t i, std::size_t n) {
  static const char* small[] = {"a", "b", "c", "d"};
  if (n <= 4) return small[i];
  return "x" + std::to_string(i + 1);
}

}  // namespace detail

/// Finitely generated abelian group Z/m_1 × … × Z/m_k with modulus 0 meaning
/// a free factor. Generators are the standard basis vectors, in order.
class AbelianModel final : public GroupModel {
 public:
  AbelianModel(std::vector<std::int64_t> moduli, std::vector<std::string> names)
      : moduli_(std::move(moduli)) {
    if (names.size() != moduli_.size())
      throw Error(ErrorCode::InvalidParams, "abelian model needs one name per factor");
    std::vector<std::string> self_inverse;
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      if (moduli_[i] < 0 || moduli_[i] == 1)
        throw Error(ErrorCode::InvalidParams, "abelian modulus must be 0 or >= 2");
      if (moduli_[i] == 2) self_inverse.push_back(names[i]);
    }
    gens_ = GeneratorSet::with_inverses(names, self_inverse);
    for (Letter x = 0; x < gens_.size(); ++x) {
      std::string base = gens_.name(x);
      bool inv = base.size() > 3 && base.ends_with("^-1");
      if (inv) base.resize(base.size() - 3);
      auto pos = std::find(names.begin(), names.end(), base) - names.begin();
      coord_.push_back(static_cast<std::size_t>(pos));
      sign_.push_back(inv ? -1 : 1);
    }
  }

  static std::shared_ptr<AbelianModel> free_abelian(std::size_t n,
                                                    std::vector<std::string> names = {}) {
    if (n < 1) throw Error(ErrorCode::InvalidParams, "free_abelian needs n >= 1");
    if (names.empty())
      for (std::size_t i = 0; i < n; ++i) names.push_back(detail::default_letter_name(i, n));
    return std::make_shared<AbelianModel>(std::vector<std::int64_t>(n, 0), std::move(names));
  }

  static std::shared_ptr<AbelianModel> cyclic(std::int64_t order, std::string name = "g") {
    if (order < 2) throw Error(ErrorCode::InvalidParams, "cyclic group needs order >= 2");
    return std::make_shared<AbelianModel>(std::vector<std::int64_t>{order},
                                          std::vector<std::string>{std::move(name)});
  }

  const GeneratorSet& generators() const override { return gens_; }
  Element identity() const override { return Element(moduli_.size(), 0); }

  Element act(const Element& g, Letter x) const override {
    Element out = g;
    auto c = coord_.at(x);
    out[c] += sign_[x];
    if (moduli_[c]) out[c] = detail::floor_mod(out[c], moduli_[c]);
    return out;
  }

  std::string describe() const override {
    std::string s = "abelian(";
    for (std::size_t i = 0; i < moduli_.size(); ++i) {
      if (i) s += ",";
      s += moduli_[i] ? "Z/" + std::to_string(moduli_[i]) : std::string("Z");
    }
    return s + ")";
  }

  std::size_t rank() const noexcept { return moduli_.size(); }
  const std::vector<std::int64_t>& moduli() const noexcept { return moduli_; }

  Element normalize(Element v) const {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (moduli_[i]) v[i] = detail::floor_mod(v[i], moduli_[i]);
    return v;
  }
  Element add(const Element& a, const Element& b) const {
    Element out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return normalize(std::move(out));
  }
  Element negate(const Element& a) const {
    Element out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
    return normalize(std::move(out));
  }
  /// Coordinate index and sign of a generator letter.
  std::pair<std::size_t, int> basis_of(Letter x) const { return {coord_.at(x), sign_.at(x)}; }

 private:
  std::vector<std::int64_t> moduli_;
  GeneratorSet gens_;
  std::vector<std::size_t> coord_;
  std::vector<int> sign_;
};

/// Free group; elements are freely reduced words stored as letter indices.
class FreeGroupModel final : public GroupModel {
 public:
  explicit FreeGroupModel(std::vector<std::string> names) {
    if (names.empty()) throw Error(ErrorCode::InvalidParams, "free group needs rank >= 1");
    gens_ = GeneratorSet::with_inverses(names);
  }
  static std::shared_ptr<FreeGroupModel> of_rank(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(detail::default_letter_name(i, n));
    return std::make_shared<FreeGroupModel>(std::move(names));
  }

  const GeneratorSet& generators() const override { return gens_; }
  Element identity() const override { return {}; }
  Element act(const Element& g, Letter x) const override {
    Element out = g;
    if (!out.empty() && out.back() == static_cast<std::int64_t>(gens_.inverse(x)))
      out.pop_back();
    else
      out.push_back(x);
    return out;
  }
  std::string describe() const override {
    return "free(" + std::to_string(gens_.size() / 2) + ")";
  }

 private:
  GeneratorSet gens_;
};

/// Finite group from a multiplication table; generator elements are given by
/// index and the set is closed under inverses automatically.
class FiniteGroupModel final : public GroupModel {
 public:
  FiniteGroupModel(std::vector<std::vector<std::size_t>> table,
                   std::vector<std::pair<std::string, std::size_t>> generator_elements)
      : table_(std::move(table)) {
    const std::size_t n = table_.size();
    for (const auto& row : table_)
      if (row.size() != n) throw Error(ErrorCode::InvalidParams, "table must be square");
    identity_ = n;
    for (std::size_t e = 0; e < n && identity_ == n; ++e) {
      bool ok = true;
      for (std::size_t x = 0; x < n && ok; ++x) ok = table_[e][x] == x && table_[x][e] == x;
      if (ok) identity_ = e;
    }
    if (identity_ == n) throw Error(ErrorCode::InvalidParams, "table has no identity");
    auto inv = [&](std::size_t g) {
      for (std::size_t h = 0; h < n; ++h)
        if (table_[g][h] == identity_) return h;
      throw Error(ErrorCode::InvalidParams, "table element without inverse");
    };
    std::vector<Generator> gens;
    for (auto& [name, el] : generator_elements) {
      if (el >= n) throw Error(ErrorCode::InvalidParams, "generator element out of range");
      auto idx = static_cast<Letter>(gens.size());
      gens.push_back({name, idx, el == identity_});
      elements_.push_back(el);
    }
    const std::size_t given = gens.size();
    for (std::size_t i = 0; i < given; ++i) {
      if (gens[i].inverse != i) continue;
      std::size_t target = inv(elements_[i]);
      if (target == elements_[i]) continue;
      bool paired = false;
      for (std::size_t j = i + 1; j < given && !paired; ++j) {
        if (elements_[j] == target && gens[j].inverse == j) {
          gens[i].inverse = static_cast<Letter>(j);
          gens[j].inverse = static_cast<Letter>(i);
          paired = true;
        }
      }
      if (!paired) {
        auto idx = static_cast<Letter>(gens.size());
        gens.push_back({gens[i].name + "^-1", static_cast<Letter>(i), false});
        gens[i].inverse = idx;
        elements_.push_back(target);
      }
    }
    gens_ = GeneratorSet(std::move(gens));
  }

  const GeneratorSet& generators() const override { return gens_; }
  Element identity() const override { return {static_cast<std::int64_t>(identity_)}; }
  Element act(const Element& g, Letter x) const override {
    return {static_cast<std::int64_t>(table_.at(static_cast<std::size_t>(g.at(0))).at(elements_.at(x)))};
  }
  std::string describe() const override {
    return "finite(order " + std::to_string(table_.size()) + ")";
  }
  std::size_t order() const noexcept { return table_.size(); }

 private:
  std::vector<std::vector<std::size_t>> table_;
  std::vector<std::size_t> elements_;
  std::size_t identity_ = 0;
  GeneratorSet gens_;
};

/// Heisenberg group G_n as (α_1..α_n, β_1..β_n, γ) with
/// (α,β,γ)(α',β',γ') = (α+α', β+β', γ+γ'+α·β'). Under [x,y] = x⁻¹y⁻¹xy the
/// generator c equals [a_i, b_i].
class HeisenbergModel final : public GroupModel {
 public:
  explicit HeisenbergModel(std::size_t n) : n_(n) {
    if (n < 1) throw Error(ErrorCode::InvalidParams, "heisenberg needs n >= 1");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(n == 1 ? "a" : "a" + std::to_string(i + 1));
    for (std::size_t i = 0; i < n; ++i) names.push_back(n == 1 ? "b" : "b" + std::to_string(i + 1));
    names.push_back("c");
    gens_ = GeneratorSet::with_inverses(names);
  }

  const GeneratorSet& generators() const override { return gens_; }
  Element identity() const override { return Element(2 * n_ + 1, 0); }
  Element act(const Element& g, Letter x) const override {
    Element out = g;
    std::size_t slot = x / 2;
    std::int64_t s = (x % 2) ? -1 : 1;
    out[slot] += s;
    if (slot >= n_ && slot < 2 * n_) out[2 * n_] += s * g[slot - n_];
    return out;
  }
  std::string describe() const override { return "heisenberg(" + std::to_string(n_) + ")"; }
  std::size_t n() const noexcept { return n_; }

 private:
  std::size_t n_;
  GeneratorSet gens_;
};

/// U_n: n×n unit upper-triangular integer matrices, generated by the
/// elementary matrices x_ij = I + e_ij (i < j). Elements store the entries
/// above the diagonal in row-major order.
class UutModel final : public GroupModel {
 public:
  explicit UutModel(std::size_t n) : n_(n) {
    if (n < 2) throw Error(ErrorCode::InvalidParams, "uut needs n >= 2");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        slot_of_.emplace(std::pair{i, j}, pairs_.size());
        pairs_.push_back({i, j});
        names.push_back(entry_name(i, j));
      }
    gens_ = GeneratorSet::with_inverses(names);
  }

  static std::string entry_name(std::size_t i, std::size_t j) {
    return "x" + std::to_string(i + 1) + std::to_string(j + 1);
  }

  const GeneratorSet& generators() const override { return gens_; }
  Element identity() const override { return Element(pairs_.size(), 0); }
  Element act(const Element& g, Letter x) const override {
    auto [i, j] = pairs_.at(x / 2);
    std::int64_t s = (x % 2) ? -1 : 1;
    Element out = g;
    // Right multiplication by I + s·e_ij adds s·(column i) to column j.
    for (std::size_t r = 0; r < i; ++r) out[slot(r, j)] += s * g[slot(r, i)];
    out[slot(i, j)] += s;
    return out;
  }
  std::string describe() const override { return "uut(" + std::to_string(n_) + ")"; }

  std::size_t n() const noexcept { return n_; }
  std::size_t slot(std::size_t i, std::size_t j) const { return slot_of_.at({i, j}); }
  std::int64_t entry(const Element& g, std::size_t i, std::size_t j) const {
    if (i == j) return 1;
    if (i > j) return 0;
    return g[slot(i, j)];
  }

 private:
  std::size_t n_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot_of_;
  GeneratorSet gens_;
};

/// Free nilpotent class-2 group N_{k,2} on x_1..x_k, with the commutators
/// c_ij = [x_i, x_j] (i < j) included as generators. Normal form
/// x_1^{e_1}…x_k^{e_k} · ∏ c_ij^{m_ij}; element = (e_1..e_k, m_12, m_13, …).
class FreeNilpotent2Model final : public GroupModel {
 public:
  explicit FreeNilpotent2Model(std::size_t k) : k_(k) {
    if (k < 1) throw Error(ErrorCode::InvalidParams, "free_nilpotent2 needs k >= 1");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i) names.push_back("x" + std::to_string(i + 1));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        comm_slot_.emplace(std::pair{i, j}, k + comm_.size());
        comm_.push_back({i, j});
        names.push_back("c" + std::to_string(i + 1) + std::to_string(j + 1));
      }
    gens_ = GeneratorSet::with_inverses(names);
  }

  const GeneratorSet& generators() const override { return gens_; }
  Element identity() const override { return Element(k_ + comm_.size(), 0); }
  Element act(const Element& g, Letter x) const override {
    std::size_t gen = x / 2;
    std::int64_t s = (x % 2) ? -1 : 1;
    Element out = g;
    if (gen < k_) {
      // x_l^e x_j^s = x_j^s x_l^e c_jl^{-s e} for l > j.
      for (std::size_t l = gen + 1; l < k_; ++l) out[comm_slot(gen, l)] -= s * g[l];
      out[gen] += s;
    } else {
      out[gen] += s;
    }
    return out;
  }
  std::string describe() const override { return "free_nilpotent2(" + std::to_string(k_) + ")"; }

  std::size_t k() const noexcept { return k_; }
  std::size_t comm_slot(std::size_t i, std::size_t j) const { return comm_slot_.at({i, j}); }

 private:
  std::size_t k_;
  std::vector<std::pair<std::size_t, std::size_t>> comm_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> comm_slot_;
  GeneratorSet gens_;
};

namespace detail {

inline GeneratorSet merge_generators(const GeneratorSet& a, const GeneratorSet& b) {
  std::vector<Generator> gens = a.all();
  const auto off = static_cast<Letter>(a.size());
  for (auto g : b.all()) {
    if (a.find(g.name))
      throw Error(ErrorCode::AlphabetMismatch, "generator names must be disjoint: " + g.name);
    g.inverse += off;
    gens.push_back(g);
  }
  if (a.identity_letter() && b.identity_letter())
    throw Error(ErrorCode::InvalidGenerators, "both factors carry an identity letter");
  return GeneratorSet(std::move(gens));
}

inline Element join(std::int64_t tag, const Element& a, const Element& b) {
  Element out;
  out.reserve(1 + a.size() + b.size());
  out.push_back(tag);
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline std::pair<Element, Element> split(const Element& g) {
  auto n1 = static_cast<std::size_t>(g.at(0));
  return {Element(g.begin() + 1, g.begin() + 1 + static_cast<std::ptrdiff_t>(n1)),
          Element(g.begin() + 1 + static_cast<std::ptrdiff_t>(n1), g.end())};
}

}  // namespace detail

/// G1 × G2 over the disjoint union of the generating sets (G1's first).
class DirectProductModel final : public GroupModel {
 public:
  DirectProductModel(ModelPtr g1, ModelPtr g2)
      : g1_(std::move(g1)), g2_(std::move(g2)),
        gens_(detail::merge_generators(g1_->generators(), g2_->generators())) {}

  const GeneratorSet& generators() const override { return gens_; }
  Element identity() const override {
    Element e1 = g1_->identity();
    return detail::join(static_cast<std::int64_t>(e1.size()), e1, g2_->identity());
  }
  Element act(const Element& g, Letter x) const override {
    auto [a, b] = detail::split(g);
    const auto n1 = static_cast<Letter>(g1_->generators().size());
    if (x < n1) a = g1_->act(a, x);
    else b = g2_->act(b, x - n1);
    return detail::join(static_cast<std::int64_t>(a.size()), a, b);
  }
  Key key(const Element& g) const override {
    auto [a, b] = detail::split(g);
    Key ka = g1_->key(a);
    return detail::join(static_cast<std::int64_t>(ka.size()), ka, g2_->key(b));
  }
  std::string describe() const override {
    return "direct(" + g1_->describe() + "," + g2_->describe() + ")";
  }

  const GroupModel& first() const { return *g1_; }
  const GroupModel& second() const { return *g2_; }
  std::pair<Element, Element> components(const Element& g) const { return detail::split(g); }

 private:
  ModelPtr g1_, g2_;
  GeneratorSet gens_;
};

/// G1 * G2. Elements are alternating sequences of non-trivial factor
/// elements, encoded as consecutive blocks [factor, size, data...].
class FreeProductModel final : public GroupModel {
 public:
  FreeProductModel(ModelPtr g1, ModelPtr g2)
      : g1_(std::move(g1)), g2_(std::move(g2)),
        gens_(detail::merge_generators(g1_->generators(), g2_->generators())) {}

  const GeneratorSet& generators() const override { return gens_; }
  Element identity() const override { return {}; }

  Element act(const Element& g, Letter x) const override {
    const auto n1 = static_cast<Letter>(g1_->generators().size());
    const int factor = x < n1 ? 0 : 1;
    const GroupModel& m = factor == 0 ? *g1_ : *g2_;
    const Letter local = factor == 0 ? x : x - n1;
    auto blocks = decode(g);
    if (!blocks.empty() && blocks.back().first == factor) {
      Element next = m.act(blocks.back().second, local);
      if (is_identity_element(m, next)) blocks.pop_back();
      else blocks.back().second = std::move(next);
    } else {
      Element next = m.act(m.identity(), local);
      if (!is_identity_element(m, next)) blocks.emplace_back(factor, std::move(next));
    }
    return encode(blocks, false);
  }

  Key key(const Element& g) const override { return encode(decode(g), true); }

  std::string describe() const override {
    return "free_product(" + g1_->describe() + "," + g2_->describe() + ")";
  }

 private:
  using Blocks = std::vector<std::pair<int, Element>>;

  static Blocks decode(const Element& g) {
    Blocks out;
    std::size_t i = 0;
    while (i < g.size()) {
      int f = static_cast<int>(g[i]);
      auto len = static_cast<std::size_t>(g[i + 1]);
      out.emplace_back(f, Element(g.begin() + static_cast<std::ptrdiff_t>(i + 2),
                                  g.begin() + static_cast<std::ptrdiff_t>(i + 2 + len)));
      i += 2 + len;
    }
    return out;
  }

  Element encode(const Blocks& blocks, bool as_key) const {
    Element out;
    for (const auto& [f, el] : blocks) {
      Element v = as_key ? (f == 0 ? g1_->key(el) : g2_->key(el)) : el;
      out.push_back(f);
      out.push_back(static_cast<std::int64_t>(v.size()));
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }

  ModelPtr g1_, g2_;
  GeneratorSet gens_;
};

/// Automorphism action of H-generators on N: (H-letter y, n) ↦ n^y = y⁻¹ n y.
using ActionFn = std::function<Element(Letter, const Element&)>;

/// H ⋉ N with elements written h·n and h₁n₁·h₂n₂ = h₁h₂·n₁^{h₂}n₂.
/// Generators are H's followed by N's.
class SemidirectProductModel final : public GroupModel {
 public:
  SemidirectProductModel(ModelPtr h, ModelPtr n, ActionFn action)
      : h_(std::move(h)), n_(std::move(n)), action_(std::move(action)),
        gens_(detail::merge_generators(h_->generators(), n_->generators())) {}

  const GeneratorSet& generators() const override { return gens_; }
  Element identity() const override {
    Element eh = h_->identity();
    return detail::join(static_cast<std::int64_t>(eh.size()), eh, n_->identity());
  }
  Element act(const Element& g, Letter x) const override {
    auto [hp, np] = detail::split(g);
    const auto nh = static_cast<Letter>(h_->generators().size());
    if (x < nh) {
      hp = h_->act(hp, x);
      np = action_(x, np);
    } else {
      np = n_->act(np, x - nh);
    }
    return detail::join(static_cast<std::int64_t>(hp.size()), hp, np);
  }
  Key key(const Element& g) const override {
    auto [hp, np] = detail::split(g);
    Key kh = h_->key(hp);
    return detail::join(static_cast<std::int64_t>(kh.size()), kh, n_->key(np));
  }
  std::string describe() const override {
    return "semidirect(" + h_->describe() + "," + n_->describe() + ")";
  }

  const ModelPtr& h_model() const noexcept { return h_; }
  const ModelPtr& n_model() const noexcept { return n_; }
  std::pair<Element, Element> components(const Element& g) const { return detail::split(g); }
  Element compose(const Element& h, const Element& n) const {
    return detail::join(static_cast<std::int64_t>(h.size()), h, n);
  }

 private:
  ModelPtr h_, n_;
  ActionFn action_;
  GeneratorSet gens_;
};

/// Integer matrix action of Z = ⟨x⟩ on Z^k: n^x = M n, n^{x⁻¹} = M⁻¹ n.
inline ActionFn linear_z_action(std::vector<std::vector<std::int64_t>> matrix) {
  const std::size_t k = matrix.size();
  for (const auto& row : matrix)
    if (row.size() != k) throw Error(ErrorCode::InvalidParams, "action matrix must be square");
  std::vector<std::vector<std::int64_t>> inverse;
  if (k == 1) {
    if (matrix[0][0] != 1 && matrix[0][0] != -1)
      throw Error(ErrorCode::InvalidParams, "matrix not in GL(1,Z)");
    inverse = matrix;
  } else if (k == 2) {
    std::int64_t det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
    if (det != 1 && det != -1) throw Error(ErrorCode::InvalidParams, "matrix not in GL(2,Z)");
    inverse = {{matrix[1][1] * det, -matrix[0][1] * det}, {-matrix[1][0] * det, matrix[0][0] * det}};
  } else {
    throw Error(ErrorCode::InvalidParams, "linear action supports rank 1 or 2");
  }
  return [matrix, inverse](Letter y, const Element& n) {
    const auto& m = (y % 2) ? inverse : matrix;
    Element out(n.size(), 0);
    for (std::size_t r = 0; r < n.size(); ++r)
      for (std::size_t c = 0; c < n.size(); ++c) out[r] += m[r][c] * n[c];
    return out;
  };
}

/// A new generating set for an existing group: each generator is a word over
/// the base model's generators. Missing inverses are added as `name^-1`.
class WordGeneratedModel final : public GroupModel {
 public:
  struct Spec {
    std::string name;
    Word word;
  };

  WordGeneratedModel(ModelPtr base, std::vector<Spec> specs) : base_(std::move(base)) {
    const GeneratorSet& bg = base_->generators();
    std::vector<Generator> gens;
    std::vector<Key> keys;
    for (auto& s : specs) {
      auto idx = static_cast<Letter>(gens.size());
      gens.push_back({s.name, idx, false});
      keys.push_back(base_->key(evaluate(*base_, s.word)));
      words_.push_back(s.word);
    }
    const Key id = base_->key(base_->identity());
    const std::size_t given = gens.size();
    for (std::size_t i = 0; i < given; ++i) {
      if (gens[i].inverse != i) continue;
      Word inv = inverse_word(bg, words_[i]);
      Key kinv = base_->key(evaluate(*base_, inv));
      if (kinv == keys[i]) continue;
      bool paired = false;
      for (std::size_t j = i + 1; j < given && !paired; ++j) {
        if (gens[j].inverse == j && keys[j] == kinv) {
          gens[i].inverse = static_cast<Letter>(j);
          gens[j].inverse = static_cast<Letter>(i);
          paired = true;
        }
      }
      if (!paired) {
        auto idx = static_cast<Letter>(gens.size());
        gens.push_back({gens[i].name + "^-1", static_cast<Letter>(i), false});
        gens[i].inverse = idx;
        words_.push_back(inv);
        keys.push_back(kinv);
      }
    }
    for (std::size_t i = 0; i < gens.size(); ++i) gens[i].is_identity = keys[i] == id;
    gens_ = GeneratorSet(std::move(gens));
  }

  const GeneratorSet& generators() const override { return gens_; }
  Element identity() const override { return base_->identity(); }
  Element act(const Element& g, Letter x) const override {
    return apply_word(*base_, g, words_.at(x));
  }
  Key key(const Element& g) const override { return base_->key(g); }
  std::string describe() const override { return "regenerated(" + base_->describe() + ")"; }

  const GroupModel& base() const { return *base_; }
  const ModelPtr& base_ptr() const { return base_; }
  const Word& word_of(Letter x) const { return words_.at(x); }
  /// Rewrites a word over this generating set as a word over the base.
  Word expand(const Word& w) const {
    Word out;
    for (Letter x : w) out = concat(std::move(out), words_.at(x));
    return out;
  }

 private:
  ModelPtr base_;
  std::vector<Word> words_;
  GeneratorSet gens_;
};

/// G/N for a finite normal subgroup N (given by words over G's generators).
/// Generators are G's, renamed with a trailing prime and never identified.
/// The key of gN is the least key among its members.
class QuotientModel final : public GroupModel {
 public:
  QuotientModel(ModelPtr base, std::vector<Word> normal_subgroup)
      : base_(std::move(base)), n_words_(std::move(normal_subgroup)) {
    std::vector<Generator> gens = base_->generators().all();
    for (auto& g : gens) g.name += "'";
    gens_ = GeneratorSet(std::move(gens));
  }

  const GeneratorSet& generators() const override { return gens_; }
  Element identity() const override { return base_->identity(); }
  Element act(const Element& g, Letter x) const override { return base_->act(g, x); }
  Key key(const Element& g) const override {
    Key best = base_->key(g);
    for (const auto& w : n_words_) best = std::min(best, base_->key(apply_word(*base_, g, w)));
    return best;
  }
  std::string describe() const override {
    return "quotient(" + base_->describe() + ", |N|=" + std::to_string(n_words_.size()) + ")";
  }
  const GroupModel& base() const { return *base_; }

 private:
  ModelPtr base_;
  std::vector<Word> n_words_;
  GeneratorSet gens_;
};

/// Central extension of an abelian A by H: elements s(h)·a with
/// s(h)s(h') = s(hh')σ(h,h'). Each generator is a pair (optional H-letter, A-vector).
class CentralExtensionModel final : public GroupModel {
 public:
  using Cocycle = std::function<Element(const Element&, const Element&)>;

  struct LetterSpec {
    std::string name;
    std::optional<Letter> h_letter;
    Element a;
  };

  CentralExtensionModel(ModelPtr h, std::shared_ptr<const AbelianModel> a, Cocycle sigma,
                        std::vector<LetterSpec> letters)
      : h_(std::move(h)), a_(std::move(a)), sigma_(std::move(sigma)) {
    const std::size_t given = letters.size();
    std::vector<Generator> gens;
    for (std::size_t i = 0; i < given; ++i) {
      letters[i].a = a_->normalize(letters[i].a);
      gens.push_back({letters[i].name, static_cast<Letter>(i), false});
    }
    specs_ = letters;
    for (std::size_t i = 0; i < given; ++i) {
      if (gens[i].inverse != i) continue;
      LetterSpec inv = inverse_of(specs_[i]);
      if (same(inv, specs_[i])) continue;
      bool paired = false;
      for (std::size_t j = i + 1; j < given && !paired; ++j) {
        if (gens[j].inverse == j && same(inv, specs_[j])) {
          gens[i].inverse = static_cast<Letter>(j);
          gens[j].inverse = static_cast<Letter>(i);
          paired = true;
        }
      }
      if (!paired) {
        auto idx = static_cast<Letter>(gens.size());
        inv.name = specs_[i].name + "^-1";
        gens.push_back({inv.name, static_cast<Letter>(i), false});
        gens[i].inverse = idx;
        specs_.push_back(inv);
      }
    }
    for (std::size_t i = 0; i < specs_.size(); ++i)
      gens[i].is_identity = !specs_[i].h_letter && is_identity_element(*a_, specs_[i].a);
    gens_ = GeneratorSet(std::move(gens));
  }

  const GeneratorSet& generators() const override { return gens_; }
  Element identity() const override {
    Element eh = h_->identity();
    return detail::join(static_cast<std::int64_t>(eh.size()), eh, a_->identity());
  }
  Element act(const Element& g, Letter x) const override {
    auto [hp, ap] = detail::split(g);
    const LetterSpec& s = specs_.at(x);
    if (s.h_letter) {
      Element hx = h_->act(h_->identity(), *s.h_letter);
      ap = a_->add(a_->add(ap, s.a), sigma_(hp, hx));
      hp = h_->act(hp, *s.h_letter);
    } else {
      ap = a_->add(ap, s.a);
    }
    return detail::join(static_cast<std::int64_t>(hp.size()), hp, ap);
  }
  Key key(const Element& g) const override {
    auto [hp, ap] = detail::split(g);
    Key kh = h_->key(hp);
    return detail::join(static_cast<std::int64_t>(kh.size()), kh, ap);
  }
  std::string describe() const override {
    return "central_extension(" + h_->describe() + " by " + a_->describe() + ")";
  }

  const LetterSpec& letter_spec(Letter x) const { return specs_.at(x); }
  std::pair<Element, Element> components(const Element& g) const { return detail::split(g); }

 private:
  LetterSpec inverse_of(const LetterSpec& s) const {
    LetterSpec inv;
    if (!s.h_letter) {
      inv.a = a_->negate(s.a);
      return inv;
    }
    // (x, c)·(x⁻¹, c') = (e, c + c' + σ(x, x⁻¹)).
    Letter xi = h_->generators().inverse(*s.h_letter);
    Element hx = h_->act(h_->identity(), *s.h_letter);
    Element hxi = h_->act(h_->identity(), xi);
    inv.h_letter = xi;
    inv.a = a_->add(a_->negate(s.a), a_->negate(sigma_(hx, hxi)));
    return inv;
  }
  bool same(const LetterSpec& a, const LetterSpec& b) const {
    if (a.h_letter.has_value() != b.h_letter.has_value()) return false;
    if (a.h_letter) {
      Element ea = h_->act(h_->identity(), *a.h_letter);
      Element eb = h_->act(h_->identity(), *b.h_letter);
      if (!equal_in_group(*h_, ea, eb)) return false;
    }
    return a_->normalize(a.a) == a_->normalize(b.a);
  }

  ModelPtr h_;
  std::shared_ptr<const AbelianModel> a_;
  Cocycle sigma_;
  std::vector<LetterSpec> specs_;
  GeneratorSet gens_;
};

}  // namespace comb
