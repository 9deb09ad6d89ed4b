#pragma once

// Bounded-ball combing audits: coverage of a Cayley ball, fellow-traveller
// sweeps over neighbouring representatives, and language flags.

#include <algorithm>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "comb/language.hpp"
#include "comb/travel.hpp"

namespace comb {

struct LanguageFlags {
  bool bijective = false;
  bool prefix_closed = false;
  bool geodesic = false;
  int near_geodesic_slack = 0;  ///< max over the slice of l(w) − l_G(w)
};

struct Violation {
  Word v, w;
  std::optional<Letter> x;  ///< nullopt stands for e
  bool left = false;        ///< pair (x·v, w) of the bicombing condition
  std::string reason;
};

struct VerificationReport {
  CombingType type;
  int radius = 0;
  std::size_t len_bound = 0;
  std::size_t words = 0;
  std::size_t pairs = 0;
  int empirical_K = 0;
  std::optional<int> empirical_M;
  LanguageFlags flags;
  bool coverage_ok = true;
  std::size_t violation_count = 0;
  std::vector<Violation> violations;  ///< first `kMaxStored` only

  static constexpr std::size_t kMaxStored = 200;

  bool pass() const noexcept { return violation_count == 0; }
};

struct VerifyOptions {
  unsigned threads = 1;
  std::size_t ball_limit = kDefaultBallLimit;
};

/// Flags decided on the slice `words` (all members of length <= bound).
inline LanguageFlags classify_flags(const std::vector<Word>& words, const Language& language,
                                    const GroupModel& model) {
  LanguageFlags f;
  f.bijective = true;
  f.prefix_closed = true;
  f.geodesic = true;
  KeySet seen;
  DistanceOracle oracle(model);
  for (const auto& w : words) {
    Element g = evaluate(model, w);
    if (!seen.insert(model.key(g)).second) f.bijective = false;
    auto lg = oracle.norm(g, static_cast<int>(w.size()));
    int slack = static_cast<int>(w.size()) - (lg ? *lg : static_cast<int>(w.size()));
    if (slack > 0) f.geodesic = false;
    f.near_geodesic_slack = std::max(f.near_geodesic_slack, slack);
    if (f.prefix_closed)
      for (std::size_t t = 0; t < w.size(); ++t)
        if (!language.member(prefix(w, t))) {
          f.prefix_closed = false;
          break;
        }
  }
  return f;
}

inline LanguageFlags classify_flags(const Language& language, const GroupModel& model,
                                    std::size_t len_bound) {
  if (len_bound < 1) throw Error(ErrorCode::InvalidParams, "lenBound must be >= 1");
  return classify_flags(language.enumerate(len_bound), language, model);
}

namespace detail {

struct SweepResult {
  std::size_t pairs = 0;
  int k = 0;
  std::optional<int> m;
  std::size_t violation_count = 0;
  std::vector<Violation> violations;

  void add(Violation v) {
    ++violation_count;
    if (violations.size() < VerificationReport::kMaxStored) violations.push_back(std::move(v));
  }
};

/// Measures one pair under the claimed synchronicity.
inline void measure_pair(DistanceOracle& oracle, const CombingSpec& spec, const Word& v,
                         const Word& w, std::optional<Letter> x, bool left, SweepResult& out) {
  ++out.pairs;
  const auto sync = spec.claimed.sync;
  const auto& params = spec.params;
  int k = 0;
  if (sync == Synchronicity::Synchronous) {
    k = sync_kmin(oracle, v, w);
  } else {
    k = async_kmin(oracle, v, w).first;
  }
  out.k = std::max(out.k, k);
  if (params && k > params->K) {
    std::ostringstream r;
    r << (sync == Synchronicity::Synchronous ? "sync" : "async") << " distance " << k << " > K="
      << params->K;
    out.add({v, w, x, left, r.str()});
    return;
  }
  if (sync == Synchronicity::Bounded) {
    int at = params ? params->K : k;
    DistanceGrid grid(oracle, v, w, at + 1);
    auto m = bounded_mmin(grid, at);
    if (m) out.m = std::max(out.m.value_or(1), *m);
    if (params && params->M && (!m || *m > *params->M)) {
      std::ostringstream r;
      r << "no path with K=" << at << " and M=" << *params->M;
      out.add({v, w, x, left, r.str()});
    }
  }
}

}  // namespace detail

/// Bounded-ball audit of a combing spec. Pairs are found by bucketing the
/// enumerated words by element key.
inline VerificationReport verify(const CombingSpec& spec, int radius, std::size_t len_bound,
                                 const VerifyOptions& opt = {}) {
  spec.validate();
  if (radius < 1) throw Error(ErrorCode::InvalidParams, "radius must be >= 1");
  if (len_bound < static_cast<std::size_t>(radius))
    throw Error(ErrorCode::InvalidParams, "lenBound must be >= radius");
  const GroupModel& model = *spec.model;
  const GeneratorSet& gens = model.generators();
  VerificationReport rep;
  rep.type = spec.claimed;
  rep.radius = radius;
  rep.len_bound = len_bound;

  std::vector<Word> words = spec.language.enumerate(len_bound);
  rep.words = words.size();
  std::vector<Element> elems;
  std::vector<Key> keys;
  KeyMap<std::vector<std::size_t>> buckets;
  elems.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    elems.push_back(evaluate(model, words[i]));
    keys.push_back(model.key(elems.back()));
    buckets[keys.back()].push_back(i);
  }

  detail::SweepResult total;
  Ball b = ball(model, radius, opt.ball_limit);
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!buckets.count(b[i].key)) {
      rep.coverage_ok = false;
      total.add({b.geodesic(i), {}, std::nullopt, false,
                 "coverage: element " + format_key(b[i].key) + " has no representative"});
    }
  }

  const auto n = static_cast<Letter>(gens.size());
  const Element e = model.identity();
  auto sweep = [&](std::size_t begin, std::size_t step, detail::SweepResult& out) {
    DistanceOracle oracle(model);
    for (std::size_t i = begin; i < words.size(); i += step) {
      // w = v (different words for one element).
      for (std::size_t j : buckets.at(keys[i]))
        if (j > i) detail::measure_pair(oracle, spec, words[i], words[j], std::nullopt, false, out);
      // w = v·x; each unordered pair once, all measures being symmetric.
      for (Letter x = 0; x < n; ++x) {
        if (gens.is_identity(x)) continue;
        auto it = buckets.find(model.key(model.act(elems[i], x)));
        if (it == buckets.end()) continue;
        for (std::size_t j : it->second)
          if (j > i) detail::measure_pair(oracle, spec, words[i], words[j], x, false, out);
      }
      if (!spec.claimed.two_sided) continue;
      // w = x·v, comparing the word x·v against w.
      for (Letter x = 0; x < n; ++x) {
        if (gens.is_identity(x)) continue;
        Element xv = apply_word(model, model.act(e, x), words[i]);
        auto it = buckets.find(model.key(xv));
        if (it == buckets.end()) continue;
        Word xw = concat(Word{x}, words[i]);
        for (std::size_t j : it->second)
          if (words[j] != xw) detail::measure_pair(oracle, spec, xw, words[j], x, true, out);
      }
    }
  };

  const unsigned threads = std::max(1u, opt.threads);
  std::vector<detail::SweepResult> parts(threads);
  if (threads == 1) {
    sweep(0, 1, parts[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] { sweep(t, threads, parts[t]); });
    for (auto& th : pool) th.join();
  }
  for (auto& p : parts) {
    total.pairs += p.pairs;
    total.k = std::max(total.k, p.k);
    if (p.m) total.m = std::max(total.m.value_or(1), *p.m);
    total.violation_count += p.violation_count;
    for (auto& v : p.violations)
      if (total.violations.size() < VerificationReport::kMaxStored) total.violations.push_back(std::move(v));
  }
  rep.pairs = total.pairs;
  rep.empirical_K = total.k;
  rep.empirical_M = total.m;
  if (spec.claimed.sync == Synchronicity::Bounded && !rep.empirical_M) rep.empirical_M = 1;
  rep.violation_count = total.violation_count;
  rep.violations = std::move(total.violations);
  rep.flags = classify_flags(words, spec.language, model);
  return rep;
}

struct ReportMeta {
  std::string group;
  std::string language;
  std::optional<std::string> timestamp;
};

/// Plain structured text: a key/value block and a violation table.
inline std::string format_report(const VerificationReport& r, const GeneratorSet& gens,
                                 const ReportMeta& meta, const std::optional<FellowTravelParams>& params) {
  std::ostringstream out;
  out << "# combing verification report\n";
  if (meta.timestamp) out << "# generated " << *meta.timestamp << "\n";
  auto b = [](bool v) { return v ? "true" : "false"; };
  out << "group = " << meta.group << "\n";
  out << "language = " << meta.language << "\n";
  out << "type = " << r.type.to_string() << "\n";
  out << "radius = " << r.radius << "\n";
  out << "len_bound = " << r.len_bound << "\n";
  if (params) {
    out << "params.K = " << params->K << "\n";
    if (params->M) out << "params.M = " << *params->M << "\n";
    if (params->epsilon) out << "params.epsilon = " << *params->epsilon << "\n";
  }
  out << "words = " << r.words << "\n";
  out << "pairs = " << r.pairs << "\n";
  out << "empirical_K = " << r.empirical_K << "\n";
  if (r.empirical_M) out << "empirical_M = " << *r.empirical_M << "\n";
  out << "flags.bijective = " << b(r.flags.bijective) << "\n";
  out << "flags.prefix_closed = " << b(r.flags.prefix_closed) << "\n";
  out << "flags.geodesic = " << b(r.flags.geodesic) << "\n";
  out << "flags.near_geodesic_slack = " << r.flags.near_geodesic_slack << "\n";
  out << "coverage_ok = " << b(r.coverage_ok) << "\n";
  out << "violations = " << r.violation_count << "\n";
  out << "verdict = " << (r.pass() ? "pass" : "fail") << "\n";
  if (!r.violations.empty()) {
    out << "\n[violations]\n";
    out << "side\tv\tw\tx\treason\n";
    for (const auto& v : r.violations) {
      out << (v.left ? "left" : "right") << '\t' << gens.format(v.v) << '\t' << gens.format(v.w)
          << '\t' << (v.x ? gens.name(*v.x) : std::string("e")) << '\t' << v.reason << "\n";
    }
    if (r.violation_count > r.violations.size())
      out << "... " << (r.violation_count - r.violations.size()) << " more\n";
  }
  return out.str();
}

}  // namespace comb
