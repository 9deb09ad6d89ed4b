// comb: command-line driver for groups, automata, fellow travelling,
// combing verification, constructions and the word problem.
//
// Exit status: 0 on success or pass, 1 on a failed verification, 2 on
// usage or configuration errors. Decisions print their answer and exit 0.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "comb/comb.hpp"

using namespace comb;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2;

/// Words on the command line: space-separated tokens, `1` for the empty word.
Word parse_word(const GeneratorSet& g, const std::string& text) {
  auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && text.substr(first, text.find_last_not_of(" \t") - first + 1) == "1") return {};
  return g.parse(text);
}

std::string show_word(const GeneratorSet& g, const Word& w) { return w.empty() ? "1" : g.format(w); }

std::vector<std::string> fsa_word_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string t; in >> t;) out.push_back(t);
  if (out.size() == 1 && out[0] == "1") out.clear();
  return out;
}

Word fsa_word(const Fsa& a, const std::string& text) {
  Word w;
  for (const auto& t : fsa_word_tokens(text)) w.push_back(detail::token_index(a.alphabet(), t));
  return w;
}

std::string show_fsa_word(const Fsa& a, const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (Symbol x : w) s += (s.empty() ? "" : " ") + a.alphabet()[x];
  return s;
}

/// `builtin:NAME` or the path of an automaton over the group's generators.
CombingSpec load_combing(const std::string& group, const std::string& language) {
  if (language.starts_with("builtin:")) return builtin_combing(language.substr(8), group);
  if (!std::filesystem::exists(language))
    throw Error(ErrorCode::InvalidParams, "language must be builtin:NAME or an existing file: " + language);
  ModelPtr model = builtin_group(group);
  Fsa a = with_alphabet(read_fsa_file(language), model->generators().names());
  Language l = Language::from_fsa(model->generators(), std::move(a), std::filesystem::path(language).filename());
  return {std::move(l), model, {}, std::nullopt};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidParams, "cannot write " + path);
  out << text;
}

void write_fsa(const Fsa& a, const std::string& path, bool dot) {
  if (dot) write_text(path, to_dot(a));
  else write_text(path, fsa_to_json(a).dump(2) + "\n");
}

std::string utc_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct Common {
  unsigned threads = 1;
  bool no_timestamp = false;
  std::string output;
};

struct VerifyArgs {
  std::string group, language, type = "async";
  int radius = 2;
  std::size_t len = 6;
  std::optional<int> k, m;
};

int run_verify(const Common& c, const CombingSpec& base, const VerifyArgs& a, const std::string& group_label,
               const std::string& language_label) {
  CombingSpec spec = base;
  spec.claimed = CombingType::parse(a.type);
  if (a.k) spec.params = FellowTravelParams{*a.k, a.m, std::nullopt};
  else if (a.m) throw Error(ErrorCode::InvalidParams, "--M needs --K");
  auto r = verify(spec, a.radius, a.len, {c.threads});
  ReportMeta meta{group_label, language_label, std::nullopt};
  if (!c.no_timestamp) meta.timestamp = utc_timestamp();
  write_text(c.output, format_report(r, spec.model->generators(), meta, spec.params));
  return r.pass() && r.coverage_ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combings of groups: build, verify, solve, inspect, export."};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value configuration file; [section] names a subcommand");
  Common c;
  app.add_option("--threads", c.threads, "worker threads for sweeps")->check(CLI::Range(1u, 256u));

  // group ball
  auto* group = app.add_subcommand("group", "inspect a built-in group");
  group->require_subcommand(1);
  auto* gball = group->add_subcommand("ball", "sphere sizes of the Cayley ball");
  std::string g_id;
  int g_radius = 3;
  bool g_list = false;
  gball->add_option("--group", g_id, "group id, e.g. heisenberg:1 or direct(free:1,cyclic:3)")->required();
  gball->add_option("--radius", g_radius)->check(CLI::NonNegativeNumber);
  gball->add_flag("--list", g_list, "print a geodesic word for every element");

  // fsa <op>
  auto* fsa = app.add_subcommand("fsa", "operations on automaton files");
  fsa->require_subcommand(1);
  std::string f_out;
  bool f_dot = false;
  std::vector<std::string> f_files;
  std::string f_word;
  std::size_t f_len = 6;
  const std::vector<std::pair<std::string, int>> fsa_ops{
      {"union", 2},   {"intersect", 2},  {"concat", 2},    {"star", 1},     {"plus", 1},      {"complement", 1},
      {"determinize", 1}, {"trim", 1}, {"equivalent", 2}, {"empty", 1}, {"finite", 1}, {"accepts", 1},
      {"enumerate", 1}, {"dot", 1}};
  for (const auto& [name, arity] : fsa_ops) {
    auto* s = fsa->add_subcommand(name);
    s->add_option("files", f_files, "automaton files")->required()->expected(arity)->check(CLI::ExistingFile);
    s->add_option("-o,--output", f_out, "output path (default stdout)");
    s->add_flag("--dot", f_dot, "write Graphviz DOT instead of JSON");
    if (name == "accepts") s->add_option("-w,--word", f_word, "space-separated tokens, 1 for empty")->required();
    if (name == "enumerate") s->add_option("--len", f_len);
  }

  // travel kmin
  auto* travel = app.add_subcommand("travel", "fellow-traveller distances");
  travel->require_subcommand(1);
  auto* kmin = travel->add_subcommand("kmin", "least K for which two words fellow travel");
  std::string t_group, t_v, t_w, t_type = "async";
  kmin->add_option("--group", t_group)->required();
  kmin->add_option("-v", t_v, "first word")->required();
  kmin->add_option("-w", t_w, "second word")->required();
  kmin->add_option("--type", t_type, "sync or async")->check(CLI::IsMember({"sync", "async"}));

  // verify
  auto* ver = app.add_subcommand("verify", "empirically verify a combing on a ball");
  VerifyArgs va;
  ver->add_option("--group", va.group)->required();
  ver->add_option("--language", va.language, "builtin:NAME or automaton file")->required();
  ver->add_option("--type", va.type, "sync|bounded|async[-combing|-bicombing]");
  ver->add_option("--radius", va.radius)->check(CLI::NonNegativeNumber);
  ver->add_option("--len", va.len);
  ver->add_option("--K", va.k, "claimed fellow-traveller constant");
  ver->add_option("--M", va.m, "claimed bounded-asynchrony constant");
  ver->add_flag("--no-timestamp", c.no_timestamp);
  ver->add_option("-o,--output", c.output, "report path (default stdout)");

  // build <construction>
  auto* build = app.add_subcommand("build", "run a combing construction");
  build->require_subcommand(1);
  std::string b_group, b_language, b_group2, b_language2, b_out, b_type = "async";
  int b_k = 2;
  std::optional<int> b_radius;
  std::size_t b_len = 6;
  auto common_build = [&](CLI::App* s, bool two) {
    s->add_option("--group", b_group)->required();
    s->add_option("--language", b_language)->required();
    if (two) {
      s->add_option("--group2", b_group2)->required();
      s->add_option("--language2", b_language2)->required();
    }
    s->add_option("-o,--output", b_out, "automaton output path");
    s->add_option("--verify-radius", b_radius, "verify the result at its promised type");
    s->add_option("--len", b_len);
    s->add_flag("--no-timestamp", c.no_timestamp);
  };
  auto* bij = build->add_subcommand("bijectivize", "keep shortlex-least representatives");
  common_build(bij, false);
  bij->add_option("-k", b_k, "fellow-traveller constant of the difference machine");
  auto* fp = build->add_subcommand("free-product", "alternating blocks of two combings");
  common_build(fp, true);
  fp->add_option("--type", b_type);
  auto* dp = build->add_subcommand("direct-product", "concatenation of two combings");
  common_build(dp, true);

  // star-check
  auto* star_cmd = app.add_subcommand("star-check", "condition (*) for a split extension");
  std::string s_split = "sol";
  int s_radius = 3;
  std::size_t s_len = 64;
  star_cmd->add_option("--split", s_split, "sol, heisenberg:N, uut:N or free_nilpotent2:K");
  star_cmd->add_option("--radius", s_radius)->check(CLI::PositiveNumber);
  star_cmd->add_option("--len", s_len);

  // wp
  auto* wp = app.add_subcommand("wp", "decide whether a word is trivial");
  std::string w_group, w_language = "builtin:auto", w_word;
  int w_k = 2;
  bool w_normal = false;
  wp->add_option("--group", w_group)->required();
  wp->add_option("--language", w_language);
  wp->add_option("-w,--word", w_word)->required();
  wp->add_option("-k", w_k, "fellow-traveller constant");
  wp->add_flag("--normal-form", w_normal, "print the normal form instead of deciding triviality");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*gball) {
      ModelPtr m = builtin_group(g_id);
      Ball b = ball(*m, g_radius);
      std::vector<std::size_t> sphere(g_radius + 1);
      for (const auto& e : b.entries()) ++sphere[e.distance];
      std::cout << "group = " << g_id << "\nradius = " << g_radius << "\nsize = " << b.size() << "\nspheres =";
      for (auto s : sphere) std::cout << ' ' << s;
      std::cout << "\n";
      if (g_list)
        for (std::size_t i = 0; i < b.size(); ++i) std::cout << show_word(m->generators(), b.geodesic(i)) << "\n";
      return kPass;
    }
    if (*fsa) {
      std::string op = fsa->get_subcommands().front()->get_name();
      Fsa a = read_fsa_file(f_files.at(0));
      std::optional<Fsa> b;
      if (f_files.size() > 1) b = read_fsa_file(f_files[1]);
      auto emit = [&](const Fsa& r) {
        write_fsa(r, f_out, f_dot);
        return kPass;
      };
      auto verdict = [](bool v) {
        std::cout << (v ? "true" : "false") << "\n";
        return kPass;
      };
      if (op == "union") return emit(regular_combine(CombineOp::Union, a, &*b));
      if (op == "intersect") return emit(regular_combine(CombineOp::Intersection, a, &*b));
      if (op == "concat") return emit(regular_combine(CombineOp::Concatenation, a, &*b));
      if (op == "star") return emit(regular_combine(CombineOp::Star, a));
      if (op == "plus") return emit(regular_combine(CombineOp::Plus, a));
      if (op == "complement") return emit(regular_combine(CombineOp::Complement, a));
      if (op == "determinize") return emit(trim(determinize(a)));
      if (op == "trim") return emit(trim(a));
      if (op == "dot") {
        write_text(f_out, to_dot(a));
        return kPass;
      }
      if (op == "equivalent") return verdict(regular_decide(DecideOp::Equivalent, a, nullptr, &*b));
      if (op == "empty") return verdict(regular_decide(DecideOp::Empty, a));
      if (op == "finite") return verdict(regular_decide(DecideOp::Finite, a));
      if (op == "accepts") {
        Word w = fsa_word(a, f_word);
        return verdict(regular_decide(DecideOp::Member, a, &w));
      }
      if (op == "enumerate") {
        std::string text;
        for (const auto& w : enumerate(a, f_len)) text += show_fsa_word(a, w) + "\n";
        write_text(f_out, text);
        return kPass;
      }
    }
    if (*kmin) {
      ModelPtr m = builtin_group(t_group);
      const GeneratorSet& g = m->generators();
      Word v = parse_word(g, t_v), w = parse_word(g, t_w);
      if (t_type == "sync") {
        std::cout << "K = " << sync_kmin(*m, v, w) << "\n";
      } else {
        auto [k, witness] = async_kmin(*m, v, w);
        std::cout << "K = " << k << "\npath =";
        for (const auto& [i, j] : witness.path) std::cout << " (" << i << "," << j << ")";
        std::cout << "\n";
      }
      return kPass;
    }
    if (*ver) return run_verify(c, load_combing(va.group, va.language), va, va.group, va.language);
    if (*build) {
      CLI::App* sub = build->get_subcommands().front();
      CombingSpec a = load_combing(b_group, b_language);
      CombingSpec result;
      std::vector<CombingType> promised;
      std::string label = sub->get_name() + "(" + b_language + ")";
      if (sub == bij) {
        result = {bijectivize_shortlex(a.language, a.model, b_k), a.model, {}, std::nullopt};
        promised = {a.claimed};
      } else {
        CombingSpec bs = load_combing(b_group2, b_language2);
        ModelPtr b_model = detail::disjoint_names(a.model, bs.model);
        std::vector<Letter> id(bs.language.alphabet.size());
        for (Letter x = 0; x < id.size(); ++x) id[x] = x;
        Language lb = relabel_language(bs.language, b_model->generators(), id, bs.language.name);
        lb.lookup = bs.language.lookup;
        ProductResult r = sub == fp ? free_product(a.language, lb, a.model, b_model, 4, CombingType::parse(b_type))
                                    : direct_product(a.language, lb, a.model, b_model, a.claimed, bs.claimed,
                                                     a.claimed.sync == Synchronicity::Synchronous);
        result = {r.language, r.model, {}, std::nullopt};
        promised = r.promised;
        label = sub->get_name() + "(" + b_language + "," + b_language2 + ")";
      }
      if (!b_out.empty()) {
        if (!result.language.carrier) throw Error(ErrorCode::NotRegular, "result has no automaton to write");
        write_fsa(*result.language.carrier, b_out, b_out.ends_with(".dot"));
      }
      std::cout << "language = " << result.language.name << "\npromised =";
      for (const auto& t : promised) std::cout << ' ' << t.to_string();
      std::cout << "\n";
      if (!b_radius) return kPass;
      int status = kPass;
      for (const auto& t : promised) {
        VerifyArgs args{"", "", t.to_string(), *b_radius, b_len, std::nullopt, std::nullopt};
        status = std::max(status, run_verify(c, result, args, b_group + "|" + b_group2, label));
      }
      return status;
    }
    if (*star_cmd) {
      auto head = s_split.substr(0, s_split.find(':'));
      auto n = [&] {
        auto p = s_split.find(':');
        if (p == std::string::npos) throw Error(ErrorCode::InvalidParams, "missing parameter in " + s_split);
        return static_cast<std::size_t>(detail::parse_int(s_split.substr(p + 1), s_split));
      };
      SplitAssembly s = head == "sol"               ? sol_split()
                        : head == "heisenberg"      ? heisenberg_split(n())
                        : head == "uut"             ? uut_split(n())
                        : head == "free_nilpotent2" ? free_nilpotent2_split(n())
                                                    : throw Error(ErrorCode::InvalidParams, "unknown split " + s_split);
      StarReport r = check_condition_star(s.l_n, s.action, s_radius, s_len);
      const GeneratorSet& ng = s.action.n_model->generators();
      std::cout << "split = " << s_split << "\nradius = " << s_radius << "\nchecked = " << r.checked
                << "\nmax_K = " << r.max_K << "\n";
      if (r.worst_rep) {
        std::cout << "worst.rep = " << show_word(ng, *r.worst_rep) << "\nworst.y = "
                  << s.action.h_model->generators().name(*r.worst_y) << "\nworst.image = "
                  << show_word(ng, *r.worst_image) << "\n";
      }
      return kPass;
    }
    if (*wp) {
      CombingSpec spec = load_combing(w_group, w_language);
      WpContext ctx(spec, w_k);
      Word w = parse_word(spec.model->generators(), w_word);
      if (w_normal) {
        std::cout << show_word(spec.model->generators(), reduce_to_normal(ctx, w)) << "\n";
        return kPass;
      }
      bool trivial = is_trivial(ctx, w);
      std::cout << (trivial ? "trivial" : "nontrivial") << "\n";
      return kPass;
    }
  } catch (const Error& e) {
    std::cerr << "comb: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "comb: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
