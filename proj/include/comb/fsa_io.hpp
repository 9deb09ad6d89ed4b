#pragma once

// Text formats for automata: a JSON document and Graphviz DOT export.
//
//   {"alphabet": ["a","b"], "states": 2, "initial": [0], "accepting": [1],
//    "transitions": [[0,"a",1], [1,null,0]]}
//
// A null token is an epsilon transition. GSM documents add "output_alphabet"
// and "output", one token list per transition.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "comb/fsa.hpp"
#include "comb/gsm.hpp"

namespace comb {

namespace detail {

inline Symbol token_index(const std::vector<std::string>& alphabet, const std::string& tok) {
  for (Symbol s = 0; s < alphabet.size(); ++s)
    if (alphabet[s] == tok) return s;
  throw Error(ErrorCode::Parse, "unknown token '" + tok + "'");
}

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

inline nlohmann::json fsa_to_json(const Fsa& a) {
  nlohmann::json j;
  j["alphabet"] = a.alphabet();
  j["states"] = a.num_states();
  auto init = nlohmann::json::array(), acc = nlohmann::json::array(),
       tr = nlohmann::json::array();
  for (State q = 0; q < a.num_states(); ++q) {
    if (a.is_initial(q)) init.push_back(q);
    if (a.is_accepting(q)) acc.push_back(q);
    for (const auto& e : a.edges(q)) {
      nlohmann::json tok = e.symbol == kEpsilon ? nlohmann::json(nullptr)
                                                : nlohmann::json(a.alphabet()[e.symbol]);
      tr.push_back({q, tok, e.to});
    }
  }
  j["initial"] = init;
  j["accepting"] = acc;
  j["transitions"] = tr;
  return j;
}

inline Fsa fsa_from_json(const nlohmann::json& j) {
  try {
    Fsa a(j.at("alphabet").get<std::vector<std::string>>());
    auto n = j.at("states").get<std::size_t>();
    for (std::size_t i = 0; i < n; ++i) a.add_state();
    for (const auto& q : j.at("initial")) a.set_initial(q.get<State>());
    for (const auto& q : j.at("accepting")) a.set_accepting(q.get<State>());
    for (const auto& t : j.at("transitions")) {
      if (!t.is_array() || t.size() != 3) throw Error(ErrorCode::Parse, "transition must be [from, token, to]");
      Symbol s = t[1].is_null() ? kEpsilon
                                : detail::token_index(a.alphabet(), t[1].get<std::string>());
      a.add_transition(t[0].get<State>(), s, t[2].get<State>());
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  } catch (const std::out_of_range& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

inline nlohmann::json gsm_to_json(const Gsm& m) {
  nlohmann::json j;
  j["alphabet"] = m.input_alphabet();
  j["output_alphabet"] = m.output_alphabet();
  j["states"] = m.num_states();
  auto init = nlohmann::json::array(), acc = nlohmann::json::array(),
       tr = nlohmann::json::array(), out = nlohmann::json::array();
  for (State q = 0; q < m.num_states(); ++q) {
    if (m.is_initial(q)) init.push_back(q);
    if (m.is_accepting(q)) acc.push_back(q);
  }
  for (const auto& e : m.transitions()) {
    tr.push_back({e.from, m.input_alphabet()[e.input], e.to});
    auto o = nlohmann::json::array();
    for (Symbol s : e.output) o.push_back(m.output_alphabet()[s]);
    out.push_back(o);
  }
  j["initial"] = init;
  j["accepting"] = acc;
  j["transitions"] = tr;
  j["output"] = out;
  return j;
}

inline Gsm gsm_from_json(const nlohmann::json& j) {
  try {
    Gsm m(j.at("alphabet").get<std::vector<std::string>>(),
          j.at("output_alphabet").get<std::vector<std::string>>());
    auto n = j.at("states").get<std::size_t>();
    for (std::size_t i = 0; i < n; ++i) m.add_state();
    for (const auto& q : j.at("initial")) m.set_initial(q.get<State>());
    for (const auto& q : j.at("accepting")) m.set_accepting(q.get<State>());
    const auto& tr = j.at("transitions");
    const auto& out = j.at("output");
    if (tr.size() != out.size()) throw Error(ErrorCode::Parse, "output list must align with transitions");
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const auto& t = tr[i];
      Word o;
      for (const auto& tok : out[i]) o.push_back(detail::token_index(m.output_alphabet(), tok.get<std::string>()));
      m.add_transition(t.at(0).get<State>(), detail::token_index(m.input_alphabet(), t.at(1).get<std::string>()),
                       t.at(2).get<State>(), std::move(o));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

inline std::string to_dot(const Fsa& a, const std::string& name = "fsa") {
  std::ostringstream out;
  out << "digraph " << name << " {\n  rankdir=LR;\n";
  for (State q = 0; q < a.num_states(); ++q) {
    out << "  " << q << " [shape=" << (a.is_accepting(q) ? "doublecircle" : "circle") << "];\n";
    if (a.is_initial(q)) out << "  start" << q << " [shape=point];\n  start" << q << " -> " << q << ";\n";
  }
  for (State q = 0; q < a.num_states(); ++q)
    for (const auto& e : a.edges(q))
      out << "  " << q << " -> " << e.to << " [label=\""
          << (e.symbol == kEpsilon ? std::string("ε") : detail::dot_escape(a.alphabet()[e.symbol]))
          << "\"];\n";
  out << "}\n";
  return out.str();
}

inline Fsa read_fsa_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path);
  try {
    return fsa_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
}

inline void write_fsa_file(const Fsa& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Parse, "cannot write " + path);
  out << fsa_to_json(a).dump(1) << '\n';
}

inline Gsm read_gsm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path);
  try {
    return gsm_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
}

}  // namespace comb
