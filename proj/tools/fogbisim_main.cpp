// Command-line front end; talks to the library only through fogbisim.h.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "fogbisim.h"

using Json = nlohmann::ordered_json;

namespace {

enum Exit : int { kOk = 0, kInternal = 1, kUndecided = 2, kBudget = 3, kInput = 4 };

struct Failure {
  int code;
  std::string message;
};

int exit_for(fb_status s) {
  switch (s) {
    case FB_OK: return kOk;
    case FB_ERR_BUDGET: return kBudget;
    case FB_ERR_INPUT:
    case FB_ERR_PRECONDITION:
    case FB_ERR_ARGUMENT: return kInput;
    default: return kInternal;
  }
}

void check(fb_status s) {
  if (s != FB_OK) throw Failure{exit_for(s), fb_last_error()};
}

std::string take(char* s) {
  std::string out(s ? s : "");
  fb_free(s);
  return out;
}

Json take_json(char* s) { return Json::parse(take(s)); }

struct GrammarDel {
  void operator()(fb_grammar* g) const { fb_grammar_free(g); }
};
struct PdsDel {
  void operator()(fb_pds* m) const { fb_pds_free(m); }
};
using GrammarPtr = std::unique_ptr<fb_grammar, GrammarDel>;
using PdsPtr = std::unique_ptr<fb_pds, PdsDel>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kInput, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// First word outside comments: "grammar" or "pds".
std::string model_kind(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ws(line);
    std::string w;
    if (ws >> w) return w;
  }
  return "";
}

struct Model {
  GrammarPtr grammar;
  PdsPtr pds;
};

Model load(const std::string& path) {
  const std::string text = read_file(path);
  Model m;
  const auto kind = model_kind(text);
  if (kind == "pds") {
    fb_pds* p = nullptr;
    check(fb_pds_parse(text.c_str(), &p));
    m.pds.reset(p);
  } else {
    fb_grammar* g = nullptr;
    check(fb_grammar_parse(text.c_str(), &g));
    m.grammar.reset(g);
  }
  return m;
}

fb_grammar* need_grammar(const Model& m, const char* cmd) {
  if (!m.grammar) throw Failure{kInput, std::string(cmd) + " needs a grammar file"};
  return m.grammar.get();
}

std::string join(const Json& arr, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (i) out += sep;
    out += arr[i].is_string() ? arr[i].get<std::string>() : arr[i].dump();
  }
  return out;
}

std::string var_set(const Json& vars) {
  std::string out = "{";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ",";
    out += "x" + vars[i].dump();
  }
  return out + "}";
}

std::string yes(const Json& b) { return b.get<bool>() ? "yes" : "no"; }

// Options shared by every subcommand, after merging the config file.
struct RunConfig {
  bool json = false;
  std::uint64_t budget = 0;
  std::uint64_t cap = 8;
  std::string vars = "dead";
  std::string config_path;
};

fb_var_mode var_mode(const RunConfig& rc) {
  if (rc.vars == "dead") return FB_VARS_DEAD;
  if (rc.vars == "loop") return FB_VARS_LOOP;
  throw Failure{kInput, "--vars must be dead or loop"};
}

// Values in the config file override the corresponding flags.
void merge_config(RunConfig& rc) {
  if (rc.config_path.empty()) return;
  Json j;
  try {
    j = Json::parse(read_file(rc.config_path));
  } catch (const Json::exception& e) {
    throw Failure{kInput, rc.config_path + ": " + e.what()};
  }
  if (!j.is_object()) throw Failure{kInput, rc.config_path + ": expected a JSON object"};
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "json") {
        rc.json = value.get<bool>();
      } else if (key == "budget") {
        rc.budget = value.get<std::uint64_t>();
      } else if (key == "cap") {
        rc.cap = value.get<std::uint64_t>();
      } else if (key == "vars") {
        rc.vars = value.get<std::string>();
      } else {
        throw Failure{kInput, rc.config_path + ": unknown key '" + key + "'"};
      }
    }
  } catch (const Json::exception& e) {
    throw Failure{kInput, rc.config_path + ": " + e.what()};
  }
}

void print_json(const std::string& command, const Json& body) {
  Json out{{"command", command}};
  for (const auto& [k, v] : body.items()) out[k] = v;
  std::cout << out.dump(2) << '\n';
}

void print_lines(const Json& lines) {
  for (const auto& row : lines) std::cout << row["key"].get<std::string>() << '=' << row["value"].get<std::string>() << '\n';
}

int level_exit(const Json& r) { return r["result"] == "Finite" ? kOk : kUndecided; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bisimulation workbench for first-order grammars and pushdown systems"};
  app.require_subcommand(1);
  RunConfig rc;
  if (const char* env = std::getenv("FOGBISIM_BUDGET")) {
    try {
      rc.budget = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "fogbisim: error: FOGBISIM_BUDGET must be a positive integer\n";
      return kInput;
    }
  }
  app.add_flag("--json", rc.json, "Print JSON instead of text");
  app.add_option("--budget", rc.budget, "Exploration budget (default: FOGBISIM_BUDGET or the library default)");
  app.add_option("--config", rc.config_path, "JSON file with json/budget/cap/vars; its values win over flags");

  std::string file, left, right, word, trace_path, out_path;

  auto* validate = app.add_subcommand("validate", "Check a grammar or pds file");
  validate->add_option("file", file)->required();

  auto* measure = app.add_subcommand("measure", "Sizes, heights and variables of terms");
  measure->add_option("file", file)->required();
  measure->add_option("term", left)->required();
  measure->add_option("other", right);

  auto* step = app.add_subcommand("step", "Terms reachable by a word");
  step->add_option("file", file)->required();
  step->add_option("term", left)->required();
  step->add_option("word", word)->required();
  step->add_option("--vars", rc.vars, "Variables: dead or loop");

  bool certificate = false;
  auto* el = app.add_subcommand("el", "Bounded equivalence level (weak level for pds files)");
  el->add_option("file", file)->required();
  el->add_option("left", left)->required();
  el->add_option("right", right)->required();
  el->add_option("--cap", rc.cap, "Largest level explored");
  el->add_option("--vars", rc.vars, "Variables: dead or loop");
  el->add_flag("--certificate", certificate, "Attach a Spoiler strategy to Finite results");

  auto* decide = app.add_subcommand("decide", "Exact decision over a finite reachable space");
  decide->add_option("file", file)->required();
  decide->add_option("left", left)->required();
  decide->add_option("right", right)->required();
  decide->add_option("--vars", rc.vars, "Variables: dead or loop");

  auto* constants = app.add_subcommand("constants", "Grammatical constants");
  constants->add_option("file", file)->required();

  fb_basis_params bp;
  fb_basis_params_init(&bp);
  std::string s_text = "1", g_text = "0", c_text = "1";
  bool effective = false, subtract = false, verify = false, show_trace = false;
  std::uint64_t pairs_budget = 0;
  auto* basis = app.add_subcommand("basis", "Run the candidate-basis procedure");
  basis->add_option("file", file)->required();
  basis->add_option("--n", bp.n, "Largest variable count")->default_val(0);
  basis->add_option("--s", s_text, "Size bound s")->default_val("1");
  basis->add_option("--g", g_text, "Size increment g")->default_val("0");
  basis->add_option("--c", c_text, "Level constant c")->default_val("1");
  basis->add_flag("--effective", effective, "Use the effective level oracle");
  basis->add_flag("--subtract-above", subtract, "Rebuild lower worklists against every higher one");
  basis->add_flag("--verify", verify, "Check fullness (exact) or completeness (effective)");
  basis->add_option("--pairs-budget", pairs_budget, "Largest pair set to enumerate");
  basis->add_option("--trace", trace_path, "Write the iteration trace to a file");
  basis->add_flag("--show-trace", show_trace, "Print the iteration trace");

  std::string direction;
  auto* translate = app.add_subcommand("translate", "pds2gram or gram2pds");
  translate->add_option("direction", direction)->required()->check(CLI::IsMember({"pds2gram", "gram2pds"}));
  translate->add_option("file", file)->required();
  translate->add_option("-o,--output", out_path, "Write the model here instead of stdout");

  auto* ordinal = app.add_subcommand("ordinal", "Ordinals below w^w and their hierarchies");
  ordinal->require_subcommand(1);
  std::string alpha, x_text = "0", control = "succ";
  std::uint32_t dn = 0;
  std::uint64_t dn0 = 0;
  auto* o_info = ordinal->add_subcommand("info", "Normal form, norm and kind");
  o_info->add_option("alpha", alpha)->required();
  auto* o_fund = ordinal->add_subcommand("fund", "Fundamental sequence element alpha(x)");
  o_fund->add_option("alpha", alpha)->required();
  o_fund->add_option("x", x_text)->required();
  auto* o_hardy = ordinal->add_subcommand("hardy", "Hardy and Cichon functions");
  o_hardy->add_option("alpha", alpha)->required();
  o_hardy->add_option("x", x_text)->required();
  o_hardy->add_option("--control", control, "succ, double, square or exp");
  auto* o_descent = ordinal->add_subcommand("descent", "Longest controlled descent below w^(n+1)");
  o_descent->add_option("n", dn)->required();
  o_descent->add_option("n0", dn0)->required();
  o_descent->add_option("--control", control, "succ, double, square or exp");

  auto* bound = app.add_subcommand("bound", "Upper-bound report with the grammar's constants");
  bound->add_option("file", file)->required();

  fb_random_spec spec;
  fb_random_spec_init(&spec);
  std::string gen_kind;
  std::uint64_t seed = 1;
  auto* generate = app.add_subcommand("generate", "Random grammar or pds");
  generate->add_option("kind", gen_kind)->required()->check(CLI::IsMember({"grammar", "pds"}));
  generate->add_option("--seed", seed, "Random seed");
  generate->add_option("--symbols", spec.symbols, "Nonterminals or stack symbols");
  generate->add_option("--states", spec.states, "Control states (pds)");
  generate->add_option("--arity", spec.max_arity, "Largest arity (grammar)");
  generate->add_option("--actions", spec.actions, "Actions");
  generate->add_option("--rules", spec.max_rules, "Rules per head, at most");
  generate->add_option("--depth", spec.depth, "Right-hand side depth or longest push");
  generate->add_option("--eps", spec.eps_heads, "Share of heads with a silent rule (pds)");
  generate->add_flag("--popping", spec.popping_only, "Silent rules only pop (pds)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "fogbisim: error: " << e.what() << '\n';
    return kInput;
  }

  try {
    merge_config(rc);
    const char* cmd = app.get_subcommands().front()->get_name().c_str();
    const std::string command = cmd;

    if (command == "validate") {
      Model m = load(file);
      char* s = nullptr;
      check(m.grammar ? fb_grammar_summary(m.grammar.get(), &s) : fb_pds_summary(m.pds.get(), &s));
      Json j = take_json(s);
      Json body{{"kind", m.grammar ? "grammar" : "pds"}};
      for (const auto& [k, v] : j.items()) body[k] = v;
      if (rc.json) {
        print_json(command, body);
      } else {
        std::cout << body["kind"].get<std::string>() << " ok";
        for (const auto& [k, v] : j.items()) {
          std::cout << ' ' << k << '=' << (v.is_boolean() ? yes(v) : (v.is_string() ? v.get<std::string>() : v.dump()));
        }
        std::cout << '\n';
      }
      return kOk;
    }

    if (command == "measure") {
      Model m = load(file);
      char* s = nullptr;
      check(fb_measure(need_grammar(m, cmd), left.c_str(), right.empty() ? nullptr : right.c_str(), &s));
      Json j = take_json(s);
      if (rc.json) {
        print_json(command, j);
        return kOk;
      }
      const bool pair = j.contains("pair");
      for (std::size_t i = 0; i < j["terms"].size(); ++i) {
        const auto& t = j["terms"][i];
        const std::string p = pair ? (i == 0 ? "left." : "right.") : "";
        std::cout << p << "term=" << t["term"].get<std::string>() << '\n'
                  << p << "size=" << t["size"] << '\n'
                  << p << "ntsize=" << t["ntsize"] << '\n'
                  << p << "height=" << (t["height"].is_null() ? std::string("infinite") : t["height"].dump()) << '\n'
                  << p << "vars=" << var_set(t["vars"]) << '\n';
      }
      if (pair) {
        std::cout << "size_pair=" << j["pair"]["size"] << '\n'
                  << "vars_pair=" << var_set(j["pair"]["vars"]) << '\n'
                  << "equal=" << yes(j["pair"]["equal"]) << '\n';
      }
      return kOk;
    }

    if (command == "step") {
      Model m = load(file);
      char* s = nullptr;
      check(fb_step(need_grammar(m, cmd), left.c_str(), word.c_str(), var_mode(rc), &s));
      Json j = take_json(s);
      if (rc.json) {
        print_json(command, j);
      } else {
        for (const auto& t : j["targets"]) std::cout << t.get<std::string>() << '\n';
      }
      return kOk;
    }

    if (command == "el") {
      Model m = load(file);
      char* s = nullptr;
      if (m.pds) {
        if (certificate) throw Failure{kInput, "--certificate is only available for grammars"};
        check(fb_pds_weak_level(m.pds.get(), left.c_str(), right.c_str(), rc.cap, rc.budget, &s));
      } else {
        check(fb_eq_level(m.grammar.get(), left.c_str(), right.c_str(), rc.cap, var_mode(rc), rc.budget,
                          certificate ? 1 : 0, &s));
      }
      Json j = take_json(s);
      if (rc.json) {
        print_json(command, j);
      } else {
        std::cout << j["result"].get<std::string>() << ' ' << j["level"] << '\n';
        if (j.contains("certificate")) {
          std::cout << "certificate_replays=" << yes(j["certificate_replays"]) << '\n'
                    << j["certificate"].dump(2) << '\n';
        }
      }
      return level_exit(j);
    }

    if (command == "decide") {
      Model m = load(file);
      char* s = nullptr;
      Json j;
      if (m.pds) {
        // weak bisimilarity of configurations is bisimilarity of their encodings
        fb_grammar* g = nullptr;
        check(fb_pds_to_grammar(m.pds.get(), &g, nullptr));
        GrammarPtr gp(g);
        char* e1 = nullptr;
        char* e2 = nullptr;
        check(fb_pds_encode(m.pds.get(), left.c_str(), &e1));
        Json t1 = take_json(e1);
        check(fb_pds_encode(m.pds.get(), right.c_str(), &e2));
        Json t2 = take_json(e2);
        check(fb_decide(gp.get(), t1["term"].get<std::string>().c_str(), t2["term"].get<std::string>().c_str(),
                        FB_VARS_DEAD, rc.budget, &s));
        j = take_json(s);
      } else {
        check(fb_decide(m.grammar.get(), left.c_str(), right.c_str(), var_mode(rc), rc.budget, &s));
        j = take_json(s);
      }
      if (rc.json) {
        print_json(command, j);
      } else {
        std::cout << j["decision"].get<std::string>();
        if (j.contains("level")) std::cout << " level=" << j["level"];
        std::cout << " states=" << j["states"] << '\n';
      }
      return j["decision"] == "Inconclusive" ? kUndecided : kOk;
    }

    if (command == "constants") {
      Model m = load(file);
      char* s = nullptr;
      check(fb_constants(need_grammar(m, cmd), &s));
      Json j = take_json(s);
      if (rc.json) {
        print_json(command, j);
        return kOk;
      }
      for (const auto& w : j["sink_words"]) {
        std::cout << "sink[" << w["nonterminal"].get<std::string>() << ',' << w["index"] << "]=" << join(w["word"], "")
                  << '\n';
      }
      std::cout << "class=" << j["class"].get<std::string>() << '\n';
      for (const auto& f : j["fields"]) {
        std::cout << f["name"].get<std::string>() << '=' << f["value"].get<std::string>() << " digits=" << f["digits"]
                  << '\n';
      }
      return kOk;
    }

    if (command == "basis") {
      Model m = load(file);
      bp.s = s_text.c_str();
      bp.g = g_text.c_str();
      bp.c = c_text.c_str();
      bp.effective = effective;
      bp.subtract_above_j = subtract;
      bp.verify = verify;
      bp.budget = rc.budget;
      bp.pairs_budget = pairs_budget;
      char* s = nullptr;
      check(fb_candidate_bound(need_grammar(m, cmd), &bp, &s));
      Json j = take_json(s);
      if (!trace_path.empty()) {
        std::ofstream out(trace_path, std::ios::binary);
        if (!out) throw Failure{kInput, "cannot write " + trace_path};
        for (const auto& line : j["trace"]) out << line.get<std::string>() << '\n';
      }
      if (rc.json) {
        print_json(command, j);
        return j["violations"].empty() ? kOk : kInternal;
      }
      std::cout << "oracle=" << j["oracle"].get<std::string>() << '\n'
                << "E_B=" << j["bound"].get<std::string>() << '\n'
                << "iterations=" << j["iterations"] << '\n'
                << "s=" << join(j["s"], ",") << '\n'
                << "e=" << join(j["e"], ",") << '\n'
                << "basis_size=" << j["basis"].size() << '\n';
      for (const auto& b : j["basis"]) {
        std::cout << "pair " << b["pair"].get<std::string>() << " level=" << b["level"] << '\n';
      }
      if (j.contains("full")) std::cout << "full=" << yes(j["full"]) << '\n';
      if (j.contains("complete")) std::cout << "complete=" << yes(j["complete"]) << '\n';
      for (const auto& v : j["violations"]) std::cout << "violation " << v.get<std::string>() << '\n';
      if (show_trace) {
        for (const auto& line : j["trace"]) std::cout << line.get<std::string>() << '\n';
      }
      return j["violations"].empty() ? kOk : kInternal;
    }

    if (command == "translate") {
      Model m = load(file);
      std::string text;
      Json info;
      if (direction == "pds2gram") {
        if (!m.pds) throw Failure{kInput, "pds2gram needs a pds file"};
        fb_grammar* g = nullptr;
        char* s = nullptr;
        check(fb_pds_to_grammar(m.pds.get(), &g, &s));
        GrammarPtr gp(g);
        info = take_json(s);
        char* t = nullptr;
        check(fb_grammar_text(gp.get(), &t));
        text = take(t);
      } else {
        fb_pds* p = nullptr;
        char* s = nullptr;
        check(fb_grammar_to_pds(need_grammar(m, cmd), &p, &s));
        PdsPtr pp(p);
        info = take_json(s);
        char* t = nullptr;
        check(fb_pds_text(pp.get(), &t));
        text = take(t);
      }
      std::string encoder;
      if (info.value("saturated", false)) encoder += "# saturated: pushing silent rules were removed first\n";
      encoder += "# encoder\n";
      for (const auto& line : info["encoder"]) encoder += "#   " + line.get<std::string>() + "\n";
      if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw Failure{kInput, "cannot write " + out_path};
        out << text << encoder;
      }
      if (rc.json) {
        info["model"] = text;
        print_json(command, info);
      } else if (out_path.empty()) {
        std::cout << text << encoder;
      }
      return kOk;
    }

    if (command == "ordinal") {
      const std::string sub = ordinal->get_subcommands().front()->get_name();
      char* s = nullptr;
      if (sub == "info") check(fb_ordinal_info(alpha.c_str(), &s));
      if (sub == "fund") check(fb_ordinal_fund(alpha.c_str(), x_text.c_str(), &s));
      if (sub == "hardy") check(fb_ordinal_hierarchy(alpha.c_str(), x_text.c_str(), control.c_str(), rc.budget, &s));
      if (sub == "descent") check(fb_controlled_descent(dn, dn0, control.c_str(), rc.budget, &s));
      Json j = take_json(s);
      if (rc.json) {
        print_json("ordinal " + sub, j);
        return kOk;
      }
      for (const auto& [k, v] : j.items()) {
        if (v.is_object()) {
          std::cout << k << '=' << v["value"].get<std::string>() << '\n' << k << ".digits=" << v["digits"] << '\n';
        } else {
          std::cout << k << '=' << (v.is_string() ? v.get<std::string>() : (v.is_null() ? "none" : v.dump())) << '\n';
        }
      }
      return kOk;
    }

    if (command == "bound") {
      Model m = load(file);
      char* s = nullptr;
      check(fb_bound_report(need_grammar(m, cmd), &s));
      Json j = take_json(s);
      if (rc.json) {
        print_json(command, j);
      } else {
        print_lines(j["lines"]);
      }
      return kOk;
    }

    if (command == "generate") {
      char* t = nullptr;
      if (gen_kind == "grammar") {
        check(fb_generate_grammar(seed, &spec, &t));
      } else {
        check(fb_generate_pds(seed, &spec, &t));
      }
      std::string text = take(t);
      if (rc.json) {
        print_json(command, Json{{"kind", gen_kind}, {"seed", seed}, {"model", text}});
      } else {
        std::cout << text;
      }
      return kOk;
    }
    return kInternal;
  } catch (const Failure& f) {
    std::cerr << "fogbisim: error: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "fogbisim: error: " << e.what() << '\n';
    return kInternal;
  }
}
