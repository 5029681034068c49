#include "fogbisim.h"

#include <cstdlib>
#include <cstring>
#include <json.hpp>
#include <random>
#include <string>

#include "fogbisim/bound_report.hpp"
#include "fogbisim/candidate.hpp"
#include "fogbisim/constants.hpp"
#include "fogbisim/eq_level.hpp"
#include "fogbisim/error.hpp"
#include "fogbisim/ordinal.hpp"
#include "fogbisim/pds.hpp"
#include "fogbisim/random_models.hpp"
#include "fogbisim/term_syntax.hpp"

using namespace fogbisim;
using Json = nlohmann::ordered_json;

struct fb_grammar {
  Grammar g;
};

struct fb_pds {
  Pds m;
};

namespace {

thread_local std::string last_error;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

struct ArgumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
fb_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return FB_OK;
  } catch (const InputError& e) {
    last_error = e.what();
    return FB_ERR_INPUT;
  } catch (const PreconditionError& e) {
    last_error = e.what();
    return FB_ERR_PRECONDITION;
  } catch (const BudgetExceeded& e) {
    last_error = e.what();
    return FB_ERR_BUDGET;
  } catch (const ArgumentError& e) {
    last_error = e.what();
    return FB_ERR_ARGUMENT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FB_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw ArgumentError(std::string("null ") + what);
}

void emit(char** out, const Json& j) { *out = dup(j.dump(2)); }

std::uint64_t budget_or_default(std::uint64_t b) { return b == 0 ? kDefaultBudget : b; }

VarMode mode_of(fb_var_mode m) { return m == FB_VARS_LOOP ? VarMode::SelfLoop : VarMode::Dead; }

Json big(const BigInt& v) { return Json{{"value", to_string(v)}, {"digits", decimal_digits(v)}}; }

std::string show(const TermStore& store, TermRef t) {
  return store.is_finite(t) ? format_term(store, t) : format_let(store, t);
}

Json level_json(const EqLevelResult& r, std::uint64_t cap) {
  return Json{{"result", r.finite ? "Finite" : "AtLeast"}, {"level", r.value}, {"cap", cap}, {"closed", r.closed},
              {"pairs", r.pairs}};
}

BigInt decimal(const char* s, const char* what) {
  if (!s) throw ArgumentError(std::string("missing ") + what);
  try {
    return parse_bigint(s);
  } catch (const InputError& e) {
    throw ArgumentError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

extern "C" {

const char* fb_version(void) { return "0.1.0"; }

const char* fb_last_error(void) { return last_error.c_str(); }

void fb_free(char* s) { std::free(s); }

// ---------------------------------------------------------------- grammars

fb_status fb_grammar_parse(const char* text, fb_grammar** out) {
  return guard([&] {
    need(text, "text");
    need(out, "output");
    auto h = std::make_unique<fb_grammar>(fb_grammar{parse_grammar(text)});
    *out = h.release();
  });
}

void fb_grammar_free(fb_grammar* g) { delete g; }

fb_status fb_grammar_text(const fb_grammar* g, char** out) {
  return guard([&] {
    need(g, "grammar");
    need(out, "output");
    *out = dup(serialize_grammar(g->g));
  });
}

fb_status fb_grammar_summary(const fb_grammar* g, char** json) {
  return guard([&] {
    need(g, "grammar");
    need(json, "output");
    emit(json, Json{{"nonterminals", g->g.nonterminal_count()},
                    {"actions", g->g.actions().size()},
                    {"rules", g->g.rules().size()},
                    {"max_arity", g->g.max_arity()},
                    {"size", to_string(grammar_size(g->g))}});
  });
}

fb_status fb_measure(const fb_grammar* g, const char* e, const char* f, char** json) {
  return guard([&] {
    need(g, "grammar");
    need(e, "term");
    need(json, "output");
    TermStore& store = g->g.store();
    Json terms = Json::array();
    std::vector<TermRef> refs;
    for (const char* text : {e, f}) {
      if (!text) continue;
      TermRef t = parse_term(store, text);
      refs.push_back(t);
      auto h = store.height(t);
      terms.push_back(Json{{"term", show(store, t)},
                           {"finite", store.is_finite(t)},
                           {"size", store.size(t)},
                           {"ntsize", store.ntsize(t)},
                           {"height", h ? Json(*h) : Json(nullptr)},
                           {"vars", store.vars(t)}});
    }
    Json out{{"terms", terms}};
    if (refs.size() == 2) {
      out["pair"] = Json{{"size", store.size(refs[0], refs[1])},
                         {"vars", store.vars(refs[0], refs[1])},
                         {"equal", refs[0] == refs[1]}};
    }
    emit(json, out);
  });
}

fb_status fb_step(const fb_grammar* g, const char* e, const char* word, fb_var_mode mode, char** json) {
  return guard([&] {
    need(g, "grammar");
    need(e, "term");
    need(word, "word");
    need(json, "output");
    TermStore& store = g->g.store();
    TermRef t = parse_term(store, e);
    auto w = parse_word(g->g, word);
    Json labels = Json::array();
    for (auto a : w) labels.push_back(g->g.action_label(a));
    Json targets = Json::array();
    for (TermRef r : step_word(g->g, t, w, mode_of(mode))) targets.push_back(show(store, r));
    emit(json, Json{{"term", show(store, t)}, {"word", labels}, {"targets", targets}});
  });
}

fb_status fb_eq_level(const fb_grammar* g, const char* e, const char* f, uint64_t cap, fb_var_mode mode,
                      uint64_t budget, int want_certificate, char** json) {
  return guard([&] {
    need(g, "grammar");
    need(e, "term");
    need(f, "term");
    need(json, "output");
    TermStore& store = g->g.store();
    TermRef a = parse_term(store, e), b = parse_term(store, f);
    GameConfig cfg{cap, mode_of(mode), budget_or_default(budget)};
    std::unique_ptr<Certificate> cert;
    auto r = eq_level_bounded(g->g, a, b, cfg, want_certificate ? &cert : nullptr);
    Json out = level_json(r, cap);
    if (cert) {
      GrammarLts lts(g->g, cfg.variable_mode);
      out["certificate"] = Json::parse(certificate_json(lts, *cert));
      out["certificate_replays"] = replay_certificate(lts, *cert, r.value + 1);
    }
    emit(json, out);
  });
}

fb_status fb_decide(const fb_grammar* g, const char* e, const char* f, fb_var_mode mode, uint64_t budget,
                    char** json) {
  return guard([&] {
    need(g, "grammar");
    need(e, "term");
    need(f, "term");
    need(json, "output");
    TermStore& store = g->g.store();
    TermRef a = parse_term(store, e), b = parse_term(store, f);
    auto d = finite_state_decide(g->g, a, b, budget_or_default(budget), mode_of(mode));
    const char* names[] = {"Bisimilar", "NotBisimilar", "Inconclusive"};
    Json out{{"decision", names[static_cast<int>(d.decision)]}, {"states", d.states}};
    if (d.decision == Decision::NotBisimilar) out["level"] = d.level;
    emit(json, out);
  });
}

fb_status fb_constants(const fb_grammar* g, char** json) {
  return guard([&] {
    need(g, "grammar");
    need(json, "output");
    auto k = compute_constants(g->g);
    Json fields = Json::array();
    for (const auto& [name, v] : constant_fields(k)) {
      Json row{{"name", name}};
      row.update(big(v));
      fields.push_back(row);
    }
    Json sinks = Json::array();
    for (const auto& [key, w] : k.sink) {
      Json word = Json::array();
      for (auto a : w) word.push_back(g->g.action_label(a));
      sinks.push_back(Json{{"nonterminal", g->g.name(key.first)}, {"index", key.second}, {"word", word}});
    }
    emit(json, Json{{"fields", fields}, {"sink_words", sinks}, {"class", complexity_class_grammar(k.n)}});
  });
}

fb_status fb_bound_report(const fb_grammar* g, char** json) {
  return guard([&] {
    need(g, "grammar");
    need(json, "output");
    Json lines = Json::array();
    for (const auto& [key, value] : bound_report(g->g).lines) lines.push_back(Json{{"key", key}, {"value", value}});
    emit(json, Json{{"lines", lines}});
  });
}

void fb_basis_params_init(fb_basis_params* p) {
  if (!p) return;
  *p = fb_basis_params{};
  p->s = "1";
  p->g = "0";
  p->c = "1";
}

fb_status fb_candidate_bound(const fb_grammar* g, const fb_basis_params* p, char** json) {
  return guard([&] {
    need(g, "grammar");
    need(p, "parameters");
    need(json, "output");
    CandidateParams cp;
    cp.n = p->n;
    cp.s = decimal(p->s, "s");
    cp.g = decimal(p->g, "g");
    cp.c = decimal(p->c, "c");
    if (cp.s < 0 || cp.g < 0 || cp.c < 0) throw ArgumentError("s, g and c must be non-negative");
    CandidateOptions opt;
    opt.oracle = p->effective ? OracleKind::Effective : OracleKind::Exact;
    opt.budget = budget_or_default(p->budget);
    if (p->pairs_budget) opt.pairs_budget = p->pairs_budget;
    opt.subtract_above_j = p->subtract_above_j != 0;
    auto res = candidate_bound(g->g, cp, opt);
    Json basis = Json::array();
    for (const auto& [pair, level] : res.state.basis) {
      basis.push_back(Json{{"pair", format_pair(g->g, pair)}, {"level", level}});
    }
    Json trace = Json::array();
    for (const auto& t : res.trace) trace.push_back(format_trace_line(g->g, t));
    Json s_arr = Json::array(), e_arr = Json::array();
    for (const auto& v : res.state.s_arr) s_arr.push_back(to_string(v));
    for (const auto& v : res.state.e_arr) e_arr.push_back(to_string(v));
    Json out{{"oracle", p->effective ? "effective" : "exact"},
             {"bound", to_string(res.bound)},
             {"basis", basis},
             {"s", s_arr},
             {"e", e_arr},
             {"iterations", res.trace.empty() ? 0 : res.trace.size() - 1},
             {"trace", trace},
             {"violations", res.violations}};
    if (p->verify) {
      if (p->effective) {
        out["complete"] = is_complete(g->g, cp, res.state, opt.budget, opt.pairs_budget);
      } else {
        out["full"] = is_full(g->g, cp, res.state, opt.budget, opt.pairs_budget);
      }
    }
    emit(json, out);
  });
}

// ---------------------------------------------------------------- pushdown systems

fb_status fb_pds_parse(const char* text, fb_pds** out) {
  return guard([&] {
    need(text, "text");
    need(out, "output");
    auto h = std::make_unique<fb_pds>(fb_pds{parse_pds(text)});
    *out = h.release();
  });
}

void fb_pds_free(fb_pds* m) { delete m; }

fb_status fb_pds_text(const fb_pds* m, char** out) {
  return guard([&] {
    need(m, "pds");
    need(out, "output");
    *out = dup(serialize_pds(m->m));
  });
}

fb_status fb_pds_summary(const fb_pds* m, char** json) {
  return guard([&] {
    need(m, "pds");
    need(json, "output");
    auto f = classify(m->m);
    emit(json, Json{{"states", m->m.states().size()},
                    {"stack", m->m.stack_symbols().size()},
                    {"actions", m->m.actions().size()},
                    {"rules", m->m.rules().size()},
                    {"real_time", f.real_time},
                    {"restricted", f.restricted},
                    {"popping_eps", f.popping_eps},
                    {"class", complexity_class_pds(static_cast<long long>(m->m.states().size()))}});
  });
}

fb_status fb_pds_steps(const fb_pds* m, const char* config, char** json) {
  return guard([&] {
    need(m, "pds");
    need(config, "configuration");
    need(json, "output");
    auto c = parse_configuration(m->m, config);
    Json steps = Json::array();
    for (const auto& s : pds_transitions(m->m, c)) {
      steps.push_back(Json{{"action", m->m.action_label(s.action)}, {"target", format_configuration(m->m, s.target)}});
    }
    emit(json, Json{{"config", format_configuration(m->m, c)}, {"stable", is_stable(m->m, c)}, {"steps", steps}});
  });
}

fb_status fb_pds_saturate(const fb_pds* m, fb_pds** out) {
  return guard([&] {
    need(m, "pds");
    need(out, "output");
    auto h = std::make_unique<fb_pds>(fb_pds{remove_nonpopping_eps(m->m)});
    *out = h.release();
  });
}

fb_status fb_pds_weak_level(const fb_pds* m, const char* c1, const char* c2, uint64_t cap, uint64_t budget,
                            char** json) {
  return guard([&] {
    need(m, "pds");
    need(c1, "configuration");
    need(c2, "configuration");
    need(json, "output");
    auto a = parse_configuration(m->m, c1), b = parse_configuration(m->m, c2);
    auto r = weak_eq_level_bounded(m->m, a, b, cap, budget_or_default(budget));
    emit(json, level_json(r, cap));
  });
}

namespace {

// The system pds_to_grammar can take, and whether it had to be saturated.
std::pair<Pds, bool> popping_form(const Pds& m) {
  auto f = classify(m);
  if (!f.restricted) throw PreconditionError("silent rules must be deterministic");
  if (f.popping_eps) return {m, false};
  return {remove_nonpopping_eps(m), true};
}

}  // namespace

fb_status fb_pds_to_grammar(const fb_pds* m, fb_grammar** out, char** json) {
  return guard([&] {
    need(m, "pds");
    need(out, "output");
    auto [pm, saturated] = popping_form(m->m);
    auto pg = pds_to_grammar(pm);
    Json info{{"saturated", saturated}, {"encoder", encoder_table(pm, pg)}};
    auto h = std::make_unique<fb_grammar>(fb_grammar{std::move(pg.grammar)});
    if (json) emit(json, info);
    *out = h.release();
  });
}

fb_status fb_grammar_to_pds(const fb_grammar* g, fb_pds** out, char** json) {
  return guard([&] {
    need(g, "grammar");
    need(out, "output");
    auto gp = grammar_to_pds(g->g);
    Json info{{"encoder", encoder_table(g->g, gp)}};
    auto h = std::make_unique<fb_pds>(fb_pds{std::move(gp.pds)});
    if (json) emit(json, info);
    *out = h.release();
  });
}

fb_status fb_pds_encode(const fb_pds* m, const char* config, char** json) {
  return guard([&] {
    need(m, "pds");
    need(config, "configuration");
    need(json, "output");
    auto [pm, saturated] = popping_form(m->m);
    auto pg = pds_to_grammar(pm);
    auto c = parse_configuration(pm, config);
    TermRef t = encode_configuration(pm, pg, c);
    emit(json, Json{{"config", format_configuration(pm, c)},
                    {"stable_config", format_configuration(pm, stabilize(pm, c))},
                    {"saturated", saturated},
                    {"term", show(pg.grammar.store(), t)}});
  });
}

// ---------------------------------------------------------------- ordinals

fb_status fb_ordinal_info(const char* alpha, char** json) {
  return guard([&] {
    need(alpha, "ordinal");
    need(json, "output");
    auto a = Ordinal::parse(alpha);
    Json out{{"ordinal", a.to_string()},
             {"kind", a.is_zero() ? "zero" : (a.is_successor() ? "successor" : "limit")}};
    if (a.is_top()) {
      out["norm"] = nullptr;
      out["degree"] = nullptr;
    } else {
      out["norm"] = to_string(a.norm());
      out["degree"] = a.degree();
    }
    emit(json, out);
  });
}

fb_status fb_ordinal_fund(const char* alpha, const char* x, char** json) {
  return guard([&] {
    need(alpha, "ordinal");
    need(json, "output");
    auto a = Ordinal::parse(alpha);
    BigInt xv = decimal(x, "x");
    if (xv < 0) throw ArgumentError("x must be non-negative");
    if (!a.is_limit()) throw PreconditionError("fundamental sequences exist for limit ordinals only");
    emit(json, Json{{"ordinal", a.to_string()}, {"x", to_string(xv)}, {"result", a.fund(xv).to_string()}});
  });
}

fb_status fb_ordinal_hierarchy(const char* alpha, const char* x, const char* control, uint64_t budget, char** json) {
  return guard([&] {
    need(alpha, "ordinal");
    need(json, "output");
    auto a = Ordinal::parse(alpha);
    BigInt xv = decimal(x, "x");
    if (xv < 0) throw ArgumentError("x must be non-negative");
    ControlFunction h = control_function(control ? control : "succ");
    auto r = hierarchies(h, a, xv, budget == 0 ? kDefaultStepBudget : budget);
    emit(json, Json{{"ordinal", a.to_string()},
                    {"x", to_string(xv)},
                    {"control", h.name},
                    {"hardy", big(r.hardy)},
                    {"cichon", big(r.cichon)}});
  });
}

fb_status fb_controlled_descent(uint32_t n, uint64_t n0, const char* control, uint64_t budget, char** json) {
  return guard([&] {
    need(json, "output");
    ControlFunction h = control_function(control ? control : "succ");
    auto len = max_controlled_descent(n, n0, h, budget == 0 ? kDefaultStepBudget : budget);
    emit(json, Json{{"n", n}, {"n0", n0}, {"control", h.name}, {"length", len}});
  });
}

// ---------------------------------------------------------------- random models

void fb_random_spec_init(fb_random_spec* s) {
  if (!s) return;
  *s = fb_random_spec{3, 2, 2, 2, 2, 2, 0.0, 0};
}

fb_status fb_generate_grammar(uint64_t seed, const fb_random_spec* s, char** text) {
  return guard([&] {
    need(s, "spec");
    need(text, "output");
    if (s->symbols < 1 || s->max_arity < 0 || s->actions < 1 || s->max_rules < 0 || s->depth < 0) {
      throw ArgumentError("invalid random grammar spec");
    }
    std::mt19937_64 rng(seed);
    auto g = random_grammar(rng, {s->symbols, s->max_arity, s->actions, s->max_rules, s->depth});
    *text = dup(serialize_grammar(g));
  });
}

fb_status fb_generate_pds(uint64_t seed, const fb_random_spec* s, char** text) {
  return guard([&] {
    need(s, "spec");
    need(text, "output");
    if (s->symbols < 1 || s->states < 1 || s->actions < 1 || s->max_rules < 0 || s->depth < 0 || s->eps_heads < 0 ||
        s->eps_heads > 1) {
      throw ArgumentError("invalid random pds spec");
    }
    std::mt19937_64 rng(seed);
    RandomPdsSpec spec{s->states, s->symbols, s->actions, s->max_rules, s->depth, s->eps_heads, s->popping_only != 0};
    *text = dup(serialize_pds(random_pds(rng, spec)));
  });
}

}  // extern "C"
