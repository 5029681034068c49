#ifndef FOGBISIM_H
#define FOGBISIM_H

/* C interface to the fogbisim library.
 *
 * Models live behind opaque handles. Analyses return a JSON document in a
 * heap string owned by the caller (release it with fb_free). Every call
 * returns a status; on failure fb_last_error() describes the problem for the
 * calling thread, and output pointers are left untouched. */

#include <stdint.h>

#if defined(_WIN32)
#define FB_API __declspec(dllexport)
#else
#define FB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fb_status {
  FB_OK = 0,
  FB_ERR_INPUT = 1,        /* syntax, unknown names, arity */
  FB_ERR_PRECONDITION = 2, /* model does not meet the operation's requirement */
  FB_ERR_BUDGET = 3,       /* computation stopped at its budget */
  FB_ERR_ARGUMENT = 4,     /* null handle or bad option value */
  FB_ERR_INTERNAL = 5
} fb_status;

typedef enum fb_var_mode { FB_VARS_DEAD = 0, FB_VARS_LOOP = 1 } fb_var_mode;

typedef struct fb_grammar fb_grammar;
typedef struct fb_pds fb_pds;

FB_API const char* fb_version(void);
FB_API const char* fb_last_error(void);
FB_API void fb_free(char* s);

/* ---- grammars ---------------------------------------------------------- */

FB_API fb_status fb_grammar_parse(const char* text, fb_grammar** out);
FB_API void fb_grammar_free(fb_grammar* g);
FB_API fb_status fb_grammar_text(const fb_grammar* g, char** out);
/* {"nonterminals", "actions", "rules", "max_arity", "size"} */
FB_API fb_status fb_grammar_summary(const fb_grammar* g, char** json);

/* Term measures; f may be NULL. */
FB_API fb_status fb_measure(const fb_grammar* g, const char* e, const char* f, char** json);
/* Terms reachable from e by the word (action names). */
FB_API fb_status fb_step(const fb_grammar* g, const char* e, const char* word, fb_var_mode mode, char** json);
/* Bounded equivalence level; with want_certificate a Finite result carries
 * a Spoiler strategy. */
FB_API fb_status fb_eq_level(const fb_grammar* g, const char* e, const char* f, uint64_t cap, fb_var_mode mode,
                             uint64_t budget, int want_certificate, char** json);
/* Exact decision over the reachable finite state space. */
FB_API fb_status fb_decide(const fb_grammar* g, const char* e, const char* f, fb_var_mode mode, uint64_t budget,
                           char** json);
FB_API fb_status fb_constants(const fb_grammar* g, char** json);
FB_API fb_status fb_bound_report(const fb_grammar* g, char** json);

typedef struct fb_basis_params {
  uint32_t n;
  const char* s; /* decimal */
  const char* g; /* decimal */
  const char* c; /* decimal */
  int effective; /* 0: exact oracle, 1: effective oracle */
  int subtract_above_j;
  int verify; /* also check fullness (exact) or completeness (effective) */
  uint64_t budget;
  uint64_t pairs_budget;
} fb_basis_params;

FB_API void fb_basis_params_init(fb_basis_params* p);
FB_API fb_status fb_candidate_bound(const fb_grammar* g, const fb_basis_params* p, char** json);

/* ---- pushdown systems -------------------------------------------------- */

FB_API fb_status fb_pds_parse(const char* text, fb_pds** out);
FB_API void fb_pds_free(fb_pds* m);
FB_API fb_status fb_pds_text(const fb_pds* m, char** out);
/* {"states", "stack", "actions", "rules", "real_time", "restricted", "popping_eps"} */
FB_API fb_status fb_pds_summary(const fb_pds* m, char** json);
FB_API fb_status fb_pds_steps(const fb_pds* m, const char* config, char** json);
FB_API fb_status fb_pds_saturate(const fb_pds* m, fb_pds** out);
FB_API fb_status fb_pds_weak_level(const fb_pds* m, const char* c1, const char* c2, uint64_t cap, uint64_t budget,
                                   char** json);
/* Systems with pushing silent rules are saturated first; the JSON reports
 * whether that happened and lists the encoder. */
FB_API fb_status fb_pds_to_grammar(const fb_pds* m, fb_grammar** out, char** json);
FB_API fb_status fb_grammar_to_pds(const fb_grammar* g, fb_pds** out, char** json);
/* Encoding of a configuration (on the saturated system when needed). */
FB_API fb_status fb_pds_encode(const fb_pds* m, const char* config, char** json);

/* ---- ordinals below w^w, plus the marker w^w ---------------------------- */

FB_API fb_status fb_ordinal_info(const char* alpha, char** json);
FB_API fb_status fb_ordinal_fund(const char* alpha, const char* x, char** json);
/* control: "succ", "double", "square" or "exp" */
FB_API fb_status fb_ordinal_hierarchy(const char* alpha, const char* x, const char* control, uint64_t budget,
                                      char** json);
FB_API fb_status fb_controlled_descent(uint32_t n, uint64_t n0, const char* control, uint64_t budget, char** json);

/* ---- random models ----------------------------------------------------- */

typedef struct fb_random_spec {
  int symbols;       /* nonterminals, or stack symbols */
  int states;        /* pushdown systems only */
  int max_arity;     /* grammars only */
  int actions;
  int max_rules;     /* per head */
  int depth;         /* rhs depth, or longest push */
  double eps_heads;  /* pushdown systems: share of heads with a silent rule */
  int popping_only;
} fb_random_spec;

FB_API void fb_random_spec_init(fb_random_spec* s);
FB_API fb_status fb_generate_grammar(uint64_t seed, const fb_random_spec* s, char** text);
FB_API fb_status fb_generate_pds(uint64_t seed, const fb_random_spec* s, char** text);

#ifdef __cplusplus
}
#endif

#endif
