#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "focal/term.hpp"
#include "focal/typing.hpp"

namespace focal {

struct TraceStep {
  std::string rule;
  Path pos;
  TermPtr before;
  TermPtr after;
};

struct Trace {
  TermPtr initial;
  std::vector<TraceStep> steps;
  TermPtr final_term;
  std::string status;
};

enum class StratKind { Leftmost, Rightmost, Random, AtPosition };

struct Strategy {
  StratKind kind = StratKind::Leftmost;
  std::uint64_t seed = 0;
  Path pos;  // AtPosition only
};

// Bundled mode performs the substitution of a control/logical step at once;
// explicit mode emits a first-class substitution that the commutation rules
// then propagate step by step (raw LK always runs explicit).
enum class SubstMode { Bundled, Explicit };

struct Redex {
  Path pos;
  std::string rule;
};

std::vector<Redex> redexes(const TermPtr& c);
TermPtr apply_rule_at(const TermPtr& c, const Path& pos, const std::string& rule, SubstMode mode);
std::optional<std::pair<TermPtr, TraceStep>> step(const TermPtr& c, const Strategy& strat,
                                                  SubstMode mode = SubstMode::Bundled,
                                                  std::uint64_t step_index = 0);

enum class NormStatus { Normal, FuelExhausted, LoopDetected };
std::string show_status(NormStatus s);

struct NormalizeResult {
  TermPtr term;
  Trace trace;
  NormStatus status = NormStatus::Normal;
};

NormalizeResult normalize(const TermPtr& c, int fuel, const Strategy& strat,
                          SubstMode mode = SubstMode::Bundled, int loop_window = 64);

// Weak normalisation by redex degrees: first remove every < mu a.c | e >
// redex, then repeatedly fire a maximal-degree redex whose subredexes have
// strictly smaller degree, packaged with the augmented substitution. The
// multiset of redex degrees is recorded per step and asserted to decrease.
struct WnResult {
  TermPtr term;
  Trace trace;
  std::vector<std::vector<int>> degree_history;
};
WnResult normalize_wn(const TermPtr& c, const TypingEnv& env);

enum class NormalShape { ValAtCovar, VarAtNot, VarAtPair, VarAtCase, NotNormal };
NormalShape classify_normal(const TermPtr& c);
std::string show_shape(NormalShape s);

// Lafont's critical pair in raw LK: d = < mu a.c1 | ~mu x.c2 > reduced under
// the two priorities, witnessing non-confluence.
struct LafontResult {
  TermPtr start;
  TermPtr nf_mu;
  TermPtr nf_mu_tilde;
};
LafontResult lafont_demo(const TermPtr& c1, const TermPtr& c2);

// Remark 3.1: contractions are cuts whose passive side reuses the active name.
bool is_contraction(const TermPtr& command);

std::vector<std::string> lint_phase_cycle(const Trace& trace);

std::string trace_to_json(const Trace& trace, Calc calc);
TermPtr replay_trace_json(const std::string& json, Calc calc, SubstMode mode);

}  // namespace focal
