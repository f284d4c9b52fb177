#pragma once

#include <optional>
#include <string>
#include <vector>

#include "focal/term.hpp"
#include "focal/typing.hpp"

namespace focal {

// NJ target calculus: beta normalisation, function-eta, and the equality used
// by the factorisation checks. Sum-eta is deliberately not decided.

std::optional<TermPtr> nj_step(const TermPtr& t);  // leftmost-outermost beta
std::vector<TermPtr> nj_one_steps(const TermPtr& t);

struct NjNormResult {
  TermPtr term;
  bool complete = true;  // false when fuel ran out
  int steps = 0;
};
NjNormResult nj_normalize(const TermPtr& t, int fuel = 10000);

TermPtr nj_eta_fun_contract(const TermPtr& t);  // \x.(V x) -> V to a fixpoint

struct BetaEtaReport {
  bool equal = false;
  bool used_beta = false;
  bool fuel_exhausted = false;
};
BetaEtaReport betaeta_equal_report(const TermPtr& a, const TermPtr& b, int fuel = 10000);
bool betaeta_equal(const TermPtr& a, const TermPtr& b, int fuel = 10000);

// simple-type checking for NJ (atoms, R, functions, products, sums); lambda
// binders must carry annotations for synthesis
FormulaPtr nj_synth(const TermPtr& t, const TypingEnv& env);  // null when not inferable
TypeResult nj_typecheck(const TermPtr& t, const TypingEnv& env, const FormulaPtr& goal);

// lambda-term helpers for the machine corpus
TermPtr church(int n);  // \f.\x.f (f ... x)

}  // namespace focal
