#pragma once

#include <optional>
#include <string>

#include "focal/machines.hpp"
#include "focal/term.hpp"
#include "focal/typing.hpp"

namespace focal {

struct CpsConfig {
  std::string result_atom = "R";
};

// formula map of the CPS translation: X -> X, ~P -> (P -> R), * -> product,
// + -> sum
FormulaPtr cps_formula(const FormulaPtr& p, const CpsConfig& cfg);

// raw LK into the focalised system; the input must typecheck (the right
// tensor/plus introductions become the mu/~mu evaluation protocols)
TermPtr lk_to_lkq(const TermPtr& t, const TypingEnv& env, JKind kind, FormulaPtr goal = nullptr);

// call-by-value lambda(mu) into Lfoc, with P ->v Q = ~(P * ~Q)
TermPtr cbv_to_lkq(const TermPtr& lam);
// the command form < [[M]] | k > with the administrative mu collapsed
TermPtr cbv_to_lkq_command(const TermPtr& lam, const std::string& covar);

// call-by-name lambda(mu) into LKT, with M ->n N = ~M @ N
TermPtr cbn_to_lkt(const TermPtr& lam);
TermPtr cbn_state_to_lkt(const CbnState& s, const std::string& halt_covar);

// Figure 3 CPS into NJ; binder annotations are emitted when the input is
// elaborated (typed), so the translated term synthesises its NJ type
TermPtr lkq_to_nj(const TermPtr& t, const CpsConfig& cfg);

// LKQ into the polarised subsystem, optionally with the two displayed
// optimisations; k-variable names are "k_" + covariable, collision-checked
TermPtr lkq_to_llp(const TermPtr& t, const CpsConfig& cfg, bool optimize);
std::string k_name_for(const TermPtr& t, const std::string& covar);

// right inverse of the LLP compilation (dn V back to coval V)
TermPtr llp_to_lkq(const TermPtr& t);

TermPtr llp_to_nj(const TermPtr& t, const CpsConfig& cfg);

// retraction normal form: llp steps then the ~mu x.<x|e> contraction
TermPtr llp_retract_nf(const TermPtr& t);

struct FactorizationReport {
  bool equal = false;
  bool used_beta = false;
  bool fuel_exhausted = false;
};
FactorizationReport check_factorization(const TermPtr& lfoc_term, const CpsConfig& cfg);

}  // namespace focal
