#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "focal/term.hpp"

namespace focal {

enum class JKind { Command, Expr, Value, Context };

struct TypingEnv {
  std::map<std::string, FormulaPtr> gamma;  // variables
  std::map<std::string, FormulaPtr> delta;  // covariables

  TypingEnv with_var(const std::string& x, FormulaPtr f) const {
    TypingEnv e = *this;
    e.gamma[x] = std::move(f);
    return e;
  }
  TypingEnv with_covar(const std::string& a, FormulaPtr f) const {
    TypingEnv e = *this;
    e.delta[a] = std::move(f);
    return e;
  }
};

// Four judgement forms: c : (G |- D), G |- v : P | D, G |- V : P ; D (the
// stoup), G | e : P |- D. For LKT the stoup moves to the left and formulas
// are negative; for LLP the right-hand side is empty.
struct Judgement {
  JKind kind = JKind::Command;
  TypingEnv env;
  TermPtr subject;
  FormulaPtr formula;  // null for commands
};

struct Deriv {
  std::string rule;
  Judgement j;
  std::vector<Deriv> kids;
  TermPtr elab;  // subject with inferred binder annotations filled in
};

struct TypeFailure {
  std::string message;
  TermPtr at;
};

struct TypeResult {
  std::optional<Deriv> deriv;
  std::optional<TypeFailure> failure;
  bool ok() const { return deriv.has_value(); }
};

TypeResult typecheck(const Judgement& j);     // Lfoc against LKQ (Figure 1)
TypeResult typecheck_lkt(const Judgement& j); // LKT, by mirroring into LKQ
TypeResult typecheck_llp(const Judgement& j); // right-empty subsystem
// Raw LK; goal may be null for synthesisable subjects (commands need none).
TypeResult typecheck_lk(const TermPtr& t, const TypingEnv& env, JKind kind,
                        FormulaPtr goal = nullptr);

std::string show(const Judgement& j);
std::string show_deriv(const Deriv& d, int indent = 0);

// Five eta equations of the focalised system, oriented as contractions and
// applied to a fixpoint, extended with the derived rule for the ~mu(r1,r2)
// pattern binders the paper introduces as abbreviations.
TermPtr eta_contract(const TermPtr& t);
bool check_eta(const TermPtr& a, const TermPtr& b);
TermPtr llp_eta_contract(const TermPtr& t);

}  // namespace focal
