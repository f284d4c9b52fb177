#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace focal {

// Formula grammars used across the calculi:
//   positive   P ::= X | P * P | P + P | ~P
//   negative   N ::= X^ | N @ N | N & N | ~N        (De Morgan duals)
//   raw LK     A ::= X | A /\ A | A \/ A | not A
//   NJ types   T ::= X | T * T | T + T | T -> T
enum class FormKind {
  Atom,
  CoAtom,
  Tensor,
  Par,
  Plus,
  With,
  NotP,
  NotN,
  And,
  Or,
  Neg,
  Fun,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FormKind kind;
  std::string atom;   // Atom / CoAtom only
  FormulaPtr left;    // unary connectives use left only
  FormulaPtr right;
};

namespace mkf {
FormulaPtr atom(std::string name);
FormulaPtr coatom(std::string name);
FormulaPtr tensor(FormulaPtr a, FormulaPtr b);
FormulaPtr par(FormulaPtr a, FormulaPtr b);
FormulaPtr plus(FormulaPtr a, FormulaPtr b);
FormulaPtr with(FormulaPtr a, FormulaPtr b);
FormulaPtr notp(FormulaPtr a);
FormulaPtr notn(FormulaPtr a);
FormulaPtr lk_and(FormulaPtr a, FormulaPtr b);
FormulaPtr lk_or(FormulaPtr a, FormulaPtr b);
FormulaPtr lk_neg(FormulaPtr a);
FormulaPtr fun(FormulaPtr dom, FormulaPtr cod);
}  // namespace mkf

class FormulaError : public std::runtime_error {
 public:
  explicit FormulaError(const std::string& msg) : std::runtime_error(msg) {}
};

int formula_size(const FormulaPtr& f);
bool formula_eq(const FormulaPtr& a, const FormulaPtr& b);

bool is_positive(const FormulaPtr& f);  // Atom counts as positive
bool is_negative(const FormulaPtr& f);
bool is_raw(const FormulaPtr& f);       // Atom counts as raw

// De Morgan dual; involutive. Rejects raw LK connectives and Fun.
FormulaPtr dual_formula(const FormulaPtr& f);

// /\ -> *, \/ -> +, not -> ~ (Proposition "provable in LKQ" formula map).
FormulaPtr raw_to_positive(const FormulaPtr& f);

std::string show(const FormulaPtr& f);

}  // namespace focal
