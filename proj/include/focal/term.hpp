#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "focal/formula.hpp"

namespace focal {

// One shared term representation for every calculus in the workbench. The
// calculus tag fixes which node kinds are legal and which syntactic category
// (command / expression / value / context) each kind lives in; factory
// functions enforce the per-calculus grammar.
enum class Calc {
  LKraw,   // the "atomic" LK term language with explicit substitutions
  Lfoc,    // focalised system L (typed by LKQ)
  LKT,     // mirror image of Lfoc (negative / call-by-name side)
  LLP,     // polarised subsystem with right-empty sequents
  NJ,      // lambda-calculus with pairs and sums (CPS target)
  Lsynth,  // synthetic system L (patterns / counterpatterns)
  Lambda,  // plain lambda terms with control operator, for the machines
  LbarQ,   // lambda-bar-mu-mu-tilde-Q commands
};

enum class Cat { Command, Expr, Value, Context };

enum class Kind {
  // shared sequent kit
  Cut,          // < left | right >
  ESub,         // subject[sigma]
  Var,          // x
  Covar,        // a
  Mu,           // mu a.c
  MuTilde,      // ~mu x.c
  MuTildeNot,   // ~mu a^.c
  MuTildePair,  // ~mu(x1,x2).c
  MuTildeCase,  // ~mu[inl(x1).c1 | inr(x2).c2]
  Reflect,      // e^ (value side) / v^ (LKT covalue side)
  PairV,        // (t,t)
  Inl,          // inl(t)
  Inr,          // inr(t)
  ValOf,        // val V  (Lfoc expression / LKT context / LbarQ expression)
  // LKT only
  CoPair,       // [E1,E2]
  Fst,          // fst(E)
  Snd,          // snd(E)
  MuNot,        // mu x^.c
  MuPar,        // mu[a1,a2].c
  MuCase,       // mu[fst(a1).c1 | snd(a2).c2]
  // LLP only
  Derel,        // dn(V)
  // Lsynth
  PatVal,       // p{ leaf := filling, ... }
  MuTildeRec,   // ~mu q.{ p1 -> c1 ; ... }
  MuTildeQ,     // ~mu q.C            (intermediate counterpattern system)
  CoTree,       // [ C1 |q1,q2| C2 ]  (intermediate command tree node)
  // lambda family
  Lam,          // \x.t
  App,          // t u
  CtrlC,        // ctrl(M)
  ReifyStk,     // reified CBN stack, inserted by the machine
  LamPair,      // \(x1,x2).c          (NJ)
  LamCase,      // \z.case z of inl(x1) -> c1 | inr(x2) -> c2   (NJ)
  StackCons,    // V.e                 (LbarQ context)
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct SubstItem {
  std::string name;
  bool is_covar = false;
  TermPtr payload;
};
using Subst = std::vector<SubstItem>;

// p ::= x | a^ | (p,p) | inl(p) | inr(p)
struct Pattern {
  enum class K { Var, CovarDag, Pair, Inl, Inr };
  K k = K::Var;
  std::string name;            // leaves only
  std::vector<Pattern> kids;   // Pair: 2, Inl/Inr: 1
};

// q ::= x | a^ | (q,q) | [q,q]
struct CPat {
  enum class K { Var, CovarDag, Pair, CoPair };
  K k = K::Var;
  std::string name;
  std::vector<CPat> kids;
};

struct PatternLeaf {
  bool is_covar = false;  // a^ leaves bind covariables
  std::string name;
};

std::vector<PatternLeaf> pattern_leaves(const Pattern& p);
std::vector<PatternLeaf> cpat_leaves(const CPat& q);
bool pattern_shape_eq(const Pattern& a, const Pattern& b);  // ignores leaf names
bool pattern_eq(const Pattern& a, const Pattern& b);        // names included
bool cpat_eq(const CPat& a, const CPat& b);
bool pattern_linear(const Pattern& p);
bool cpat_linear(const CPat& q);  // copair branches may share names
// in-order inl/inr choice string; distinct for distinct fields of one record
std::string pattern_choices(const Pattern& p);
std::string show(const Pattern& p);
std::string show(const CPat& q);

struct Term {
  Kind kind;
  Calc calc;
  std::vector<std::string> names;
  std::vector<FormulaPtr> anns;  // optional binder annotations, parallel to names
  std::vector<TermPtr> kids;
  Subst sub;                   // ESub
  std::vector<Pattern> pats;   // PatVal: 1; MuTildeRec: one per field
  std::vector<CPat> cpats;     // MuTildeRec/MuTildeQ: 1; CoTree: 2
};

class TermError : public std::runtime_error {
 public:
  explicit TermError(const std::string& msg) : std::runtime_error(msg) {}
};

Cat cat_of(const TermPtr& t);
Cat cat_of(Kind k, Calc c);

int term_size(const TermPtr& t);

// Children iteration covers kids then substitution payloads; paths into terms
// use this indexing.
int child_count(const TermPtr& t);
TermPtr child_at(const TermPtr& t, int i);
TermPtr with_child(const TermPtr& t, int i, TermPtr replacement);

using Path = std::vector<int>;
TermPtr at_path(const TermPtr& t, const Path& p);
TermPtr replace_at(const TermPtr& t, const Path& p, TermPtr replacement);

// Binder structure: names[name_index] is bound inside child kid_index.
struct BinderSlot {
  int name_index;
  bool is_covar;
  int kid_index;
};
// Slots for kinds whose binders live in `names`. PatVal binds nothing;
// MuTildeRec / MuTildeQ / CoTree / ESub binders are handled specially by the
// traversals in subst.cpp.
std::vector<BinderSlot> binder_slots(const TermPtr& t);

namespace mk {
TermPtr cut(TermPtr v, TermPtr e);
TermPtr esub(TermPtr subject, Subst sigma);
TermPtr var(Calc c, std::string x);
TermPtr covar(Calc c, std::string a);
TermPtr mu(std::string a, TermPtr c, FormulaPtr ann = nullptr);
TermPtr mu_tilde(std::string x, TermPtr c, FormulaPtr ann = nullptr);
TermPtr mu_tilde_not(std::string a, TermPtr c, FormulaPtr ann = nullptr);
TermPtr mu_tilde_pair(std::string x1, std::string x2, TermPtr c, FormulaPtr a1 = nullptr,
                      FormulaPtr a2 = nullptr);
TermPtr mu_tilde_case(std::string x1, TermPtr c1, std::string x2, TermPtr c2,
                      FormulaPtr a1 = nullptr, FormulaPtr a2 = nullptr);
TermPtr reflect(TermPtr inner);
TermPtr pairv(TermPtr a, TermPtr b);
TermPtr inl(Calc c, TermPtr t);
TermPtr inr(Calc c, TermPtr t);
TermPtr val_of(TermPtr v);
TermPtr copair(TermPtr e1, TermPtr e2);
TermPtr fst(TermPtr e);
TermPtr snd(TermPtr e);
TermPtr mu_not(std::string x, TermPtr c, FormulaPtr ann = nullptr);
TermPtr mu_par(std::string a1, std::string a2, TermPtr c, FormulaPtr f1 = nullptr,
               FormulaPtr f2 = nullptr);
TermPtr mu_case(std::string a1, TermPtr c1, std::string a2, TermPtr c2, FormulaPtr f1 = nullptr,
                FormulaPtr f2 = nullptr);
TermPtr derel(TermPtr v);
TermPtr patval(Pattern p, std::vector<TermPtr> fillings);
TermPtr mu_tilde_rec(CPat q, std::vector<Pattern> field_pats, std::vector<TermPtr> bodies,
                     FormulaPtr ann = nullptr);
TermPtr mu_tilde_q(CPat q, TermPtr tree, FormulaPtr ann = nullptr);
TermPtr cotree(CPat q1, CPat q2, TermPtr c1, TermPtr c2);
TermPtr lam(Calc c, std::string x, TermPtr body, FormulaPtr ann = nullptr);
TermPtr app(Calc c, TermPtr f, TermPtr a);
TermPtr ctrl(TermPtr m);
TermPtr reify_stk(std::vector<TermPtr> stack);
TermPtr lam_pair(std::string x1, std::string x2, TermPtr c, FormulaPtr a1 = nullptr,
                 FormulaPtr a2 = nullptr);
TermPtr lam_case(std::string z, std::string x1, TermPtr c1, std::string x2, TermPtr c2,
                 FormulaPtr za = nullptr);
TermPtr stack_cons(TermPtr v, TermPtr e);
}  // namespace mk

// Rebuild an identical node with new children (and substitution payloads).
TermPtr rebuild(const TermPtr& t, std::vector<TermPtr> children);
// Rebuild with renamed binder names (names vector replaced).
TermPtr with_names(const TermPtr& t, std::vector<std::string> names);

bool same_calc(const TermPtr& t, Calc c);

}  // namespace focal
