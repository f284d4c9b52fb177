#include "focal/term.hpp"

#include <algorithm>
#include <set>

namespace focal {

// ---------------------------------------------------------------- patterns

std::vector<PatternLeaf> pattern_leaves(const Pattern& p) {
  std::vector<PatternLeaf> out;
  switch (p.k) {
    case Pattern::K::Var:
      out.push_back({false, p.name});
      break;
    case Pattern::K::CovarDag:
      out.push_back({true, p.name});
      break;
    default:
      for (auto& kid : p.kids) {
        auto sub = pattern_leaves(kid);
        out.insert(out.end(), sub.begin(), sub.end());
      }
  }
  return out;
}

std::vector<PatternLeaf> cpat_leaves(const CPat& q) {
  std::vector<PatternLeaf> out;
  switch (q.k) {
    case CPat::K::Var:
      out.push_back({false, q.name});
      break;
    case CPat::K::CovarDag:
      out.push_back({true, q.name});
      break;
    default:
      for (auto& kid : q.kids) {
        auto sub = cpat_leaves(kid);
        for (auto& l : sub) {
          bool dup = false;
          for (auto& seen : out)
            if (seen.name == l.name && seen.is_covar == l.is_covar) dup = true;
          // copair branches may share names; report each once
          if (!dup || q.k != CPat::K::CoPair) out.push_back(l);
        }
      }
  }
  return out;
}

bool pattern_shape_eq(const Pattern& a, const Pattern& b) {
  if (a.k != b.k || a.kids.size() != b.kids.size()) return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!pattern_shape_eq(a.kids[i], b.kids[i])) return false;
  return true;
}

bool pattern_eq(const Pattern& a, const Pattern& b) {
  if (a.k != b.k || a.name != b.name || a.kids.size() != b.kids.size()) return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!pattern_eq(a.kids[i], b.kids[i])) return false;
  return true;
}

bool cpat_eq(const CPat& a, const CPat& b) {
  if (a.k != b.k || a.name != b.name || a.kids.size() != b.kids.size()) return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!cpat_eq(a.kids[i], b.kids[i])) return false;
  return true;
}

bool pattern_linear(const Pattern& p) {
  auto ls = pattern_leaves(p);
  std::set<std::string> seen;
  for (auto& l : ls)
    if (!seen.insert(l.name).second) return false;
  return true;
}

static bool cpat_linear_rec(const CPat& q, std::set<std::string>& seen) {
  switch (q.k) {
    case CPat::K::Var:
    case CPat::K::CovarDag:
      return seen.insert(q.name).second;
    case CPat::K::Pair:
      return cpat_linear_rec(q.kids[0], seen) && cpat_linear_rec(q.kids[1], seen);
    case CPat::K::CoPair: {
      // a name may occur in both branches, linearly in each
      std::set<std::string> left = seen, right = seen;
      if (!cpat_linear_rec(q.kids[0], left) || !cpat_linear_rec(q.kids[1], right)) return false;
      seen.insert(left.begin(), left.end());
      seen.insert(right.begin(), right.end());
      return true;
    }
  }
  return false;
}

bool cpat_linear(const CPat& q) {
  std::set<std::string> seen;
  return cpat_linear_rec(q, seen);
}

std::string pattern_choices(const Pattern& p) {
  switch (p.k) {
    case Pattern::K::Var:
    case Pattern::K::CovarDag:
      return "";
    case Pattern::K::Pair:
      return pattern_choices(p.kids[0]) + pattern_choices(p.kids[1]);
    case Pattern::K::Inl:
      return "0" + pattern_choices(p.kids[0]);
    case Pattern::K::Inr:
      return "1" + pattern_choices(p.kids[0]);
  }
  return "";
}

std::string show(const Pattern& p) {
  switch (p.k) {
    case Pattern::K::Var:
      return p.name;
    case Pattern::K::CovarDag:
      return p.name + "^";
    case Pattern::K::Pair:
      return "(" + show(p.kids[0]) + "," + show(p.kids[1]) + ")";
    case Pattern::K::Inl:
      return "inl(" + show(p.kids[0]) + ")";
    case Pattern::K::Inr:
      return "inr(" + show(p.kids[0]) + ")";
  }
  return "?";
}

std::string show(const CPat& q) {
  switch (q.k) {
    case CPat::K::Var:
      return q.name;
    case CPat::K::CovarDag:
      return q.name + "^";
    case CPat::K::Pair:
      return "(" + show(q.kids[0]) + "," + show(q.kids[1]) + ")";
    case CPat::K::CoPair:
      return "[" + show(q.kids[0]) + "," + show(q.kids[1]) + "]";
  }
  return "?";
}

// ---------------------------------------------------------------- categories

Cat cat_of(Kind k, Calc c) {
  switch (k) {
    case Kind::Cut:
    case Kind::CoTree:
      return Cat::Command;
    case Kind::Var:
      switch (c) {
        case Calc::LKraw:
        case Calc::LKT:
        case Calc::Lambda:
          return Cat::Expr;
        default:
          return Cat::Value;  // Lfoc, LLP, Lsynth fillings, NJ, LbarQ
      }
    case Kind::Covar:
      return c == Calc::LKT ? Cat::Value : Cat::Context;
    case Kind::Mu:
      return Cat::Expr;
    case Kind::MuTilde:
    case Kind::MuTildeNot:
    case Kind::MuTildePair:
    case Kind::MuTildeCase:
    case Kind::MuTildeRec:
    case Kind::MuTildeQ:
      return Cat::Context;
    case Kind::Reflect:
      return c == Calc::LKraw ? Cat::Expr : Cat::Value;
    case Kind::PairV:
    case Kind::Inl:
    case Kind::Inr:
      return c == Calc::LKraw ? Cat::Expr : Cat::Value;
    case Kind::ValOf:
      return c == Calc::LKT ? Cat::Context : Cat::Expr;
    case Kind::CoPair:
    case Kind::Fst:
    case Kind::Snd:
      return Cat::Value;
    case Kind::MuNot:
    case Kind::MuPar:
    case Kind::MuCase:
      return Cat::Expr;
    case Kind::Derel:
      return Cat::Context;
    case Kind::PatVal:
      return Cat::Value;
    case Kind::Lam:
      return (c == Calc::NJ || c == Calc::LbarQ) ? Cat::Value : Cat::Expr;
    case Kind::App:
      return c == Calc::NJ ? Cat::Command : Cat::Expr;
    case Kind::CtrlC:
    case Kind::ReifyStk:
      return Cat::Expr;
    case Kind::LamPair:
    case Kind::LamCase:
      return Cat::Value;
    case Kind::StackCons:
      return Cat::Context;
    case Kind::ESub:
      return Cat::Expr;  // resolved via subject in cat_of(TermPtr)
  }
  return Cat::Expr;
}

Cat cat_of(const TermPtr& t) {
  if (!t) throw TermError("cat_of: null term");
  if (t->kind == Kind::ESub) return cat_of(t->kids[0]);
  return cat_of(t->kind, t->calc);
}

int term_size(const TermPtr& t) {
  int n = 1;
  for (int i = 0; i < child_count(t); ++i) n += term_size(child_at(t, i));
  return n;
}

// ---------------------------------------------------------------- children

int child_count(const TermPtr& t) {
  return static_cast<int>(t->kids.size() + t->sub.size());
}

TermPtr child_at(const TermPtr& t, int i) {
  int nk = static_cast<int>(t->kids.size());
  if (i < 0 || i >= child_count(t)) throw TermError("child_at: index out of range");
  if (i < nk) return t->kids[i];
  return t->sub[i - nk].payload;
}

TermPtr with_child(const TermPtr& t, int i, TermPtr replacement) {
  auto copy = std::make_shared<Term>(*t);
  int nk = static_cast<int>(t->kids.size());
  if (i < 0 || i >= child_count(t)) throw TermError("with_child: index out of range");
  if (i < nk)
    copy->kids[i] = std::move(replacement);
  else
    copy->sub[i - nk].payload = std::move(replacement);
  return copy;
}

TermPtr at_path(const TermPtr& t, const Path& p) {
  TermPtr cur = t;
  for (int i : p) cur = child_at(cur, i);
  return cur;
}

TermPtr replace_at(const TermPtr& t, const Path& p, TermPtr replacement) {
  if (p.empty()) return replacement;
  Path rest(p.begin() + 1, p.end());
  return with_child(t, p[0], replace_at(child_at(t, p[0]), rest, std::move(replacement)));
}

std::vector<BinderSlot> binder_slots(const TermPtr& t) {
  switch (t->kind) {
    case Kind::Mu:
      return {{0, true, 0}};
    case Kind::MuTilde:
      return {{0, false, 0}};
    case Kind::MuTildeNot:
      return {{0, true, 0}};
    case Kind::MuTildePair:
      return {{0, false, 0}, {1, false, 0}};
    case Kind::MuTildeCase:
      return {{0, false, 0}, {1, false, 1}};
    case Kind::MuNot:
      return {{0, false, 0}};
    case Kind::MuPar:
      return {{0, true, 0}, {1, true, 0}};
    case Kind::MuCase:
      return {{0, true, 0}, {1, true, 1}};
    case Kind::Lam:
      return {{0, false, 0}};
    case Kind::LamPair:
      return {{0, false, 0}, {1, false, 0}};
    case Kind::LamCase:
      // z scopes over both branches; x1 / x2 over their own
      return {{0, false, 0}, {0, false, 1}, {1, false, 0}, {2, false, 1}};
    default:
      return {};
  }
}

// ---------------------------------------------------------------- factories

namespace {

TermPtr base(Kind k, Calc c) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->calc = c;
  return t;
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw TermError("ill-formed term: " + msg);
}

void require_cat(const TermPtr& t, Cat cat, const std::string& what) {
  require(cat_of(t) == cat, what + " has wrong category");
}

bool seq_calc(Calc c) {
  return c == Calc::LKraw || c == Calc::Lfoc || c == Calc::LKT || c == Calc::LLP ||
         c == Calc::Lsynth;
}

}  // namespace

namespace mk {

TermPtr cut(TermPtr v, TermPtr e) {
  require(v && e, "cut: null side");
  Calc c = v->calc;
  require(c == e->calc, "cut: mixed calculi");
  auto t = std::make_shared<Term>();
  t->kind = Kind::Cut;
  t->calc = c;
  if (c == Calc::LLP) {
    require_cat(v, Cat::Value, "LLP cut left");
    require_cat(e, Cat::Context, "LLP cut right");
  } else if (c == Calc::Lambda) {
    // named lambda-mu command [a]M, stored as < M | a >
    require_cat(v, Cat::Expr, "named command body");
    require(e->kind == Kind::Covar, "named command needs a covariable name");
  } else if (c == Calc::LbarQ) {
    require_cat(v, Cat::Expr, "cut left");
    require_cat(e, Cat::Context, "cut right");
  } else {
    require(seq_calc(c), "cut in non-sequent calculus");
    require_cat(v, Cat::Expr, "cut left");
    require_cat(e, Cat::Context, "cut right");
  }
  t->kids = {std::move(v), std::move(e)};
  return t;
}

TermPtr esub(TermPtr subject, Subst sigma) {
  require(subject != nullptr, "esub: null subject");
  Calc c = subject->calc;
  require(c == Calc::LKraw || c == Calc::Lfoc, "explicit substitution only in LKraw / Lfoc");
  for (auto& it : sigma) {
    require(it.payload != nullptr, "esub: null payload");
    require(it.payload->calc == c, "esub: mixed calculi");
    if (it.is_covar)
      require_cat(it.payload, Cat::Context, "esub covariable payload");
    else if (c == Calc::Lfoc)
      require_cat(it.payload, Cat::Value, "esub variable payload");
    else
      require_cat(it.payload, Cat::Expr, "esub variable payload");
  }
  for (size_t i = 0; i < sigma.size(); ++i)
    for (size_t j = i + 1; j < sigma.size(); ++j)
      require(sigma[i].name != sigma[j].name || sigma[i].is_covar != sigma[j].is_covar,
              "esub: name bound twice");
  auto t = base(Kind::ESub, c);
  auto tt = std::const_pointer_cast<Term>(t);
  tt->kids = {std::move(subject)};
  tt->sub = std::move(sigma);
  return t;
}

TermPtr var(Calc c, std::string x) {
  auto t = std::const_pointer_cast<Term>(base(Kind::Var, c));
  t->names = {std::move(x)};
  return t;
}

TermPtr covar(Calc c, std::string a) {
  auto t = std::const_pointer_cast<Term>(base(Kind::Covar, c));
  t->names = {std::move(a)};
  return t;
}

static TermPtr binder1(Kind k, Calc c, std::string n, TermPtr body, FormulaPtr ann) {
  auto t = std::const_pointer_cast<Term>(base(k, c));
  t->names = {std::move(n)};
  t->anns = {std::move(ann)};
  t->kids = {std::move(body)};
  return t;
}

TermPtr mu(std::string a, TermPtr c, FormulaPtr ann) {
  require(c != nullptr, "mu: null body");
  Calc cc = c->calc;
  require(seq_calc(cc) || cc == Calc::Lambda || cc == Calc::LbarQ, "mu: bad calculus");
  require(cat_of(c) == Cat::Command, "mu body must be a command");
  return binder1(Kind::Mu, cc, std::move(a), std::move(c), std::move(ann));
}

TermPtr mu_tilde(std::string x, TermPtr c, FormulaPtr ann) {
  require(c != nullptr, "~mu: null body");
  require_cat(c, Cat::Command, "~mu body");
  Calc cc = c->calc;
  return binder1(Kind::MuTilde, cc, std::move(x), std::move(c), std::move(ann));
}

TermPtr mu_tilde_not(std::string a, TermPtr c, FormulaPtr ann) {
  require(c != nullptr, "~mu a^: null body");
  require(c->calc == Calc::LKraw || c->calc == Calc::Lfoc, "~mu a^: bad calculus");
  require_cat(c, Cat::Command, "~mu a^ body");
  Calc cc = c->calc;
  return binder1(Kind::MuTildeNot, cc, std::move(a), std::move(c), std::move(ann));
}

TermPtr mu_tilde_pair(std::string x1, std::string x2, TermPtr c, FormulaPtr a1, FormulaPtr a2) {
  require(c != nullptr, "~mu(,): null body");
  require(c->calc == Calc::LKraw || c->calc == Calc::Lfoc || c->calc == Calc::LLP,
          "~mu(,): bad calculus");
  require_cat(c, Cat::Command, "~mu(,) body");
  require(x1 != x2, "~mu(,): duplicate binder");
  auto t = std::const_pointer_cast<Term>(base(Kind::MuTildePair, c->calc));
  t->names = {std::move(x1), std::move(x2)};
  t->anns = {std::move(a1), std::move(a2)};
  t->kids = {std::move(c)};
  return t;
}

TermPtr mu_tilde_case(std::string x1, TermPtr c1, std::string x2, TermPtr c2, FormulaPtr a1,
                      FormulaPtr a2) {
  require(c1 && c2, "~mu[]: null body");
  require(c1->calc == c2->calc, "~mu[]: mixed calculi");
  require(c1->calc == Calc::LKraw || c1->calc == Calc::Lfoc || c1->calc == Calc::LLP,
          "~mu[]: bad calculus");
  require_cat(c1, Cat::Command, "~mu[] left body");
  require_cat(c2, Cat::Command, "~mu[] right body");
  auto t = std::const_pointer_cast<Term>(base(Kind::MuTildeCase, c1->calc));
  t->names = {std::move(x1), std::move(x2)};
  t->anns = {std::move(a1), std::move(a2)};
  t->kids = {std::move(c1), std::move(c2)};
  return t;
}

TermPtr reflect(TermPtr inner) {
  require(inner != nullptr, "reflect: null");
  Calc c = inner->calc;
  if (c == Calc::LKT)
    require_cat(inner, Cat::Expr, "v^ payload");  // covalue v^
  else {
    require(c == Calc::LKraw || c == Calc::Lfoc || c == Calc::LLP || c == Calc::Lsynth,
            "e^: bad calculus");
    require_cat(inner, Cat::Context, "e^ payload");
  }
  auto t = std::const_pointer_cast<Term>(base(Kind::Reflect, c));
  t->kids = {std::move(inner)};
  return t;
}

TermPtr pairv(TermPtr a, TermPtr b) {
  require(a && b, "pair: null component");
  Calc c = a->calc;
  require(c == b->calc, "pair: mixed calculi");
  Cat want = (c == Calc::LKraw) ? Cat::Expr : Cat::Value;
  require_cat(a, want, "pair left");
  require_cat(b, want, "pair right");
  auto t = std::const_pointer_cast<Term>(base(Kind::PairV, c));
  t->kids = {std::move(a), std::move(b)};
  return t;
}

TermPtr inl(Calc c, TermPtr x) {
  require(x != nullptr, "inl: null");
  require(x->calc == c, "inl: mixed calculi");
  require_cat(x, c == Calc::LKraw ? Cat::Expr : Cat::Value, "inl payload");
  auto t = std::const_pointer_cast<Term>(base(Kind::Inl, c));
  t->kids = {std::move(x)};
  return t;
}

TermPtr inr(Calc c, TermPtr x) {
  require(x != nullptr, "inr: null");
  require(x->calc == c, "inr: mixed calculi");
  require_cat(x, c == Calc::LKraw ? Cat::Expr : Cat::Value, "inr payload");
  auto t = std::const_pointer_cast<Term>(base(Kind::Inr, c));
  t->kids = {std::move(x)};
  return t;
}

TermPtr val_of(TermPtr v) {
  require(v != nullptr, "val: null");
  Calc c = v->calc;
  require(c == Calc::Lfoc || c == Calc::LKT || c == Calc::Lsynth || c == Calc::LbarQ,
          "val: bad calculus");
  require_cat(v, Cat::Value, "val payload");
  auto t = std::const_pointer_cast<Term>(base(Kind::ValOf, c));
  t->kids = {std::move(v)};
  return t;
}

TermPtr copair(TermPtr e1, TermPtr e2) {
  require(e1 && e2 && e1->calc == Calc::LKT && e2->calc == Calc::LKT, "[,]: bad calculus");
  require_cat(e1, Cat::Value, "[,] left");
  require_cat(e2, Cat::Value, "[,] right");
  auto t = std::const_pointer_cast<Term>(base(Kind::CoPair, Calc::LKT));
  t->kids = {std::move(e1), std::move(e2)};
  return t;
}

TermPtr fst(TermPtr e) {
  require(e && e->calc == Calc::LKT, "fst: bad calculus");
  require_cat(e, Cat::Value, "fst payload");
  auto t = std::const_pointer_cast<Term>(base(Kind::Fst, Calc::LKT));
  t->kids = {std::move(e)};
  return t;
}

TermPtr snd(TermPtr e) {
  require(e && e->calc == Calc::LKT, "snd: bad calculus");
  require_cat(e, Cat::Value, "snd payload");
  auto t = std::const_pointer_cast<Term>(base(Kind::Snd, Calc::LKT));
  t->kids = {std::move(e)};
  return t;
}

TermPtr mu_not(std::string x, TermPtr c, FormulaPtr ann) {
  require(c && c->calc == Calc::LKT, "mu x^: bad calculus");
  require_cat(c, Cat::Command, "mu x^ body");
  return binder1(Kind::MuNot, Calc::LKT, std::move(x), std::move(c), std::move(ann));
}

TermPtr mu_par(std::string a1, std::string a2, TermPtr c, FormulaPtr f1, FormulaPtr f2) {
  require(c && c->calc == Calc::LKT, "mu[,]: bad calculus");
  require_cat(c, Cat::Command, "mu[,] body");
  require(a1 != a2, "mu[,]: duplicate binder");
  auto t = std::const_pointer_cast<Term>(base(Kind::MuPar, Calc::LKT));
  t->names = {std::move(a1), std::move(a2)};
  t->anns = {std::move(f1), std::move(f2)};
  t->kids = {std::move(c)};
  return t;
}

TermPtr mu_case(std::string a1, TermPtr c1, std::string a2, TermPtr c2, FormulaPtr f1,
                FormulaPtr f2) {
  require(c1 && c2 && c1->calc == Calc::LKT && c2->calc == Calc::LKT, "mu[fst..]: bad calculus");
  require_cat(c1, Cat::Command, "mu[fst..] left body");
  require_cat(c2, Cat::Command, "mu[fst..] right body");
  auto t = std::const_pointer_cast<Term>(base(Kind::MuCase, Calc::LKT));
  t->names = {std::move(a1), std::move(a2)};
  t->anns = {std::move(f1), std::move(f2)};
  t->kids = {std::move(c1), std::move(c2)};
  return t;
}

TermPtr derel(TermPtr v) {
  require(v && v->calc == Calc::LLP, "dn: bad calculus");
  require_cat(v, Cat::Value, "dn payload");
  auto t = std::const_pointer_cast<Term>(base(Kind::Derel, Calc::LLP));
  t->kids = {std::move(v)};
  return t;
}

TermPtr patval(Pattern p, std::vector<TermPtr> fillings) {
  auto ls = pattern_leaves(p);
  require(pattern_linear(p), "pattern value: non-linear pattern");
  require(ls.size() == fillings.size(), "pattern value: fillings do not match leaves");
  for (size_t i = 0; i < ls.size(); ++i) {
    auto& f = fillings[i];
    require(f && f->calc == Calc::Lsynth, "pattern value: bad filling calculus");
    if (ls[i].is_covar)
      require(f->kind == Kind::Reflect, "a^ leaf must be filled with e^");
    else
      require(f->kind == Kind::Var, "variable leaf must be filled with a variable");
  }
  auto t = std::const_pointer_cast<Term>(base(Kind::PatVal, Calc::Lsynth));
  t->pats = {std::move(p)};
  t->kids = std::move(fillings);
  return t;
}

TermPtr mu_tilde_rec(CPat q, std::vector<Pattern> field_pats, std::vector<TermPtr> bodies,
                     FormulaPtr ann) {
  require(field_pats.size() == bodies.size(), "record: field/body mismatch");
  require(cpat_linear(q), "record: non-linear counterpattern");
  for (auto& b : bodies) {
    require(b && b->calc == Calc::Lsynth, "record: bad body calculus");
    require_cat(b, Cat::Command, "record body");
  }
  for (auto& p : field_pats) require(pattern_linear(p), "record: non-linear field pattern");
  auto t = std::const_pointer_cast<Term>(base(Kind::MuTildeRec, Calc::Lsynth));
  t->cpats = {std::move(q)};
  t->pats = std::move(field_pats);
  t->kids = std::move(bodies);
  t->anns = {std::move(ann)};
  return t;
}

TermPtr mu_tilde_q(CPat q, TermPtr tree, FormulaPtr ann) {
  require(tree && tree->calc == Calc::Lsynth, "~mu q.C: bad calculus");
  require_cat(tree, Cat::Command, "~mu q.C body");
  require(cpat_linear(q), "~mu q.C: non-linear counterpattern");
  auto t = std::const_pointer_cast<Term>(base(Kind::MuTildeQ, Calc::Lsynth));
  t->cpats = {std::move(q)};
  t->kids = {std::move(tree)};
  t->anns = {std::move(ann)};
  return t;
}

TermPtr cotree(CPat q1, CPat q2, TermPtr c1, TermPtr c2) {
  require(c1 && c2 && c1->calc == Calc::Lsynth && c2->calc == Calc::Lsynth,
          "command tree: bad calculus");
  require_cat(c1, Cat::Command, "command tree left");
  require_cat(c2, Cat::Command, "command tree right");
  auto t = std::const_pointer_cast<Term>(base(Kind::CoTree, Calc::Lsynth));
  t->cpats = {std::move(q1), std::move(q2)};
  t->kids = {std::move(c1), std::move(c2)};
  return t;
}

TermPtr lam(Calc c, std::string x, TermPtr body, FormulaPtr ann) {
  require(body && body->calc == c, "lambda: bad calculus");
  if (c == Calc::NJ)
    require_cat(body, Cat::Command, "NJ lambda body");
  else
    require(c == Calc::Lambda || c == Calc::LbarQ, "lambda: bad calculus");
  return binder1(Kind::Lam, c, std::move(x), std::move(body), std::move(ann));
}

TermPtr app(Calc c, TermPtr f, TermPtr a) {
  require(f && a && f->calc == c && a->calc == c, "app: bad calculus");
  if (c == Calc::NJ) {
    require_cat(f, Cat::Value, "NJ application head");
    require_cat(a, Cat::Value, "NJ application argument");
  } else {
    require(c == Calc::Lambda, "app: bad calculus");
  }
  auto t = std::const_pointer_cast<Term>(base(Kind::App, c));
  t->kids = {std::move(f), std::move(a)};
  return t;
}

TermPtr ctrl(TermPtr m) {
  require(m && m->calc == Calc::Lambda, "ctrl: bad calculus");
  auto t = std::const_pointer_cast<Term>(base(Kind::CtrlC, Calc::Lambda));
  t->kids = {std::move(m)};
  return t;
}

TermPtr reify_stk(std::vector<TermPtr> stack) {
  for (auto& m : stack) require(m && m->calc == Calc::Lambda, "reified stack: bad item");
  auto t = std::const_pointer_cast<Term>(base(Kind::ReifyStk, Calc::Lambda));
  t->kids = std::move(stack);
  return t;
}

TermPtr lam_pair(std::string x1, std::string x2, TermPtr c, FormulaPtr a1, FormulaPtr a2) {
  require(c && c->calc == Calc::NJ, "\\(,): bad calculus");
  require_cat(c, Cat::Command, "\\(,) body");
  require(x1 != x2, "\\(,): duplicate binder");
  auto t = std::const_pointer_cast<Term>(base(Kind::LamPair, Calc::NJ));
  t->names = {std::move(x1), std::move(x2)};
  t->anns = {std::move(a1), std::move(a2)};
  t->kids = {std::move(c)};
  return t;
}

TermPtr lam_case(std::string z, std::string x1, TermPtr c1, std::string x2, TermPtr c2,
                 FormulaPtr za) {
  require(c1 && c2 && c1->calc == Calc::NJ && c2->calc == Calc::NJ, "\\case: bad calculus");
  require_cat(c1, Cat::Command, "\\case left body");
  require_cat(c2, Cat::Command, "\\case right body");
  auto t = std::const_pointer_cast<Term>(base(Kind::LamCase, Calc::NJ));
  t->names = {std::move(z), std::move(x1), std::move(x2)};
  t->anns = {std::move(za), nullptr, nullptr};
  t->kids = {std::move(c1), std::move(c2)};
  return t;
}

TermPtr stack_cons(TermPtr v, TermPtr e) {
  require(v && e && v->calc == Calc::LbarQ && e->calc == Calc::LbarQ, "V.e: bad calculus");
  require_cat(v, Cat::Value, "V.e head");
  require_cat(e, Cat::Context, "V.e tail");
  auto t = std::const_pointer_cast<Term>(base(Kind::StackCons, Calc::LbarQ));
  t->kids = {std::move(v), std::move(e)};
  return t;
}

}  // namespace mk

TermPtr rebuild(const TermPtr& t, std::vector<TermPtr> children) {
  if (static_cast<int>(children.size()) != child_count(t))
    throw TermError("rebuild: wrong child count");
  auto copy = std::make_shared<Term>(*t);
  size_t nk = t->kids.size();
  for (size_t i = 0; i < nk; ++i) copy->kids[i] = children[i];
  for (size_t i = 0; i < t->sub.size(); ++i) copy->sub[i].payload = children[nk + i];
  return copy;
}

TermPtr with_names(const TermPtr& t, std::vector<std::string> names) {
  if (names.size() != t->names.size()) throw TermError("with_names: wrong arity");
  auto copy = std::make_shared<Term>(*t);
  copy->names = std::move(names);
  return copy;
}

bool same_calc(const TermPtr& t, Calc c) { return t && t->calc == c; }

}  // namespace focal
