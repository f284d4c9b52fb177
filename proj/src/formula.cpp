#include "focal/formula.hpp"

namespace focal {

namespace {
FormulaPtr node(FormKind k, std::string atom, FormulaPtr l, FormulaPtr r) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->atom = std::move(atom);
  f->left = std::move(l);
  f->right = std::move(r);
  return f;
}
}  // namespace

namespace mkf {
FormulaPtr atom(std::string name) { return node(FormKind::Atom, std::move(name), nullptr, nullptr); }
FormulaPtr coatom(std::string name) { return node(FormKind::CoAtom, std::move(name), nullptr, nullptr); }
FormulaPtr tensor(FormulaPtr a, FormulaPtr b) { return node(FormKind::Tensor, "", std::move(a), std::move(b)); }
FormulaPtr par(FormulaPtr a, FormulaPtr b) { return node(FormKind::Par, "", std::move(a), std::move(b)); }
FormulaPtr plus(FormulaPtr a, FormulaPtr b) { return node(FormKind::Plus, "", std::move(a), std::move(b)); }
FormulaPtr with(FormulaPtr a, FormulaPtr b) { return node(FormKind::With, "", std::move(a), std::move(b)); }
FormulaPtr notp(FormulaPtr a) { return node(FormKind::NotP, "", std::move(a), nullptr); }
FormulaPtr notn(FormulaPtr a) { return node(FormKind::NotN, "", std::move(a), nullptr); }
FormulaPtr lk_and(FormulaPtr a, FormulaPtr b) { return node(FormKind::And, "", std::move(a), std::move(b)); }
FormulaPtr lk_or(FormulaPtr a, FormulaPtr b) { return node(FormKind::Or, "", std::move(a), std::move(b)); }
FormulaPtr lk_neg(FormulaPtr a) { return node(FormKind::Neg, "", std::move(a), nullptr); }
FormulaPtr fun(FormulaPtr dom, FormulaPtr cod) { return node(FormKind::Fun, "", std::move(dom), std::move(cod)); }
}  // namespace mkf

int formula_size(const FormulaPtr& f) {
  if (!f) throw FormulaError("formula_size: null formula");
  switch (f->kind) {
    case FormKind::Atom:
    case FormKind::CoAtom:
      return 1;
    case FormKind::NotP:
    case FormKind::NotN:
    case FormKind::Neg:
      return 1 + formula_size(f->left);
    default:
      return 1 + formula_size(f->left) + formula_size(f->right);
  }
}

bool formula_eq(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FormKind::Atom:
    case FormKind::CoAtom:
      return a->atom == b->atom;
    case FormKind::NotP:
    case FormKind::NotN:
    case FormKind::Neg:
      return formula_eq(a->left, b->left);
    default:
      return formula_eq(a->left, b->left) && formula_eq(a->right, b->right);
  }
}

bool is_positive(const FormulaPtr& f) {
  if (!f) return false;
  switch (f->kind) {
    case FormKind::Atom:
      return true;
    case FormKind::Tensor:
    case FormKind::Plus:
      return is_positive(f->left) && is_positive(f->right);
    case FormKind::NotP:
      return is_positive(f->left);
    default:
      return false;
  }
}

bool is_negative(const FormulaPtr& f) {
  if (!f) return false;
  switch (f->kind) {
    case FormKind::CoAtom:
      return true;
    case FormKind::Par:
    case FormKind::With:
      return is_negative(f->left) && is_negative(f->right);
    case FormKind::NotN:
      return is_negative(f->left);
    default:
      return false;
  }
}

bool is_raw(const FormulaPtr& f) {
  if (!f) return false;
  switch (f->kind) {
    case FormKind::Atom:
      return true;
    case FormKind::And:
    case FormKind::Or:
      return is_raw(f->left) && is_raw(f->right);
    case FormKind::Neg:
      return is_raw(f->left);
    default:
      return false;
  }
}

FormulaPtr dual_formula(const FormulaPtr& f) {
  if (!f) throw FormulaError("dual_formula: null formula");
  switch (f->kind) {
    case FormKind::Atom:
      return mkf::coatom(f->atom);
    case FormKind::CoAtom:
      return mkf::atom(f->atom);
    case FormKind::Tensor:
      return mkf::par(dual_formula(f->left), dual_formula(f->right));
    case FormKind::Par:
      return mkf::tensor(dual_formula(f->left), dual_formula(f->right));
    case FormKind::Plus:
      return mkf::with(dual_formula(f->left), dual_formula(f->right));
    case FormKind::With:
      return mkf::plus(dual_formula(f->left), dual_formula(f->right));
    case FormKind::NotP:
      return mkf::notn(dual_formula(f->left));
    case FormKind::NotN:
      return mkf::notp(dual_formula(f->left));
    default:
      throw FormulaError("dual_formula: not a polarised formula: " + show(f));
  }
}

FormulaPtr raw_to_positive(const FormulaPtr& f) {
  if (!f) throw FormulaError("raw_to_positive: null formula");
  switch (f->kind) {
    case FormKind::Atom:
      return f;
    case FormKind::And:
      return mkf::tensor(raw_to_positive(f->left), raw_to_positive(f->right));
    case FormKind::Or:
      return mkf::plus(raw_to_positive(f->left), raw_to_positive(f->right));
    case FormKind::Neg:
      return mkf::notp(raw_to_positive(f->left));
    default:
      throw FormulaError("raw_to_positive: not a raw LK formula: " + show(f));
  }
}

namespace {

// 3 = unary, 2 = multiplicative level (*, /\, @), 1 = additive level (+, \/, &), 0 = ->
int prec(FormKind k) {
  switch (k) {
    case FormKind::Atom:
    case FormKind::CoAtom:
      return 4;
    case FormKind::NotP:
    case FormKind::NotN:
    case FormKind::Neg:
      return 3;
    case FormKind::Tensor:
    case FormKind::And:
    case FormKind::Par:
      return 2;
    case FormKind::Plus:
    case FormKind::Or:
    case FormKind::With:
      return 1;
    case FormKind::Fun:
      return 0;
  }
  return 0;
}

void show_rec(const FormulaPtr& f, int outer, std::string& out) {
  int p = prec(f->kind);
  bool paren = p < outer;
  if (paren) out += '(';
  switch (f->kind) {
    case FormKind::Atom:
      out += f->atom;
      break;
    case FormKind::CoAtom:
      out += f->atom;
      out += '^';
      break;
    case FormKind::NotP:
    case FormKind::NotN:
      out += '~';
      show_rec(f->left, p, out);
      break;
    case FormKind::Neg:
      out += "not ";
      show_rec(f->left, p, out);
      break;
    case FormKind::Tensor:
      show_rec(f->left, p + 1, out);
      out += " * ";
      show_rec(f->right, p, out);
      break;
    case FormKind::And:
      show_rec(f->left, p + 1, out);
      out += " /\\ ";
      show_rec(f->right, p, out);
      break;
    case FormKind::Par:
      show_rec(f->left, p + 1, out);
      out += " @ ";
      show_rec(f->right, p, out);
      break;
    case FormKind::Plus:
      show_rec(f->left, p + 1, out);
      out += " + ";
      show_rec(f->right, p, out);
      break;
    case FormKind::Or:
      show_rec(f->left, p + 1, out);
      out += " \\/ ";
      show_rec(f->right, p, out);
      break;
    case FormKind::With:
      show_rec(f->left, p + 1, out);
      out += " & ";
      show_rec(f->right, p, out);
      break;
    case FormKind::Fun:
      show_rec(f->left, p + 1, out);
      out += " -> ";
      show_rec(f->right, p, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string show(const FormulaPtr& f) {
  if (!f) return "<null>";
  std::string out;
  show_rec(f, 0, out);
  return out;
}

}  // namespace focal
