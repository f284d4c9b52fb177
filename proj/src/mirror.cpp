#include "focal/mirror.hpp"

namespace focal {

namespace {

FormulaPtr dual_ann(const FormulaPtr& f) { return f ? dual_formula(f) : nullptr; }

}  // namespace

TermPtr mirror(const TermPtr& t) {
  if (!t) throw TermError("mirror: null term");
  if (t->calc != Calc::Lfoc && t->calc != Calc::LKT)
    throw TermError("mirror: defined on Lfoc and LKT terms only");
  bool to_lkt = t->calc == Calc::Lfoc;
  Calc target = to_lkt ? Calc::LKT : Calc::Lfoc;
  switch (t->kind) {
    case Kind::Cut:
      return mk::cut(mirror(t->kids[1]), mirror(t->kids[0]));
    case Kind::Var:
      return mk::covar(target, t->names[0]);
    case Kind::Covar:
      return mk::var(target, t->names[0]);
    case Kind::Mu:
      return mk::mu_tilde(t->names[0], mirror(t->kids[0]), dual_ann(t->anns[0]));
    case Kind::MuTilde:
      return mk::mu(t->names[0], mirror(t->kids[0]), dual_ann(t->anns[0]));
    case Kind::MuTildeNot:
      return mk::mu_not(t->names[0], mirror(t->kids[0]), dual_ann(t->anns[0]));
    case Kind::MuNot:
      return mk::mu_tilde_not(t->names[0], mirror(t->kids[0]), dual_ann(t->anns[0]));
    case Kind::MuTildePair:
      return mk::mu_par(t->names[0], t->names[1], mirror(t->kids[0]), dual_ann(t->anns[0]),
                        dual_ann(t->anns[1]));
    case Kind::MuPar:
      return mk::mu_tilde_pair(t->names[0], t->names[1], mirror(t->kids[0]), dual_ann(t->anns[0]),
                               dual_ann(t->anns[1]));
    case Kind::MuTildeCase:
      return mk::mu_case(t->names[0], mirror(t->kids[0]), t->names[1], mirror(t->kids[1]),
                         dual_ann(t->anns[0]), dual_ann(t->anns[1]));
    case Kind::MuCase:
      return mk::mu_tilde_case(t->names[0], mirror(t->kids[0]), t->names[1], mirror(t->kids[1]),
                               dual_ann(t->anns[0]), dual_ann(t->anns[1]));
    case Kind::ValOf:
      return mk::val_of(mirror(t->kids[0]));
    case Kind::Reflect:
      return mk::reflect(mirror(t->kids[0]));
    case Kind::PairV:
      return mk::copair(mirror(t->kids[0]), mirror(t->kids[1]));
    case Kind::CoPair:
      return mk::pairv(mirror(t->kids[0]), mirror(t->kids[1]));
    case Kind::Inl:
      return mk::fst(mirror(t->kids[0]));
    case Kind::Fst:
      return mk::inl(Calc::Lfoc, mirror(t->kids[0]));
    case Kind::Inr:
      return mk::snd(mirror(t->kids[0]));
    case Kind::Snd:
      return mk::inr(Calc::Lfoc, mirror(t->kids[0]));
    case Kind::ESub: {
      if (!to_lkt) throw TermError("mirror: LKT carries no explicit substitutions");
      throw TermError("mirror: normalise explicit substitutions away first");
    }
    default:
      throw TermError("mirror: unsupported construct");
  }
}

}  // namespace focal
