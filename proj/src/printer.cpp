#include "focal/printer.hpp"

#include "focal/subst.hpp"

namespace focal {

namespace {

struct Printer {
  PrintOpts opts;

  std::string ann(const TermPtr& t, int i) {
    if (!opts.annotations || i >= static_cast<int>(t->anns.size()) || !t->anns[i]) return "";
    return ":" + show(t->anns[i]);
  }

  // values and covalues are self-delimiting; contexts and expressions used in
  // postfix/prefix positions get parenthesised when composite
  std::string atomically(const TermPtr& t) {
    std::string s = p(t);
    if (t->kind == Kind::Var || t->kind == Kind::Covar) return s;
    return "(" + s + ")";
  }

  std::string lam_atom(const TermPtr& t) {
    switch (t->kind) {
      case Kind::Var:
      case Kind::CtrlC:
      case Kind::ReifyStk:
      case Kind::PairV:
      case Kind::Inl:
      case Kind::Inr:
        return p(t);
      default:
        return "(" + p(t) + ")";
    }
  }

  std::string lam_head(const TermPtr& t) {
    if (t->kind == Kind::App) return p(t);
    return lam_atom(t);
  }

  std::string sigma(const Subst& sub) {
    std::string out = "[";
    bool first = true;
    for (auto& it : sub) {
      if (!first) out += ", ";
      first = false;
      out += it.name + " := " + p(it.payload);
    }
    return out + "]";
  }

  std::string p(const TermPtr& t) {
    switch (t->kind) {
      case Kind::Cut:
        return "< " + p(t->kids[0]) + " | " + p(t->kids[1]) + " >";
      case Kind::ESub: {
        auto& s = t->kids[0];
        bool atomic = s->kind == Kind::Var || s->kind == Kind::Covar || s->kind == Kind::Cut ||
                      s->kind == Kind::PairV || s->kind == Kind::Inl || s->kind == Kind::Inr ||
                      s->kind == Kind::Reflect || s->kind == Kind::ESub;
        return (atomic ? p(s) : "(" + p(s) + ")") + sigma(t->sub);
      }
      case Kind::Var:
      case Kind::Covar:
        return t->names[0];
      case Kind::Mu:
        return "mu " + t->names[0] + ann(t, 0) + "." + p(t->kids[0]);
      case Kind::MuTilde:
        return "~mu " + t->names[0] + ann(t, 0) + "." + p(t->kids[0]);
      case Kind::MuTildeNot:
        return "~mu " + t->names[0] + "^" + ann(t, 0) + "." + p(t->kids[0]);
      case Kind::MuTildePair:
        return "~mu(" + t->names[0] + ann(t, 0) + "," + t->names[1] + ann(t, 1) + ")." +
               p(t->kids[0]);
      case Kind::MuTildeCase:
        return "~mu[inl(" + t->names[0] + ann(t, 0) + ")." + p(t->kids[0]) + " | inr(" +
               t->names[1] + ann(t, 1) + ")." + p(t->kids[1]) + "]";
      case Kind::Reflect:
        return atomically(t->kids[0]) + "^";
      case Kind::PairV:
        return "(" + p(t->kids[0]) + "," + p(t->kids[1]) + ")";
      case Kind::Inl:
        return "inl(" + p(t->kids[0]) + ")";
      case Kind::Inr:
        return "inr(" + p(t->kids[0]) + ")";
      case Kind::ValOf:
        return "val " + p(t->kids[0]);
      case Kind::CoPair:
        return "[" + p(t->kids[0]) + "," + p(t->kids[1]) + "]";
      case Kind::Fst:
        return "fst(" + p(t->kids[0]) + ")";
      case Kind::Snd:
        return "snd(" + p(t->kids[0]) + ")";
      case Kind::MuNot:
        return "mu " + t->names[0] + "^" + ann(t, 0) + "." + p(t->kids[0]);
      case Kind::MuPar:
        return "mu[" + t->names[0] + ann(t, 0) + "," + t->names[1] + ann(t, 1) + "]." +
               p(t->kids[0]);
      case Kind::MuCase:
        return "mu[fst(" + t->names[0] + ann(t, 0) + ")." + p(t->kids[0]) + " | snd(" +
               t->names[1] + ann(t, 1) + ")." + p(t->kids[1]) + "]";
      case Kind::Derel:
        return "dn(" + p(t->kids[0]) + ")";
      case Kind::PatVal: {
        auto& pat = t->pats[0];
        auto leaves = pattern_leaves(pat);
        if (pat.k == Pattern::K::Var) return p(t->kids[0]);
        if (pat.k == Pattern::K::CovarDag) return p(t->kids[0]);
        std::string out = show(pat) + "{";
        for (size_t i = 0; i < leaves.size(); ++i) {
          if (i) out += ", ";
          out += leaves[i].name + (leaves[i].is_covar ? "^" : "") + " := " + p(t->kids[i]);
        }
        return out + "}";
      }
      case Kind::MuTildeRec: {
        std::string out = "~mu " + show(t->cpats[0]) + ann(t, 0) + ".{ ";
        for (size_t i = 0; i < t->kids.size(); ++i) {
          if (i) out += " ; ";
          out += show(t->pats[i]) + " -> " + p(t->kids[i]);
        }
        return out + " }";
      }
      case Kind::MuTildeQ:
        return "~mu " + show(t->cpats[0]) + ann(t, 0) + "." + p(t->kids[0]);
      case Kind::CoTree:
        return "[ " + p(t->kids[0]) + " |" + show(t->cpats[0]) + "," + show(t->cpats[1]) + "| " +
               p(t->kids[1]) + " ]";
      case Kind::Lam:
        return "\\" + t->names[0] + ann(t, 0) + "." + p(t->kids[0]);
      case Kind::App:
        return lam_head(t->kids[0]) + " " + lam_atom(t->kids[1]);
      case Kind::CtrlC:
        return "ctrl(" + p(t->kids[0]) + ")";
      case Kind::ReifyStk: {
        std::string out = "up(";
        for (auto& m : t->kids) out += lam_atom(m) + " . ";
        return out + "[])";
      }
      case Kind::LamPair:
        return "\\(" + t->names[0] + ann(t, 0) + "," + t->names[1] + ann(t, 1) + ")." +
               p(t->kids[0]);
      case Kind::LamCase:
        return "\\" + t->names[0] + ann(t, 0) + ".case " + t->names[0] + " of inl(" + t->names[1] +
               ") -> " + p(t->kids[0]) + " | inr(" + t->names[2] + ") -> " + p(t->kids[1]);
      case Kind::StackCons:
        return val_or_paren(t->kids[0]) + " . " + p(t->kids[1]);
    }
    return "?";
  }

  std::string val_or_paren(const TermPtr& t) {
    if (t->kind == Kind::Var) return p(t);
    return "(" + p(t) + ")";
  }
};

}  // namespace

std::string show(const TermPtr& t, const PrintOpts& opts) {
  if (!t) return "<null>";
  Printer pr{opts};
  return pr.p(t);
}

std::string alpha_key(const TermPtr& t) {
  PrintOpts o;
  o.annotations = false;
  Printer pr{o};
  return pr.p(canonical(t));
}

std::string show_calc(Calc c) {
  switch (c) {
    case Calc::LKraw: return "lk";
    case Calc::Lfoc: return "lfoc";
    case Calc::LKT: return "lkt";
    case Calc::LLP: return "llp";
    case Calc::NJ: return "nj";
    case Calc::Lsynth: return "synth";
    case Calc::Lambda: return "lambda";
    case Calc::LbarQ: return "lbarq";
  }
  return "?";
}

std::string show_cat(Cat c) {
  switch (c) {
    case Cat::Command: return "command";
    case Cat::Expr: return "expr";
    case Cat::Value: return "value";
    case Cat::Context: return "context";
  }
  return "?";
}

}  // namespace focal
