#include "focal/synth.hpp"

#include <algorithm>
#include <climits>

#include "focal/printer.hpp"
#include "focal/subst.hpp"

namespace focal {

// ------------------------------------------------------------- orthogonality

bool orthogonal(const CPat& q, const Pattern& p) {
  switch (q.k) {
    case CPat::K::Var:
      return p.k == Pattern::K::Var && p.name == q.name;
    case CPat::K::CovarDag:
      return p.k == Pattern::K::CovarDag && p.name == q.name;
    case CPat::K::Pair:
      return p.k == Pattern::K::Pair && orthogonal(q.kids[0], p.kids[0]) &&
             orthogonal(q.kids[1], p.kids[1]);
    case CPat::K::CoPair:
      if (p.k == Pattern::K::Inl) return orthogonal(q.kids[0], p.kids[0]);
      if (p.k == Pattern::K::Inr) return orthogonal(q.kids[1], p.kids[0]);
      return false;
  }
  return false;
}

std::vector<Pattern> patterns_of(const CPat& q) {
  switch (q.k) {
    case CPat::K::Var: {
      Pattern p;
      p.k = Pattern::K::Var;
      p.name = q.name;
      return {p};
    }
    case CPat::K::CovarDag: {
      Pattern p;
      p.k = Pattern::K::CovarDag;
      p.name = q.name;
      return {p};
    }
    case CPat::K::Pair: {
      auto ls = patterns_of(q.kids[0]);
      auto rs = patterns_of(q.kids[1]);
      std::vector<Pattern> out;
      for (auto& l : ls)
        for (auto& r : rs) {
          Pattern p;
          p.k = Pattern::K::Pair;
          p.kids = {l, r};
          out.push_back(p);
        }
      return out;
    }
    case CPat::K::CoPair: {
      std::vector<Pattern> out;
      for (auto& l : patterns_of(q.kids[0])) {
        Pattern p;
        p.k = Pattern::K::Inl;
        p.kids = {l};
        out.push_back(p);
      }
      for (auto& r : patterns_of(q.kids[1])) {
        Pattern p;
        p.k = Pattern::K::Inr;
        p.kids = {r};
        out.push_back(p);
      }
      return out;
    }
  }
  return {};
}

// ------------------------------------------------------------- command trees

std::vector<TermPtr> tree_leaves(const TermPtr& C) {
  if (C->kind == Kind::CoTree) {
    auto l = tree_leaves(C->kids[0]);
    auto r = tree_leaves(C->kids[1]);
    l.insert(l.end(), r.begin(), r.end());
    return l;
  }
  return {C};
}

namespace {

int leaf_count(const TermPtr& C) {
  if (C->kind == Kind::CoTree) return leaf_count(C->kids[0]) + leaf_count(C->kids[1]);
  return 1;
}

}  // namespace

MatchResult match_counterpattern(const TermPtr& C,
                                 std::vector<std::pair<CPat, Pattern>> bindings) {
  MatchResult res;
  res.leaf_index = 0;
  TermPtr cur = C;
  while (true) {
    bool fired = false;
    // pair splits and leaf deletions act on the bindings alone
    for (size_t i = 0; i < bindings.size(); ++i) {
      auto& [q, p] = bindings[i];
      if (q.k == CPat::K::Pair && p.k == Pattern::K::Pair) {
        CPat q1 = q.kids[0], q2 = q.kids[1];
        Pattern p1 = p.kids[0], p2 = p.kids[1];
        bindings.erase(bindings.begin() + i);
        bindings.insert(bindings.begin() + i, {q2, p2});
        bindings.insert(bindings.begin() + i, {q1, p1});
        res.trace.push_back("pair");
        fired = true;
        break;
      }
      if (q.k == CPat::K::Var && p.k == Pattern::K::Var) {
        if (q.name != p.name) throw TermError("match: non-orthogonal variable leaves");
        bindings.erase(bindings.begin() + i);
        res.trace.push_back("drop-var");
        fired = true;
        break;
      }
      if (q.k == CPat::K::CovarDag && p.k == Pattern::K::CovarDag) {
        if (q.name != p.name) throw TermError("match: non-orthogonal covariable leaves");
        bindings.erase(bindings.begin() + i);
        res.trace.push_back("drop-covar");
        fired = true;
        break;
      }
      if (q.k == CPat::K::Var || q.k == CPat::K::CovarDag || q.k == CPat::K::Pair)
        if (p.k != Pattern::K::Var && p.k != Pattern::K::CovarDag &&
            !(q.k == CPat::K::Pair && p.k == Pattern::K::Pair) && q.k != CPat::K::CoPair)
          throw TermError("match: non-orthogonal binding " + show(q) + " vs " + show(p));
    }
    if (fired) continue;
    // copair selection: the root of C decides which binding fires
    if (cur->kind == Kind::CoTree) {
      CPat root;
      root.k = CPat::K::CoPair;
      root.kids = {cur->cpats[0], cur->cpats[1]};
      bool selected = false;
      for (size_t i = 0; i < bindings.size(); ++i) {
        auto& [q, p] = bindings[i];
        if (q.k == CPat::K::CoPair && cpat_eq(q, root)) {
          if (p.k == Pattern::K::Inl) {
            CPat q1 = q.kids[0];
            Pattern p1 = p.kids[0];
            cur = cur->kids[0];
            bindings[i] = {q1, p1};
            res.trace.push_back("select-inl");
          } else if (p.k == Pattern::K::Inr) {
            CPat q2 = q.kids[1];
            Pattern p2 = p.kids[0];
            res.leaf_index += leaf_count(cur->kids[0]);
            cur = cur->kids[1];
            bindings[i] = {q2, p2};
            res.trace.push_back("select-inr");
          } else {
            throw TermError("match: copair against non-injection pattern");
          }
          selected = true;
          break;
        }
      }
      if (!selected) throw TermError("match: command tree root has no matching binding");
      continue;
    }
    break;
  }
  if (!bindings.empty()) throw TermError("match: stuck with unresolved bindings");
  if (cur->kind == Kind::CoTree) throw TermError("match: result is not a simple command");
  res.command = cur;
  return res;
}

// ------------------------------------------------------------- Fig 4 typing

std::optional<PatTyping> pattern_typing(const Pattern& p, const FormulaPtr& P) {
  switch (p.k) {
    case Pattern::K::Var:
      if (P->kind != FormKind::Atom) return std::nullopt;
      return PatTyping{{{p.name, P}}, {}};
    case Pattern::K::CovarDag:
      if (P->kind != FormKind::NotP) return std::nullopt;
      return PatTyping{{}, {{p.name, P->left}}};
    case Pattern::K::Pair: {
      if (P->kind != FormKind::Tensor) return std::nullopt;
      auto l = pattern_typing(p.kids[0], P->left);
      auto r = pattern_typing(p.kids[1], P->right);
      if (!l || !r) return std::nullopt;
      PatTyping out = *l;
      out.xi.insert(out.xi.end(), r->xi.begin(), r->xi.end());
      out.delta.insert(out.delta.end(), r->delta.begin(), r->delta.end());
      return out;
    }
    case Pattern::K::Inl:
      if (P->kind != FormKind::Plus) return std::nullopt;
      return pattern_typing(p.kids[0], P->left);
    case Pattern::K::Inr:
      if (P->kind != FormKind::Plus) return std::nullopt;
      return pattern_typing(p.kids[0], P->right);
  }
  return std::nullopt;
}

namespace {

struct SFail {
  std::string message;
  TermPtr at;
};

[[noreturn]] void sbail(const std::string& msg, const TermPtr& at) { throw SFail{msg, at}; }

void sneed(bool cond, const std::string& msg, const TermPtr& at) {
  if (!cond) sbail(msg, at);
}

struct SynthChecker {
  FormulaPtr synth_value(const TermPtr& V, const TypingEnv& env) {
    if (V->kind != Kind::PatVal) return nullptr;
    return synth_patval(V->pats[0], V->kids, 0, env).second;
  }

  // returns (#leaves consumed, formula or null)
  std::pair<int, FormulaPtr> synth_patval(const Pattern& p, const std::vector<TermPtr>& fills,
                                          int at, const TypingEnv& env) {
    switch (p.k) {
      case Pattern::K::Var: {
        const TermPtr& f = fills[at];
        if (f->kind != Kind::Var) return {1, nullptr};
        auto it = env.gamma.find(f->names[0]);
        return {1, it == env.gamma.end() ? nullptr : it->second};
      }
      case Pattern::K::CovarDag: {
        const TermPtr& f = fills[at];
        if (f->kind != Kind::Reflect) return {1, nullptr};
        FormulaPtr q = synth_context(f->kids[0], env);
        return {1, q ? mkf::notp(q) : nullptr};
      }
      case Pattern::K::Pair: {
        auto [n1, f1] = synth_patval(p.kids[0], fills, at, env);
        auto [n2, f2] = synth_patval(p.kids[1], fills, at + n1, env);
        return {n1 + n2, (f1 && f2) ? mkf::tensor(f1, f2) : nullptr};
      }
      default: {
        // injections are not synthesisable
        auto [n, f] = synth_patval(p.kids[0], fills, at, env);
        (void)f;
        return {n, nullptr};
      }
    }
  }

  FormulaPtr synth_context(const TermPtr& e, const TypingEnv& env) {
    if (e->kind == Kind::Covar) {
      auto it = env.delta.find(e->names[0]);
      return it == env.delta.end() ? nullptr : it->second;
    }
    if (e->kind == Kind::MuTildeRec) return e->anns.empty() ? nullptr : e->anns[0];
    return nullptr;
  }

  FormulaPtr synth_expr(const TermPtr& v, const TypingEnv& env) {
    if (v->kind == Kind::ValOf) return synth_value(v->kids[0], env);
    if (v->kind == Kind::Mu) return v->anns[0];
    return nullptr;
  }

  Deriv check_command(const TermPtr& c, const TypingEnv& env) {
    sneed(c->kind == Kind::Cut, "expected a synthetic command", c);
    const TermPtr& v = c->kids[0];
    const TermPtr& e = c->kids[1];
    FormulaPtr P = synth_expr(v, env);
    Deriv dv, de;
    if (P) {
      dv = check_expr(v, P, env);
      de = check_context(e, P, env);
    } else {
      P = synth_context(e, env);
      sneed(P != nullptr, "cannot infer the cut formula; annotate a binder", c);
      de = check_context(e, P, env);
      dv = check_expr(v, P, env);
    }
    Deriv d{"cut", {JKind::Command, env, c, nullptr}, {dv, de}, nullptr};
    d.elab = mk::cut(dv.elab, de.elab);
    return d;
  }

  Deriv check_expr(const TermPtr& v, const FormulaPtr& P, const TypingEnv& env) {
    if (v->kind == Kind::ValOf) {
      Deriv dV = check_value(v->kids[0], P, env);
      Deriv d{"val", {JKind::Expr, env, v, P}, {dV}, nullptr};
      d.elab = mk::val_of(dV.elab);
      return d;
    }
    if (v->kind == Kind::Mu) {
      if (v->anns[0])
        sneed(formula_eq(v->anns[0], P), "mu annotation conflicts with expected formula", v);
      Deriv dc = check_command(v->kids[0], env.with_covar(v->names[0], P));
      Deriv d{"mu", {JKind::Expr, env, v, P}, {dc}, nullptr};
      d.elab = mk::mu(v->names[0], dc.elab, P);
      return d;
    }
    sbail("not a synthetic expression", v);
  }

  Deriv check_value(const TermPtr& V, const FormulaPtr& P, const TypingEnv& env) {
    sneed(V->kind == Kind::PatVal, "expected a pattern value", V);
    const Pattern& p = V->pats[0];
    auto pt = pattern_typing(p, P);
    sneed(pt.has_value(), "Gamma(p,P) undefined: pattern does not match " + show(P), V);
    auto leaves = pattern_leaves(p);
    std::vector<Deriv> kids;
    std::vector<TermPtr> elab_fills;
    size_t xi_at = 0, delta_at = 0;
    for (size_t i = 0; i < leaves.size(); ++i) {
      const TermPtr& f = V->kids[i];
      if (!leaves[i].is_covar) {
        sneed(f->kind == Kind::Var, "variable leaf filled with a non-variable", V);
        FormulaPtr X = pt->xi[xi_at++].second;
        auto it = env.gamma.find(f->names[0]);
        sneed(it != env.gamma.end(), "unbound filling variable " + f->names[0], f);
        sneed(formula_eq(it->second, X),
              "filling " + f->names[0] + " has the wrong atomic type", f);
        kids.push_back({"ax-v", {JKind::Value, env, f, X}, {}, f});
        elab_fills.push_back(f);
      } else {
        sneed(f->kind == Kind::Reflect, "a^ leaf filled with a non-reflected context", V);
        FormulaPtr Q = pt->delta[delta_at++].second;
        Deriv dc = check_context(f->kids[0], Q, env);
        kids.push_back({"not-r", {JKind::Value, env, f, mkf::notp(Q)}, {dc}, nullptr});
        kids.back().elab = mk::reflect(dc.elab);
        elab_fills.push_back(kids.back().elab);
      }
    }
    Deriv d{"patval", {JKind::Value, env, V, P}, kids, nullptr};
    d.elab = mk::patval(p, elab_fills);
    return d;
  }

  Deriv check_context(const TermPtr& e, const FormulaPtr& P, const TypingEnv& env) {
    if (e->kind == Kind::Covar) {
      auto it = env.delta.find(e->names[0]);
      sneed(it != env.delta.end(), "unbound covariable " + e->names[0], e);
      sneed(formula_eq(it->second, P), "covariable type mismatch at " + e->names[0], e);
      return {"ax-e", {JKind::Context, env, e, P}, {}, e};
    }
    sneed(e->kind == Kind::MuTildeRec, "expected a ~mu q record", e);
    if (e->anns[0])
      sneed(formula_eq(e->anns[0], P), "~mu q annotation conflicts with expected formula", e);
    std::vector<Pattern> canon = patterns_of(e->cpats[0]);
    sneed(canon.size() >= e->pats.size(), "record has extra fields", e);
    std::vector<bool> used(canon.size(), false);
    std::vector<Deriv> kids;
    std::vector<Pattern> elab_pats;
    std::vector<TermPtr> elab_bodies;
    for (size_t i = 0; i < e->pats.size(); ++i) {
      int found = -1;
      for (size_t j = 0; j < canon.size(); ++j)
        if (!used[j] && pattern_shape_eq(canon[j], e->pats[i])) {
          found = static_cast<int>(j);
          break;
        }
      sneed(found >= 0, "field " + show(e->pats[i]) + " is not orthogonal to the counterpattern",
            e);
      used[found] = true;
      auto pt = pattern_typing(e->pats[i], P);
      sneed(pt.has_value(), "Gamma(p,P) undefined for field " + show(e->pats[i]), e);
      TypingEnv inner = env;
      for (auto& [x, X] : pt->xi) inner.gamma[x] = X;
      for (auto& [a, Q] : pt->delta) inner.delta[a] = Q;
      kids.push_back(check_command(e->kids[i], inner));
      elab_pats.push_back(e->pats[i]);
      elab_bodies.push_back(kids.back().elab);
    }
    for (size_t j = 0; j < canon.size(); ++j)
      sneed(used[j], "record is missing the field " + show(canon[j]), e);
    Deriv d{"mu~q", {JKind::Context, env, e, P}, kids, nullptr};
    d.elab = mk::mu_tilde_rec(e->cpats[0], elab_pats, elab_bodies, P);
    return d;
  }
};

void require_synth_env(const TypingEnv& env, const TermPtr& at) {
  for (auto& [n, f] : env.gamma) {
    sneed(is_positive(f), "environment entry " + n + " is not positive", at);
    sneed(f->kind == FormKind::Atom,
          "strong focalisation violated: variable " + n + " has non-atomic type", at);
  }
  for (auto& [n, f] : env.delta)
    sneed(is_positive(f), "environment entry " + n + " is not positive", at);
}

}  // namespace

TypeResult typecheck_synth(const Judgement& j) {
  try {
    sneed(j.subject != nullptr, "null subject", nullptr);
    sneed(j.subject->calc == Calc::Lsynth, "typecheck_synth expects a synthetic term", j.subject);
    require_synth_env(j.env, j.subject);
    SynthChecker ck;
    Deriv d;
    switch (j.kind) {
      case JKind::Command:
        sneed(j.formula == nullptr, "a command judgement carries no formula", j.subject);
        d = ck.check_command(j.subject, j.env);
        break;
      case JKind::Expr: {
        FormulaPtr goal = j.formula ? j.formula : ck.synth_expr(j.subject, j.env);
        sneed(goal != nullptr, "cannot infer the formula of this expression", j.subject);
        d = ck.check_expr(j.subject, goal, j.env);
        break;
      }
      case JKind::Value: {
        FormulaPtr goal = j.formula ? j.formula : ck.synth_value(j.subject, j.env);
        sneed(goal != nullptr, "cannot infer the formula of this value", j.subject);
        d = ck.check_value(j.subject, goal, j.env);
        break;
      }
      case JKind::Context: {
        FormulaPtr goal = j.formula ? j.formula : ck.synth_context(j.subject, j.env);
        sneed(goal != nullptr, "cannot infer the formula of this context", j.subject);
        d = ck.check_context(j.subject, goal, j.env);
        break;
      }
    }
    return {d, std::nullopt};
  } catch (const SFail& f) {
    return {std::nullopt, TypeFailure{f.message, f.at}};
  }
}

// --------------------------------------------------------- intermediate system

namespace {

struct IntermChecker {
  Deriv check_tree(const TermPtr& C, IntermEnv env) {
    // decompose non-atomic entries until the copair splits remain
    for (size_t i = 0; i < env.left.size();) {
      IntermEntry& en = env.left[i];
      switch (en.q.k) {
        case CPat::K::Var:
          if (en.type->kind == FormKind::Atom) {
            ++i;
            continue;
          }
          sbail("strong focalisation violated: variable " + en.q.name +
                    " at non-atomic type " + show(en.type),
                C);
        case CPat::K::CovarDag: {
          sneed(en.type->kind == FormKind::NotP,
                "counterpattern a^ at non-negated type " + show(en.type), C);
          env.delta[en.q.name] = en.type->left;
          env.left.erase(env.left.begin() + i);
          continue;
        }
        case CPat::K::Pair: {
          sneed(en.type->kind == FormKind::Tensor,
                "counterpattern (q,q) at non-tensor type " + show(en.type), C);
          CPat q1 = en.q.kids[0], q2 = en.q.kids[1];
          FormulaPtr t = en.type;
          env.left.erase(env.left.begin() + i);
          env.left.insert(env.left.begin() + i, {q2, t->right});
          env.left.insert(env.left.begin() + i, {q1, t->left});
          continue;
        }
        case CPat::K::CoPair:
          ++i;
          continue;
      }
    }
    // remaining non-atomic entries are copairs, matched by the tree structure
    bool has_copair = false;
    for (auto& en : env.left)
      if (en.q.k == CPat::K::CoPair) has_copair = true;
    if (has_copair) {
      sneed(C->kind == Kind::CoTree,
            "copair counterpattern requires a command-tree node", C);
      CPat root;
      root.k = CPat::K::CoPair;
      root.kids = {C->cpats[0], C->cpats[1]};
      int found = -1;
      for (size_t i = 0; i < env.left.size(); ++i)
        if (env.left[i].q.k == CPat::K::CoPair && cpat_eq(env.left[i].q, root))
          found = static_cast<int>(i);
      sneed(found >= 0, "command-tree labels match no copair counterpattern", C);
      FormulaPtr t = env.left[found].type;
      sneed(t->kind == FormKind::Plus, "copair counterpattern at non-sum type " + show(t), C);
      IntermEnv left_env = env, right_env = env;
      left_env.left[found] = {root.kids[0], t->left};
      right_env.left[found] = {root.kids[1], t->right};
      Deriv d1 = check_tree(C->kids[0], left_env);
      Deriv d2 = check_tree(C->kids[1], right_env);
      Deriv d{"copair", {JKind::Command, {}, C, nullptr}, {d1, d2}, C};
      return d;
    }
    sneed(C->kind != Kind::CoTree, "command-tree node with no copair counterpattern", C);
    // all entries atomic: a simple command under (Xi |- Delta)
    TypingEnv tenv;
    for (auto& en : env.left) tenv.gamma[en.q.name] = en.type;
    tenv.delta = env.delta;
    return check_simple(C, tenv);
  }

  Deriv check_simple(const TermPtr& c, const TypingEnv& env) {
    sneed(c->kind == Kind::Cut, "expected a simple command", c);
    const TermPtr& v = c->kids[0];
    const TermPtr& e = c->kids[1];
    FormulaPtr P = synth_expr(v, env);
    Deriv dv, de;
    if (P) {
      dv = check_expr(v, P, env);
      de = check_context(e, P, env);
    } else {
      P = synth_context(e, env);
      sneed(P != nullptr, "cannot infer the cut formula; annotate a binder", c);
      de = check_context(e, P, env);
      dv = check_expr(v, P, env);
    }
    return {"cut", {JKind::Command, env, c, nullptr}, {dv, de}, c};
  }

  FormulaPtr synth_expr(const TermPtr& v, const TypingEnv& env) {
    if (v->kind == Kind::ValOf) return synth_value(v->kids[0], env);
    if (v->kind == Kind::Mu) return v->anns[0];
    return nullptr;
  }

  FormulaPtr synth_value(const TermPtr& V, const TypingEnv& env) {
    switch (V->kind) {
      case Kind::Var: {
        auto it = env.gamma.find(V->names[0]);
        return it == env.gamma.end() ? nullptr : it->second;
      }
      case Kind::PairV: {
        auto a = synth_value(V->kids[0], env);
        auto b = synth_value(V->kids[1], env);
        return (a && b) ? mkf::tensor(a, b) : nullptr;
      }
      case Kind::Reflect: {
        auto q = synth_context(V->kids[0], env);
        return q ? mkf::notp(q) : nullptr;
      }
      default:
        return nullptr;
    }
  }

  FormulaPtr synth_context(const TermPtr& e, const TypingEnv& env) {
    if (e->kind == Kind::Covar) {
      auto it = env.delta.find(e->names[0]);
      return it == env.delta.end() ? nullptr : it->second;
    }
    if (e->kind == Kind::MuTildeQ) return e->anns[0];
    return nullptr;
  }

  Deriv check_expr(const TermPtr& v, const FormulaPtr& P, const TypingEnv& env) {
    if (v->kind == Kind::ValOf) {
      Deriv dV = check_value(v->kids[0], P, env);
      return {"val", {JKind::Expr, env, v, P}, {dV}, v};
    }
    if (v->kind == Kind::Mu) {
      if (v->anns[0]) sneed(formula_eq(v->anns[0], P), "mu annotation mismatch", v);
      IntermEnv inner;
      for (auto& [x, X] : env.gamma) inner.left.push_back({CPat{CPat::K::Var, x, {}}, X});
      inner.delta = env.delta;
      inner.delta[v->names[0]] = P;
      Deriv dc = check_tree(v->kids[0], inner);
      return {"mu", {JKind::Expr, env, v, P}, {dc}, v};
    }
    sbail("not an intermediate expression", v);
  }

  Deriv check_value(const TermPtr& V, const FormulaPtr& P, const TypingEnv& env) {
    switch (V->kind) {
      case Kind::Var: {
        sneed(P->kind == FormKind::Atom,
              "strong focalisation violated: variable value at non-atomic type " + show(P), V);
        auto it = env.gamma.find(V->names[0]);
        sneed(it != env.gamma.end(), "unbound variable " + V->names[0], V);
        sneed(formula_eq(it->second, P), "variable type mismatch at " + V->names[0], V);
        return {"ax-v", {JKind::Value, env, V, P}, {}, V};
      }
      case Kind::PairV: {
        sneed(P->kind == FormKind::Tensor, "pair at non-tensor " + show(P), V);
        Deriv d1 = check_value(V->kids[0], P->left, env);
        Deriv d2 = check_value(V->kids[1], P->right, env);
        return {"tensor-r", {JKind::Value, env, V, P}, {d1, d2}, V};
      }
      case Kind::Inl: {
        sneed(P->kind == FormKind::Plus, "inl at non-sum " + show(P), V);
        Deriv d1 = check_value(V->kids[0], P->left, env);
        return {"plus-r1", {JKind::Value, env, V, P}, {d1}, V};
      }
      case Kind::Inr: {
        sneed(P->kind == FormKind::Plus, "inr at non-sum " + show(P), V);
        Deriv d1 = check_value(V->kids[0], P->right, env);
        return {"plus-r2", {JKind::Value, env, V, P}, {d1}, V};
      }
      case Kind::Reflect: {
        sneed(P->kind == FormKind::NotP, "e^ at non-negated " + show(P), V);
        Deriv d1 = check_context(V->kids[0], P->left, env);
        return {"not-r", {JKind::Value, env, V, P}, {d1}, V};
      }
      default:
        sbail("not an intermediate value", V);
    }
  }

  Deriv check_context(const TermPtr& e, const FormulaPtr& P, const TypingEnv& env) {
    if (e->kind == Kind::Covar) {
      auto it = env.delta.find(e->names[0]);
      sneed(it != env.delta.end(), "unbound covariable " + e->names[0], e);
      sneed(formula_eq(it->second, P), "covariable type mismatch", e);
      return {"ax-e", {JKind::Context, env, e, P}, {}, e};
    }
    if (e->kind == Kind::MuTildeQ) {
      if (e->anns[0]) sneed(formula_eq(e->anns[0], P), "~mu q annotation mismatch", e);
      IntermEnv inner;
      for (auto& [x, X] : env.gamma) inner.left.push_back({CPat{CPat::K::Var, x, {}}, X});
      inner.left.push_back({e->cpats[0], P});
      inner.delta = env.delta;
      Deriv dc = check_tree(e->kids[0], inner);
      return {"mu~q", {JKind::Context, env, e, P}, {dc}, e};
    }
    sbail("not an intermediate context", e);
  }
};

}  // namespace

TypeResult typecheck_intermediate(const TermPtr& C, const IntermEnv& env) {
  try {
    sneed(C != nullptr, "null subject", nullptr);
    sneed(C->calc == Calc::Lsynth, "typecheck_intermediate expects an intermediate term", C);
    IntermChecker ck;
    Deriv d = ck.check_tree(C, env);
    return {d, std::nullopt};
  } catch (const SFail& f) {
    return {std::nullopt, TypeFailure{f.message, f.at}};
  }
}

BijectionReport bijection_check(const TermPtr& C, const CPat& q, const FormulaPtr& P,
                                const IntermEnv& ambient) {
  BijectionReport rep;
  IntermEnv env = ambient;
  env.left.push_back({q, P});
  TypeResult tr = typecheck_intermediate(C, env);
  if (!tr.ok()) {
    rep.why = "precondition: " + tr.failure->message;
    return rep;
  }
  std::vector<Pattern> ps = patterns_of(q);
  std::vector<TermPtr> leaves = tree_leaves(C);
  if (ps.size() != leaves.size()) {
    rep.why = "pattern count " + std::to_string(ps.size()) + " differs from leaf count " +
              std::to_string(leaves.size());
    return rep;
  }
  std::vector<bool> hit(leaves.size(), false);
  for (auto& p : ps) {
    MatchResult m;
    try {
      m = match_counterpattern(C, {{q, p}});
    } catch (const TermError& e) {
      rep.why = std::string("match failed: ") + e.what();
      return rep;
    }
    if (m.leaf_index < 0 || m.leaf_index >= static_cast<int>(leaves.size())) {
      rep.why = "leaf index out of range";
      return rep;
    }
    if (hit[m.leaf_index]) {
      rep.why = "two patterns reach leaf " + std::to_string(m.leaf_index);
      return rep;
    }
    if (!alpha_eq(m.command, leaves[m.leaf_index])) {
      rep.why = "match result differs from the in-order leaf";
      return rep;
    }
    hit[m.leaf_index] = true;
    rep.mapping.emplace_back(p, m.leaf_index);
  }
  for (bool h : hit)
    if (!h) {
      rep.why = "some leaf is not reached by any pattern";
      return rep;
    }
  rep.ok = true;
  return rep;
}

// --------------------------------------------------------------- Fig 4 steps

void synth_root_redexes(const TermPtr& t, std::vector<Redex>& out, const Path& here) {
  if (t->kind != Kind::Cut) return;
  const TermPtr& v = t->kids[0];
  const TermPtr& e = t->kids[1];
  if (v->kind == Kind::Mu) out.push_back({here, "mu"});
  if (v->kind == Kind::ValOf && v->kids[0]->kind == Kind::PatVal &&
      e->kind == Kind::MuTildeRec)
    out.push_back({here, "mu~plus"});
}

TermPtr synth_contract(const TermPtr& t, const std::string& rule) {
  const TermPtr& v = t->kids[0];
  const TermPtr& e = t->kids[1];
  if (rule == "mu") return subst(v->kids[0], {{v->names[0], true, e}});
  if (rule == "mu~plus") {
    const TermPtr& V = v->kids[0];
    const Pattern& p = V->pats[0];
    int field = -1;
    for (size_t i = 0; i < e->pats.size(); ++i)
      if (pattern_shape_eq(e->pats[i], p)) {
        field = static_cast<int>(i);
        break;
      }
    if (field < 0)
      throw TermError("the value's pattern " + show(p) + " is not a field of the record");
    auto field_leaves = pattern_leaves(e->pats[field]);
    Subst items;
    for (size_t i = 0; i < field_leaves.size(); ++i) {
      if (field_leaves[i].is_covar)
        items.push_back({field_leaves[i].name, true, V->kids[i]->kids[0]});
      else
        items.push_back({field_leaves[i].name, false, V->kids[i]});
    }
    return subst(e->kids[field], items);
  }
  throw TermError("unknown synthetic rule " + rule);
}

std::optional<std::pair<TermPtr, TraceStep>> step_synth(const TermPtr& c) {
  Strategy s;
  return step(c, s, SubstMode::Bundled, 0);
}

// ------------------------------------------------------------ sequents, ~>

namespace {

int left_sizes_total(const std::vector<std::pair<std::string, FormulaPtr>>& pend) {
  int n = 0;
  for (auto& [_, f] : pend) n += formula_size(f);
  return n;
}

}  // namespace

std::vector<Sequent> sequent_normalize(
    const std::vector<std::pair<std::string, FormulaPtr>>& gamma,
    const std::map<std::string, FormulaPtr>& delta) {
  struct Work {
    std::vector<std::pair<std::string, FormulaPtr>> pending;
    Sequent seq;
  };
  std::vector<Work> work{{gamma, Sequent{{}, delta}}};
  std::vector<Sequent> done;
  while (!work.empty()) {
    Work w = std::move(work.back());
    work.pop_back();
    if (w.pending.empty()) {
      done.push_back(std::move(w.seq));
      continue;
    }
    int before = left_sizes_total(w.pending);
    auto [x, f] = w.pending.front();
    w.pending.erase(w.pending.begin());
    switch (f->kind) {
      case FormKind::Atom:
        w.seq.xi.emplace_back(x, f);
        work.push_back(std::move(w));
        break;
      case FormKind::NotP:
        w.seq.delta[x + ".1"] = f->left;
        work.push_back(std::move(w));
        break;
      case FormKind::Tensor: {
        w.pending.insert(w.pending.begin(), {x + ".2", f->right});
        w.pending.insert(w.pending.begin(), {x + ".1", f->left});
        work.push_back(std::move(w));
        break;
      }
      case FormKind::Plus: {
        Work wl = w, wr = std::move(w);
        wl.pending.insert(wl.pending.begin(), {x + ".1", f->left});
        wr.pending.insert(wr.pending.begin(), {x + ".2", f->right});
        work.push_back(std::move(wl));
        work.push_back(std::move(wr));
        break;
      }
      default:
        throw TermError("sequent_normalize: non-positive left formula " + show(f));
    }
    // the multiset of left formula sizes strictly decreases at each rewrite
    for (auto& w2 : work)
      if (&w2 == &work.back() && left_sizes_total(w2.pending) >= before + 1)
        throw TermError("sequent_normalize: measure did not decrease");
  }
  std::reverse(done.begin(), done.end());
  return done;
}

// ------------------------------------------------------- strong focalisation

namespace {

struct DecLeaf {
  Pattern pat;         // canonical pattern for this branch
  TermPtr value;       // Lfoc value to substitute for the decomposed variable
  std::vector<std::pair<std::string, FormulaPtr>> xi;
  std::vector<std::pair<std::string, FormulaPtr>> delta;
};

struct Decomposition {
  CPat q;
  std::vector<DecLeaf> leaves;
};

struct Focalizer {
  NameGen gen;
  NameSets taken;
  int calls = 0;
  int max_measure = 0;

  std::string fresh_name(const std::string& base, bool covar) {
    std::string stem = base;
    if (!taken.contains(stem, covar)) {
      taken.add(stem, covar);
      return stem;
    }
    std::string n = gen.fresh(base, taken, covar);
    taken.add(n, covar);
    return n;
  }

  Decomposition decompose(const std::string& x, const FormulaPtr& P) {
    Decomposition d;
    switch (P->kind) {
      case FormKind::Atom: {
        std::string n = fresh_name(x, false);
        d.q = CPat{CPat::K::Var, n, {}};
        DecLeaf l;
        l.pat = Pattern{Pattern::K::Var, n, {}};
        l.value = mk::var(Calc::Lfoc, n);
        l.xi.emplace_back(n, P);
        d.leaves.push_back(std::move(l));
        return d;
      }
      case FormKind::NotP: {
        std::string a = fresh_name(x + ".1", true);
        d.q = CPat{CPat::K::CovarDag, a, {}};
        DecLeaf l;
        l.pat = Pattern{Pattern::K::CovarDag, a, {}};
        l.value = mk::reflect(mk::covar(Calc::Lfoc, a));
        l.delta.emplace_back(a, P->left);
        d.leaves.push_back(std::move(l));
        return d;
      }
      case FormKind::Tensor: {
        Decomposition d1 = decompose(x + ".1", P->left);
        Decomposition d2 = decompose(x + ".2", P->right);
        d.q = CPat{CPat::K::Pair, "", {d1.q, d2.q}};
        for (auto& l1 : d1.leaves)
          for (auto& l2 : d2.leaves) {
            DecLeaf l;
            l.pat = Pattern{Pattern::K::Pair, "", {l1.pat, l2.pat}};
            l.value = mk::pairv(l1.value, l2.value);
            l.xi = l1.xi;
            l.xi.insert(l.xi.end(), l2.xi.begin(), l2.xi.end());
            l.delta = l1.delta;
            l.delta.insert(l.delta.end(), l2.delta.begin(), l2.delta.end());
            d.leaves.push_back(std::move(l));
          }
        return d;
      }
      case FormKind::Plus: {
        Decomposition d1 = decompose(x + ".1", P->left);
        Decomposition d2 = decompose(x + ".2", P->right);
        d.q = CPat{CPat::K::CoPair, "", {d1.q, d2.q}};
        for (auto& l1 : d1.leaves) {
          DecLeaf l = l1;
          l.pat = Pattern{Pattern::K::Inl, "", {l1.pat}};
          l.value = mk::inl(Calc::Lfoc, l1.value);
          d.leaves.push_back(std::move(l));
        }
        for (auto& l2 : d2.leaves) {
          DecLeaf l = l2;
          l.pat = Pattern{Pattern::K::Inr, "", {l2.pat}};
          l.value = mk::inr(Calc::Lfoc, l2.value);
          d.leaves.push_back(std::move(l));
        }
        return d;
      }
      default:
        throw TermError("focalize_strong: non-positive formula " + show(P));
    }
  }

  // size measure: variables weigh the size of their type (Prop 6.2 proof)
  int measure(const TermPtr& t, std::map<std::string, int> weights) {
    switch (t->kind) {
      case Kind::Var: {
        auto it = weights.find(t->names[0]);
        return it == weights.end() ? 1 : it->second;
      }
      case Kind::Covar:
        return 1;
      default: {
        auto slots = binder_slots(t);
        for (auto& s : slots)
          if (!s.is_covar)
            weights[t->names[s.name_index]] =
                t->anns[s.name_index] ? formula_size(t->anns[s.name_index]) : 1;
        int n = 1;
        for (int i = 0; i < child_count(t); ++i) n += measure(child_at(t, i), weights);
        return n;
      }
    }
  }

  std::map<std::string, int> weights_of(const TypingEnv& env) {
    std::map<std::string, int> w;
    for (auto& [x, f] : env.gamma) w[x] = formula_size(f);
    return w;
  }

  void check_measure(const TermPtr& t, const TypingEnv& env, int parent) {
    ++calls;
    int m = measure(t, weights_of(env));
    max_measure = std::max(max_measure, m);
    if (m >= parent)
      throw TermError("focalize_strong: size measure did not decrease (" + std::to_string(m) +
                      " >= " + std::to_string(parent) + ")");
  }

  TermPtr command(const TermPtr& c, const TypingEnv& env, int parent) {
    check_measure(c, env, parent);
    int self = measure(c, weights_of(env));
    if (c->kind != Kind::Cut) throw TermError("focalize_strong: expected a command");
    const TermPtr& v = c->kids[0];
    const TermPtr& e = c->kids[1];
    FormulaPtr P = synth_cut(c, env);
    TermPtr v2 = expr(v, P, env, self);
    TermPtr e2 = context(e, P, env, self);
    return mk::cut(v2, e2);
  }

  FormulaPtr synth_cut(const TermPtr& c, const TypingEnv& env) {
    LkqSynth s;
    FormulaPtr P = s.expr(c->kids[0], env);
    if (!P) P = s.context(c->kids[1], env);
    if (!P)
      throw TermError("focalize_strong: cannot infer a cut formula (elaborate the input first)");
    return P;
  }

  // local synthesis over elaborated Lfoc terms
  struct LkqSynth {
    FormulaPtr value(const TermPtr& V, const TypingEnv& env) {
      switch (V->kind) {
        case Kind::Var: {
          auto it = env.gamma.find(V->names[0]);
          return it == env.gamma.end() ? nullptr : it->second;
        }
        case Kind::PairV: {
          auto a = value(V->kids[0], env);
          auto b = value(V->kids[1], env);
          return (a && b) ? mkf::tensor(a, b) : nullptr;
        }
        case Kind::Reflect: {
          auto q = context(V->kids[0], env);
          return q ? mkf::notp(q) : nullptr;
        }
        default:
          return nullptr;
      }
    }
    FormulaPtr context(const TermPtr& e, const TypingEnv& env) {
      switch (e->kind) {
        case Kind::Covar: {
          auto it = env.delta.find(e->names[0]);
          return it == env.delta.end() ? nullptr : it->second;
        }
        case Kind::MuTilde:
          return e->anns[0];
        case Kind::MuTildeNot:
          return e->anns[0] ? mkf::notp(e->anns[0]) : nullptr;
        case Kind::MuTildePair:
          return (e->anns[0] && e->anns[1]) ? mkf::tensor(e->anns[0], e->anns[1]) : nullptr;
        case Kind::MuTildeCase:
          return (e->anns[0] && e->anns[1]) ? mkf::plus(e->anns[0], e->anns[1]) : nullptr;
        default:
          return nullptr;
      }
    }
    FormulaPtr expr(const TermPtr& v, const TypingEnv& env) {
      if (v->kind == Kind::ValOf) return value(v->kids[0], env);
      if (v->kind == Kind::Mu) return v->anns[0];
      return nullptr;
    }
  };

  TermPtr expr(const TermPtr& v, const FormulaPtr& P, const TypingEnv& env, int parent) {
    check_measure(v, env, parent);
    int self = measure(v, weights_of(env));
    if (v->kind == Kind::ValOf) {
      auto [pat, fills] = value(v->kids[0], P, env, self);
      return mk::val_of(mk::patval(pat, fills));
    }
    if (v->kind == Kind::Mu)
      return mk::mu(v->names[0], command(v->kids[0], env.with_covar(v->names[0], P), self), P);
    throw TermError("focalize_strong: not an expression");
  }

  std::pair<Pattern, std::vector<TermPtr>> value(const TermPtr& V, const FormulaPtr& P,
                                                 const TypingEnv& env, int parent) {
    check_measure(V, env, parent);
    int self = measure(V, weights_of(env));
    switch (V->kind) {
      case Kind::Var: {
        std::string leaf = fresh_name(V->names[0], false);
        return {Pattern{Pattern::K::Var, leaf, {}}, {mk::var(Calc::Lsynth, V->names[0])}};
      }
      case Kind::Reflect: {
        std::string leaf = fresh_name("a", true);
        TermPtr e2 = context(V->kids[0], P->left, env, self);
        return {Pattern{Pattern::K::CovarDag, leaf, {}}, {mk::reflect(e2)}};
      }
      case Kind::PairV: {
        auto [p1, f1] = value(V->kids[0], P->left, env, self);
        auto [p2, f2] = value(V->kids[1], P->right, env, self);
        Pattern p{Pattern::K::Pair, "", {p1, p2}};
        f1.insert(f1.end(), f2.begin(), f2.end());
        return {p, f1};
      }
      case Kind::Inl: {
        auto [p1, f1] = value(V->kids[0], P->left, env, self);
        return {Pattern{Pattern::K::Inl, "", {p1}}, f1};
      }
      case Kind::Inr: {
        auto [p1, f1] = value(V->kids[0], P->right, env, self);
        return {Pattern{Pattern::K::Inr, "", {p1}}, f1};
      }
      default:
        throw TermError("focalize_strong: not a value");
    }
  }

  TermPtr context(const TermPtr& e, const FormulaPtr& P, const TypingEnv& env, int parent) {
    check_measure(e, env, parent);
    int self = measure(e, weights_of(env));
    switch (e->kind) {
      case Kind::Covar:
        return mk::covar(Calc::Lsynth, e->names[0]);
      case Kind::MuTilde: {
        Decomposition d = decompose(e->names[0], P);
        std::vector<Pattern> pats;
        std::vector<TermPtr> bodies;
        for (auto& leaf : d.leaves) {
          TermPtr body = subst1(e->kids[0], e->names[0], false, leaf.value);
          TypingEnv inner = env;
          for (auto& [n, f] : leaf.xi) inner.gamma[n] = f;
          for (auto& [n, f] : leaf.delta) inner.delta[n] = f;
          pats.push_back(leaf.pat);
          bodies.push_back(command(body, inner, self));
        }
        return mk::mu_tilde_rec(d.q, pats, bodies, P);
      }
      case Kind::MuTildeNot: {
        // single a^ field; the bound covariable keeps its name
        CPat q{CPat::K::CovarDag, e->names[0], {}};
        Pattern p{Pattern::K::CovarDag, e->names[0], {}};
        TypingEnv inner = env.with_covar(e->names[0], P->left);
        TermPtr body = command(e->kids[0], inner, self);
        return mk::mu_tilde_rec(q, {p}, {body}, P);
      }
      case Kind::MuTildePair: {
        Decomposition d1 = decompose(e->names[0], P->left);
        Decomposition d2 = decompose(e->names[1], P->right);
        CPat q{CPat::K::Pair, "", {d1.q, d2.q}};
        std::vector<Pattern> pats;
        std::vector<TermPtr> bodies;
        for (auto& l1 : d1.leaves)
          for (auto& l2 : d2.leaves) {
            TermPtr body = subst(e->kids[0], {{e->names[0], false, l1.value},
                                              {e->names[1], false, l2.value}});
            TypingEnv inner = env;
            for (auto& [n, f] : l1.xi) inner.gamma[n] = f;
            for (auto& [n, f] : l1.delta) inner.delta[n] = f;
            for (auto& [n, f] : l2.xi) inner.gamma[n] = f;
            for (auto& [n, f] : l2.delta) inner.delta[n] = f;
            pats.push_back(Pattern{Pattern::K::Pair, "", {l1.pat, l2.pat}});
            bodies.push_back(command(body, inner, self));
          }
        return mk::mu_tilde_rec(q, pats, bodies, P);
      }
      case Kind::MuTildeCase: {
        Decomposition d1 = decompose(e->names[0], P->left);
        Decomposition d2 = decompose(e->names[1], P->right);
        CPat q{CPat::K::CoPair, "", {d1.q, d2.q}};
        std::vector<Pattern> pats;
        std::vector<TermPtr> bodies;
        for (auto& l1 : d1.leaves) {
          TermPtr body = subst1(e->kids[0], e->names[0], false, l1.value);
          TypingEnv inner = env;
          for (auto& [n, f] : l1.xi) inner.gamma[n] = f;
          for (auto& [n, f] : l1.delta) inner.delta[n] = f;
          pats.push_back(Pattern{Pattern::K::Inl, "", {l1.pat}});
          bodies.push_back(command(body, inner, self));
        }
        for (auto& l2 : d2.leaves) {
          TermPtr body = subst1(e->kids[1], e->names[1], false, l2.value);
          TypingEnv inner = env;
          for (auto& [n, f] : l2.xi) inner.gamma[n] = f;
          for (auto& [n, f] : l2.delta) inner.delta[n] = f;
          pats.push_back(Pattern{Pattern::K::Inr, "", {l2.pat}});
          bodies.push_back(command(body, inner, self));
        }
        return mk::mu_tilde_rec(q, pats, bodies, P);
      }
      default:
        throw TermError("focalize_strong: not a context");
    }
  }
};

}  // namespace

FocalizeResult focalize_strong(const TermPtr& c, const TypingEnv& env) {
  if (!same_calc(c, Calc::Lfoc)) throw TermError("focalize_strong expects an Lfoc command");
  TypeResult tr = typecheck({JKind::Command, env, c, nullptr});
  if (!tr.ok())
    throw TermError("focalize_strong: input does not typecheck: " + tr.failure->message);
  TermPtr cur = tr.deriv->elab;
  // substitution-free input for the Lemma substitutions
  while (true) {
    std::vector<Redex> rs = redexes(cur);
    const Redex* comm = nullptr;
    for (auto& r : rs)
      if (r.rule.rfind("commutation-", 0) == 0) {
        comm = &r;
        break;
      }
    if (!comm) break;
    cur = apply_rule_at(cur, comm->pos, comm->rule, SubstMode::Bundled);
  }

  Focalizer f;
  f.taken = all_names(cur);
  for (auto& [n, _] : env.gamma) f.taken.add(n, false);
  for (auto& [n, _] : env.delta) f.taken.add(n, true);

  FocalizeResult res;
  // decompose every non-atomic Gamma entry, forming the leaf sequents
  struct Branch {
    TermPtr term;
    TypingEnv env;
  };
  std::vector<Branch> branches{{cur, TypingEnv{{}, env.delta}}};
  for (auto& [x, P] : env.gamma) {
    Decomposition d = f.decompose(x, P);
    res.counterpatterns.emplace_back(x, d.q);
    std::vector<Branch> next;
    for (auto& b : branches)
      for (auto& leaf : d.leaves) {
        Branch nb;
        nb.term = (leaf.value->kind == Kind::Var && leaf.value->names[0] == x)
                      ? b.term
                      : subst1(b.term, x, false, leaf.value);
        nb.env = b.env;
        for (auto& [n, ff] : leaf.xi) nb.env.gamma[n] = ff;
        for (auto& [n, ff] : leaf.delta) nb.env.delta[n] = ff;
        next.push_back(std::move(nb));
      }
    branches = std::move(next);
  }
  for (auto& b : branches) {
    FocalizeLeaf leaf;
    for (auto& [n, ff] : b.env.gamma) leaf.sequent.xi.emplace_back(n, ff);
    leaf.sequent.delta = b.env.delta;
    leaf.command = f.command(b.term, b.env, INT_MAX);
    res.leaves.push_back(std::move(leaf));
  }
  res.recursive_calls = f.calls;
  res.max_measure = f.max_measure;
  return res;
}

}  // namespace focal
