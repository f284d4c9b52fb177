#include "focal/typing.hpp"

#include "focal/mirror.hpp"
#include "focal/printer.hpp"
#include "focal/subst.hpp"

namespace focal {

namespace {

struct Fail {
  std::string message;
  TermPtr at;
};

[[noreturn]] void bail(const std::string& msg, const TermPtr& at) { throw Fail{msg, at}; }

void need(bool cond, const std::string& msg, const TermPtr& at) {
  if (!cond) bail(msg, at);
}

std::string fshow(const FormulaPtr& f) { return f ? show(f) : "?"; }

// ------------------------------------------------------------------ LKQ

struct LkqChecker {
  // synthesis: nullptr when the type is not inferable without annotations
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
      case Kind::ESub:
        return synth_value(V->kids[0], env_of_sigma(V, env));
      default:
        return nullptr;  // injections need a goal
    }
  }

  FormulaPtr synth_context(const TermPtr& e, const TypingEnv& env) {
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
      case Kind::ESub:
        return synth_context(e->kids[0], env_of_sigma(e, env));
      default:
        return nullptr;
    }
  }

  FormulaPtr synth_expr(const TermPtr& v, const TypingEnv& env) {
    switch (v->kind) {
      case Kind::ValOf:
        return synth_value(v->kids[0], env);
      case Kind::Mu:
        return v->anns[0];
      case Kind::ESub:
        return synth_expr(v->kids[0], env_of_sigma(v, env));
      default:
        return nullptr;
    }
  }

  // environment the subject of t[sigma] is checked in (bindings typed against
  // the outer environment, left to right)
  TypingEnv env_of_sigma(const TermPtr& t, const TypingEnv& env) {
    TypingEnv inner = env;
    for (auto& it : t->sub) {
      FormulaPtr f = it.is_covar ? synth_context(it.payload, env) : synth_value(it.payload, env);
      if (!f) return inner;  // checking will fail with a precise message later
      if (it.is_covar)
        inner.delta[it.name] = f;
      else
        inner.gamma[it.name] = f;
    }
    return inner;
  }

  Deriv check_command(const TermPtr& c, const TypingEnv& env) {
    need(cat_of(c) == Cat::Command, "expected a command", c);
    if (c->kind == Kind::Cut) {
      const TermPtr& v = c->kids[0];
      const TermPtr& e = c->kids[1];
      FormulaPtr P = synth_expr(v, env);
      Deriv dv, de;
      if (P) {
        dv = check_expr(v, P, env);
        de = check_context(e, P, env);
      } else {
        P = synth_context(e, env);
        need(P != nullptr,
             "cannot infer the cut formula of this command; annotate a binder", c);
        de = check_context(e, P, env);
        dv = check_expr(v, P, env);
      }
      Deriv d{"cut", {JKind::Command, env, c, nullptr}, {dv, de}, nullptr};
      d.elab = mk::cut(dv.elab, de.elab);
      return d;
    }
    if (c->kind == Kind::ESub) return check_sigma(c, env, JKind::Command, nullptr);
    bail("not a command of the focalised syntax", c);
  }

  Deriv check_sigma(const TermPtr& t, const TypingEnv& env, JKind kind, FormulaPtr goal) {
    std::vector<Deriv> kids;
    TypingEnv inner = env;
    Subst elab_sub;
    for (auto& it : t->sub) {
      if (it.is_covar) {
        FormulaPtr f = synth_context(it.payload, env);
        need(f != nullptr, "cannot infer the type of substitution binding for " + it.name,
             it.payload);
        kids.push_back(check_context(it.payload, f, env));
        inner.delta[it.name] = f;
      } else {
        FormulaPtr f = synth_value(it.payload, env);
        need(f != nullptr, "cannot infer the type of substitution binding for " + it.name,
             it.payload);
        kids.push_back(check_value(it.payload, f, env));
        inner.gamma[it.name] = f;
      }
      elab_sub.push_back({it.name, it.is_covar, kids.back().elab});
    }
    Deriv body;
    switch (kind) {
      case JKind::Command: body = check_command(t->kids[0], inner); break;
      case JKind::Expr: body = check_expr(t->kids[0], goal, inner); break;
      case JKind::Value: body = check_value(t->kids[0], goal, inner); break;
      case JKind::Context: body = check_context(t->kids[0], goal, inner); break;
    }
    kids.insert(kids.begin(), body);
    Deriv d{"subst", {kind, env, t, goal}, kids, nullptr};
    d.elab = mk::esub(body.elab, elab_sub);
    return d;
  }

  Deriv check_expr(const TermPtr& v, const FormulaPtr& P, const TypingEnv& env) {
    need(cat_of(v) == Cat::Expr, "expected an expression", v);
    switch (v->kind) {
      case Kind::ValOf: {
        Deriv dV = check_value(v->kids[0], P, env);
        Deriv d{"val", {JKind::Expr, env, v, P}, {dV}, nullptr};
        d.elab = mk::val_of(dV.elab);
        return d;
      }
      case Kind::Mu: {
        if (v->anns[0])
          need(formula_eq(v->anns[0], P),
               "mu annotation " + fshow(v->anns[0]) + " conflicts with expected " + fshow(P), v);
        Deriv dc = check_command(v->kids[0], env.with_covar(v->names[0], P));
        Deriv d{"mu", {JKind::Expr, env, v, P}, {dc}, nullptr};
        d.elab = mk::mu(v->names[0], dc.elab, P);
        return d;
      }
      case Kind::ESub:
        return check_sigma(v, env, JKind::Expr, P);
      default:
        bail("not an expression form", v);
    }
  }

  Deriv check_value(const TermPtr& V, const FormulaPtr& P, const TypingEnv& env) {
    need(cat_of(V) == Cat::Value, "expected a value", V);
    switch (V->kind) {
      case Kind::Var: {
        auto it = env.gamma.find(V->names[0]);
        need(it != env.gamma.end(), "unbound variable " + V->names[0], V);
        need(formula_eq(it->second, P),
             "variable " + V->names[0] + " has type " + fshow(it->second) + ", expected " +
                 fshow(P),
             V);
        return {"ax-v", {JKind::Value, env, V, P}, {}, V};
      }
      case Kind::PairV: {
        need(P->kind == FormKind::Tensor,
             "pair value at non-tensor type " + fshow(P), V);
        Deriv d1 = check_value(V->kids[0], P->left, env);
        Deriv d2 = check_value(V->kids[1], P->right, env);
        Deriv d{"tensor-r", {JKind::Value, env, V, P}, {d1, d2}, nullptr};
        d.elab = mk::pairv(d1.elab, d2.elab);
        return d;
      }
      case Kind::Inl: {
        need(P->kind == FormKind::Plus, "inl at non-sum type " + fshow(P), V);
        Deriv d1 = check_value(V->kids[0], P->left, env);
        Deriv d{"plus-r1", {JKind::Value, env, V, P}, {d1}, nullptr};
        d.elab = mk::inl(V->calc, d1.elab);
        return d;
      }
      case Kind::Inr: {
        need(P->kind == FormKind::Plus, "inr at non-sum type " + fshow(P), V);
        Deriv d1 = check_value(V->kids[0], P->right, env);
        Deriv d{"plus-r2", {JKind::Value, env, V, P}, {d1}, nullptr};
        d.elab = mk::inr(V->calc, d1.elab);
        return d;
      }
      case Kind::Reflect: {
        need(P->kind == FormKind::NotP, "e^ at non-negated type " + fshow(P), V);
        Deriv d1 = check_context(V->kids[0], P->left, env);
        Deriv d{"not-r", {JKind::Value, env, V, P}, {d1}, nullptr};
        d.elab = mk::reflect(d1.elab);
        return d;
      }
      case Kind::ESub:
        return check_sigma(V, env, JKind::Value, P);
      default:
        bail("not a value form", V);
    }
  }

  Deriv check_context(const TermPtr& e, const FormulaPtr& P, const TypingEnv& env) {
    need(cat_of(e) == Cat::Context, "expected a context", e);
    switch (e->kind) {
      case Kind::Covar: {
        auto it = env.delta.find(e->names[0]);
        need(it != env.delta.end(), "unbound covariable " + e->names[0], e);
        need(formula_eq(it->second, P),
             "covariable " + e->names[0] + " has type " + fshow(it->second) + ", expected " +
                 fshow(P),
             e);
        return {"ax-e", {JKind::Context, env, e, P}, {}, e};
      }
      case Kind::MuTilde: {
        if (e->anns[0])
          need(formula_eq(e->anns[0], P),
               "~mu annotation " + fshow(e->anns[0]) + " conflicts with expected " + fshow(P), e);
        Deriv dc = check_command(e->kids[0], env.with_var(e->names[0], P));
        Deriv d{"~mu", {JKind::Context, env, e, P}, {dc}, nullptr};
        d.elab = mk::mu_tilde(e->names[0], dc.elab, P);
        return d;
      }
      case Kind::MuTildeNot: {
        need(P->kind == FormKind::NotP, "~mu a^ at non-negated type " + fshow(P), e);
        if (e->anns[0])
          need(formula_eq(e->anns[0], P->left), "~mu a^ annotation conflicts with " + fshow(P), e);
        Deriv dc = check_command(e->kids[0], env.with_covar(e->names[0], P->left));
        Deriv d{"not-l", {JKind::Context, env, e, P}, {dc}, nullptr};
        d.elab = mk::mu_tilde_not(e->names[0], dc.elab, P->left);
        return d;
      }
      case Kind::MuTildePair: {
        need(P->kind == FormKind::Tensor, "~mu(,) at non-tensor type " + fshow(P), e);
        if (e->anns[0]) need(formula_eq(e->anns[0], P->left), "~mu(,) annotation mismatch", e);
        if (e->anns[1]) need(formula_eq(e->anns[1], P->right), "~mu(,) annotation mismatch", e);
        Deriv dc = check_command(
            e->kids[0], env.with_var(e->names[0], P->left).with_var(e->names[1], P->right));
        Deriv d{"tensor-l", {JKind::Context, env, e, P}, {dc}, nullptr};
        d.elab = mk::mu_tilde_pair(e->names[0], e->names[1], dc.elab, P->left, P->right);
        return d;
      }
      case Kind::MuTildeCase: {
        need(P->kind == FormKind::Plus, "~mu[] at non-sum type " + fshow(P), e);
        if (e->anns[0]) need(formula_eq(e->anns[0], P->left), "~mu[] annotation mismatch", e);
        if (e->anns[1]) need(formula_eq(e->anns[1], P->right), "~mu[] annotation mismatch", e);
        Deriv d1 = check_command(e->kids[0], env.with_var(e->names[0], P->left));
        Deriv d2 = check_command(e->kids[1], env.with_var(e->names[1], P->right));
        Deriv d{"plus-l", {JKind::Context, env, e, P}, {d1, d2}, nullptr};
        d.elab = mk::mu_tilde_case(e->names[0], d1.elab, e->names[1], d2.elab, P->left, P->right);
        return d;
      }
      case Kind::ESub:
        return check_sigma(e, env, JKind::Context, P);
      default:
        bail("not a context form", e);
    }
  }
};

void require_positive_env(const TypingEnv& env, const TermPtr& at) {
  for (auto& [n, f] : env.gamma)
    need(is_positive(f), "environment entry " + n + " is not a positive formula", at);
  for (auto& [n, f] : env.delta)
    need(is_positive(f), "environment entry " + n + " is not a positive formula", at);
}

// ------------------------------------------------------------------ raw LK

struct LkChecker {
  FormulaPtr synth_expr(const TermPtr& v, const TypingEnv& env) {
    switch (v->kind) {
      case Kind::Var: {
        auto it = env.gamma.find(v->names[0]);
        return it == env.gamma.end() ? nullptr : it->second;
      }
      case Kind::Mu:
        return v->anns[0];
      case Kind::PairV: {
        auto a = synth_expr(v->kids[0], env);
        auto b = synth_expr(v->kids[1], env);
        return (a && b) ? mkf::lk_and(a, b) : nullptr;
      }
      case Kind::Reflect: {
        auto q = synth_context(v->kids[0], env);
        return q ? mkf::lk_neg(q) : nullptr;
      }
      case Kind::ESub:
        return synth_expr(v->kids[0], env_of_sigma(v, env));
      default:
        return nullptr;
    }
  }

  FormulaPtr synth_context(const TermPtr& e, const TypingEnv& env) {
    switch (e->kind) {
      case Kind::Covar: {
        auto it = env.delta.find(e->names[0]);
        return it == env.delta.end() ? nullptr : it->second;
      }
      case Kind::MuTilde:
        return e->anns[0];
      case Kind::MuTildeNot:
        return e->anns[0] ? mkf::lk_neg(e->anns[0]) : nullptr;
      case Kind::MuTildePair:
        return (e->anns[0] && e->anns[1]) ? mkf::lk_and(e->anns[0], e->anns[1]) : nullptr;
      case Kind::MuTildeCase:
        return (e->anns[0] && e->anns[1]) ? mkf::lk_or(e->anns[0], e->anns[1]) : nullptr;
      case Kind::ESub:
        return synth_context(e->kids[0], env_of_sigma(e, env));
      default:
        return nullptr;
    }
  }

  TypingEnv env_of_sigma(const TermPtr& t, const TypingEnv& env) {
    TypingEnv inner = env;
    for (auto& it : t->sub) {
      FormulaPtr f = it.is_covar ? synth_context(it.payload, env) : synth_expr(it.payload, env);
      if (!f) return inner;
      if (it.is_covar)
        inner.delta[it.name] = f;
      else
        inner.gamma[it.name] = f;
    }
    return inner;
  }

  Deriv check_command(const TermPtr& c, const TypingEnv& env) {
    need(cat_of(c) == Cat::Command, "expected a command", c);
    if (c->kind == Kind::Cut) {
      const TermPtr& v = c->kids[0];
      const TermPtr& e = c->kids[1];
      FormulaPtr A = synth_expr(v, env);
      Deriv dv, de;
      if (A) {
        dv = check_expr(v, A, env);
        de = check_context(e, A, env);
      } else {
        A = synth_context(e, env);
        need(A != nullptr, "cannot infer the cut formula; annotate a binder", c);
        de = check_context(e, A, env);
        dv = check_expr(v, A, env);
      }
      Deriv d{"cut", {JKind::Command, env, c, nullptr}, {dv, de}, nullptr};
      d.elab = mk::cut(dv.elab, de.elab);
      return d;
    }
    if (c->kind == Kind::ESub) return check_sigma(c, env, JKind::Command, nullptr);
    bail("not a command", c);
  }

  Deriv check_sigma(const TermPtr& t, const TypingEnv& env, JKind kind, FormulaPtr goal) {
    std::vector<Deriv> kids;
    TypingEnv inner = env;
    Subst elab_sub;
    for (auto& it : t->sub) {
      FormulaPtr f = it.is_covar ? synth_context(it.payload, env) : synth_expr(it.payload, env);
      need(f != nullptr, "cannot infer the type of substitution binding for " + it.name,
           it.payload);
      kids.push_back(it.is_covar ? check_context(it.payload, f, env)
                                 : check_expr(it.payload, f, env));
      if (it.is_covar)
        inner.delta[it.name] = f;
      else
        inner.gamma[it.name] = f;
      elab_sub.push_back({it.name, it.is_covar, kids.back().elab});
    }
    Deriv body;
    switch (kind) {
      case JKind::Command: body = check_command(t->kids[0], inner); break;
      case JKind::Expr: body = check_expr(t->kids[0], goal, inner); break;
      case JKind::Context: body = check_context(t->kids[0], goal, inner); break;
      default: bail("no value judgement in raw LK", t);
    }
    kids.insert(kids.begin(), body);
    Deriv d{"subst", {kind, env, t, goal}, kids, nullptr};
    d.elab = mk::esub(body.elab, elab_sub);
    return d;
  }

  Deriv check_expr(const TermPtr& v, const FormulaPtr& A, const TypingEnv& env) {
    need(cat_of(v) == Cat::Expr, "expected an expression", v);
    switch (v->kind) {
      case Kind::Var: {
        auto it = env.gamma.find(v->names[0]);
        need(it != env.gamma.end(), "unbound variable " + v->names[0], v);
        need(formula_eq(it->second, A),
             "variable " + v->names[0] + " has type " + fshow(it->second) + ", expected " +
                 fshow(A),
             v);
        return {"ax-v", {JKind::Expr, env, v, A}, {}, v};
      }
      case Kind::Mu: {
        if (v->anns[0]) need(formula_eq(v->anns[0], A), "mu annotation mismatch", v);
        Deriv dc = check_command(v->kids[0], env.with_covar(v->names[0], A));
        Deriv d{"mu", {JKind::Expr, env, v, A}, {dc}, nullptr};
        d.elab = mk::mu(v->names[0], dc.elab, A);
        return d;
      }
      case Kind::PairV: {
        need(A->kind == FormKind::And, "pair at non-conjunction " + fshow(A), v);
        Deriv d1 = check_expr(v->kids[0], A->left, env);
        Deriv d2 = check_expr(v->kids[1], A->right, env);
        Deriv d{"and-r", {JKind::Expr, env, v, A}, {d1, d2}, nullptr};
        d.elab = mk::pairv(d1.elab, d2.elab);
        return d;
      }
      case Kind::Inl: {
        need(A->kind == FormKind::Or, "inl at non-disjunction " + fshow(A), v);
        Deriv d1 = check_expr(v->kids[0], A->left, env);
        Deriv d{"or-r1", {JKind::Expr, env, v, A}, {d1}, nullptr};
        d.elab = mk::inl(v->calc, d1.elab);
        return d;
      }
      case Kind::Inr: {
        need(A->kind == FormKind::Or, "inr at non-disjunction " + fshow(A), v);
        Deriv d1 = check_expr(v->kids[0], A->right, env);
        Deriv d{"or-r2", {JKind::Expr, env, v, A}, {d1}, nullptr};
        d.elab = mk::inr(v->calc, d1.elab);
        return d;
      }
      case Kind::Reflect: {
        need(A->kind == FormKind::Neg, "e^ at non-negation " + fshow(A), v);
        Deriv d1 = check_context(v->kids[0], A->left, env);
        Deriv d{"neg-r", {JKind::Expr, env, v, A}, {d1}, nullptr};
        d.elab = mk::reflect(d1.elab);
        return d;
      }
      case Kind::ESub:
        return check_sigma(v, env, JKind::Expr, A);
      default:
        bail("not an expression form", v);
    }
  }

  Deriv check_context(const TermPtr& e, const FormulaPtr& A, const TypingEnv& env) {
    need(cat_of(e) == Cat::Context, "expected a context", e);
    switch (e->kind) {
      case Kind::Covar: {
        auto it = env.delta.find(e->names[0]);
        need(it != env.delta.end(), "unbound covariable " + e->names[0], e);
        need(formula_eq(it->second, A),
             "covariable " + e->names[0] + " has type " + fshow(it->second) + ", expected " +
                 fshow(A),
             e);
        return {"ax-e", {JKind::Context, env, e, A}, {}, e};
      }
      case Kind::MuTilde: {
        if (e->anns[0]) need(formula_eq(e->anns[0], A), "~mu annotation mismatch", e);
        Deriv dc = check_command(e->kids[0], env.with_var(e->names[0], A));
        Deriv d{"~mu", {JKind::Context, env, e, A}, {dc}, nullptr};
        d.elab = mk::mu_tilde(e->names[0], dc.elab, A);
        return d;
      }
      case Kind::MuTildeNot: {
        need(A->kind == FormKind::Neg, "~mu a^ at non-negation " + fshow(A), e);
        Deriv dc = check_command(e->kids[0], env.with_covar(e->names[0], A->left));
        Deriv d{"neg-l", {JKind::Context, env, e, A}, {dc}, nullptr};
        d.elab = mk::mu_tilde_not(e->names[0], dc.elab, A->left);
        return d;
      }
      case Kind::MuTildePair: {
        need(A->kind == FormKind::And, "~mu(,) at non-conjunction " + fshow(A), e);
        Deriv dc = check_command(
            e->kids[0], env.with_var(e->names[0], A->left).with_var(e->names[1], A->right));
        Deriv d{"and-l", {JKind::Context, env, e, A}, {dc}, nullptr};
        d.elab = mk::mu_tilde_pair(e->names[0], e->names[1], dc.elab, A->left, A->right);
        return d;
      }
      case Kind::MuTildeCase: {
        need(A->kind == FormKind::Or, "~mu[] at non-disjunction " + fshow(A), e);
        Deriv d1 = check_command(e->kids[0], env.with_var(e->names[0], A->left));
        Deriv d2 = check_command(e->kids[1], env.with_var(e->names[1], A->right));
        Deriv d{"or-l", {JKind::Context, env, e, A}, {d1, d2}, nullptr};
        d.elab = mk::mu_tilde_case(e->names[0], d1.elab, e->names[1], d2.elab, A->left, A->right);
        return d;
      }
      case Kind::ESub:
        return check_sigma(e, env, JKind::Context, A);
      default:
        bail("not a context form", e);
    }
  }
};

// ------------------------------------------------------------------ LLP

struct LlpChecker {
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
    switch (e->kind) {
      case Kind::Derel: {
        auto p = synth_value(e->kids[0], env);
        return p ? mkf::notp(p) : nullptr;
      }
      case Kind::MuTilde:
        return e->anns[0];
      case Kind::MuTildePair:
        return (e->anns[0] && e->anns[1]) ? mkf::tensor(e->anns[0], e->anns[1]) : nullptr;
      case Kind::MuTildeCase:
        return (e->anns[0] && e->anns[1]) ? mkf::plus(e->anns[0], e->anns[1]) : nullptr;
      default:
        return nullptr;
    }
  }

  Deriv check_command(const TermPtr& c, const TypingEnv& env) {
    need(c->kind == Kind::Cut, "expected an LLP command", c);
    const TermPtr& V = c->kids[0];
    const TermPtr& e = c->kids[1];
    FormulaPtr P = synth_value(V, env);
    Deriv dv, de;
    if (P) {
      dv = check_value(V, P, env);
      de = check_context(e, P, env);
    } else {
      P = synth_context(e, env);
      need(P != nullptr, "cannot infer the cut formula; annotate a binder", c);
      de = check_context(e, P, env);
      dv = check_value(V, P, env);
    }
    Deriv d{"cut", {JKind::Command, env, c, nullptr}, {dv, de}, nullptr};
    d.elab = mk::cut(dv.elab, de.elab);
    return d;
  }

  Deriv check_value(const TermPtr& V, const FormulaPtr& P, const TypingEnv& env) {
    need(cat_of(V) == Cat::Value, "expected an LLP value", V);
    switch (V->kind) {
      case Kind::Var: {
        auto it = env.gamma.find(V->names[0]);
        need(it != env.gamma.end(), "unbound variable " + V->names[0], V);
        need(formula_eq(it->second, P), "variable type mismatch at " + V->names[0], V);
        return {"ax-v", {JKind::Value, env, V, P}, {}, V};
      }
      case Kind::PairV: {
        need(P->kind == FormKind::Tensor, "pair at non-tensor " + fshow(P), V);
        Deriv d1 = check_value(V->kids[0], P->left, env);
        Deriv d2 = check_value(V->kids[1], P->right, env);
        Deriv d{"tensor-r", {JKind::Value, env, V, P}, {d1, d2}, nullptr};
        d.elab = mk::pairv(d1.elab, d2.elab);
        return d;
      }
      case Kind::Inl: {
        need(P->kind == FormKind::Plus, "inl at non-sum " + fshow(P), V);
        Deriv d1 = check_value(V->kids[0], P->left, env);
        Deriv d{"plus-r1", {JKind::Value, env, V, P}, {d1}, nullptr};
        d.elab = mk::inl(Calc::LLP, d1.elab);
        return d;
      }
      case Kind::Inr: {
        need(P->kind == FormKind::Plus, "inr at non-sum " + fshow(P), V);
        Deriv d1 = check_value(V->kids[0], P->right, env);
        Deriv d{"plus-r2", {JKind::Value, env, V, P}, {d1}, nullptr};
        d.elab = mk::inr(Calc::LLP, d1.elab);
        return d;
      }
      case Kind::Reflect: {
        need(P->kind == FormKind::NotP, "e^ at non-negated " + fshow(P), V);
        Deriv d1 = check_context(V->kids[0], P->left, env);
        Deriv d{"prom", {JKind::Value, env, V, P}, {d1}, nullptr};
        d.elab = mk::reflect(d1.elab);
        return d;
      }
      default:
        bail("not an LLP value", V);
    }
  }

  Deriv check_context(const TermPtr& e, const FormulaPtr& P, const TypingEnv& env) {
    need(cat_of(e) == Cat::Context, "expected an LLP context", e);
    switch (e->kind) {
      case Kind::Derel: {
        need(P->kind == FormKind::NotP, "dn at non-negated " + fshow(P), e);
        Deriv d1 = check_value(e->kids[0], P->left, env);
        Deriv d{"derel", {JKind::Context, env, e, P}, {d1}, nullptr};
        d.elab = mk::derel(d1.elab);
        return d;
      }
      case Kind::MuTilde: {
        if (e->anns[0]) need(formula_eq(e->anns[0], P), "~mu annotation mismatch", e);
        Deriv dc = check_command(e->kids[0], env.with_var(e->names[0], P));
        Deriv d{"~mu", {JKind::Context, env, e, P}, {dc}, nullptr};
        d.elab = mk::mu_tilde(e->names[0], dc.elab, P);
        return d;
      }
      case Kind::MuTildePair: {
        need(P->kind == FormKind::Tensor, "~mu(,) at non-tensor " + fshow(P), e);
        Deriv dc = check_command(
            e->kids[0], env.with_var(e->names[0], P->left).with_var(e->names[1], P->right));
        Deriv d{"tensor-l", {JKind::Context, env, e, P}, {dc}, nullptr};
        d.elab = mk::mu_tilde_pair(e->names[0], e->names[1], dc.elab, P->left, P->right);
        return d;
      }
      case Kind::MuTildeCase: {
        need(P->kind == FormKind::Plus, "~mu[] at non-sum " + fshow(P), e);
        Deriv d1 = check_command(e->kids[0], env.with_var(e->names[0], P->left));
        Deriv d2 = check_command(e->kids[1], env.with_var(e->names[1], P->right));
        Deriv d{"plus-l", {JKind::Context, env, e, P}, {d1, d2}, nullptr};
        d.elab = mk::mu_tilde_case(e->names[0], d1.elab, e->names[1], d2.elab, P->left, P->right);
        return d;
      }
      default:
        bail("not an LLP context", e);
    }
  }
};

}  // namespace

// ------------------------------------------------------------------ API

TypeResult typecheck(const Judgement& j) {
  try {
    need(j.subject != nullptr, "null subject", nullptr);
    need(j.subject->calc == Calc::Lfoc, "typecheck expects an Lfoc term", j.subject);
    require_positive_env(j.env, j.subject);
    if (j.formula) need(is_positive(j.formula), "goal formula is not positive", j.subject);
    LkqChecker ck;
    Deriv d;
    switch (j.kind) {
      case JKind::Command:
        need(j.formula == nullptr, "a command judgement carries no formula", j.subject);
        d = ck.check_command(j.subject, j.env);
        break;
      case JKind::Expr: {
        FormulaPtr goal = j.formula ? j.formula : ck.synth_expr(j.subject, j.env);
        need(goal != nullptr, "cannot infer the formula of this expression", j.subject);
        d = ck.check_expr(j.subject, goal, j.env);
        break;
      }
      case JKind::Value: {
        FormulaPtr goal = j.formula ? j.formula : ck.synth_value(j.subject, j.env);
        need(goal != nullptr, "cannot infer the formula of this value", j.subject);
        d = ck.check_value(j.subject, goal, j.env);
        break;
      }
      case JKind::Context: {
        FormulaPtr goal = j.formula ? j.formula : ck.synth_context(j.subject, j.env);
        need(goal != nullptr, "cannot infer the formula of this context", j.subject);
        d = ck.check_context(j.subject, goal, j.env);
        break;
      }
    }
    return {d, std::nullopt};
  } catch (const Fail& f) {
    return {std::nullopt, TypeFailure{f.message, f.at}};
  }
}

TypeResult typecheck_lk(const TermPtr& t, const TypingEnv& env, JKind kind, FormulaPtr goal) {
  try {
    need(t != nullptr, "null subject", nullptr);
    need(t->calc == Calc::LKraw, "typecheck_lk expects a raw LK term", t);
    for (auto& [n, f] : env.gamma) need(is_raw(f), "environment entry " + n + " is not raw LK", t);
    for (auto& [n, f] : env.delta) need(is_raw(f), "environment entry " + n + " is not raw LK", t);
    if (goal) need(is_raw(goal), "goal formula is not raw LK", t);
    LkChecker ck;
    Deriv d;
    switch (kind) {
      case JKind::Command:
        need(goal == nullptr, "a command judgement carries no formula", t);
        d = ck.check_command(t, env);
        break;
      case JKind::Expr: {
        FormulaPtr a = goal ? goal : ck.synth_expr(t, env);
        need(a != nullptr, "cannot infer the formula of this expression", t);
        d = ck.check_expr(t, a, env);
        break;
      }
      case JKind::Context: {
        FormulaPtr a = goal ? goal : ck.synth_context(t, env);
        need(a != nullptr, "cannot infer the formula of this context", t);
        d = ck.check_context(t, a, env);
        break;
      }
      default:
        bail("raw LK has no value judgement", t);
    }
    return {d, std::nullopt};
  } catch (const Fail& f) {
    return {std::nullopt, TypeFailure{f.message, f.at}};
  }
}

TypeResult typecheck_llp(const Judgement& j) {
  try {
    need(j.subject != nullptr, "null subject", nullptr);
    need(j.subject->calc == Calc::LLP, "typecheck_llp expects an LLP term", j.subject);
    need(j.env.delta.empty(), "LLP sequents are right-empty", j.subject);
    require_positive_env(j.env, j.subject);
    LlpChecker ck;
    Deriv d;
    switch (j.kind) {
      case JKind::Command:
        need(j.formula == nullptr, "a command judgement carries no formula", j.subject);
        d = ck.check_command(j.subject, j.env);
        break;
      case JKind::Value: {
        FormulaPtr goal = j.formula ? j.formula : ck.synth_value(j.subject, j.env);
        need(goal != nullptr, "cannot infer the formula of this value", j.subject);
        d = ck.check_value(j.subject, goal, j.env);
        break;
      }
      case JKind::Context: {
        FormulaPtr goal = j.formula ? j.formula : ck.synth_context(j.subject, j.env);
        need(goal != nullptr, "cannot infer the formula of this context", j.subject);
        d = ck.check_context(j.subject, goal, j.env);
        break;
      }
      default:
        bail("LLP has no expression judgement", j.subject);
    }
    return {d, std::nullopt};
  } catch (const Fail& f) {
    return {std::nullopt, TypeFailure{f.message, f.at}};
  }
}

TypeResult typecheck_lkt(const Judgement& j) {
  try {
    need(j.subject != nullptr, "null subject", nullptr);
    need(j.subject->calc == Calc::LKT, "typecheck_lkt expects an LKT term", j.subject);
    for (auto& [n, f] : j.env.gamma)
      need(is_negative(f), "LKT environment entry " + n + " is not negative", j.subject);
    for (auto& [n, f] : j.env.delta)
      need(is_negative(f), "LKT environment entry " + n + " is not negative", j.subject);
    if (j.formula) need(is_negative(j.formula), "LKT goal formula is not negative", j.subject);
  } catch (const Fail& f) {
    return {std::nullopt, TypeFailure{f.message, f.at}};
  }
  Judgement m;
  switch (j.kind) {
    case JKind::Command: m.kind = JKind::Command; break;
    case JKind::Expr: m.kind = JKind::Context; break;    // expressions mirror to contexts
    case JKind::Value: m.kind = JKind::Value; break;     // covalues live in the stoup
    case JKind::Context: m.kind = JKind::Expr; break;
  }
  m.subject = mirror(j.subject);
  m.formula = j.formula ? dual_formula(j.formula) : nullptr;
  for (auto& [n, f] : j.env.gamma) m.env.delta[n] = dual_formula(f);
  for (auto& [n, f] : j.env.delta) m.env.gamma[n] = dual_formula(f);
  TypeResult r = typecheck(m);
  if (r.ok()) {
    Deriv d = *r.deriv;
    d.j = j;
    d.elab = mirror(d.elab);
    return {d, std::nullopt};
  }
  TypeFailure f = *r.failure;
  if (f.at && (f.at->calc == Calc::Lfoc)) {
    try {
      f.at = mirror(f.at);
    } catch (...) {
    }
  }
  return {std::nullopt, f};
}

// ------------------------------------------------------------------ display

std::string show(const Judgement& j) {
  auto env_side = [](const std::map<std::string, FormulaPtr>& m) {
    std::string out;
    bool first = true;
    for (auto& [n, f] : m) {
      if (!first) out += ", ";
      first = false;
      out += n + ":" + show(f);
    }
    return out;
  };
  std::string g = env_side(j.env.gamma), d = env_side(j.env.delta);
  std::string s = show(j.subject);
  switch (j.kind) {
    case JKind::Command:
      return s + " : (" + g + " |- " + d + ")";
    case JKind::Expr:
      return g + " |- " + s + " : " + fshow(j.formula) + " | " + d;
    case JKind::Value:
      return g + " |- " + s + " : " + fshow(j.formula) + " ; " + d;
    case JKind::Context:
      return g + " | " + s + " : " + fshow(j.formula) + " |- " + d;
  }
  return "?";
}

std::string show_deriv(const Deriv& d, int indent) {
  std::string pad(indent * 2, ' ');
  std::string out = pad + "[" + d.rule + "] " + show(d.j) + "\n";
  for (auto& k : d.kids) out += show_deriv(k, indent + 1);
  return out;
}

// ------------------------------------------------------------------ eta

namespace {

bool free_covar(const TermPtr& t, const std::string& a) {
  return free_names(t).covars.count(a) > 0;
}
bool free_var(const TermPtr& t, const std::string& x) {
  return free_names(t).vars.count(x) > 0;
}

// ~mu(x1,x2) pattern-binder collapse: unwind the re-binding chain
// < val xk | ~mu bk^. ... > ending in < val (r1,r2) | e >.
std::optional<TermPtr> eta_pattern_pair(const TermPtr& t) {
  const std::string& x1 = t->names[0];
  const std::string& x2 = t->names[1];
  std::map<std::string, std::string> rebind;  // xi -> bi
  TermPtr body = t->kids[0];
  while (true) {
    if (body->kind != Kind::Cut) return std::nullopt;
    const TermPtr& v = body->kids[0];
    const TermPtr& e = body->kids[1];
    if (v->kind == Kind::ValOf && v->kids[0]->kind == Kind::Var &&
        e->kind == Kind::MuTildeNot) {
      const std::string& x = v->kids[0]->names[0];
      if ((x == x1 || x == x2) && !rebind.count(x)) {
        rebind[x] = e->names[0];
        body = e->kids[0];
        continue;
      }
    }
    break;
  }
  if (body->kind != Kind::Cut) return std::nullopt;
  const TermPtr& v = body->kids[0];
  const TermPtr& e = body->kids[1];
  if (v->kind != Kind::ValOf || v->kids[0]->kind != Kind::PairV) return std::nullopt;
  auto leg_matches = [&](const TermPtr& leg, const std::string& x) {
    auto it = rebind.find(x);
    if (it == rebind.end()) return leg->kind == Kind::Var && leg->names[0] == x;
    return leg->kind == Kind::Reflect && leg->kids[0]->kind == Kind::Covar &&
           leg->kids[0]->names[0] == it->second;
  };
  const TermPtr& pair = v->kids[0];
  if (!leg_matches(pair->kids[0], x1) || !leg_matches(pair->kids[1], x2)) return std::nullopt;
  if (rebind.count(x1) && rebind.count(x2) && rebind[x1] == rebind[x2]) return std::nullopt;
  if (free_var(e, x1) || free_var(e, x2)) return std::nullopt;
  for (auto& [x, b] : rebind)
    if (free_covar(e, b)) return std::nullopt;
  return e;
}

std::optional<TermPtr> eta_step_here(const TermPtr& t) {
  switch (t->kind) {
    case Kind::Mu: {
      const TermPtr& c = t->kids[0];
      if (c->kind == Kind::Cut && c->kids[1]->kind == Kind::Covar &&
          c->kids[1]->names[0] == t->names[0] && !free_covar(c->kids[0], t->names[0]))
        return c->kids[0];
      return std::nullopt;
    }
    case Kind::MuTilde: {
      const TermPtr& c = t->kids[0];
      if (c->kind == Kind::Cut && c->kids[0]->kind == Kind::ValOf &&
          c->kids[0]->kids[0]->kind == Kind::Var && c->kids[0]->kids[0]->names[0] == t->names[0] &&
          !free_var(c->kids[1], t->names[0]))
        return c->kids[1];
      return std::nullopt;
    }
    case Kind::MuTildeNot: {
      const TermPtr& c = t->kids[0];
      if (c->kind == Kind::Cut && c->kids[0]->kind == Kind::ValOf &&
          c->kids[0]->kids[0]->kind == Kind::Reflect &&
          c->kids[0]->kids[0]->kids[0]->kind == Kind::Covar &&
          c->kids[0]->kids[0]->kids[0]->names[0] == t->names[0] &&
          !free_covar(c->kids[1], t->names[0]))
        return c->kids[1];
      return std::nullopt;
    }
    case Kind::MuTildePair:
      return eta_pattern_pair(t);
    case Kind::MuTildeCase: {
      const TermPtr& c1 = t->kids[0];
      const TermPtr& c2 = t->kids[1];
      auto match = [&](const TermPtr& c, Kind inj, const std::string& x) -> TermPtr {
        if (c->kind != Kind::Cut) return nullptr;
        const TermPtr& v = c->kids[0];
        if (v->kind != Kind::ValOf || v->kids[0]->kind != inj) return nullptr;
        const TermPtr& payload = v->kids[0]->kids[0];
        if (payload->kind != Kind::Var || payload->names[0] != x) return nullptr;
        if (free_var(c->kids[1], x)) return nullptr;
        return c->kids[1];
      };
      TermPtr e1 = match(c1, Kind::Inl, t->names[0]);
      TermPtr e2 = match(c2, Kind::Inr, t->names[1]);
      if (e1 && e2 && alpha_eq(e1, e2)) return e1;
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

TermPtr eta_pass(const TermPtr& t, bool& changed) {
  std::vector<TermPtr> children;
  for (int i = 0; i < child_count(t); ++i) children.push_back(eta_pass(child_at(t, i), changed));
  TermPtr cur = rebuild(t, std::move(children));
  while (auto next = eta_step_here(cur)) {
    cur = *next;
    changed = true;
  }
  return cur;
}

}  // namespace

TermPtr eta_contract(const TermPtr& t) {
  TermPtr cur = t;
  bool changed = true;
  while (changed) {
    changed = false;
    cur = eta_pass(cur, changed);
  }
  return cur;
}

bool check_eta(const TermPtr& a, const TermPtr& b) {
  return alpha_eq(eta_contract(a), eta_contract(b));
}

namespace {

TermPtr llp_eta_pass(const TermPtr& t, bool& changed) {
  std::vector<TermPtr> children;
  for (int i = 0; i < child_count(t); ++i)
    children.push_back(llp_eta_pass(child_at(t, i), changed));
  TermPtr cur = rebuild(t, std::move(children));
  while (cur->kind == Kind::MuTilde) {
    const TermPtr& c = cur->kids[0];
    if (c->kind == Kind::Cut && c->kids[0]->kind == Kind::Var &&
        c->kids[0]->names[0] == cur->names[0] && !free_var(c->kids[1], cur->names[0])) {
      cur = c->kids[1];
      changed = true;
    } else {
      break;
    }
  }
  return cur;
}

}  // namespace

TermPtr llp_eta_contract(const TermPtr& t) {
  TermPtr cur = t;
  bool changed = true;
  while (changed) {
    changed = false;
    cur = llp_eta_pass(cur, changed);
  }
  return cur;
}

}  // namespace focal
