#include "focal/lambda.hpp"

#include "focal/printer.hpp"
#include "focal/subst.hpp"

namespace focal {

namespace {

// the three redex shapes of the target calculus
std::optional<TermPtr> nj_contract_here(const TermPtr& t) {
  if (t->kind != Kind::App) return std::nullopt;
  const TermPtr& f = t->kids[0];
  const TermPtr& a = t->kids[1];
  if (f->kind == Kind::Lam) return subst1(f->kids[0], f->names[0], false, a);
  if (f->kind == Kind::LamPair && a->kind == Kind::PairV)
    return subst(f->kids[0],
                 {{f->names[0], false, a->kids[0]}, {f->names[1], false, a->kids[1]}});
  if (f->kind == Kind::LamCase && a->kind == Kind::Inl)
    return subst(f->kids[0], {{f->names[0], false, a}, {f->names[1], false, a->kids[0]}});
  if (f->kind == Kind::LamCase && a->kind == Kind::Inr)
    return subst(f->kids[1], {{f->names[0], false, a}, {f->names[2], false, a->kids[0]}});
  return std::nullopt;
}

std::optional<TermPtr> nj_step_rec(const TermPtr& t) {
  if (auto r = nj_contract_here(t)) return r;
  for (int i = 0; i < child_count(t); ++i) {
    if (auto r = nj_step_rec(child_at(t, i))) return with_child(t, i, *r);
  }
  return std::nullopt;
}

void nj_steps_rec(const TermPtr& t, const TermPtr& root, const Path& here,
                  std::vector<TermPtr>& out) {
  if (auto r = nj_contract_here(t)) out.push_back(replace_at(root, here, *r));
  for (int i = 0; i < child_count(t); ++i) {
    Path p = here;
    p.push_back(i);
    nj_steps_rec(child_at(t, i), root, p, out);
  }
}

}  // namespace

std::optional<TermPtr> nj_step(const TermPtr& t) { return nj_step_rec(t); }

std::vector<TermPtr> nj_one_steps(const TermPtr& t) {
  std::vector<TermPtr> out;
  nj_steps_rec(t, t, {}, out);
  return out;
}

NjNormResult nj_normalize(const TermPtr& t, int fuel) {
  NjNormResult res;
  res.term = t;
  for (int i = 0; i < fuel; ++i) {
    auto next = nj_step(res.term);
    if (!next) return res;
    res.term = *next;
    ++res.steps;
  }
  res.complete = false;
  return res;
}

namespace {

TermPtr eta_fun_pass(const TermPtr& t, bool& changed) {
  std::vector<TermPtr> children;
  for (int i = 0; i < child_count(t); ++i)
    children.push_back(eta_fun_pass(child_at(t, i), changed));
  TermPtr cur = rebuild(t, std::move(children));
  while (cur->kind == Kind::Lam) {
    const TermPtr& body = cur->kids[0];
    if (body->kind == Kind::App && body->kids[1]->kind == Kind::Var &&
        body->kids[1]->names[0] == cur->names[0] &&
        !free_names(body->kids[0]).vars.count(cur->names[0])) {
      cur = body->kids[0];
      changed = true;
    } else {
      break;
    }
  }
  return cur;
}

}  // namespace

TermPtr nj_eta_fun_contract(const TermPtr& t) {
  TermPtr cur = t;
  bool changed = true;
  while (changed) {
    changed = false;
    cur = eta_fun_pass(cur, changed);
  }
  return cur;
}

BetaEtaReport betaeta_equal_report(const TermPtr& a, const TermPtr& b, int fuel) {
  BetaEtaReport rep;
  NjNormResult na = nj_normalize(a, fuel);
  NjNormResult nb = nj_normalize(b, fuel);
  rep.used_beta = na.steps > 0 || nb.steps > 0;
  if (!na.complete || !nb.complete) {
    rep.fuel_exhausted = true;
    return rep;
  }
  rep.equal = alpha_eq(nj_eta_fun_contract(na.term), nj_eta_fun_contract(nb.term));
  return rep;
}

bool betaeta_equal(const TermPtr& a, const TermPtr& b, int fuel) {
  return betaeta_equal_report(a, b, fuel).equal;
}

// --------------------------------------------------------------- simple types

namespace {

struct NjFail {
  std::string message;
  TermPtr at;
};

FormulaPtr nj_synth_rec(const TermPtr& t, const TypingEnv& env) {
  switch (t->kind) {
    case Kind::Var: {
      auto it = env.gamma.find(t->names[0]);
      return it == env.gamma.end() ? nullptr : it->second;
    }
    case Kind::App: {
      FormulaPtr f = nj_synth_rec(t->kids[0], env);
      if (!f || f->kind != FormKind::Fun) return nullptr;
      return f->right;
    }
    case Kind::Lam: {
      if (!t->anns[0]) return nullptr;
      FormulaPtr b = nj_synth_rec(t->kids[0], env.with_var(t->names[0], t->anns[0]));
      return b ? mkf::fun(t->anns[0], b) : nullptr;
    }
    case Kind::LamPair: {
      if (!t->anns[0] || !t->anns[1]) return nullptr;
      FormulaPtr b = nj_synth_rec(
          t->kids[0], env.with_var(t->names[0], t->anns[0]).with_var(t->names[1], t->anns[1]));
      return b ? mkf::fun(mkf::tensor(t->anns[0], t->anns[1]), b) : nullptr;
    }
    case Kind::LamCase: {
      if (!t->anns[0] || t->anns[0]->kind != FormKind::Plus) return nullptr;
      FormulaPtr b1 = nj_synth_rec(t->kids[0], env.with_var(t->names[0], t->anns[0])
                                                   .with_var(t->names[1], t->anns[0]->left));
      FormulaPtr b2 = nj_synth_rec(t->kids[1], env.with_var(t->names[0], t->anns[0])
                                                   .with_var(t->names[2], t->anns[0]->right));
      if (!b1 || !b2 || !formula_eq(b1, b2)) return nullptr;
      return mkf::fun(t->anns[0], b1);
    }
    case Kind::PairV: {
      FormulaPtr a = nj_synth_rec(t->kids[0], env);
      FormulaPtr b = nj_synth_rec(t->kids[1], env);
      return (a && b) ? mkf::tensor(a, b) : nullptr;
    }
    default:
      return nullptr;
  }
}

Deriv nj_check_rec(const TermPtr& t, const TypingEnv& env, const FormulaPtr& goal) {
  auto fail = [&](const std::string& m) -> Deriv { throw NjFail{m, t}; };
  switch (t->kind) {
    case Kind::Var: {
      auto it = env.gamma.find(t->names[0]);
      if (it == env.gamma.end()) return fail("unbound variable " + t->names[0]);
      if (!formula_eq(it->second, goal))
        return fail("variable " + t->names[0] + " has type " + show(it->second) + ", expected " +
                    show(goal));
      return {"var", {JKind::Value, env, t, goal}, {}, t};
    }
    case Kind::App: {
      FormulaPtr f = nj_synth_rec(t->kids[0], env);
      if (!f) return fail("cannot infer the type of the application head");
      if (f->kind != FormKind::Fun) return fail("application head is not a function");
      if (!formula_eq(f->right, goal))
        return fail("application returns " + show(f->right) + ", expected " + show(goal));
      Deriv dh = nj_check_rec(t->kids[0], env, f);
      Deriv da = nj_check_rec(t->kids[1], env, f->left);
      return {"app", {JKind::Command, env, t, goal}, {dh, da}, t};
    }
    case Kind::Lam: {
      if (goal->kind != FormKind::Fun) return fail("lambda at non-function type " + show(goal));
      if (t->anns[0] && !formula_eq(t->anns[0], goal->left))
        return fail("lambda annotation conflicts with " + show(goal));
      Deriv db = nj_check_rec(t->kids[0], env.with_var(t->names[0], goal->left), goal->right);
      return {"lam", {JKind::Value, env, t, goal}, {db}, t};
    }
    case Kind::LamPair: {
      if (goal->kind != FormKind::Fun || goal->left->kind != FormKind::Tensor)
        return fail("pair lambda at type " + show(goal));
      Deriv db = nj_check_rec(t->kids[0],
                              env.with_var(t->names[0], goal->left->left)
                                  .with_var(t->names[1], goal->left->right),
                              goal->right);
      return {"lam-pair", {JKind::Value, env, t, goal}, {db}, t};
    }
    case Kind::LamCase: {
      if (goal->kind != FormKind::Fun || goal->left->kind != FormKind::Plus)
        return fail("case lambda at type " + show(goal));
      Deriv d1 = nj_check_rec(t->kids[0],
                              env.with_var(t->names[0], goal->left)
                                  .with_var(t->names[1], goal->left->left),
                              goal->right);
      Deriv d2 = nj_check_rec(t->kids[1],
                              env.with_var(t->names[0], goal->left)
                                  .with_var(t->names[2], goal->left->right),
                              goal->right);
      return {"lam-case", {JKind::Value, env, t, goal}, {d1, d2}, t};
    }
    case Kind::PairV: {
      if (goal->kind != FormKind::Tensor) return fail("pair at non-product type " + show(goal));
      Deriv d1 = nj_check_rec(t->kids[0], env, goal->left);
      Deriv d2 = nj_check_rec(t->kids[1], env, goal->right);
      return {"pair", {JKind::Value, env, t, goal}, {d1, d2}, t};
    }
    case Kind::Inl: {
      if (goal->kind != FormKind::Plus) return fail("inl at non-sum type " + show(goal));
      Deriv d1 = nj_check_rec(t->kids[0], env, goal->left);
      return {"inl", {JKind::Value, env, t, goal}, {d1}, t};
    }
    case Kind::Inr: {
      if (goal->kind != FormKind::Plus) return fail("inr at non-sum type " + show(goal));
      Deriv d1 = nj_check_rec(t->kids[0], env, goal->right);
      return {"inr", {JKind::Value, env, t, goal}, {d1}, t};
    }
    default:
      return fail("not an NJ term");
  }
}

}  // namespace

FormulaPtr nj_synth(const TermPtr& t, const TypingEnv& env) { return nj_synth_rec(t, env); }

TypeResult nj_typecheck(const TermPtr& t, const TypingEnv& env, const FormulaPtr& goal) {
  try {
    Deriv d = nj_check_rec(t, env, goal);
    return {d, std::nullopt};
  } catch (const NjFail& f) {
    return {std::nullopt, TypeFailure{f.message, f.at}};
  }
}

TermPtr church(int n) {
  TermPtr body = mk::var(Calc::Lambda, "x");
  for (int i = 0; i < n; ++i) body = mk::app(Calc::Lambda, mk::var(Calc::Lambda, "f"), body);
  return mk::lam(Calc::Lambda, "f", mk::lam(Calc::Lambda, "x", body));
}

}  // namespace focal
