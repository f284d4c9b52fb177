#include "focal/translate.hpp"

#include <map>

#include "focal/printer.hpp"
#include "focal/reduction.hpp"
#include "focal/subst.hpp"

namespace focal {

FormulaPtr cps_formula(const FormulaPtr& p, const CpsConfig& cfg) {
  switch (p->kind) {
    case FormKind::Atom:
      return p;
    case FormKind::NotP:
      return mkf::fun(cps_formula(p->left, cfg), mkf::atom(cfg.result_atom));
    case FormKind::Tensor:
      return mkf::tensor(cps_formula(p->left, cfg), cps_formula(p->right, cfg));
    case FormKind::Plus:
      return mkf::plus(cps_formula(p->left, cfg), cps_formula(p->right, cfg));
    default:
      throw FormulaError("cps_formula expects a positive formula");
  }
}

// ----------------------------------------------------------------- LK -> LKQ

namespace {

struct LkToLkq {
  NameGen gen;
  NameSets taken;

  std::string fresh(const std::string& base, bool covar) {
    std::string n = gen.fresh(base, taken, covar);
    taken.add(n, covar);
    return n;
  }

  // recursion over the term and its typing derivation in lockstep
  TermPtr command(const TermPtr& t, const Deriv& d) {
    if (t->kind == Kind::Cut)
      return mk::cut(expr(t->kids[0], d.kids[0]), context(t->kids[1], d.kids[1]));
    if (t->kind == Kind::ESub) return sigma(t, d, JKind::Command);
    throw TermError("lk_to_lkq: not a command");
  }

  // sigma items: covariable items stay first class, expression items that do
  // not translate to values are peeled off as cuts
  TermPtr sigma(const TermPtr& t, const Deriv& d, JKind kind) {
    const Deriv& body_d = d.kids[0];
    TermPtr body = (kind == JKind::Command) ? command(t->kids[0], body_d)
                   : (kind == JKind::Expr)  ? expr(t->kids[0], body_d)
                                            : context(t->kids[0], body_d);
    Subst direct;
    std::vector<std::pair<std::string, std::pair<TermPtr, FormulaPtr>>> peeled;
    for (size_t i = 0; i < t->sub.size(); ++i) {
      const SubstItem& it = t->sub[i];
      const Deriv& pd = d.kids[i + 1];
      if (it.is_covar) {
        direct.push_back({it.name, true, context(it.payload, pd)});
      } else {
        TermPtr v2 = expr(it.payload, pd);
        if (v2->kind == Kind::ValOf)
          direct.push_back({it.name, false, v2->kids[0]});
        else
          peeled.emplace_back(it.name, std::make_pair(v2, raw_to_positive(pd.j.formula)));
      }
    }
    TermPtr out = direct.empty() ? body : mk::esub(body, direct);
    // peeled items wrap outside-in; the outermost cut evaluates first
    for (auto itp = peeled.rbegin(); itp != peeled.rend(); ++itp) {
      if (cat_of(out) != Cat::Command)
        throw TermError("lk_to_lkq: non-value substitution on a non-command subject");
      out = mk::cut(itp->second.first, mk::mu_tilde(itp->first, out, itp->second.second));
    }
    return out;
  }

  TermPtr expr(const TermPtr& t, const Deriv& d) {
    FormulaPtr A = d.j.formula;
    FormulaPtr P = raw_to_positive(A);
    switch (t->kind) {
      case Kind::Var:
        return mk::val_of(mk::var(Calc::Lfoc, t->names[0]));
      case Kind::Mu:
        return mk::mu(t->names[0], command(t->kids[0], d.kids[0]), P);
      case Kind::Reflect:
        return mk::val_of(mk::reflect(context(t->kids[0], d.kids[0])));
      case Kind::PairV: {
        // (v1,v2) becomes the second-then-first evaluation protocol
        TermPtr v1 = expr(t->kids[0], d.kids[0]);
        TermPtr v2 = expr(t->kids[1], d.kids[1]);
        FormulaPtr P1 = raw_to_positive(d.kids[0].j.formula);
        FormulaPtr P2 = raw_to_positive(d.kids[1].j.formula);
        std::string a = fresh("a", true), x1 = fresh("x", false), x2 = fresh("x", false);
        TermPtr core = mk::cut(
            mk::val_of(mk::pairv(mk::var(Calc::Lfoc, x1), mk::var(Calc::Lfoc, x2))),
            mk::covar(Calc::Lfoc, a));
        TermPtr inner = mk::cut(v1, mk::mu_tilde(x1, core, P1));
        return mk::mu(a, mk::cut(v2, mk::mu_tilde(x2, inner, P2)), P);
      }
      case Kind::Inl: {
        TermPtr v1 = expr(t->kids[0], d.kids[0]);
        FormulaPtr P1 = raw_to_positive(d.kids[0].j.formula);
        std::string a = fresh("a", true), x1 = fresh("x", false);
        TermPtr core = mk::cut(mk::val_of(mk::inl(Calc::Lfoc, mk::var(Calc::Lfoc, x1))),
                               mk::covar(Calc::Lfoc, a));
        return mk::mu(a, mk::cut(v1, mk::mu_tilde(x1, core, P1)), P);
      }
      case Kind::Inr: {
        TermPtr v2 = expr(t->kids[0], d.kids[0]);
        FormulaPtr P2 = raw_to_positive(d.kids[0].j.formula);
        std::string a = fresh("a", true), x2 = fresh("x", false);
        TermPtr core = mk::cut(mk::val_of(mk::inr(Calc::Lfoc, mk::var(Calc::Lfoc, x2))),
                               mk::covar(Calc::Lfoc, a));
        return mk::mu(a, mk::cut(v2, mk::mu_tilde(x2, core, P2)), P);
      }
      case Kind::ESub:
        throw TermError("lk_to_lkq: expression under substitution must be peeled by the caller");
      default:
        throw TermError("lk_to_lkq: not an expression");
    }
  }

  TermPtr context(const TermPtr& t, const Deriv& d) {
    FormulaPtr P = raw_to_positive(d.j.formula);
    switch (t->kind) {
      case Kind::Covar:
        return mk::covar(Calc::Lfoc, t->names[0]);
      case Kind::MuTilde:
        return mk::mu_tilde(t->names[0], command(t->kids[0], d.kids[0]), P);
      case Kind::MuTildeNot:
        return mk::mu_tilde_not(t->names[0], command(t->kids[0], d.kids[0]), P->left);
      case Kind::MuTildePair:
        return mk::mu_tilde_pair(t->names[0], t->names[1], command(t->kids[0], d.kids[0]),
                                 P->left, P->right);
      case Kind::MuTildeCase:
        return mk::mu_tilde_case(t->names[0], command(t->kids[0], d.kids[0]), t->names[1],
                                 command(t->kids[1], d.kids[1]), P->left, P->right);
      default:
        throw TermError("lk_to_lkq: not a context");
    }
  }
};

}  // namespace

TermPtr lk_to_lkq(const TermPtr& t, const TypingEnv& env, JKind kind, FormulaPtr goal) {
  TypeResult tr = typecheck_lk(t, env, kind, goal);
  if (!tr.ok()) throw TermError("lk_to_lkq: input does not typecheck: " + tr.failure->message);
  LkToLkq tr2;
  tr2.taken = all_names(t);
  switch (kind) {
    case JKind::Command:
      return tr2.command(t, *tr.deriv);
    case JKind::Expr:
      return tr2.expr(t, *tr.deriv);
    case JKind::Context:
      return tr2.context(t, *tr.deriv);
    default:
      throw TermError("lk_to_lkq: raw LK has no value judgement");
  }
}

// ----------------------------------------------------------- CBV lambda -> LKQ

namespace {

struct CbvTr {
  NameGen gen;
  NameSets taken;

  std::string fresh(const std::string& base, bool covar) {
    std::string n = gen.fresh(base, taken, covar);
    taken.add(n, covar);
    return n;
  }

  TermPtr coval(const TermPtr& V) {
    std::string b = fresh("b", true);
    return mk::mu_tilde_not(b, mk::cut(mk::val_of(V), mk::covar(Calc::Lfoc, b)));
  }

  TermPtr tr(const TermPtr& m) {
    switch (m->kind) {
      case Kind::Var:
        return mk::val_of(mk::var(Calc::Lfoc, m->names[0]));
      case Kind::Lam: {
        // \x.M  =>  val (~mu(x,a^).<M|a>)^
        std::string a = fresh("a", true);
        std::string u = fresh("y", false);
        TermPtr body = cmd(m->kids[0], a);
        TermPtr inner = mk::cut(mk::val_of(mk::var(Calc::Lfoc, u)), mk::mu_tilde_not(a, body));
        return mk::val_of(mk::reflect(mk::mu_tilde_pair(m->names[0], u, inner)));
      }
      case Kind::App: {
        std::string a = fresh("a", true);
        return mk::mu(a, cmd(m, a));
      }
      case Kind::Mu:
        return mk::mu(m->names[0], cmd_named(m->kids[0]));
      default:
        throw TermError("cbv_to_lkq: unsupported lambda construct");
    }
  }

  // < tr(M) | a > with the administrative mu collapsed for applications
  TermPtr cmd(const TermPtr& m, const std::string& a) {
    if (m->kind == Kind::App) {
      std::string x = fresh("x", false);
      TermPtr stack = coval(
          mk::pairv(mk::var(Calc::Lfoc, x), mk::reflect(mk::covar(Calc::Lfoc, a))));
      TermPtr inner = mk::cut(tr(m->kids[0]), stack);
      return mk::cut(tr(m->kids[1]), mk::mu_tilde(x, inner));
    }
    if (m->kind == Kind::Mu) {
      TermPtr body = cmd_named(m->kids[0]);
      return subst1(body, m->names[0], true, mk::covar(Calc::Lfoc, a));
    }
    return mk::cut(tr(m), mk::covar(Calc::Lfoc, a));
  }

  // named command [b]M, represented as < M | b >
  TermPtr cmd_named(const TermPtr& c) {
    if (c->kind != Kind::Cut) throw TermError("cbv_to_lkq: expected a named command");
    return cmd(c->kids[0], c->kids[1]->names[0]);
  }
};

}  // namespace

TermPtr cbv_to_lkq(const TermPtr& lam) {
  if (!same_calc(lam, Calc::Lambda)) throw TermError("cbv_to_lkq expects a lambda term");
  CbvTr t;
  t.taken = all_names(lam);
  return t.tr(lam);
}

TermPtr cbv_to_lkq_command(const TermPtr& lam, const std::string& covar) {
  if (!same_calc(lam, Calc::Lambda)) throw TermError("cbv_to_lkq expects a lambda term");
  CbvTr t;
  t.taken = all_names(lam);
  t.taken.add(covar, true);
  return t.cmd(lam, covar);
}

// ----------------------------------------------------------- CBN lambda -> LKT

namespace {

struct CbnTr {
  NameGen gen;
  NameSets taken;

  std::string fresh(const std::string& base, bool covar) {
    std::string n = gen.fresh(base, taken, covar);
    taken.add(n, covar);
    return n;
  }

  TermPtr tr(const TermPtr& m) {
    switch (m->kind) {
      case Kind::Var:
        return mk::var(Calc::LKT, m->names[0]);
      case Kind::Lam: {
        // \x.M  =>  mu(x^,a).< M | val a >  (sugar for the [u,a] binder)
        std::string a = fresh("a", true);
        std::string u = fresh("u", true);
        TermPtr body = mk::cut(tr(m->kids[0]), mk::val_of(mk::covar(Calc::LKT, a)));
        TermPtr inner =
            mk::cut(mk::mu_not(m->names[0], body), mk::val_of(mk::covar(Calc::LKT, u)));
        return mk::mu_par(u, a, inner);
      }
      case Kind::App: {
        std::string a = fresh("a", true);
        TermPtr stack = mk::copair(mk::reflect(tr(m->kids[1])), mk::covar(Calc::LKT, a));
        return mk::mu(a, mk::cut(tr(m->kids[0]), mk::val_of(stack)));
      }
      case Kind::Mu: {
        const TermPtr& c = m->kids[0];
        if (c->kind != Kind::Cut) throw TermError("cbn_to_lkt: expected a named command");
        TermPtr body = mk::cut(tr(c->kids[0]), mk::val_of(mk::covar(Calc::LKT, c->kids[1]->names[0])));
        return mk::mu(m->names[0], body);
      }
      default:
        throw TermError("cbn_to_lkt: unsupported lambda construct");
    }
  }
};

}  // namespace

TermPtr cbn_to_lkt(const TermPtr& lam) {
  if (!same_calc(lam, Calc::Lambda)) throw TermError("cbn_to_lkt expects a lambda term");
  CbnTr t;
  t.taken = all_names(lam);
  return t.tr(lam);
}

TermPtr cbn_state_to_lkt(const CbnState& s, const std::string& halt_covar) {
  TermPtr E = mk::covar(Calc::LKT, halt_covar);
  for (auto it = s.stack.rbegin(); it != s.stack.rend(); ++it)
    E = mk::copair(mk::reflect(cbn_to_lkt(*it)), E);
  return mk::cut(cbn_to_lkt(s.focus), mk::val_of(E));
}

// ----------------------------------------------------------------- LKQ -> NJ

namespace {

struct CpsTr {
  CpsConfig cfg;
  NameGen gen;
  NameSets taken;
  std::map<std::string, std::string> kmap;

  std::string kname(const std::string& a) {
    auto it = kmap.find(a);
    if (it != kmap.end()) return it->second;
    std::string base = "k_" + a;
    std::string n = base;
    while (taken.vars.count(n)) n += "'";
    taken.vars.insert(n);
    kmap[a] = n;
    return n;
  }

  FormulaPtr cont_ann(const FormulaPtr& p) {
    return p ? mkf::fun(cps_formula(p, cfg), mkf::atom(cfg.result_atom)) : nullptr;
  }
  FormulaPtr val_ann(const FormulaPtr& p) { return p ? cps_formula(p, cfg) : nullptr; }

  TermPtr command(const TermPtr& t) {
    if (t->kind == Kind::Cut) return mk::app(Calc::NJ, expr(t->kids[0]), context(t->kids[1]));
    throw TermError("lkq_to_nj: normalise explicit substitutions away first");
  }

  TermPtr expr(const TermPtr& t) {
    switch (t->kind) {
      case Kind::ValOf: {
        std::string k = gen.fresh("k", taken, false);
        taken.vars.insert(k);
        return mk::lam(Calc::NJ, k,
                       mk::app(Calc::NJ, mk::var(Calc::NJ, k), value(t->kids[0])), nullptr);
      }
      case Kind::Mu:
        return mk::lam(Calc::NJ, kname(t->names[0]), command(t->kids[0]),
                       cont_ann(t->anns[0]));
      default:
        throw TermError("lkq_to_nj: not an expression");
    }
  }

  TermPtr value(const TermPtr& t) {
    switch (t->kind) {
      case Kind::Var:
        return mk::var(Calc::NJ, t->names[0]);
      case Kind::PairV:
        return mk::pairv(value(t->kids[0]), value(t->kids[1]));
      case Kind::Inl:
        return mk::inl(Calc::NJ, value(t->kids[0]));
      case Kind::Inr:
        return mk::inr(Calc::NJ, value(t->kids[0]));
      case Kind::Reflect:
        return context(t->kids[0]);
      default:
        throw TermError("lkq_to_nj: not a value");
    }
  }

  TermPtr context(const TermPtr& t) {
    switch (t->kind) {
      case Kind::Covar:
        return mk::var(Calc::NJ, kname(t->names[0]));
      case Kind::MuTilde:
        return mk::lam(Calc::NJ, t->names[0], command(t->kids[0]), val_ann(t->anns[0]));
      case Kind::MuTildeNot:
        return mk::lam(Calc::NJ, kname(t->names[0]), command(t->kids[0]),
                       cont_ann(t->anns[0]));
      case Kind::MuTildePair:
        return mk::lam_pair(t->names[0], t->names[1], command(t->kids[0]),
                            val_ann(t->anns[0]), val_ann(t->anns[1]));
      case Kind::MuTildeCase: {
        std::string z = gen.fresh("z", taken, false);
        taken.vars.insert(z);
        FormulaPtr za = (t->anns[0] && t->anns[1])
                            ? mkf::plus(val_ann(t->anns[0]), val_ann(t->anns[1]))
                            : nullptr;
        return mk::lam_case(z, t->names[0], command(t->kids[0]), t->names[1],
                            command(t->kids[1]), za);
      }
      default:
        throw TermError("lkq_to_nj: not a context");
    }
  }
};

TermPtr strip_sigmas(const TermPtr& t) {
  TermPtr cur = t;
  while (true) {
    std::vector<Redex> rs = redexes(cur);
    const Redex* comm = nullptr;
    for (auto& r : rs)
      if (r.rule.rfind("commutation-", 0) == 0) {
        comm = &r;
        break;
      }
    if (!comm) return cur;
    cur = apply_rule_at(cur, comm->pos, comm->rule, SubstMode::Bundled);
  }
}

}  // namespace

TermPtr lkq_to_nj(const TermPtr& t, const CpsConfig& cfg) {
  if (!same_calc(t, Calc::Lfoc)) throw TermError("lkq_to_nj expects an Lfoc term");
  CpsTr tr;
  tr.cfg = cfg;
  TermPtr s = strip_sigmas(t);
  tr.taken = all_names(s);
  switch (cat_of(s)) {
    case Cat::Command:
      return tr.command(s);
    case Cat::Expr:
      return tr.expr(s);
    case Cat::Value:
      return tr.value(s);
    case Cat::Context:
      return tr.context(s);
  }
  throw TermError("lkq_to_nj: unreachable");
}

// ---------------------------------------------------------------- LKQ -> LLP

std::string k_name_for(const TermPtr& t, const std::string& covar) {
  NameSets taken = all_names(t);
  std::string n = "k_" + covar;
  while (taken.vars.count(n)) n += "'";
  return n;
}

namespace {

struct LlpTr {
  bool optimize = false;
  NameGen gen;
  NameSets taken;
  std::map<std::string, std::string> kmap;

  std::string kname(const std::string& a) {
    auto it = kmap.find(a);
    if (it != kmap.end()) return it->second;
    std::string n = "k_" + a;
    while (taken.vars.count(n)) n += "'";
    taken.vars.insert(n);
    kmap[a] = n;
    return n;
  }

  FormulaPtr nann(const FormulaPtr& p) { return p ? mkf::notp(p) : nullptr; }

  TermPtr command(const TermPtr& t) {
    if (t->kind != Kind::Cut) throw TermError("lkq_to_llp: normalise substitutions away first");
    const TermPtr& v = t->kids[0];
    const TermPtr& e = t->kids[1];
    if (optimize && v->kind == Kind::ValOf)
      return mk::cut(value(v->kids[0]), context(e));
    return mk::cut(mk::reflect(context(e)), expr(v));
  }

  // expressions become contexts of the negated type
  TermPtr expr(const TermPtr& t) {
    switch (t->kind) {
      case Kind::ValOf:
        return mk::derel(value(t->kids[0]));
      case Kind::Mu:
        return mk::mu_tilde(kname(t->names[0]), command(t->kids[0]), nann(t->anns[0]));
      default:
        throw TermError("lkq_to_llp: not an expression");
    }
  }

  TermPtr value(const TermPtr& t) {
    switch (t->kind) {
      case Kind::Var:
        return mk::var(Calc::LLP, t->names[0]);
      case Kind::PairV:
        return mk::pairv(value(t->kids[0]), value(t->kids[1]));
      case Kind::Inl:
        return mk::inl(Calc::LLP, value(t->kids[0]));
      case Kind::Inr:
        return mk::inr(Calc::LLP, value(t->kids[0]));
      case Kind::Reflect:
        return mk::reflect(context(t->kids[0]));
      default:
        throw TermError("lkq_to_llp: not a value");
    }
  }

  TermPtr context(const TermPtr& t) {
    switch (t->kind) {
      case Kind::Covar: {
        std::string x = gen.fresh("x", taken, false);
        taken.vars.insert(x);
        TermPtr body =
            mk::cut(mk::var(Calc::LLP, kname(t->names[0])), mk::derel(mk::var(Calc::LLP, x)));
        return mk::mu_tilde(x, body, nullptr);
      }
      case Kind::MuTilde:
        return mk::mu_tilde(t->names[0], command(t->kids[0]), t->anns[0]);
      case Kind::MuTildeNot: {
        if (optimize) {
          // coval pattern ~mu a^.< val V | a > with a not free in V
          const TermPtr& c = t->kids[0];
          if (c->kind == Kind::Cut && c->kids[0]->kind == Kind::ValOf &&
              c->kids[1]->kind == Kind::Covar && c->kids[1]->names[0] == t->names[0] &&
              !free_names(c->kids[0]).covars.count(t->names[0]))
            return mk::derel(value(c->kids[0]->kids[0]));
        }
        return mk::mu_tilde(kname(t->names[0]), command(t->kids[0]), nann(t->anns[0]));
      }
      case Kind::MuTildePair:
        return mk::mu_tilde_pair(t->names[0], t->names[1], command(t->kids[0]), t->anns[0],
                                 t->anns[1]);
      case Kind::MuTildeCase:
        return mk::mu_tilde_case(t->names[0], command(t->kids[0]), t->names[1],
                                 command(t->kids[1]), t->anns[0], t->anns[1]);
      default:
        throw TermError("lkq_to_llp: not a context");
    }
  }
};

}  // namespace

TermPtr lkq_to_llp(const TermPtr& t, const CpsConfig&, bool optimize) {
  if (!same_calc(t, Calc::Lfoc)) throw TermError("lkq_to_llp expects an Lfoc term");
  LlpTr tr;
  tr.optimize = optimize;
  TermPtr s = strip_sigmas(t);
  tr.taken = all_names(s);
  switch (cat_of(s)) {
    case Cat::Command:
      return tr.command(s);
    case Cat::Expr:
      return tr.expr(s);
    case Cat::Value:
      return tr.value(s);
    case Cat::Context:
      return tr.context(s);
  }
  throw TermError("lkq_to_llp: unreachable");
}

// ---------------------------------------------------------------- LLP -> LKQ

namespace {

struct LlpBack {
  NameGen gen;
  NameSets taken;

  TermPtr command(const TermPtr& t) {
    return mk::cut(mk::val_of(value(t->kids[0])), context(t->kids[1]));
  }

  TermPtr value(const TermPtr& t) {
    switch (t->kind) {
      case Kind::Var:
        return mk::var(Calc::Lfoc, t->names[0]);
      case Kind::PairV:
        return mk::pairv(value(t->kids[0]), value(t->kids[1]));
      case Kind::Inl:
        return mk::inl(Calc::Lfoc, value(t->kids[0]));
      case Kind::Inr:
        return mk::inr(Calc::Lfoc, value(t->kids[0]));
      case Kind::Reflect:
        return mk::reflect(context(t->kids[0]));
      default:
        throw TermError("llp_to_lkq: not a value");
    }
  }

  TermPtr context(const TermPtr& t) {
    switch (t->kind) {
      case Kind::Derel: {
        // dn V  =>  coval V = ~mu a^.< val V | a >
        TermPtr V = value(t->kids[0]);
        NameSets avoid = taken;
        avoid.merge(all_names(V));
        std::string a = gen.fresh("a", avoid, true);
        return mk::mu_tilde_not(a, mk::cut(mk::val_of(V), mk::covar(Calc::Lfoc, a)));
      }
      case Kind::MuTilde:
        return mk::mu_tilde(t->names[0], command(t->kids[0]), t->anns[0]);
      case Kind::MuTildePair:
        return mk::mu_tilde_pair(t->names[0], t->names[1], command(t->kids[0]), t->anns[0],
                                 t->anns[1]);
      case Kind::MuTildeCase:
        return mk::mu_tilde_case(t->names[0], command(t->kids[0]), t->names[1],
                                 command(t->kids[1]), t->anns[0], t->anns[1]);
      default:
        throw TermError("llp_to_lkq: not a context");
    }
  }
};

}  // namespace

TermPtr llp_to_lkq(const TermPtr& t) {
  if (!same_calc(t, Calc::LLP)) throw TermError("llp_to_lkq expects an LLP term");
  LlpBack b;
  b.taken = all_names(t);
  switch (cat_of(t)) {
    case Cat::Command:
      return b.command(t);
    case Cat::Value:
      return b.value(t);
    case Cat::Context:
      return b.context(t);
    default:
      throw TermError("llp_to_lkq: unreachable");
  }
}

// ----------------------------------------------------------------- LLP -> NJ

namespace {

struct LlpNj {
  CpsConfig cfg;
  NameGen gen;
  NameSets taken;

  FormulaPtr val_ann(const FormulaPtr& p) { return p ? cps_formula(p, cfg) : nullptr; }

  TermPtr command(const TermPtr& t) {
    return mk::app(Calc::NJ, context(t->kids[1]), value(t->kids[0]));
  }

  TermPtr value(const TermPtr& t) {
    switch (t->kind) {
      case Kind::Var:
        return mk::var(Calc::NJ, t->names[0]);
      case Kind::PairV:
        return mk::pairv(value(t->kids[0]), value(t->kids[1]));
      case Kind::Inl:
        return mk::inl(Calc::NJ, value(t->kids[0]));
      case Kind::Inr:
        return mk::inr(Calc::NJ, value(t->kids[0]));
      case Kind::Reflect:
        return context(t->kids[0]);
      default:
        throw TermError("llp_to_nj: not a value");
    }
  }

  TermPtr context(const TermPtr& t) {
    switch (t->kind) {
      case Kind::Derel: {
        std::string k = gen.fresh("k", taken, false);
        taken.vars.insert(k);
        return mk::lam(Calc::NJ, k, mk::app(Calc::NJ, mk::var(Calc::NJ, k), value(t->kids[0])),
                       nullptr);
      }
      case Kind::MuTilde:
        return mk::lam(Calc::NJ, t->names[0], command(t->kids[0]), val_ann(t->anns[0]));
      case Kind::MuTildePair:
        return mk::lam_pair(t->names[0], t->names[1], command(t->kids[0]),
                            val_ann(t->anns[0]), val_ann(t->anns[1]));
      case Kind::MuTildeCase: {
        std::string z = gen.fresh("z", taken, false);
        taken.vars.insert(z);
        FormulaPtr za = (t->anns[0] && t->anns[1])
                            ? mkf::plus(val_ann(t->anns[0]), val_ann(t->anns[1]))
                            : nullptr;
        return mk::lam_case(z, t->names[0], command(t->kids[0]), t->names[1],
                            command(t->kids[1]), za);
      }
      default:
        throw TermError("llp_to_nj: not a context");
    }
  }
};

}  // namespace

TermPtr llp_to_nj(const TermPtr& t, const CpsConfig& cfg) {
  if (!same_calc(t, Calc::LLP)) throw TermError("llp_to_nj expects an LLP term");
  LlpNj tr;
  tr.cfg = cfg;
  tr.taken = all_names(t);
  switch (cat_of(t)) {
    case Cat::Command:
      return tr.command(t);
    case Cat::Value:
      return tr.value(t);
    case Cat::Context:
      return tr.context(t);
    default:
      throw TermError("llp_to_nj: unreachable");
  }
}

TermPtr llp_retract_nf(const TermPtr& t) {
  TermPtr cur = t;
  for (int i = 0; i < 100000; ++i) {
    std::vector<Redex> rs = redexes(cur);
    if (rs.empty()) break;
    cur = apply_rule_at(cur, rs.front().pos, rs.front().rule, SubstMode::Bundled);
  }
  return llp_eta_contract(cur);
}

FactorizationReport check_factorization(const TermPtr& lfoc_term, const CpsConfig& cfg) {
  TermPtr direct = lkq_to_nj(lfoc_term, cfg);
  TermPtr via_llp = llp_to_nj(lkq_to_llp(lfoc_term, cfg, false), cfg);
  BetaEtaReport r = betaeta_equal_report(direct, via_llp);
  return {r.equal, r.used_beta, r.fuel_exhausted};
}

}  // namespace focal
