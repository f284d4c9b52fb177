#include "focal/reduction.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>

#include <json.hpp>

#include "focal/parser.hpp"
#include "focal/printer.hpp"
#include "focal/subst.hpp"
#include "focal/synth.hpp"

namespace focal {

namespace {

std::string kind_tag(Kind k) {
  switch (k) {
    case Kind::Cut: return "cut";
    case Kind::Var: return "var";
    case Kind::Covar: return "covar";
    case Kind::Mu: return "mu";
    case Kind::MuTilde: return "mu~";
    case Kind::MuTildeNot: return "mu~not";
    case Kind::MuTildePair: return "mu~pair";
    case Kind::MuTildeCase: return "mu~case";
    case Kind::Reflect: return "reflect";
    case Kind::PairV: return "pair";
    case Kind::Inl: return "inl";
    case Kind::Inr: return "inr";
    case Kind::ValOf: return "val";
    default: return "node";
  }
}

void root_redexes(const TermPtr& t, std::vector<Redex>& out, const Path& here) {
  Calc c = t->calc;
  if (t->kind == Kind::Cut) {
    const TermPtr& v = t->kids[0];
    const TermPtr& e = t->kids[1];
    if (c == Calc::LKraw || c == Calc::Lfoc) {
      if (v->kind == Kind::Mu) out.push_back({here, "control-mu"});
      bool left_ok = (c == Calc::LKraw) ? v->kind != Kind::Mu : v->kind == Kind::ValOf;
      const TermPtr V = (c == Calc::Lfoc && v->kind == Kind::ValOf) ? v->kids[0] : v;
      if (left_ok && e->kind == Kind::MuTilde) out.push_back({here, "control-mu~"});
      if (left_ok) {
        if (V->kind == Kind::Reflect && e->kind == Kind::MuTildeNot)
          out.push_back({here, "logical-not"});
        if (V->kind == Kind::PairV && e->kind == Kind::MuTildePair)
          out.push_back({here, "logical-tensor"});
        if (V->kind == Kind::Inl && e->kind == Kind::MuTildeCase)
          out.push_back({here, "logical-plus-inl"});
        if (V->kind == Kind::Inr && e->kind == Kind::MuTildeCase)
          out.push_back({here, "logical-plus-inr"});
      }
    } else if (c == Calc::LLP) {
      if (e->kind == Kind::MuTilde) out.push_back({here, "llp-mu~"});
      if (v->kind == Kind::Reflect && e->kind == Kind::Derel)
        out.push_back({here, "llp-derel"});
      if (v->kind == Kind::PairV && e->kind == Kind::MuTildePair)
        out.push_back({here, "llp-tensor"});
      if (v->kind == Kind::Inl && e->kind == Kind::MuTildeCase)
        out.push_back({here, "llp-plus-inl"});
      if (v->kind == Kind::Inr && e->kind == Kind::MuTildeCase)
        out.push_back({here, "llp-plus-inr"});
    } else if (c == Calc::LKT) {
      if (e->kind == Kind::MuTilde) out.push_back({here, "control-mu~"});
      if (v->kind == Kind::Mu && e->kind == Kind::ValOf) out.push_back({here, "control-mu"});
      if (e->kind == Kind::ValOf) {
        const TermPtr& E = e->kids[0];
        if (v->kind == Kind::MuPar && E->kind == Kind::CoPair)
          out.push_back({here, "logical-par"});
        if (v->kind == Kind::MuCase && E->kind == Kind::Fst)
          out.push_back({here, "logical-with-fst"});
        if (v->kind == Kind::MuCase && E->kind == Kind::Snd)
          out.push_back({here, "logical-with-snd"});
        if (v->kind == Kind::MuNot && E->kind == Kind::Reflect)
          out.push_back({here, "logical-not"});
      }
    } else if (c == Calc::Lsynth) {
      synth_root_redexes(t, out, here);
    }
  }
  if (t->kind == Kind::ESub && t->kids[0]->kind != Kind::ESub) {
    out.push_back({here, "commutation-" + kind_tag(t->kids[0]->kind)});
  }
}

void collect_redexes(const TermPtr& t, std::vector<Redex>& out, Path& here) {
  root_redexes(t, out, here);
  for (int i = 0; i < child_count(t); ++i) {
    here.push_back(i);
    collect_redexes(child_at(t, i), out, here);
    here.pop_back();
  }
}

TermPtr wrap_or_subst(const TermPtr& body, Subst sigma, SubstMode mode) {
  if (mode == SubstMode::Bundled) return subst(body, sigma);
  if (sigma.empty()) return body;
  return mk::esub(body, std::move(sigma));
}

// (binder. c)[sigma] -> binder. (c[sigma']): one constructor crossed, with the
// shadowed items dropped and clashing binder names freshened
TermPtr push_sigma_into_binder(const TermPtr& t) {
  const TermPtr& subject = t->kids[0];
  Subst live;
  NameSets fns = free_names(subject);
  for (auto& it : t->sub)
    if (fns.contains(it.name, it.is_covar)) live.push_back(it);
  auto slots = binder_slots(subject);
  NameSets avoid;
  for (auto& it : live) avoid.merge(free_names(it.payload));
  NameGen gen;
  auto copy = std::make_shared<Term>(*subject);
  for (auto& s : slots) {
    std::string bn = copy->names[s.name_index];
    if (avoid.contains(bn, s.is_covar)) {
      NameSets pool = avoid;
      pool.merge(all_names(subject));
      for (auto& it : live) pool.add(it.name, it.is_covar);
      std::string nn = gen.fresh(bn, pool, s.is_covar);
      for (int ki = 0; ki < static_cast<int>(copy->kids.size()); ++ki) {
        bool binds_here = false;
        for (auto& s2 : slots)
          if (s2.kid_index == ki && copy->names[s2.name_index] == bn &&
              s2.is_covar == s.is_covar)
            binds_here = true;
        if (binds_here) copy->kids[ki] = rename_free(copy->kids[ki], bn, nn, s.is_covar);
      }
      for (auto& s2 : slots)
        if (copy->names[s2.name_index] == bn && s2.is_covar == s.is_covar)
          copy->names[s2.name_index] = nn;
    }
  }
  for (int ki = 0; ki < static_cast<int>(copy->kids.size()); ++ki) {
    Subst inner;
    for (auto& it : live) {
      bool shadowed = false;
      for (auto& s : slots)
        if (s.kid_index == ki && copy->names[s.name_index] == it.name &&
            s.is_covar == it.is_covar)
          shadowed = true;
      if (!shadowed && free_names(copy->kids[ki]).contains(it.name, it.is_covar))
        inner.push_back(it);
    }
    if (!inner.empty()) copy->kids[ki] = mk::esub(copy->kids[ki], inner);
  }
  return copy;
}

TermPtr contract(const TermPtr& t, const std::string& rule, SubstMode mode) {
  if (rule.rfind("commutation-", 0) == 0) {
    const TermPtr& subject = t->kids[0];
    switch (subject->kind) {
      case Kind::Var:
      case Kind::Covar: {
        bool covar = subject->kind == Kind::Covar;
        for (auto& it : t->sub)
          if (it.name == subject->names[0] && it.is_covar == covar) return it.payload;
        return subject;
      }
      case Kind::Cut:
      case Kind::PairV:
      case Kind::Inl:
      case Kind::Inr:
      case Kind::Reflect:
      case Kind::ValOf: {
        std::vector<TermPtr> children;
        for (auto& k : subject->kids) {
          Subst live;
          NameSets fns = free_names(k);
          for (auto& it : t->sub)
            if (fns.contains(it.name, it.is_covar)) live.push_back(it);
          children.push_back(live.empty() ? k : mk::esub(k, std::move(live)));
        }
        return rebuild(subject, std::move(children));
      }
      case Kind::Mu:
      case Kind::MuTilde:
      case Kind::MuTildeNot:
      case Kind::MuTildePair:
      case Kind::MuTildeCase:
        return push_sigma_into_binder(t);
      default:
        throw TermError("no commutation rule for this subject");
    }
  }
  const TermPtr& v = t->kids[0];
  const TermPtr& e = t->kids[1];
  if (rule == "control-mu" && t->calc != Calc::LKT)
    return wrap_or_subst(v->kids[0], {{v->names[0], true, e}}, mode);
  if (t->calc == Calc::LKraw || t->calc == Calc::Lfoc) {
    const TermPtr V = (t->calc == Calc::Lfoc) ? v->kids[0] : v;
    if (rule == "control-mu~")
      return wrap_or_subst(e->kids[0], {{e->names[0], false, V}}, mode);
    if (rule == "logical-not")
      return wrap_or_subst(e->kids[0], {{e->names[0], true, V->kids[0]}}, mode);
    if (rule == "logical-tensor")
      return wrap_or_subst(
          e->kids[0], {{e->names[0], false, V->kids[0]}, {e->names[1], false, V->kids[1]}}, mode);
    if (rule == "logical-plus-inl")
      return wrap_or_subst(e->kids[0], {{e->names[0], false, V->kids[0]}}, mode);
    if (rule == "logical-plus-inr")
      return wrap_or_subst(e->kids[1], {{e->names[1], false, V->kids[0]}}, mode);
  }
  if (t->calc == Calc::LLP) {
    if (rule == "llp-mu~") return subst(e->kids[0], {{e->names[0], false, v}});
    if (rule == "llp-derel") return mk::cut(e->kids[0], v->kids[0]);
    if (rule == "llp-tensor")
      return subst(e->kids[0],
                   {{e->names[0], false, v->kids[0]}, {e->names[1], false, v->kids[1]}});
    if (rule == "llp-plus-inl") return subst(e->kids[0], {{e->names[0], false, v->kids[0]}});
    if (rule == "llp-plus-inr") return subst(e->kids[1], {{e->names[1], false, v->kids[0]}});
  }
  if (t->calc == Calc::LKT) {
    if (rule == "control-mu~") return subst(e->kids[0], {{e->names[0], false, v}});
    if (rule == "control-mu") return subst(v->kids[0], {{v->names[0], true, e->kids[0]}});
    const TermPtr E = e->kind == Kind::ValOf ? e->kids[0] : nullptr;
    if (rule == "logical-par")
      return subst(v->kids[0],
                   {{v->names[0], true, E->kids[0]}, {v->names[1], true, E->kids[1]}});
    if (rule == "logical-with-fst") return subst(v->kids[0], {{v->names[0], true, E->kids[0]}});
    if (rule == "logical-with-snd") return subst(v->kids[1], {{v->names[1], true, E->kids[0]}});
    if (rule == "logical-not") return subst(v->kids[0], {{v->names[0], false, E->kids[0]}});
  }
  if (t->calc == Calc::Lsynth) return synth_contract(t, rule);
  throw TermError("unknown rule " + rule + " for this calculus");
}

}  // namespace

std::vector<Redex> redexes(const TermPtr& c) {
  std::vector<Redex> out;
  Path here;
  collect_redexes(c, out, here);
  return out;
}

TermPtr apply_rule_at(const TermPtr& c, const Path& pos, const std::string& rule, SubstMode mode) {
  TermPtr node = at_path(c, pos);
  return replace_at(c, pos, contract(node, rule, mode));
}

std::optional<std::pair<TermPtr, TraceStep>> step(const TermPtr& c, const Strategy& strat,
                                                  SubstMode mode, std::uint64_t step_index) {
  std::vector<Redex> rs = redexes(c);
  if (rs.empty()) return std::nullopt;
  const Redex* chosen = nullptr;
  switch (strat.kind) {
    case StratKind::Leftmost:
      chosen = &rs.front();
      break;
    case StratKind::Rightmost:
      chosen = &rs.back();
      break;
    case StratKind::Random: {
      std::mt19937_64 rng(strat.seed * 0x9e3779b97f4a7c15ULL + step_index + 1);
      chosen = &rs[rng() % rs.size()];
      break;
    }
    case StratKind::AtPosition: {
      for (auto& r : rs)
        if (r.pos == strat.pos) chosen = &r;
      if (!chosen) throw TermError("no redex at the requested position");
      break;
    }
  }
  TermPtr after = apply_rule_at(c, chosen->pos, chosen->rule, mode);
  return std::make_pair(after, TraceStep{chosen->rule, chosen->pos, c, after});
}

std::string show_status(NormStatus s) {
  switch (s) {
    case NormStatus::Normal: return "Normal";
    case NormStatus::FuelExhausted: return "FuelExhausted";
    case NormStatus::LoopDetected: return "LoopDetected";
  }
  return "?";
}

NormalizeResult normalize(const TermPtr& c, int fuel, const Strategy& strat, SubstMode mode,
                          int loop_window) {
  NormalizeResult res;
  res.trace.initial = c;
  TermPtr cur = c;
  std::deque<std::string> window;
  window.push_back(alpha_key(cur));
  for (int i = 0; i < fuel; ++i) {
    auto next = step(cur, strat, mode, static_cast<std::uint64_t>(i));
    if (!next) {
      res.term = cur;
      res.trace.final_term = cur;
      res.status = NormStatus::Normal;
      res.trace.status = show_status(res.status);
      return res;
    }
    cur = next->first;
    res.trace.steps.push_back(next->second);
    std::string key = alpha_key(cur);
    for (auto& k : window)
      if (k == key) {
        res.term = cur;
        res.trace.final_term = cur;
        res.status = NormStatus::LoopDetected;
        res.trace.status = show_status(res.status);
        return res;
      }
    window.push_back(std::move(key));
    while (static_cast<int>(window.size()) > loop_window) window.pop_front();
  }
  res.term = cur;
  res.trace.final_term = cur;
  res.status = NormStatus::FuelExhausted;
  res.trace.status = show_status(res.status);
  return res;
}

// --------------------------------------------------------------- Prop 4.4

namespace {

// stage 1: contract every < mu a.c | e >; no new ones are created afterwards
TermPtr eliminate_mu(const TermPtr& t) {
  std::vector<TermPtr> children;
  for (int i = 0; i < child_count(t); ++i) children.push_back(eliminate_mu(child_at(t, i)));
  TermPtr cur = rebuild(t, std::move(children));
  if (cur->kind == Kind::Cut && cur->kids[0]->kind == Kind::Mu) {
    const TermPtr& m = cur->kids[0];
    return subst(m->kids[0], {{m->names[0], true, cur->kids[1]}});
  }
  return cur;
}

// augmented substitution {|c|}sigma from the weak-normalisation proof
struct AugSubst {
  NameGen gen;

  TermPtr apply(const TermPtr& t, Subst items) {
    NameSets fns = free_names(t);
    Subst live;
    for (auto& it : items)
      if (fns.contains(it.name, it.is_covar)) live.push_back(it);
    if (live.empty()) return t;
    return go(t, live);
  }

  static const TermPtr* find(const Subst& items, const std::string& n, bool covar) {
    for (auto& it : items)
      if (it.name == n && it.is_covar == covar) return &it.payload;
    return nullptr;
  }

  static Subst minus(const Subst& items,
                     std::initializer_list<std::pair<std::string, bool>> dom) {
    Subst out;
    for (auto& it : items) {
      bool drop = false;
      for (auto& [n, cv] : dom)
        if (it.name == n && it.is_covar == cv) drop = true;
      if (!drop) out.push_back(it);
    }
    return out;
  }

  TermPtr go(const TermPtr& t, const Subst& items) {
    if (t->kind == Kind::Cut && t->kids[0]->kind == Kind::ValOf &&
        t->kids[0]->kids[0]->kind == Kind::Var) {
      const std::string& x = t->kids[0]->kids[0]->names[0];
      const TermPtr* pv = find(items, x, false);
      if (pv) {
        const TermPtr& V = *pv;
        const TermPtr& K = t->kids[1];
        if (K->kind == Kind::MuTildeNot && V->kind == Kind::Reflect) {
          Subst inner = minus(items, {{K->names[0], true}});
          inner.push_back({K->names[0], true, V->kids[0]});
          return apply(K->kids[0], std::move(inner));
        }
        if (K->kind == Kind::MuTildePair && V->kind == Kind::PairV) {
          Subst inner = minus(items, {{K->names[0], false}, {K->names[1], false}});
          inner.push_back({K->names[0], false, V->kids[0]});
          inner.push_back({K->names[1], false, V->kids[1]});
          return apply(K->kids[0], std::move(inner));
        }
        if (K->kind == Kind::MuTildeCase && V->kind == Kind::Inl) {
          Subst inner = minus(items, {{K->names[0], false}});
          inner.push_back({K->names[0], false, V->kids[0]});
          return apply(K->kids[0], std::move(inner));
        }
        if (K->kind == Kind::MuTildeCase && V->kind == Kind::Inr) {
          Subst inner = minus(items, {{K->names[1], false}});
          inner.push_back({K->names[1], false, V->kids[0]});
          return apply(K->kids[1], std::move(inner));
        }
      }
    }
    switch (t->kind) {
      case Kind::Var:
        if (auto* p = find(items, t->names[0], false)) return *p;
        return t;
      case Kind::Covar:
        if (auto* p = find(items, t->names[0], true)) return *p;
        return t;
      case Kind::ESub:
        throw TermError("normalize_wn expects substitution-free input");
      default: {
        auto slots = binder_slots(t);
        if (slots.empty()) {
          std::vector<TermPtr> children;
          for (int i = 0; i < child_count(t); ++i)
            children.push_back(apply(child_at(t, i), items));
          return rebuild(t, std::move(children));
        }
        auto copy = std::make_shared<Term>(*t);
        for (int ki = 0; ki < child_count(t); ++ki) {
          TermPtr body = child_at(copy, ki);
          Subst inner;
          for (auto& it : items) {
            bool shadowed = false;
            for (auto& s : slots)
              if (s.kid_index == ki && copy->names[s.name_index] == it.name &&
                  s.is_covar == it.is_covar)
                shadowed = true;
            if (!shadowed) inner.push_back(it);
          }
          if (inner.empty()) continue;
          NameSets avoid;
          for (auto& it : inner) avoid.merge(free_names(it.payload));
          for (auto& s : slots) {
            if (s.kid_index != ki) continue;
            std::string bn = copy->names[s.name_index];
            if (avoid.contains(bn, s.is_covar)) {
              NameSets pool = avoid;
              pool.merge(all_names(body));
              for (auto& it : inner) pool.add(it.name, it.is_covar);
              std::string nn = gen.fresh(bn, pool, s.is_covar);
              body = rename_free(body, bn, nn, s.is_covar);
              for (auto& s2 : slots)
                if (s2.kid_index == ki && copy->names[s2.name_index] == bn &&
                    s2.is_covar == s.is_covar)
                  copy->names[s2.name_index] = nn;
            }
          }
          copy = std::const_pointer_cast<Term>(with_child(copy, ki, apply(body, inner)));
        }
        return copy;
      }
    }
  }
};

struct DegRedex {
  Path pos;
  std::string rule;
  int degree;
};

// degrees read off a fresh derivation: the size of each redex's cut formula
void collect_deg(const TermPtr& t, const Deriv& d, Path& here, std::vector<DegRedex>& out) {
  if (t->kind == Kind::Cut) {
    std::vector<Redex> rs;
    root_redexes(t, rs, here);
    FormulaPtr cutf = d.kids.empty() ? nullptr : d.kids[0].j.formula;
    int deg = cutf ? formula_size(cutf) : 1;
    for (auto& r : rs) out.push_back({r.pos, r.rule, deg});
  }
  int nd = static_cast<int>(d.kids.size());
  int nc = child_count(t);
  // checker derivations align with term children in order for every rule
  for (int i = 0; i < nc && i < nd; ++i) {
    here.push_back(i);
    collect_deg(child_at(t, i), d.kids[i], here, out);
    here.pop_back();
  }
}

bool multiset_decreases(std::vector<int> before, std::vector<int> after) {
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  std::vector<int> b2, a2;
  size_t i = 0, j = 0;
  while (i < before.size() && j < after.size()) {
    if (before[i] == after[j]) {
      ++i;
      ++j;
    } else if (before[i] < after[j]) {
      b2.push_back(before[i++]);
    } else {
      a2.push_back(after[j++]);
    }
  }
  for (; i < before.size(); ++i) b2.push_back(before[i]);
  for (; j < after.size(); ++j) a2.push_back(after[j]);
  if (b2.empty()) return false;
  if (a2.empty()) return true;
  return b2.back() > a2.back();
}

}  // namespace

WnResult normalize_wn(const TermPtr& c, const TypingEnv& env) {
  if (!same_calc(c, Calc::Lfoc)) throw TermError("normalize_wn expects an Lfoc command");
  TermPtr cur = c;
  // substitution-free, then mu-free starting point
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
  cur = eliminate_mu(cur);

  WnResult res;
  res.trace.initial = cur;
  auto degrees_of = [&](const TermPtr& t, std::vector<DegRedex>& rs) {
    TypeResult tr = typecheck({JKind::Command, env, t, nullptr});
    if (!tr.ok())
      throw TermError("normalize_wn: term does not typecheck: " + tr.failure->message);
    Path here;
    rs.clear();
    collect_deg(t, *tr.deriv, here, rs);
  };

  std::vector<DegRedex> rs;
  degrees_of(cur, rs);
  while (!rs.empty()) {
    std::vector<int> before;
    for (auto& r : rs) before.push_back(r.degree);
    res.degree_history.push_back(before);
    int dmax = 0;
    for (auto& r : rs) dmax = std::max(dmax, r.degree);
    // leftmost maximal-degree redex all of whose subredexes have lower degree
    const DegRedex* chosen = nullptr;
    for (auto& r : rs) {
      if (r.degree != dmax) continue;
      bool has_inner_max = false;
      for (auto& r2 : rs) {
        if (&r2 == &r || r2.degree != dmax) continue;
        if (r2.pos.size() > r.pos.size() &&
            std::equal(r.pos.begin(), r.pos.end(), r2.pos.begin()))
          has_inner_max = true;
      }
      if (!has_inner_max) {
        chosen = &r;
        break;
      }
    }
    if (!chosen) throw TermError("normalize_wn: no admissible redex");
    TermPtr node = at_path(cur, chosen->pos);
    const TermPtr& e = node->kids[1];
    const TermPtr V = node->kids[0]->kids[0];
    AugSubst aug;
    TermPtr contracted;
    if (chosen->rule == "control-mu~")
      contracted = aug.apply(e->kids[0], {{e->names[0], false, V}});
    else if (chosen->rule == "logical-not")
      contracted = aug.apply(e->kids[0], {{e->names[0], true, V->kids[0]}});
    else if (chosen->rule == "logical-tensor")
      contracted = aug.apply(
          e->kids[0], {{e->names[0], false, V->kids[0]}, {e->names[1], false, V->kids[1]}});
    else if (chosen->rule == "logical-plus-inl")
      contracted = aug.apply(e->kids[0], {{e->names[0], false, V->kids[0]}});
    else if (chosen->rule == "logical-plus-inr")
      contracted = aug.apply(e->kids[1], {{e->names[1], false, V->kids[0]}});
    else
      throw TermError("normalize_wn: unexpected rule " + chosen->rule);
    TermPtr next = replace_at(cur, chosen->pos, contracted);
    res.trace.steps.push_back({chosen->rule + " (packaged)", chosen->pos, cur, next});
    cur = next;
    degrees_of(cur, rs);
    std::vector<int> after;
    for (auto& r : rs) after.push_back(r.degree);
    if (!multiset_decreases(before, after))
      throw TermError("normalize_wn: degree multiset did not decrease");
  }
  res.term = cur;
  res.trace.final_term = cur;
  res.trace.status = "Normal";
  return res;
}

NormalShape classify_normal(const TermPtr& c) {
  if (!redexes(c).empty()) return NormalShape::NotNormal;
  if (c->kind != Kind::Cut) return NormalShape::NotNormal;
  const TermPtr& v = c->kids[0];
  const TermPtr& e = c->kids[1];
  if (v->kind != Kind::ValOf) return NormalShape::NotNormal;
  const TermPtr& V = v->kids[0];
  if (e->kind == Kind::Covar) return NormalShape::ValAtCovar;
  if (V->kind != Kind::Var) return NormalShape::NotNormal;
  if (e->kind == Kind::MuTildeNot) return NormalShape::VarAtNot;
  if (e->kind == Kind::MuTildePair) return NormalShape::VarAtPair;
  if (e->kind == Kind::MuTildeCase) return NormalShape::VarAtCase;
  return NormalShape::NotNormal;
}

std::string show_shape(NormalShape s) {
  switch (s) {
    case NormalShape::ValAtCovar: return "<val V | a>";
    case NormalShape::VarAtNot: return "<val x | ~mu a^.c>";
    case NormalShape::VarAtPair: return "<val x | ~mu(x1,x2).c>";
    case NormalShape::VarAtCase: return "<val x | ~mu[inl|inr]>";
    case NormalShape::NotNormal: return "NotNormal";
  }
  return "?";
}

LafontResult lafont_demo(const TermPtr& c1, const TermPtr& c2) {
  if (!same_calc(c1, Calc::LKraw) || !same_calc(c2, Calc::LKraw))
    throw TermError("lafont_demo expects raw LK commands");
  NameSets avoid = all_names(c1);
  avoid.merge(all_names(c2));
  NameGen gen;
  std::string a = gen.fresh("a", avoid, true);
  std::string x = gen.fresh("x", avoid, false);
  TermPtr d = mk::cut(mk::mu(a, c1), mk::mu_tilde(x, c2));
  auto reduce_pref = [&](const std::string& pref) {
    TermPtr cur = d;
    for (int i = 0; i < 100000; ++i) {
      std::vector<Redex> rs = redexes(cur);
      if (rs.empty()) return cur;
      const Redex* chosen = &rs.front();
      for (auto& r : rs)
        if (r.rule == pref) {
          chosen = &r;
          break;
        }
      cur = apply_rule_at(cur, chosen->pos, chosen->rule, SubstMode::Explicit);
    }
    throw TermError("lafont_demo: reduction did not terminate");
  };
  return {d, reduce_pref("control-mu"), reduce_pref("control-mu~")};
}

bool is_contraction(const TermPtr& command) {
  if (command->kind != Kind::Cut) return false;
  const TermPtr& v = command->kids[0];
  const TermPtr& e = command->kids[1];
  if (e->kind == Kind::Covar && free_names(v).covars.count(e->names[0])) return true;
  TermPtr lv = v;
  if (v->kind == Kind::ValOf) lv = v->kids[0];
  if (lv->kind == Kind::Var && free_names(e).vars.count(lv->names[0])) return true;
  return false;
}

std::vector<std::string> lint_phase_cycle(const Trace& trace) {
  std::vector<std::string> warnings;
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep& s = trace.steps[i];
    if (s.rule.rfind("logical-", 0) != 0) continue;
    bool ok = true;
    for (size_t j = i; j-- > 0;) {
      const TraceStep& p = trace.steps[j];
      size_t n = std::min(p.pos.size(), s.pos.size());
      bool overlap = std::equal(p.pos.begin(), p.pos.begin() + n, s.pos.begin());
      if (!overlap) continue;
      ok = p.rule.rfind("control-", 0) == 0 || p.rule.rfind("commutation-", 0) == 0 ||
           p.rule.rfind("logical-", 0) == 0;
      break;
    }
    if (!ok)
      warnings.push_back("logical step " + std::to_string(i) + " (" + s.rule +
                         ") not preceded by a control step at its position");
  }
  return warnings;
}

std::string trace_to_json(const Trace& trace, Calc calc) {
  nlohmann::json j;
  j["calc"] = show_calc(calc);
  j["initial"] = show(trace.initial);
  j["status"] = trace.status;
  j["final"] = show(trace.final_term);
  nlohmann::json steps = nlohmann::json::array();
  for (auto& s : trace.steps) {
    nlohmann::json js;
    js["rule"] = s.rule;
    js["pos"] = s.pos;
    js["after"] = show(s.after);
    steps.push_back(js);
  }
  j["steps"] = steps;
  return j.dump(2);
}

TermPtr replay_trace_json(const std::string& json, Calc calc, SubstMode mode) {
  nlohmann::json j = nlohmann::json::parse(json);
  TermPtr cur = parse_term(j["initial"].get<std::string>(), calc, Cat::Command);
  for (auto& js : j["steps"]) {
    Path pos = js["pos"].get<Path>();
    std::string rule = js["rule"].get<std::string>();
    cur = apply_rule_at(cur, pos, rule, mode);
    TermPtr expect = parse_term(js["after"].get<std::string>(), calc, Cat::Command);
    if (!alpha_eq(cur, expect)) throw TermError("trace replay diverged at rule " + rule);
  }
  return cur;
}

}  // namespace focal
