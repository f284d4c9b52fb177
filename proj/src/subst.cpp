#include "focal/subst.hpp"

#include <algorithm>
#include <map>

namespace focal {

// ---------------------------------------------------------------- free names

namespace {

void free_names_rec(const TermPtr& t, NameSets bound, NameSets& out) {
  switch (t->kind) {
    case Kind::Var:
      if (!bound.contains(t->names[0], false)) out.add(t->names[0], false);
      return;
    case Kind::Covar:
      if (!bound.contains(t->names[0], true)) out.add(t->names[0], true);
      return;
    case Kind::ESub: {
      for (auto& it : t->sub) free_names_rec(it.payload, bound, out);
      NameSets inner = bound;
      for (auto& it : t->sub) inner.add(it.name, it.is_covar);
      free_names_rec(t->kids[0], inner, out);
      return;
    }
    case Kind::PatVal:
      for (auto& f : t->kids) free_names_rec(f, bound, out);
      return;
    case Kind::MuTildeRec:
      for (size_t i = 0; i < t->kids.size(); ++i) {
        NameSets inner = bound;
        for (auto& l : pattern_leaves(t->pats[i])) inner.add(l.name, l.is_covar);
        free_names_rec(t->kids[i], inner, out);
      }
      return;
    case Kind::MuTildeQ: {
      NameSets inner = bound;
      for (auto& l : cpat_leaves(t->cpats[0])) inner.add(l.name, l.is_covar);
      free_names_rec(t->kids[0], inner, out);
      return;
    }
    case Kind::CoTree: {
      // command-tree labels reference counterpattern leaves bound above
      for (auto& q : t->cpats)
        for (auto& l : cpat_leaves(q))
          if (!bound.contains(l.name, l.is_covar)) out.add(l.name, l.is_covar);
      for (auto& k : t->kids) free_names_rec(k, bound, out);
      return;
    }
    default: {
      auto slots = binder_slots(t);
      for (int ki = 0; ki < child_count(t); ++ki) {
        NameSets inner = bound;
        for (auto& s : slots)
          if (s.kid_index == ki) inner.add(t->names[s.name_index], s.is_covar);
        free_names_rec(child_at(t, ki), inner, out);
      }
      return;
    }
  }
}

void all_names_rec(const TermPtr& t, NameSets& out) {
  for (auto& n : t->names) {
    out.vars.insert(n);
    out.covars.insert(n);
  }
  for (auto& it : t->sub) {
    out.vars.insert(it.name);
    out.covars.insert(it.name);
  }
  for (auto& p : t->pats)
    for (auto& l : pattern_leaves(p)) {
      out.vars.insert(l.name);
      out.covars.insert(l.name);
    }
  for (auto& q : t->cpats)
    for (auto& l : cpat_leaves(q)) {
      out.vars.insert(l.name);
      out.covars.insert(l.name);
    }
  for (int i = 0; i < child_count(t); ++i) all_names_rec(child_at(t, i), out);
}

}  // namespace

NameSets free_names(const TermPtr& t) {
  NameSets out;
  free_names_rec(t, NameSets{}, out);
  return out;
}

NameSets all_names(const TermPtr& t) {
  NameSets out;
  all_names_rec(t, out);
  return out;
}

std::string NameGen::fresh(const std::string& base, const NameSets& avoid, bool covar) {
  std::string stem = base.empty() ? std::string(covar ? "a" : "x") : base;
  size_t cut = stem.find('\'');
  if (cut != std::string::npos) stem = stem.substr(0, cut);
  while (true) {
    std::string cand = stem + "'" + std::to_string(++counter_);
    if (!avoid.contains(cand, covar)) return cand;
  }
}

std::string NameGen::fresh(const std::string& base, const std::set<std::string>& avoid) {
  std::string stem = base.empty() ? std::string("x") : base;
  size_t cut = stem.find('\'');
  if (cut != std::string::npos) stem = stem.substr(0, cut);
  while (true) {
    std::string cand = stem + "'" + std::to_string(++counter_);
    if (!avoid.count(cand)) return cand;
  }
}

// ---------------------------------------------------------------- rename

namespace {

CPat rename_cpat_leaf(const CPat& q, const std::string& from, const std::string& to,
                      bool is_covar) {
  CPat out = q;
  switch (q.k) {
    case CPat::K::Var:
      if (!is_covar && q.name == from) out.name = to;
      return out;
    case CPat::K::CovarDag:
      if (is_covar && q.name == from) out.name = to;
      return out;
    default:
      for (auto& kid : out.kids) kid = rename_cpat_leaf(kid, from, to, is_covar);
      return out;
  }
}

bool cpat_binds(const CPat& q, const std::string& n, bool is_covar) {
  for (auto& l : cpat_leaves(q))
    if (l.name == n && l.is_covar == is_covar) return true;
  return false;
}

bool pattern_binds(const Pattern& p, const std::string& n, bool is_covar) {
  for (auto& l : pattern_leaves(p))
    if (l.name == n && l.is_covar == is_covar) return true;
  return false;
}

}  // namespace

TermPtr rename_free(const TermPtr& t, const std::string& from, const std::string& to,
                    bool is_covar) {
  if (from == to) return t;
  switch (t->kind) {
    case Kind::Var:
      if (!is_covar && t->names[0] == from) return with_names(t, {to});
      return t;
    case Kind::Covar:
      if (is_covar && t->names[0] == from) return with_names(t, {to});
      return t;
    case Kind::ESub: {
      auto copy = std::make_shared<Term>(*t);
      bool shadowed = false;
      for (auto& it : copy->sub) {
        it.payload = rename_free(it.payload, from, to, is_covar);
        if (it.name == from && it.is_covar == is_covar) shadowed = true;
      }
      if (!shadowed) copy->kids[0] = rename_free(t->kids[0], from, to, is_covar);
      return copy;
    }
    case Kind::PatVal: {
      auto copy = std::make_shared<Term>(*t);
      for (auto& f : copy->kids) f = rename_free(f, from, to, is_covar);
      return copy;
    }
    case Kind::MuTildeRec: {
      auto copy = std::make_shared<Term>(*t);
      for (size_t i = 0; i < copy->kids.size(); ++i)
        if (!pattern_binds(t->pats[i], from, is_covar))
          copy->kids[i] = rename_free(t->kids[i], from, to, is_covar);
      return copy;
    }
    case Kind::MuTildeQ: {
      if (cpat_binds(t->cpats[0], from, is_covar)) return t;
      auto copy = std::make_shared<Term>(*t);
      copy->kids[0] = rename_free(t->kids[0], from, to, is_covar);
      return copy;
    }
    case Kind::CoTree: {
      auto copy = std::make_shared<Term>(*t);
      for (auto& q : copy->cpats) q = rename_cpat_leaf(q, from, to, is_covar);
      for (auto& k : copy->kids) k = rename_free(k, from, to, is_covar);
      return copy;
    }
    default: {
      auto slots = binder_slots(t);
      for (auto& s : slots)
        if (t->names[s.name_index] == from && s.is_covar == is_covar) {
          // shadowed in that child; rename only the non-shadowed children
          auto copy = std::make_shared<Term>(*t);
          for (int ki = 0; ki < child_count(t); ++ki) {
            bool shadow = false;
            for (auto& s2 : slots)
              if (s2.kid_index == ki && t->names[s2.name_index] == from &&
                  s2.is_covar == is_covar)
                shadow = true;
            if (!shadow) {
              auto nk = rename_free(child_at(t, ki), from, to, is_covar);
              copy = std::const_pointer_cast<Term>(with_child(copy, ki, nk));
            }
          }
          return copy;
        }
      std::vector<TermPtr> children;
      bool changed = false;
      for (int i = 0; i < child_count(t); ++i) {
        auto nk = rename_free(child_at(t, i), from, to, is_covar);
        changed = changed || nk != child_at(t, i);
        children.push_back(nk);
      }
      return changed ? rebuild(t, std::move(children)) : t;
    }
  }
}

// ---------------------------------------------------------------- subst

namespace {

struct Subster {
  NameGen gen;

  static bool hits(const Subst& items, const NameSets& fns) {
    for (auto& it : items)
      if (fns.contains(it.name, it.is_covar)) return true;
    return false;
  }

  TermPtr apply(const TermPtr& t, Subst items) {
    // drop items that cannot act
    NameSets fns = free_names(t);
    Subst live;
    for (auto& it : items)
      if (fns.contains(it.name, it.is_covar)) live.push_back(it);
    if (live.empty()) return t;
    return go(t, live);
  }

  // binder helper: adjusts `items` for names bound at `t`, freshening bound
  // names that would capture payload free names; returns adjusted term.
  TermPtr go(const TermPtr& t, const Subst& items) {
    switch (t->kind) {
      case Kind::Var:
        for (auto& it : items)
          if (!it.is_covar && it.name == t->names[0]) {
            if (cat_of(it.payload) != cat_of(t))
              throw TermError("subst: payload category mismatch at variable " + it.name);
            return it.payload;
          }
        return t;
      case Kind::Covar:
        for (auto& it : items)
          if (it.is_covar && it.name == t->names[0]) {
            if (cat_of(it.payload) != cat_of(t))
              throw TermError("subst: payload category mismatch at covariable " + it.name);
            return it.payload;
          }
        return t;
      case Kind::ESub: {
        auto copy = std::make_shared<Term>(*t);
        for (auto& it : copy->sub) it.payload = apply(it.payload, items);
        Subst inner;
        for (auto& it : items) {
          bool shadowed = false;
          for (auto& dom : t->sub)
            if (dom.name == it.name && dom.is_covar == it.is_covar) shadowed = true;
          if (!shadowed) inner.push_back(it);
        }
        if (inner.empty()) return copy;
        // freshen domain names that clash with payload free names
        NameSets avoid;
        for (auto& it : inner) avoid.merge(free_names(it.payload));
        TermPtr subject = t->kids[0];
        for (auto& dom : copy->sub) {
          if (avoid.contains(dom.name, dom.is_covar)) {
            NameSets pool = avoid;
            pool.merge(all_names(subject));
            for (auto& it : inner) {
              pool.add(it.name, it.is_covar);
            }
            std::string fresh = gen.fresh(dom.name, pool, dom.is_covar);
            subject = rename_free(subject, dom.name, fresh, dom.is_covar);
            dom.name = fresh;
          }
        }
        copy->kids[0] = apply(subject, inner);
        return copy;
      }
      case Kind::PatVal: {
        auto copy = std::make_shared<Term>(*t);
        for (auto& f : copy->kids) {
          f = apply(f, items);
          if (f->kind != Kind::Var && f->kind != Kind::Reflect)
            throw TermError("subst: pattern-value filling must stay a variable or e^");
        }
        return copy;
      }
      case Kind::MuTildeRec: {
        auto copy = std::make_shared<Term>(*t);
        for (size_t i = 0; i < copy->kids.size(); ++i) {
          auto [pat, body] = freshen_pattern_field(t->pats[i], t->kids[i], items);
          copy->pats[i] = pat;
          copy->kids[i] = body;
        }
        return copy;
      }
      case Kind::MuTildeQ: {
        auto copy = std::make_shared<Term>(*t);
        auto [q, body] = freshen_cpat_field(t->cpats[0], t->kids[0], items);
        copy->cpats[0] = q;
        copy->kids[0] = body;
        return copy;
      }
      case Kind::CoTree: {
        for (auto& q : t->cpats)
          for (auto& l : cpat_leaves(q))
            for (auto& it : items)
              if (it.name == l.name && it.is_covar == l.is_covar)
                throw TermError("subst: cannot substitute a term for command-tree label " +
                                l.name);
        auto copy = std::make_shared<Term>(*t);
        for (auto& k : copy->kids) k = apply(k, items);
        return copy;
      }
      default: {
        auto slots = binder_slots(t);
        if (slots.empty()) {
          std::vector<TermPtr> children;
          for (int i = 0; i < child_count(t); ++i) children.push_back(apply(child_at(t, i), items));
          return rebuild(t, std::move(children));
        }
        // per-child item filtering + binder freshening
        auto copy = std::make_shared<Term>(*t);
        for (int ki = 0; ki < child_count(t); ++ki) {
          TermPtr body = child_at(t, ki);
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
              std::string fresh = gen.fresh(bn, pool, s.is_covar);
              body = rename_free(body, bn, fresh, s.is_covar);
              // rename every slot sharing this name in this child
              for (auto& s2 : slots)
                if (s2.kid_index == ki && copy->names[s2.name_index] == bn &&
                    s2.is_covar == s.is_covar)
                  copy->names[s2.name_index] = fresh;
            }
          }
          copy = std::const_pointer_cast<Term>(
              with_child(copy, ki, apply(body, inner)));
        }
        return copy;
      }
    }
  }

  std::pair<Pattern, TermPtr> freshen_pattern_field(Pattern pat, TermPtr body,
                                                    const Subst& items) {
    Subst inner;
    for (auto& it : items)
      if (!pattern_binds(pat, it.name, it.is_covar)) inner.push_back(it);
    if (inner.empty()) return {pat, body};
    NameSets avoid;
    for (auto& it : inner) avoid.merge(free_names(it.payload));
    for (auto& l : pattern_leaves(pat)) {
      if (avoid.contains(l.name, l.is_covar)) {
        NameSets pool = avoid;
        pool.merge(all_names(body));
        for (auto& it : inner) pool.add(it.name, it.is_covar);
        std::string fresh = gen.fresh(l.name, pool, l.is_covar);
        body = rename_free(body, l.name, fresh, l.is_covar);
        pat = rename_pattern_leaf(pat, l.name, fresh, l.is_covar);
      }
    }
    return {pat, apply(body, inner)};
  }

  std::pair<CPat, TermPtr> freshen_cpat_field(CPat q, TermPtr body, const Subst& items) {
    Subst inner;
    for (auto& it : items)
      if (!cpat_binds(q, it.name, it.is_covar)) inner.push_back(it);
    if (inner.empty()) return {q, body};
    NameSets avoid;
    for (auto& it : inner) avoid.merge(free_names(it.payload));
    for (auto& l : cpat_leaves(q)) {
      if (avoid.contains(l.name, l.is_covar)) {
        NameSets pool = avoid;
        pool.merge(all_names(body));
        for (auto& it : inner) pool.add(it.name, it.is_covar);
        std::string fresh = gen.fresh(l.name, pool, l.is_covar);
        body = rename_free(body, l.name, fresh, l.is_covar);
        q = rename_cpat_leaf(q, l.name, fresh, l.is_covar);
      }
    }
    return {q, apply(body, inner)};
  }

  static Pattern rename_pattern_leaf(const Pattern& p, const std::string& from,
                                     const std::string& to, bool is_covar) {
    Pattern out = p;
    switch (p.k) {
      case Pattern::K::Var:
        if (!is_covar && p.name == from) out.name = to;
        return out;
      case Pattern::K::CovarDag:
        if (is_covar && p.name == from) out.name = to;
        return out;
      default:
        for (auto& kid : out.kids) kid = rename_pattern_leaf(kid, from, to, is_covar);
        return out;
    }
  }
};

}  // namespace

TermPtr subst(const TermPtr& t, const Subst& items) {
  if (items.empty()) return t;
  Subster s;
  return s.apply(t, items);
}

TermPtr subst1(const TermPtr& t, const std::string& name, bool is_covar, const TermPtr& payload) {
  return subst(t, Subst{{name, is_covar, payload}});
}

// ---------------------------------------------------------------- alpha

namespace {

bool cpat_shape_like(const CPat& a, const CPat& b);
std::vector<int> choice_order(const std::vector<Pattern>& pats);

struct AlphaEnv {
  std::map<std::string, int> vars, covars;
  int next = 0;

  void bind(const std::string& n, bool covar) {
    (covar ? covars : vars)[n] = next++;
  }
  // -1 when free
  int lookup(const std::string& n, bool covar) const {
    auto& m = covar ? covars : vars;
    auto it = m.find(n);
    return it == m.end() ? -1 : it->second;
  }
};

bool alpha_rec(const TermPtr& a, const TermPtr& b, AlphaEnv ea, AlphaEnv eb);

bool alpha_name(const std::string& na, const std::string& nb, bool covar, const AlphaEnv& ea,
                const AlphaEnv& eb) {
  int ia = ea.lookup(na, covar), ib = eb.lookup(nb, covar);
  if (ia != ib) return false;
  if (ia == -1) return na == nb;
  return true;
}

bool alpha_cpat(const CPat& qa, const CPat& qb, const AlphaEnv& ea, const AlphaEnv& eb) {
  if (qa.k != qb.k || qa.kids.size() != qb.kids.size()) return false;
  if (qa.k == CPat::K::Var && !alpha_name(qa.name, qb.name, false, ea, eb)) return false;
  if (qa.k == CPat::K::CovarDag && !alpha_name(qa.name, qb.name, true, ea, eb)) return false;
  for (size_t i = 0; i < qa.kids.size(); ++i)
    if (!alpha_cpat(qa.kids[i], qb.kids[i], ea, eb)) return false;
  return true;
}

bool alpha_rec(const TermPtr& a, const TermPtr& b, AlphaEnv ea, AlphaEnv eb) {
  if (a->kind != b->kind || a->calc != b->calc) return false;
  switch (a->kind) {
    case Kind::Var:
      return alpha_name(a->names[0], b->names[0], false, ea, eb);
    case Kind::Covar:
      return alpha_name(a->names[0], b->names[0], true, ea, eb);
    case Kind::ESub: {
      if (a->sub.size() != b->sub.size()) return false;
      for (size_t i = 0; i < a->sub.size(); ++i) {
        if (a->sub[i].is_covar != b->sub[i].is_covar) return false;
        if (!alpha_rec(a->sub[i].payload, b->sub[i].payload, ea, eb)) return false;
      }
      AlphaEnv ia = ea, ib = eb;
      ia.next = ib.next = std::max(ea.next, eb.next);
      for (size_t i = 0; i < a->sub.size(); ++i) {
        ia.bind(a->sub[i].name, a->sub[i].is_covar);
        ib.bind(b->sub[i].name, b->sub[i].is_covar);
      }
      return alpha_rec(a->kids[0], b->kids[0], ia, ib);
    }
    case Kind::PatVal: {
      if (!pattern_shape_eq(a->pats[0], b->pats[0])) return false;
      for (size_t i = 0; i < a->kids.size(); ++i)
        if (!alpha_rec(a->kids[i], b->kids[i], ea, eb)) return false;
      return true;
    }
    case Kind::MuTildeRec: {
      if (a->pats.size() != b->pats.size()) return false;
      if (!cpat_shape_like(a->cpats[0], b->cpats[0])) return false;
      // match fields by their inl/inr choice sequence
      std::vector<int> order_a = choice_order(a->pats), order_b = choice_order(b->pats);
      for (size_t i = 0; i < order_a.size(); ++i) {
        const Pattern& pa = a->pats[order_a[i]];
        const Pattern& pb = b->pats[order_b[i]];
        if (!pattern_shape_eq(pa, pb)) return false;
        AlphaEnv ia = ea, ib = eb;
        ia.next = ib.next = std::max(ea.next, eb.next);
        auto la = pattern_leaves(pa), lb = pattern_leaves(pb);
        for (size_t j = 0; j < la.size(); ++j) {
          ia.bind(la[j].name, la[j].is_covar);
          ib.bind(lb[j].name, lb[j].is_covar);
        }
        if (!alpha_rec(a->kids[order_a[i]], b->kids[order_b[i]], ia, ib)) return false;
      }
      return true;
    }
    case Kind::MuTildeQ: {
      auto la = cpat_leaves(a->cpats[0]), lb = cpat_leaves(b->cpats[0]);
      if (la.size() != lb.size()) return false;
      AlphaEnv ia = ea, ib = eb;
      ia.next = ib.next = std::max(ea.next, eb.next);
      for (size_t j = 0; j < la.size(); ++j) {
        if (la[j].is_covar != lb[j].is_covar) return false;
        ia.bind(la[j].name, la[j].is_covar);
        ib.bind(lb[j].name, lb[j].is_covar);
      }
      if (!alpha_cpat(a->cpats[0], b->cpats[0], ia, ib)) return false;
      return alpha_rec(a->kids[0], b->kids[0], ia, ib);
    }
    case Kind::CoTree: {
      for (size_t i = 0; i < 2; ++i)
        if (!alpha_cpat(a->cpats[i], b->cpats[i], ea, eb)) return false;
      return alpha_rec(a->kids[0], b->kids[0], ea, eb) &&
             alpha_rec(a->kids[1], b->kids[1], ea, eb);
    }
    default: {
      if (a->names.size() != b->names.size() || child_count(a) != child_count(b)) return false;
      auto slots = binder_slots(a);
      if (slots.empty()) {
        for (auto i = 0; i < child_count(a); ++i)
          if (!alpha_rec(child_at(a, i), child_at(b, i), ea, eb)) return false;
        return true;
      }
      for (int ki = 0; ki < child_count(a); ++ki) {
        AlphaEnv ia = ea, ib = eb;
        ia.next = ib.next = std::max(ea.next, eb.next);
        for (auto& s : slots)
          if (s.kid_index == ki) {
            ia.bind(a->names[s.name_index], s.is_covar);
            ib.bind(b->names[s.name_index], s.is_covar);
          }
        if (!alpha_rec(child_at(a, ki), child_at(b, ki), ia, ib)) return false;
      }
      return true;
    }
  }
}

bool cpat_shape_like(const CPat& a, const CPat& b) {
  if (a.k != b.k || a.kids.size() != b.kids.size()) return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!cpat_shape_like(a.kids[i], b.kids[i])) return false;
  return true;
}

std::vector<int> choice_order(const std::vector<Pattern>& pats) {
  std::vector<int> idx(pats.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
    return pattern_choices(pats[i]) < pattern_choices(pats[j]);
  });
  return idx;
}

}  // namespace

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return alpha_rec(a, b, AlphaEnv{}, AlphaEnv{});
}

// ---------------------------------------------------------------- canonical

namespace {

struct Canon {
  int next = 0;

  std::string fresh() { return "b" + std::to_string(next++); }

  Pattern canon_pattern(const Pattern& p, std::map<std::string, std::string>& vmap,
                        std::map<std::string, std::string>& cmap) {
    Pattern out = p;
    switch (p.k) {
      case Pattern::K::Var:
        out.name = vmap[p.name] = fresh();
        return out;
      case Pattern::K::CovarDag:
        out.name = cmap[p.name] = fresh();
        return out;
      default:
        for (auto& kid : out.kids) kid = canon_pattern(kid, vmap, cmap);
        return out;
    }
  }

  CPat canon_cpat_binding(const CPat& q, std::map<std::string, std::string>& vmap,
                          std::map<std::string, std::string>& cmap) {
    CPat out = q;
    switch (q.k) {
      case CPat::K::Var:
        if (!vmap.count(q.name)) vmap[q.name] = fresh();
        out.name = vmap[q.name];
        return out;
      case CPat::K::CovarDag:
        if (!cmap.count(q.name)) cmap[q.name] = fresh();
        out.name = cmap[q.name];
        return out;
      default:
        for (auto& kid : out.kids) kid = canon_cpat_binding(kid, vmap, cmap);
        return out;
    }
  }

  CPat canon_cpat_label(const CPat& q, const std::map<std::string, std::string>& vmap,
                        const std::map<std::string, std::string>& cmap) {
    CPat out = q;
    switch (q.k) {
      case CPat::K::Var: {
        auto it = vmap.find(q.name);
        if (it != vmap.end()) out.name = it->second;
        return out;
      }
      case CPat::K::CovarDag: {
        auto it = cmap.find(q.name);
        if (it != cmap.end()) out.name = it->second;
        return out;
      }
      default:
        for (auto& kid : out.kids) kid = canon_cpat_label(kid, vmap, cmap);
        return out;
    }
  }

  TermPtr go(const TermPtr& t, std::map<std::string, std::string> vmap,
             std::map<std::string, std::string> cmap) {
    auto copy = std::make_shared<Term>(*t);
    for (auto& a : copy->anns) a = nullptr;
    switch (t->kind) {
      case Kind::Var: {
        auto it = vmap.find(t->names[0]);
        if (it != vmap.end()) copy->names[0] = it->second;
        return copy;
      }
      case Kind::Covar: {
        auto it = cmap.find(t->names[0]);
        if (it != cmap.end()) copy->names[0] = it->second;
        return copy;
      }
      case Kind::ESub: {
        for (auto& it : copy->sub) it.payload = go(it.payload, vmap, cmap);
        auto iv = vmap;
        auto ic = cmap;
        for (auto& it : copy->sub) {
          std::string nn = fresh();
          (it.is_covar ? ic : iv)[it.name] = nn;
          it.name = nn;
        }
        copy->kids[0] = go(t->kids[0], iv, ic);
        return copy;
      }
      case Kind::PatVal: {
        std::map<std::string, std::string> pv, pc;
        copy->pats[0] = canon_pattern(t->pats[0], pv, pc);
        for (auto& f : copy->kids) f = go(f, vmap, cmap);
        return copy;
      }
      case Kind::MuTildeRec: {
        std::map<std::string, std::string> qv, qc;
        copy->cpats[0] = canon_cpat_binding(t->cpats[0], qv, qc);
        auto order = choice_order(t->pats);
        std::vector<Pattern> pats;
        std::vector<TermPtr> kids;
        for (int i : order) {
          auto iv = vmap;
          auto ic = cmap;
          std::map<std::string, std::string> pv, pc;
          Pattern p = canon_pattern(t->pats[i], pv, pc);
          for (auto& [k, v] : pv) iv[k] = v;
          for (auto& [k, v] : pc) ic[k] = v;
          pats.push_back(std::move(p));
          kids.push_back(go(t->kids[i], iv, ic));
        }
        copy->pats = std::move(pats);
        copy->kids = std::move(kids);
        return copy;
      }
      case Kind::MuTildeQ: {
        auto iv = vmap;
        auto ic = cmap;
        std::map<std::string, std::string> qv, qc;
        copy->cpats[0] = canon_cpat_binding(t->cpats[0], qv, qc);
        for (auto& [k, v] : qv) iv[k] = v;
        for (auto& [k, v] : qc) ic[k] = v;
        copy->kids[0] = go(t->kids[0], iv, ic);
        return copy;
      }
      case Kind::CoTree: {
        for (auto& q : copy->cpats) q = canon_cpat_label(q, vmap, cmap);
        for (auto& k : copy->kids) k = go(k, vmap, cmap);
        return copy;
      }
      default: {
        auto slots = binder_slots(t);
        if (slots.empty()) {
          std::vector<TermPtr> children;
          for (int i = 0; i < child_count(t); ++i) children.push_back(go(child_at(t, i), vmap, cmap));
          auto out = rebuild(copy, std::move(children));
          return out;
        }
        // names renamed per slot; shared names across children keep one fresh name
        std::map<std::string, std::string> renamed_v, renamed_c;
        for (auto& s : slots) {
          auto& m = s.is_covar ? renamed_c : renamed_v;
          std::string old = t->names[s.name_index];
          if (!m.count(old)) m[old] = fresh();
          copy->names[s.name_index] = m[old];
        }
        for (int ki = 0; ki < child_count(t); ++ki) {
          auto iv = vmap;
          auto ic = cmap;
          for (auto& s : slots)
            if (s.kid_index == ki) {
              auto& m = s.is_covar ? ic : iv;
              m[t->names[s.name_index]] = copy->names[s.name_index];
            }
          copy = std::const_pointer_cast<Term>(with_child(copy, ki, go(child_at(t, ki), iv, ic)));
        }
        return copy;
      }
    }
  }
};

}  // namespace

TermPtr canonical(const TermPtr& t) {
  Canon c;
  return c.go(t, {}, {});
}

}  // namespace focal
