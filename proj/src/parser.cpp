#include "focal/parser.hpp"

#include <cctype>
#include <optional>

#include "focal/subst.hpp"

namespace focal {

namespace {

struct Token {
  std::string text;
  bool ident = false;
  int line = 1, col = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_cont(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (ident_start(c)) {
      size_t j = i;
      while (j < src.size() && ident_cont(src[j])) ++j;
      // numeric provenance suffixes: x.1, x.2.1
      while (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        j += 1;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      t.text = src.substr(i, j - i);
      t.ident = true;
      out.push_back(t);
      advance(j - i);
      continue;
    }
    static const char* two[] = {":=", "->", "/\\", "\\/"};
    bool matched = false;
    for (auto* s : two) {
      if (src.compare(i, 2, s) == 0) {
        t.text = s;
        out.push_back(t);
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static const std::string singles = "<>|()[]{},.;^:*+~\\&@";
    if (singles.find(c) != std::string::npos) {
      t.text = std::string(1, c);
      out.push_back(t);
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }
  Token end;
  end.text = "";
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;
  NameGen gen;

  const Token& peek(int k = 0) const {
    size_t j = pos + k;
    return j < toks.size() ? toks[j] : toks.back();
  }
  bool at(const std::string& s) const { return peek().text == s && !peek().ident; }
  bool at_ident() const { return peek().ident; }
  bool at_kw(const std::string& s) const { return peek().ident && peek().text == s; }
  bool eat(const std::string& s) {
    if (at(s)) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat_kw(const std::string& s) {
    if (at_kw(s)) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(const std::string& s) {
    if (!eat(s)) fail("expected '" + s + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + (peek().text.empty() ? " (at end of input)" : ", got '" + peek().text + "'"),
                     peek().line, peek().col);
  }
  std::string ident(const char* what) {
    if (!at_ident()) fail(std::string("expected ") + what);
    static const char* reserved[] = {"mu",  "val", "inl", "inr",  "fst",  "snd", "coval",
                                     "dn",  "ctrl", "case", "of",  "not",  "up"};
    for (auto* r : reserved)
      if (peek().text == r) fail("reserved word '" + peek().text + "' used as a name");
    return toks[pos++].text;
  }
  bool done() const { return peek().text.empty(); }

  // ------------------------------------------------------------ formulas

  FormulaPtr formula() { return f_arrow(); }

  FormulaPtr f_arrow() {
    FormulaPtr l = f_add();
    if (eat("->")) return mkf::fun(l, f_arrow());
    return l;
  }

  FormulaPtr f_add() {
    FormulaPtr l = f_mul();
    if (eat("+")) return mkf::plus(l, f_add());
    if (eat("\\/")) return mkf::lk_or(l, f_add());
    if (eat("&")) return mkf::with(l, f_add());
    return l;
  }

  FormulaPtr f_mul() {
    FormulaPtr l = f_unary();
    if (eat("*")) return mkf::tensor(l, f_mul());
    if (eat("/\\")) return mkf::lk_and(l, f_mul());
    if (eat("@")) return mkf::par(l, f_mul());
    return l;
  }

  FormulaPtr f_unary() {
    if (eat("~")) {
      FormulaPtr p = f_unary();
      return is_negative(p) ? mkf::notn(p) : mkf::notp(p);
    }
    if (eat_kw("not")) return mkf::lk_neg(f_unary());
    if (eat("(")) {
      FormulaPtr p = formula();
      expect(")");
      return p;
    }
    if (!at_ident()) fail("expected a formula");
    std::string name = toks[pos++].text;
    if (eat("^")) return mkf::coatom(name);
    return mkf::atom(name);
  }

  FormulaPtr opt_ann() {
    if (eat(":")) return formula();
    return nullptr;
  }

  // ------------------------------------------------------------ patterns

  Pattern pattern() {
    Pattern p;
    if (eat("(")) {
      p.k = Pattern::K::Pair;
      p.kids.push_back(pattern());
      expect(",");
      p.kids.push_back(pattern());
      expect(")");
      return p;
    }
    if (eat_kw("inl")) {
      expect("(");
      p.k = Pattern::K::Inl;
      p.kids.push_back(pattern());
      expect(")");
      return p;
    }
    if (eat_kw("inr")) {
      expect("(");
      p.k = Pattern::K::Inr;
      p.kids.push_back(pattern());
      expect(")");
      return p;
    }
    p.name = ident("pattern leaf");
    p.k = eat("^") ? Pattern::K::CovarDag : Pattern::K::Var;
    return p;
  }

  CPat cpat() {
    CPat q;
    if (eat("(")) {
      q.k = CPat::K::Pair;
      q.kids.push_back(cpat());
      expect(",");
      q.kids.push_back(cpat());
      expect(")");
      return q;
    }
    if (eat("[")) {
      q.k = CPat::K::CoPair;
      q.kids.push_back(cpat());
      expect(",");
      q.kids.push_back(cpat());
      expect("]");
      return q;
    }
    q.name = ident("counterpattern leaf");
    q.k = eat("^") ? CPat::K::CovarDag : CPat::K::Var;
    return q;
  }

  // ------------------------------------------------------------ terms

  TermPtr command(Calc c) {
    TermPtr t;
    if (c == Calc::Lsynth && at("[")) {
      t = cotree();
    } else if (c == Calc::NJ) {
      TermPtr f = value(Calc::NJ);
      TermPtr a = value(Calc::NJ);
      t = mk::app(Calc::NJ, f, a);
    } else {
      expect("<");
      TermPtr l = (c == Calc::LLP) ? value(c) : expr(c);
      expect("|");
      TermPtr r = (c == Calc::Lambda) ? mk::covar(Calc::Lambda, ident("covariable"))
                                      : context(c);
      expect(">");
      t = mk::cut(l, r);
    }
    return sigma_suffix(t, c);
  }

  TermPtr cotree() {
    expect("[");
    TermPtr c1 = command(Calc::Lsynth);
    expect("|");
    CPat q1 = cpat();
    expect(",");
    CPat q2 = cpat();
    expect("|");
    TermPtr c2 = command(Calc::Lsynth);
    expect("]");
    return mk::cotree(q1, q2, c1, c2);
  }

  TermPtr sigma_suffix(TermPtr t, Calc c) {
    while ((c == Calc::LKraw || c == Calc::Lfoc) && at("[")) {
      t = mk::esub(t, sigma(c));
    }
    return t;
  }

  // A bare-name payload reads as a variable item; covariable items with atomic
  // payloads can be written eta-expanded.
  Subst sigma(Calc c) {
    expect("[");
    Subst s;
    if (!at("]")) {
      do {
        SubstItem it;
        it.name = ident("substitution name");
        expect(":=");
        if (at("~")) {
          it.is_covar = true;
          it.payload = context(c);
        } else {
          size_t save = pos;
          try {
            it.is_covar = false;
            it.payload = (c == Calc::Lfoc) ? value(c) : expr(c);
          } catch (ParseError&) {
            pos = save;
            it.is_covar = true;
            it.payload = context(c);
          }
        }
        s.push_back(it);
      } while (eat(","));
    }
    expect("]");
    return s;
  }

  TermPtr expr(Calc c) {
    TermPtr t = expr_base(c);
    return sigma_suffix(t, c);
  }

  TermPtr expr_base(Calc c) {
    switch (c) {
      case Calc::Lfoc:
      case Calc::Lsynth:
      case Calc::LbarQ:
        if (eat_kw("val")) return mk::val_of(value(c));
        if (eat_kw("mu")) {
          std::string a = ident("covariable");
          FormulaPtr ann = opt_ann();
          expect(".");
          return mk::mu(a, command(c), ann);
        }
        if (eat("(")) {
          TermPtr t = expr(c);
          expect(")");
          return t;
        }
        fail("expected an expression");
      case Calc::LKraw: {
        // e^ needs backtracking: both contexts and expressions may start with a name
        size_t save = pos;
        try {
          TermPtr e = context_base(c);
          expect("^");
          return mk::reflect(e);
        } catch (ParseError&) {
          pos = save;
        }
        if (eat("(")) {
          size_t save2 = pos;
          try {
            TermPtr e = context(c);
            expect(")");
            expect("^");
            return mk::reflect(e);
          } catch (ParseError&) {
            pos = save2;
          }
          TermPtr v = expr(c);
          if (eat(",")) {
            TermPtr v2 = expr(c);
            expect(")");
            return mk::pairv(v, v2);
          }
          expect(")");
          return v;
        }
        if (eat_kw("inl")) {
          expect("(");
          TermPtr v = expr(c);
          expect(")");
          return mk::inl(c, v);
        }
        if (eat_kw("inr")) {
          expect("(");
          TermPtr v = expr(c);
          expect(")");
          return mk::inr(c, v);
        }
        if (eat_kw("mu")) {
          std::string a = ident("covariable");
          FormulaPtr ann = opt_ann();
          expect(".");
          return mk::mu(a, command(c), ann);
        }
        if (at_ident()) return mk::var(c, ident("variable"));
        fail("expected an expression");
      }
      case Calc::LKT: {
        if (eat_kw("mu")) return lkt_mu();
        if (eat("(")) {
          TermPtr t = expr(c);
          expect(")");
          return t;
        }
        if (at_ident()) return mk::var(c, ident("variable"));
        fail("expected an LKT expression");
      }
      case Calc::Lambda:
        return lam_term();
      case Calc::NJ:
        fail("NJ has commands and values only");
      default:
        fail("no expressions in this calculus");
    }
  }

  TermPtr lkt_mu() {
    // already ate "mu"
    if (eat("[")) {
      if (eat_kw("fst")) {
        expect("(");
        std::string a1 = ident("covariable");
        FormulaPtr f1 = opt_ann();
        expect(")");
        expect(".");
        TermPtr c1 = command(Calc::LKT);
        expect("|");
        if (!eat_kw("snd")) fail("expected snd branch");
        expect("(");
        std::string a2 = ident("covariable");
        FormulaPtr f2 = opt_ann();
        expect(")");
        expect(".");
        TermPtr c2 = command(Calc::LKT);
        expect("]");
        return mk::mu_case(a1, c1, a2, c2, f1, f2);
      }
      std::string a1 = ident("covariable");
      FormulaPtr f1 = opt_ann();
      expect(",");
      std::string a2 = ident("covariable");
      FormulaPtr f2 = opt_ann();
      expect("]");
      expect(".");
      return mk::mu_par(a1, a2, command(Calc::LKT), f1, f2);
    }
    if (eat("(")) {
      // sugar mu(x^,a).c and friends, mirror of the ~mu(..) abbreviation
      auto leg = [&]() -> std::pair<std::string, bool> {
        std::string n = ident("binder");
        bool dag = eat("^");
        return {n, dag};
      };
      auto [n1, dag1] = leg();
      expect(",");
      auto [n2, dag2] = leg();
      expect(")");
      expect(".");
      TermPtr body = command(Calc::LKT);
      NameSets avoid = all_names(body);
      avoid.covars.insert(n1);
      avoid.covars.insert(n2);
      std::string u1 = dag1 ? gen.fresh(n1, avoid, true) : n1;
      avoid.covars.insert(u1);
      std::string u2 = dag2 ? gen.fresh(n2, avoid, true) : n2;
      TermPtr inner = body;
      if (dag1) inner = mk::cut(mk::mu_not(n1, inner), mk::val_of(mk::covar(Calc::LKT, u1)));
      if (dag2) inner = mk::cut(mk::mu_not(n2, inner), mk::val_of(mk::covar(Calc::LKT, u2)));
      return mk::mu_par(u1, u2, inner);
    }
    std::string n = ident("name");
    if (eat("^")) {
      FormulaPtr ann = opt_ann();
      expect(".");
      return mk::mu_not(n, command(Calc::LKT), ann);
    }
    FormulaPtr ann = opt_ann();
    expect(".");
    return mk::mu(n, command(Calc::LKT), ann);
  }

  TermPtr value(Calc c) {
    switch (c) {
      case Calc::Lfoc:
      case Calc::LLP: {
        TermPtr t = value_base(c);
        return c == Calc::Lfoc ? sigma_suffix(t, c) : t;
      }
      case Calc::LKT:
        return covalue_base();
      case Calc::Lsynth:
        return synth_value();
      case Calc::NJ:
        return nj_value();
      case Calc::LbarQ: {
        if (eat("\\")) {
          std::string x = ident("variable");
          FormulaPtr ann = opt_ann();
          expect(".");
          return mk::lam(Calc::LbarQ, x, expr(Calc::LbarQ), ann);
        }
        if (eat("(")) {
          TermPtr v = value(c);
          expect(")");
          return v;
        }
        if (at_ident()) return mk::var(c, ident("variable"));
        fail("expected a value");
      }
      default:
        fail("no values in this calculus");
    }
  }

  TermPtr value_base(Calc c) {
    // e^ first (handles a^ and (~mu x.c)^)
    {
      size_t save = pos;
      try {
        TermPtr e = context_atom_for_reflect(c);
        expect("^");
        return mk::reflect(e);
      } catch (ParseError&) {
        pos = save;
      }
    }
    if (eat("(")) {
      TermPtr v = value(c);
      if (eat(",")) {
        TermPtr v2 = value(c);
        expect(")");
        return mk::pairv(v, v2);
      }
      expect(")");
      return v;
    }
    if (eat_kw("inl")) {
      expect("(");
      TermPtr v = value(c);
      expect(")");
      return mk::inl(c, v);
    }
    if (eat_kw("inr")) {
      expect("(");
      TermPtr v = value(c);
      expect(")");
      return mk::inr(c, v);
    }
    if (at_ident()) return mk::var(c, ident("variable"));
    fail("expected a value");
  }

  // context that may be reflected: bare covariable or parenthesised context
  TermPtr context_atom_for_reflect(Calc c) {
    if (c == Calc::LLP || c == Calc::Lfoc || c == Calc::LKraw || c == Calc::Lsynth) {
      if (at_ident() && peek(1).text == "^") {
        if (c == Calc::LLP) fail("LLP has no covariables");
        return mk::covar(c, ident("covariable"));
      }
      if (at("(")) {
        expect("(");
        TermPtr e = context(c);
        expect(")");
        return e;
      }
    }
    fail("expected a reflectable context");
  }

  TermPtr covalue_base() {
    // v^ (reflected expression)
    {
      size_t save = pos;
      try {
        TermPtr v;
        if (at_ident() && peek(1).text == "^") {
          v = mk::var(Calc::LKT, ident("variable"));
        } else if (at("(")) {
          expect("(");
          v = expr(Calc::LKT);
          expect(")");
        } else {
          fail("no reflected expression");
        }
        expect("^");
        return mk::reflect(v);
      } catch (ParseError&) {
        pos = save;
      }
    }
    if (eat("[")) {
      TermPtr e1 = value(Calc::LKT);
      expect(",");
      TermPtr e2 = value(Calc::LKT);
      expect("]");
      return mk::copair(e1, e2);
    }
    if (eat_kw("fst")) {
      expect("(");
      TermPtr e = value(Calc::LKT);
      expect(")");
      return mk::fst(e);
    }
    if (eat_kw("snd")) {
      expect("(");
      TermPtr e = value(Calc::LKT);
      expect(")");
      return mk::snd(e);
    }
    if (at_ident()) return mk::covar(Calc::LKT, ident("covariable"));
    fail("expected a covalue");
  }

  TermPtr synth_value() {
    // full pattern value p{...}
    {
      size_t save = pos;
      try {
        Pattern p = pattern();
        expect("{");
        std::map<std::string, TermPtr> by_name;
        if (!at("}")) {
          do {
            std::string leaf = ident("pattern leaf");
            eat("^");
            expect(":=");
            TermPtr fill;
            size_t s2 = pos;
            try {
              TermPtr e = context_atom_for_reflect(Calc::Lsynth);
              expect("^");
              fill = mk::reflect(e);
            } catch (ParseError&) {
              pos = s2;
              fill = mk::var(Calc::Lsynth, ident("filling variable"));
            }
            by_name[leaf] = fill;
          } while (eat(","));
        }
        expect("}");
        auto leaves = pattern_leaves(p);
        std::vector<TermPtr> fills;
        for (auto& l : leaves) {
          auto it = by_name.find(l.name);
          if (it == by_name.end()) fail("missing filling for leaf " + l.name);
          fills.push_back(it->second);
        }
        if (by_name.size() != leaves.size()) fail("extra fillings in pattern value");
        return mk::patval(p, fills);
      } catch (ParseError&) {
        pos = save;
      }
    }
    // sugar: e^ is a single a^-leaf pattern value, a bare name a var-leaf one
    {
      size_t save = pos;
      try {
        TermPtr e = context_atom_for_reflect(Calc::Lsynth);
        expect("^");
        Pattern p;
        p.k = Pattern::K::CovarDag;
        p.name = e->kind == Kind::Covar ? e->names[0] : "a";
        return mk::patval(p, {mk::reflect(e)});
      } catch (ParseError&) {
        pos = save;
      }
    }
    if (at_ident()) {
      std::string y = ident("variable");
      Pattern p;
      p.k = Pattern::K::Var;
      p.name = y;
      return mk::patval(p, {mk::var(Calc::Lsynth, y)});
    }
    fail("expected a synthetic value");
  }

  TermPtr nj_value() {
    if (eat("\\")) {
      if (eat("(")) {
        std::string x1 = ident("variable");
        FormulaPtr a1 = opt_ann();
        expect(",");
        std::string x2 = ident("variable");
        FormulaPtr a2 = opt_ann();
        expect(")");
        expect(".");
        return mk::lam_pair(x1, x2, command(Calc::NJ), a1, a2);
      }
      std::string x = ident("variable");
      FormulaPtr ann = opt_ann();
      expect(".");
      if (eat_kw("case")) {
        std::string z = ident("scrutinee");
        if (z != x) fail("case scrutinee must be the bound variable");
        if (!eat_kw("of")) fail("expected 'of'");
        if (!eat_kw("inl")) fail("expected inl branch");
        expect("(");
        std::string x1 = ident("variable");
        expect(")");
        expect("->");
        TermPtr c1 = command(Calc::NJ);
        expect("|");
        if (!eat_kw("inr")) fail("expected inr branch");
        expect("(");
        std::string x2 = ident("variable");
        expect(")");
        expect("->");
        TermPtr c2 = command(Calc::NJ);
        return mk::lam_case(x, x1, c1, x2, c2, ann);
      }
      return mk::lam(Calc::NJ, x, command(Calc::NJ), ann);
    }
    if (eat("(")) {
      TermPtr v = nj_value();
      if (eat(",")) {
        TermPtr v2 = nj_value();
        expect(")");
        return mk::pairv(v, v2);
      }
      expect(")");
      return v;
    }
    if (eat_kw("inl")) {
      expect("(");
      TermPtr v = nj_value();
      expect(")");
      return mk::inl(Calc::NJ, v);
    }
    if (eat_kw("inr")) {
      expect("(");
      TermPtr v = nj_value();
      expect(")");
      return mk::inr(Calc::NJ, v);
    }
    if (at_ident()) return mk::var(Calc::NJ, ident("variable"));
    fail("expected an NJ value");
  }

  TermPtr context(Calc c) {
    TermPtr t = context_base(c);
    return sigma_suffix(t, c);
  }

  TermPtr context_base(Calc c) {
    switch (c) {
      case Calc::LKraw:
      case Calc::Lfoc: {
        if (eat_kw("coval")) {
          if (c != Calc::Lfoc) fail("coval is Lfoc sugar");
          TermPtr v = value(c);
          NameSets avoid = all_names(v);
          std::string a = gen.fresh("a", avoid, true);
          return mk::mu_tilde_not(a, mk::cut(mk::val_of(v), mk::covar(c, a)));
        }
        if (eat("~")) {
          if (!eat_kw("mu")) fail("expected mu after ~");
          return mu_tilde_forms(c);
        }
        if (eat("(")) {
          TermPtr e = context(c);
          expect(")");
          return e;
        }
        if (at_ident()) return mk::covar(c, ident("covariable"));
        fail("expected a context");
      }
      case Calc::LLP: {
        if (eat_kw("dn")) {
          expect("(");
          TermPtr v = value(c);
          expect(")");
          return mk::derel(v);
        }
        if (eat("~")) {
          if (!eat_kw("mu")) fail("expected mu after ~");
          return mu_tilde_forms(c);
        }
        fail("expected an LLP context");
      }
      case Calc::LKT: {
        if (eat_kw("val")) return mk::val_of(value(Calc::LKT));
        if (eat("~")) {
          if (!eat_kw("mu")) fail("expected mu after ~");
          std::string x = ident("variable");
          FormulaPtr ann = opt_ann();
          expect(".");
          return mk::mu_tilde(x, command(Calc::LKT), ann);
        }
        fail("expected an LKT context");
      }
      case Calc::Lsynth: {
        if (eat("~")) {
          if (!eat_kw("mu")) fail("expected mu after ~");
          CPat q = cpat();
          FormulaPtr ann = opt_ann();
          expect(".");
          if (eat("{")) {
            std::vector<Pattern> ps;
            std::vector<TermPtr> cs;
            if (!at("}")) {
              do {
                ps.push_back(pattern());
                expect("->");
                cs.push_back(command(Calc::Lsynth));
              } while (eat(";"));
            }
            expect("}");
            return mk::mu_tilde_rec(q, ps, cs, ann);
          }
          return mk::mu_tilde_q(q, command(Calc::Lsynth), ann);
        }
        if (eat("(")) {
          TermPtr e = context(c);
          expect(")");
          return e;
        }
        if (at_ident()) return mk::covar(c, ident("covariable"));
        fail("expected a synthetic context");
      }
      case Calc::LbarQ: {
        // V.e stacks need backtracking against bare covariables
        {
          size_t save = pos;
          try {
            TermPtr v = value(Calc::LbarQ);
            expect(".");
            TermPtr e = context(Calc::LbarQ);
            return mk::stack_cons(v, e);
          } catch (ParseError&) {
            pos = save;
          }
        }
        if (eat("~")) {
          if (!eat_kw("mu")) fail("expected mu after ~");
          std::string x = ident("variable");
          FormulaPtr ann = opt_ann();
          expect(".");
          return mk::mu_tilde(x, command(Calc::LbarQ), ann);
        }
        if (eat("(")) {
          TermPtr e = context(c);
          expect(")");
          return e;
        }
        if (at_ident()) return mk::covar(c, ident("covariable"));
        fail("expected a context");
      }
      default:
        fail("no contexts in this calculus");
    }
  }

  // after "~mu"
  TermPtr mu_tilde_forms(Calc c) {
    if (eat("(")) {
      auto leg = [&]() {
        std::string n = ident("binder");
        bool dag = eat("^");
        FormulaPtr ann = opt_ann();
        return std::tuple<std::string, bool, FormulaPtr>(n, dag, ann);
      };
      auto [n1, dag1, a1] = leg();
      expect(",");
      auto [n2, dag2, a2] = leg();
      expect(")");
      expect(".");
      TermPtr body = command(c);
      if (!dag1 && !dag2) return mk::mu_tilde_pair(n1, n2, body, a1, a2);
      if (c != Calc::Lfoc) fail("~mu(a^,..) sugar is Lfoc only");
      // ~mu(r1,r2).c  ==>  ~mu(u1,u2).< val u2 | ~mu a2^.< val u1 | ~mu a1^.c > >
      NameSets avoid = all_names(body);
      avoid.vars.insert(n1);
      avoid.vars.insert(n2);
      std::string u1 = dag1 ? gen.fresh("x", avoid, false) : n1;
      avoid.vars.insert(u1);
      std::string u2 = dag2 ? gen.fresh("y", avoid, false) : n2;
      TermPtr inner = body;
      if (dag1)
        inner = mk::cut(mk::val_of(mk::var(c, u1)), mk::mu_tilde_not(n1, inner, a1));
      if (dag2)
        inner = mk::cut(mk::val_of(mk::var(c, u2)), mk::mu_tilde_not(n2, inner, a2));
      FormulaPtr f1 = dag1 ? (a1 ? mkf::notp(a1) : nullptr) : a1;
      FormulaPtr f2 = dag2 ? (a2 ? mkf::notp(a2) : nullptr) : a2;
      return mk::mu_tilde_pair(u1, u2, inner, f1, f2);
    }
    if (eat("[")) {
      if (!eat_kw("inl")) fail("expected inl branch");
      expect("(");
      std::string x1 = ident("variable");
      FormulaPtr a1 = opt_ann();
      expect(")");
      expect(".");
      TermPtr c1 = command(c);
      expect("|");
      if (!eat_kw("inr")) fail("expected inr branch");
      expect("(");
      std::string x2 = ident("variable");
      FormulaPtr a2 = opt_ann();
      expect(")");
      expect(".");
      TermPtr c2 = command(c);
      expect("]");
      return mk::mu_tilde_case(x1, c1, x2, c2, a1, a2);
    }
    std::string n = ident("binder");
    if (eat("^")) {
      if (c == Calc::LLP) fail("LLP has no ~mu a^ contexts");
      FormulaPtr ann = opt_ann();
      expect(".");
      return mk::mu_tilde_not(n, command(c), ann);
    }
    FormulaPtr ann = opt_ann();
    expect(".");
    return mk::mu_tilde(n, command(c), ann);
  }

  // ------------------------------------------------------------ lambda

  TermPtr lam_term() {
    TermPtr t = lam_atom();
    while (true) {
      size_t save = pos;
      try {
        TermPtr a = lam_atom();
        t = mk::app(Calc::Lambda, t, a);
      } catch (ParseError&) {
        pos = save;
        break;
      }
    }
    return t;
  }

  TermPtr lam_atom() {
    if (eat("\\")) {
      std::string x = ident("variable");
      expect(".");
      return mk::lam(Calc::Lambda, x, lam_term());
    }
    if (eat_kw("ctrl")) {
      expect("(");
      TermPtr m = lam_term();
      expect(")");
      return mk::ctrl(m);
    }
    if (eat_kw("mu")) {
      std::string a = ident("covariable");
      expect(".");
      return mk::mu(a, command(Calc::Lambda));
    }
    if (eat("(")) {
      TermPtr m = lam_term();
      expect(")");
      return m;
    }
    if (at_ident()) return mk::var(Calc::Lambda, ident("variable"));
    fail("expected a lambda term");
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  Parser p;
  p.toks = lex(text);
  FormulaPtr f = p.formula();
  if (!p.done()) p.fail("trailing input after formula");
  return f;
}

TermPtr parse_term(const std::string& text, Calc calc, Cat cat) {
  Parser p;
  p.toks = lex(text);
  TermPtr t;
  switch (cat) {
    case Cat::Command:
      t = p.command(calc);
      break;
    case Cat::Expr:
      t = p.expr(calc);
      break;
    case Cat::Value:
      t = p.value(calc);
      break;
    case Cat::Context:
      t = p.context(calc);
      break;
  }
  if (!p.done()) p.fail("trailing input after term");
  return t;
}

Pattern parse_pattern(const std::string& text) {
  Parser p;
  p.toks = lex(text);
  Pattern pat = p.pattern();
  if (!p.done()) p.fail("trailing input after pattern");
  return pat;
}

CPat parse_cpat(const std::string& text) {
  Parser p;
  p.toks = lex(text);
  CPat q = p.cpat();
  if (!p.done()) p.fail("trailing input after counterpattern");
  return q;
}

std::vector<std::pair<std::string, FormulaPtr>> parse_typed_names(const std::string& text) {
  std::vector<std::pair<std::string, FormulaPtr>> out;
  Parser p;
  p.toks = lex(text);
  if (p.done()) return out;
  do {
    std::string n = p.ident("name");
    p.expect(":");
    out.emplace_back(n, p.formula());
  } while (p.eat(","));
  if (!p.done()) p.fail("trailing input after environment");
  return out;
}

}  // namespace focal
