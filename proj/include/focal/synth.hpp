#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "focal/reduction.hpp"
#include "focal/term.hpp"
#include "focal/typing.hpp"

namespace focal {

// q is orthogonal to p (leaf names match positionally)
bool orthogonal(const CPat& q, const Pattern& p);

// the finite set { p : q _|_ p }, ordered by the in-order inl/inr choices
std::vector<Pattern> patterns_of(const CPat& q);

std::vector<TermPtr> tree_leaves(const TermPtr& C);

struct MatchResult {
  TermPtr command;
  int leaf_index;                   // in-order leaf reached in C
  std::vector<std::string> trace;   // rule names fired
};
// normal form of C[q1:=p1, ..., qn:=pn] under the four interaction rules
MatchResult match_counterpattern(const TermPtr& C,
                                 std::vector<std::pair<CPat, Pattern>> bindings);

// Gamma(p,P) of Figure 4, with its atomic part Xi(p,P) and Delta(p,P)
struct PatTyping {
  std::vector<std::pair<std::string, FormulaPtr>> xi;     // x : X
  std::vector<std::pair<std::string, FormulaPtr>> delta;  // a : Q  for a^ : ~Q
};
std::optional<PatTyping> pattern_typing(const Pattern& p, const FormulaPtr& P);

// intermediate counterpattern system: left context mixes x:X and q:P entries
struct IntermEntry {
  CPat q;
  FormulaPtr type;
};
struct IntermEnv {
  std::vector<IntermEntry> left;
  std::map<std::string, FormulaPtr> delta;
};
TypeResult typecheck_intermediate(const TermPtr& C, const IntermEnv& env);

struct BijectionReport {
  bool ok = false;
  std::string why;
  std::vector<std::pair<Pattern, int>> mapping;  // pattern -> leaf index
};
BijectionReport bijection_check(const TermPtr& C, const CPat& q, const FormulaPtr& P,
                                const IntermEnv& ambient);

// Figure 4 typing of the synthetic system
TypeResult typecheck_synth(const Judgement& j);

// Figure 4 reduction (hooks for the shared reduction dispatcher)
void synth_root_redexes(const TermPtr& t, std::vector<Redex>& out, const Path& here);
TermPtr synth_contract(const TermPtr& t, const std::string& rule);
std::optional<std::pair<TermPtr, TraceStep>> step_synth(const TermPtr& c);

// the ~> rewriting on sets of sequents (left formulas decomposed to atoms)
struct Sequent {
  std::vector<std::pair<std::string, FormulaPtr>> xi;
  std::map<std::string, FormulaPtr> delta;
};
std::vector<Sequent> sequent_normalize(
    const std::vector<std::pair<std::string, FormulaPtr>>& gamma,
    const std::map<std::string, FormulaPtr>& delta);

// strong focalisation: typed Lfoc command over (x1:P1...xm:Pm |- Delta) to
// synthetic commands over the ~>-normalised sequents
struct FocalizeLeaf {
  Sequent sequent;
  TermPtr command;  // Lsynth, typechecks under the sequent
};
struct FocalizeResult {
  std::vector<std::pair<std::string, CPat>> counterpatterns;
  std::vector<FocalizeLeaf> leaves;
  int recursive_calls = 0;
  int max_measure = 0;
};
FocalizeResult focalize_strong(const TermPtr& c, const TypingEnv& env);

}  // namespace focal
