#pragma once

#include <set>
#include <string>

#include "focal/term.hpp"

namespace focal {

struct NameSets {
  std::set<std::string> vars;
  std::set<std::string> covars;
  bool contains(const std::string& n, bool covar) const {
    return covar ? covars.count(n) > 0 : vars.count(n) > 0;
  }
  void add(const std::string& n, bool covar) {
    (covar ? covars : vars).insert(n);
  }
  void merge(const NameSets& o) {
    vars.insert(o.vars.begin(), o.vars.end());
    covars.insert(o.covars.begin(), o.covars.end());
  }
};

NameSets free_names(const TermPtr& t);
NameSets all_names(const TermPtr& t);  // free + bound + labels, for freshness pools

// Fresh names append a primed numeric suffix from a counter scoped to the
// top-level operation, so traces are deterministic and replayable.
class NameGen {
 public:
  std::string fresh(const std::string& base, const NameSets& avoid, bool covar);
  std::string fresh(const std::string& base, const std::set<std::string>& avoid);

 private:
  int counter_ = 0;
};

// Capture-avoiding simultaneous substitution. Items whose name does not occur
// are dropped silently. Payload categories must match the occurrence sites.
TermPtr subst(const TermPtr& t, const Subst& items);
TermPtr subst1(const TermPtr& t, const std::string& name, bool is_covar, const TermPtr& payload);

// Rename one free name (no capture introduced: `to` must be fresh for t).
TermPtr rename_free(const TermPtr& t, const std::string& from, const std::string& to,
                    bool is_covar);

bool alpha_eq(const TermPtr& a, const TermPtr& b);

// Bound names (and pattern leaf labels) renamed canonically, annotations
// dropped; two terms are alpha-equal iff their canonical forms print equal.
TermPtr canonical(const TermPtr& t);

}  // namespace focal
