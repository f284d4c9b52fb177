#pragma once

#include <string>

#include "focal/term.hpp"

namespace focal {

struct PrintOpts {
  bool annotations = true;  // print binder type annotations when present
};

std::string show(const TermPtr& t, const PrintOpts& opts = {});

// Canonical alpha-invariant key: canonical form printed without annotations.
std::string alpha_key(const TermPtr& t);

std::string show_calc(Calc c);
std::string show_cat(Cat c);

}  // namespace focal
