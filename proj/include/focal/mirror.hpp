#pragma once

#include "focal/term.hpp"

namespace focal {

// The involutive mirror between Lfoc and LKT: swaps mu/~mu, variables and
// covariables, the two sides of a cut, and renames inl/inr to fst/snd.
// Names are kept verbatim (their var/covar kind is positional), which makes
// the map an involution on the nose. Binder annotations are dualised.
TermPtr mirror(const TermPtr& t);

}  // namespace focal
