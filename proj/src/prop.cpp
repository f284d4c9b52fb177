#include "focal/term.hpp"
