#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "focal/term.hpp"

namespace focal {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
        line(line),
        col(col) {}
  int line, col;
};

FormulaPtr parse_formula(const std::string& text);
TermPtr parse_term(const std::string& text, Calc calc, Cat cat);
Pattern parse_pattern(const std::string& text);
CPat parse_cpat(const std::string& text);

// "x:P, y:Q" -> ordered name/formula list
std::vector<std::pair<std::string, FormulaPtr>> parse_typed_names(const std::string& text);

}  // namespace focal
