// Surface syntax: signatures, rules and standalone terms.
//
//   symb plus : nat -> nat -> nat
//   rule plus x 0 --> x
//   rule eq A 0 0 --> top  env [A : *]  rho [A -> nat]
//   mon C = {1}
//   acc f = {}
//   prec times > plus 0
//   status plus = lex (mul x1) (mul x2)
//
// Terms: '*', '[]', products '(x : T) U', abstractions '[x : T] u',
// arrows 'T -> U', juxtaposed application, '#' line comments. Identifiers
// starting with an upper-case letter are predicate-sorted variables.
#pragma once

#include <string>

#include "cac/conditions.hpp"
#include "cac/term.hpp"

namespace cac {

struct ParseError {
  std::string message;
  int line = 0;
  int col = 0;

  std::string pretty(const std::string& filename) const {
    return filename + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
           message;
  }
};

System parse_system(const std::string& text);
System parse_system_file(const std::string& path);  // throws ParseError

// A standalone term against an existing signature (free variables allowed,
// sorted by the case convention).
Term parse_term_string(const Signature& sig, const std::string& text);

}  // namespace cac
