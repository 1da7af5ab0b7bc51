#ifndef GAUSSCOND_PARSER_HPP
#define GAUSSCOND_PARSER_HPP

#include "gausscond/syntax.hpp"

#include <string>
#include <variant>
#include <vector>

namespace gausscond {

struct ParseError {
  int line = 0;
  int col = 0;
  std::string message;
  std::vector<std::string> expected;

  std::string show() const;
};

using ParseResult = std::variant<TermPtr, ParseError>;

/// Parses a source program. Statements separated by newlines or `;`
/// sequence; `x = e` is let sugar; `normal(mu, s2)` desugars to
/// mu + sqrt(s2) * normal(); literal matrices multiply tuples.
ParseResult parse(const std::string& text);

}  // namespace gausscond

#endif
