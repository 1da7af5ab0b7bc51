#ifndef GAUSSCOND_TYPECHECK_HPP
#define GAUSSCOND_TYPECHECK_HPP

#include "gausscond/syntax.hpp"

#include <string>
#include <variant>

namespace gausscond {

struct TypeError {
  std::string message;
};

using TypeResult = std::variant<Ty, TypeError>;

/// Derives the unique type of t in ctx, or reports the failing rule.
TypeResult typecheck(const Ctx& ctx, const TermPtr& t);

/// Convenience: typecheck and throw std::invalid_argument on failure.
Ty typecheck_or_throw(const Ctx& ctx, const TermPtr& t);

/// As typecheck_or_throw, but permits shadowed context names (rightmost
/// binding wins). Used when walking under binders.
Ty infer_type(const Ctx& ctx, const TermPtr& t);

/// Context and result dimensions after flattening pair types.
struct FlatDims {
  int ctx_dim = 0;
  int result_dim = 0;
};
FlatDims flatten(const Ctx& ctx, const TermPtr& t);

}  // namespace gausscond

#endif
