#ifndef GAUSSCOND_GEN_PROGRAMS_HPP
#define GAUSSCOND_GEN_PROGRAMS_HPP

#include "gausscond/syntax.hpp"
#include "test_util.hpp"

#include <string>
#include <vector>

namespace gctest {

using namespace gausscond;

struct GenBudget {
  int normals = 6;
  int conditions = 3;
  int depth = 5;
};

// scalar-typed expression over R-typed variables in scope
inline TermPtr gen_real(Rng& rng, const std::vector<std::string>& scope, GenBudget& b);

inline TermPtr gen_leaf_real(Rng& rng, const std::vector<std::string>& scope,
                             GenBudget& b) {
  if (!scope.empty() && rng.chance(0.5)) {
    return mk_var(scope[rng.pick(scope.size())]);
  }
  if (b.normals > 0 && rng.chance(0.5)) {
    --b.normals;
    return mk_normal();
  }
  return mk_const(std::round(rng.uniform(-4.0, 4.0) * 4.0) / 4.0);
}

inline TermPtr gen_real(Rng& rng, const std::vector<std::string>& scope, GenBudget& b) {
  if (b.depth <= 0) return gen_leaf_real(rng, scope, b);
  --b.depth;
  TermPtr out;
  switch (rng.pick(6)) {
    case 0:
    case 1:
      out = gen_leaf_real(rng, scope, b);
      break;
    case 2:
      out = mk_add(gen_real(rng, scope, b), gen_real(rng, scope, b));
      break;
    case 3:
      out = mk_scale(std::round(rng.uniform(-2.0, 2.0) * 4.0) / 4.0,
                     gen_real(rng, scope, b));
      break;
    case 4: {
      std::string name = "v" + std::to_string(scope.size() + rng.pick(50));
      std::vector<std::string> inner = scope;
      TermPtr bound = gen_real(rng, scope, b);
      inner.push_back(name);
      out = mk_let(name, bound, gen_real(rng, inner, b));
      break;
    }
    default:
      if (b.conditions > 0) {
        --b.conditions;
        TermPtr cond = mk_cond_eq(gen_real(rng, scope, b), gen_real(rng, scope, b));
        out = mk_seq(cond, gen_real(rng, scope, b));
      } else {
        out = gen_leaf_real(rng, scope, b);
      }
      break;
  }
  ++b.depth;
  return out;
}

// expression whose flattened result has the requested width
inline TermPtr gen_tuple(Rng& rng, const std::vector<std::string>& scope, GenBudget& b,
                         int width) {
  if (width == 0) {
    if (b.conditions > 0 && rng.chance(0.3)) {
      --b.conditions;
      return mk_cond_eq(gen_real(rng, scope, b), gen_real(rng, scope, b));
    }
    return mk_unit();
  }
  if (width == 1) return gen_real(rng, scope, b);
  int left = 1 + static_cast<int>(rng.pick(width - 1));
  return mk_pair(gen_tuple(rng, scope, b, left),
                 gen_tuple(rng, scope, b, width - left));
}

// closed program of the given output width with conditions and normals
inline TermPtr gen_closed_program(Rng& rng, int width, GenBudget budget) {
  return gen_tuple(rng, {}, budget, width);
}

// closing context: binds each free variable of an open term to a
// generated scalar prefix (later prefixes may use earlier variables),
// returning (x1, ..., xm, hole)
inline TermPtr close_term(Rng& rng, const std::vector<std::string>& names,
                          const TermPtr& hole, GenBudget budget, int flavor) {
  TermPtr tuple = hole;
  for (size_t i = names.size(); i-- > 0;) tuple = mk_pair(mk_var(names[i]), tuple);
  TermPtr out = tuple;
  std::vector<std::string> scope(names.begin(), names.end());
  for (size_t i = names.size(); i-- > 0;) {
    scope.pop_back();
    TermPtr bound;
    switch (flavor) {
      case 0: bound = mk_normal(); break;  // full-rank prior
      case 1: bound = mk_const(std::round(rng.uniform(-2.0, 2.0) * 2.0) / 2.0); break;
      default: bound = gen_real(rng, scope, budget); break;
    }
    out = mk_let(names[i], bound, out);
  }
  return out;
}

}  // namespace gctest

#endif
