#ifndef GAUSSCOND_INTERP_HPP
#define GAUSSCOND_INTERP_HPP

#include "gausscond/gauss.hpp"
#include "gausscond/syntax.hpp"

#include <functional>
#include <optional>

namespace gausscond {

/// A running configuration: a term whose free variables are exactly the
/// latent names z1..zr, together with the distribution over them.
struct Config {
  TermPtr term;
  GaussState state;
};

/// True for the value grammar: variables, tuples, affine combinations,
/// constants, unit.
bool is_value(const TermPtr& t);

/// Performs exactly one reduction step on a non-value configuration.
/// Returns nullopt when a condition is infeasible (failure). Unit-valued
/// let bindings are contracted administratively and not counted as steps.
std::optional<Config> step(const Config& c, double tol = kSupportTol);

struct RunResult {
  bool bottom = false;
  TermPtr value;
  GaussState state;
  int steps = 0;
};

struct RunOptions {
  double tol = kSupportTol;
  std::function<void(const Config&, int steps)> on_step;
};

/// Iterates step from (t, empty state) to a value configuration or
/// failure. The step count is bounded by the number of normal, let and
/// condition symbols in t.
RunResult run(const TermPtr& t, const RunOptions& opts = {});

/// Pushforward of the latent distribution through a value, read as an
/// affine map.
GaussState observable(const TermPtr& value, const GaussState& psi);

/// Affine reading of a value over r latents: rows of coefficients plus
/// a constant column.
std::pair<Matrix, Vector> value_affine(const TermPtr& value, Eigen::Index r);

/// Context z1..zr, all of type R.
Ctx latent_ctx(Eigen::Index r);

}  // namespace gausscond

#endif
