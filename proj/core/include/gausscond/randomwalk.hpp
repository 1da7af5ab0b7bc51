#ifndef GAUSSCOND_RANDOMWALK_HPP
#define GAUSSCOND_RANDOMWALK_HPP

#include "gausscond/interp.hpp"

#include <map>
#include <vector>

namespace gausscond {

struct WalkRow {
  int index = 0;
  double mean = 0.0;
  double variance = 0.0;
};

/// Builds the Gaussian random walk y[i] = y[i-1] + normal(0,1) for
/// i in [1, n), starting at y[0] = 0, with exact observations
/// y[j] =:= obs[j], and returns the posterior mean and variance per
/// step. Returns an empty vector when the observations are infeasible.
std::vector<WalkRow> random_walk_posterior(int n, const std::map<int, double>& obs);

/// The walk model as a source-language term returning (y1, ..., y_{n-1}).
TermPtr random_walk_term(int n, const std::map<int, double>& obs);

}  // namespace gausscond

#endif
