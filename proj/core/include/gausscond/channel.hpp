#ifndef GAUSSCOND_CHANNEL_HPP
#define GAUSSCOND_CHANNEL_HPP

#include "gausscond/gauss.hpp"

#include <optional>
#include <vector>

namespace gausscond {

/// An open inference program X ~> Y: a map f : X -> Y (x) K with the
/// trailing K wires bound to a deterministic observation o. Composition
/// aggregates observations; evaluation of a closed channel conditions.
class Channel {
 public:
  /// f maps dom to cod + k wires (k trailing), obs has dimension k.
  Channel(Eigen::Index cod, GaussMap f, Vector obs);

  Eigen::Index dom() const { return f_.dom(); }
  Eigen::Index cod() const { return cod_; }
  Eigen::Index k_dim() const { return obs_.size(); }
  const GaussMap& map() const { return f_; }
  const Vector& observation() const { return obs_; }

 private:
  Eigen::Index cod_;
  GaussMap f_;
  Vector obs_;
};

/// Conditioning-free embedding of a map.
Channel lift(const GaussMap& g);
Channel lift(const GaussState& psi);

/// The effect (:= o) : dim(o) ~> 0.
Channel observe(const Vector& o);

Channel compose(const Channel& g, const Channel& f);
Channel tensor(const Channel& f, const Channel& g);
Channel identity_channel(Eigen::Index n);

/// Evaluation of a closed channel: posterior state, or nullopt for the
/// failure state (the observation misses the support of the model).
using StateResult = std::optional<GaussState>;
StateResult eval_state(const Channel& c, double tol = kSupportTol);

/// Canonical form of a channel. Either bottom, or:
///   conditions  a x =:= eta   (a in RREF, no zero rows)
///   output      d0 x + eps    (d0 vanishing on pivot columns of a)
/// where (eta, eps) is the jointly Gaussian residual packaged in
/// `joint` (condition residual first, output noise second).
struct CanonicalChannel {
  bool bottom = false;
  Matrix a;
  std::vector<Eigen::Index> pivot_cols;
  Matrix d0;
  GaussState joint;
};

CanonicalChannel canonicalize(const Channel& c, double tol = kSupportTol);

bool approx_equal(const CanonicalChannel& x, const CanonicalChannel& y,
                  double tol = kEqualityTol);

/// Decides observational equivalence via canonical forms.
bool equiv(const Channel& c1, const Channel& c2, double tol = kEqualityTol);

/// Semi-decision cross-check: precompose copy o phi for each prior phi
/// and compare the evaluated joint states.
bool probe_equiv(const Channel& c1, const Channel& c2,
                 const std::vector<GaussState>& priors,
                 double tol = kEqualityTol);

/// Default probe family over a given domain: the standard normal, random
/// full-rank and rank-deficient states, and point masses.
std::vector<GaussState> probe_priors(Eigen::Index dim, unsigned seed = 0);

}  // namespace gausscond

#endif
