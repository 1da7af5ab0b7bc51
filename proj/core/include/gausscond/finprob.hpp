#ifndef GAUSSCOND_FINPROB_HPP
#define GAUSSCOND_FINPROB_HPP

#include "gausscond/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gausscond {

/// A named finite outcome space with an explicit outcome order.
struct FinSpace {
  std::string name;
  std::vector<std::string> outcomes;
};
using FinSpacePtr = std::shared_ptr<const FinSpace>;

FinSpacePtr bool_space();
FinSpacePtr make_space(std::string name, std::vector<std::string> outcomes);

/// An object of the finite category: an ordered product of base spaces.
/// Outcomes are tuples, enumerated with the last factor varying fastest.
class FinObj {
 public:
  FinObj() = default;
  explicit FinObj(std::vector<FinSpacePtr> factors);

  long size() const { return size_; }
  const std::vector<FinSpacePtr>& factors() const { return factors_; }
  std::string label(long index) const;
  bool operator==(const FinObj& other) const;

  static FinObj unit() { return FinObj(); }
  static FinObj base(FinSpacePtr space) { return FinObj({std::move(space)}); }
  friend FinObj operator*(const FinObj& a, const FinObj& b);

 private:
  std::vector<FinSpacePtr> factors_;
  long size_ = 1;
};

/// An exact-rational subprobability kernel: entries >= 0, every column
/// sums to at most 1. Entry (y, x) is the mass of outcome y given x.
class SubKernel {
 public:
  SubKernel(FinObj dom, FinObj cod, std::vector<Rat> entries);

  static SubKernel zero(FinObj dom, FinObj cod);
  static SubKernel identity(const FinObj& x);

  const FinObj& dom() const { return dom_; }
  const FinObj& cod() const { return cod_; }
  const Rat& at(long y, long x) const { return entries_[y * dom_.size() + x]; }
  Rat& at(long y, long x) { return entries_[y * dom_.size() + x]; }

  Rat column_sum(long x) const;
  bool is_stochastic() const;  // every column sums to exactly 1

  bool operator==(const SubKernel& other) const;

 private:
  FinObj dom_, cod_;
  std::vector<Rat> entries_;
};

/// A subdistribution is a kernel out of the unit object.
using SubDist = SubKernel;

SubDist dist(FinObj space, std::vector<Rat> masses);
SubDist point_dist(const FinObj& space, long outcome);
SubDist uniform_dist(const FinObj& space);

SubKernel compose(const SubKernel& g, const SubKernel& f);  // Kolmogorov-Chapman
SubKernel tensor(const SubKernel& f, const SubKernel& g);
SubKernel copy_kernel(const FinObj& x);
SubKernel del_kernel(const FinObj& x);
SubKernel swap_kernel(const FinObj& x, const FinObj& y);
SubKernel proj1_kernel(const FinObj& x, const FinObj& y);
SubKernel proj2_kernel(const FinObj& x, const FinObj& y);
/// Keeps mass exactly when both components agree: X * X -> unit.
SubKernel equality_effect(const FinObj& x);
/// Scales mass by r in [0, 1]: unit effect on any object.
SubKernel score_kernel(const FinObj& dom, const Rat& r);
/// Eager conditional choice: 2 * X * X -> X, first branch on true.
SubKernel ite_kernel(const FinObj& x);

Rat total_mass(const SubDist& d);

/// Divides by the total mass; the zero subdistribution maps to itself,
/// signaling failure of normalization.
SubDist normalize_dist(const SubDist& d);

/// True iff p = lambda q for some exact rational lambda > 0.
bool proportional(const SubKernel& p, const SubKernel& q);

/// Discardability up to a scalar: all column sums equal and nonzero.
bool proj_discardable(const SubKernel& p);

/// A stochastic kernel into Y * K with a designated observation k0; the
/// conditioning-channel presentation of a subkernel.
struct FinChannel {
  FinObj dom;
  FinObj cod;
  FinObj k;
  long k0 = 0;
  SubKernel q;  // dom -> cod * k, columns sum to exactly 1
};

/// Slices the channel at its observation: rho(y|x) = q(y, k0 | x).
SubKernel subkernel_of_channel(const FinChannel& c);

/// Presents rho as a channel with a single boolean observation; the
/// residual mass 1 - sum_y rho(y|x) sits on (y0, false) for the first
/// outcome y0, so columns sum to exactly 1.
FinChannel channel_of_subkernel(const SubKernel& rho);

/// Posterior over dom * cod under a prior, by conditioning the channel
/// on its observation; nullopt when all mass is rejected.
std::optional<SubDist> channel_posterior(const FinChannel& c, const SubDist& prior);

/// Pointwise product of mass functions on the same space.
SubDist conditioning_product(const SubDist& p, const SubDist& q);

}  // namespace gausscond

#endif
