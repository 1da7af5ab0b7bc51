#ifndef GAUSSCOND_NORMAL_FORM_HPP
#define GAUSSCOND_NORMAL_FORM_HPP

#include "gausscond/channel.hpp"
#include "gausscond/syntax.hpp"

#include <string>
#include <variant>

namespace gausscond {

/// Second-order algebraic form of a program: latent binders hoisted to
/// the front, conditions flattened to affine rows over (free vars,
/// latents), and an affine return. Bottom absorbs everything.
struct AlgTerm {
  Eigen::Index free_vars = 0;
  Eigen::Index latents = 0;
  bool bottom = false;
  Matrix cond_coeff;  // rows x (free_vars + latents)
  Vector cond_rhs;
  Matrix ret_coeff;   // outputs x (free_vars + latents)
  Vector ret_const;

  Eigen::Index conditions() const { return cond_coeff.rows(); }
  Eigen::Index outputs() const { return ret_coeff.rows(); }
};

/// Hoists binders and conditions out of a typed term, collapsing affine
/// value expressions. Free variables must all have type R; they become
/// the x-block in declaration order.
AlgTerm to_alg(const Ctx& ctx, const TermPtr& t);

/// The conditioning channel an algebraic form presents.
Channel channel_of_alg(const AlgTerm& a);

enum class Axiom {
  Disc,   // drop an unused latent
  Orth,   // orthogonal change of latent coordinates
  C1,     // swap two conditions
  C2,     // commute a condition past a binder (flat form: identity)
  C3,     // conditioning after failure stays failure
  Taut,   // drop a 0 = 0 condition
  Fail,   // 0 = c with c != 0 collapses to bottom
  Subs,   // add a multiple of a condition to a return row
  Init,   // a condition z_j = c initializes the latent
  Cong,   // invertible row transformation of the condition system
};

struct RewriteArgs {
  Eigen::Index index = 0;   // Disc/Taut/Fail/Init: which latent or row
  Eigen::Index index2 = 0;  // C1: second row; Subs: target return row
  double factor = 0.0;      // Subs: multiple to add
  Matrix transform;         // Orth: orthogonal U; Cong: invertible S
};

/// Applies one axiom instance; throws std::invalid_argument when the
/// axiom's side conditions fail (NotApplicable).
AlgTerm rewrite(const AlgTerm& a, Axiom axiom, const RewriteArgs& args = {});

/// Normal form of a closed term: nu z. return(A z + c), stored as the
/// mean c and the invariant A A^T.
struct ClosedNF {
  bool bottom = false;
  Vector c;
  PsdMatrix m;
};

ClosedNF normalize_closed(const AlgTerm& a);

/// Normal form of an effect: nu z. (A x =:= B z + c) with A in reduced
/// echelon form and no zero rows; stored as (A, c, B B^T).
struct EffectNF {
  bool bottom = false;
  Matrix a;
  Vector c;
  PsdMatrix m;
};

EffectNF normalize_effect(const AlgTerm& a);

bool approx_equal(const ClosedNF& x, const ClosedNF& y, double tol = kEqualityTol);
bool approx_equal(const EffectNF& x, const EffectNF& y, double tol = kEqualityTol);

/// Decides equivalence of two terms over the same context: closed terms
/// and effects via their normal forms, anything else via channel
/// canonical forms.
bool alg_equiv(const Ctx& ctx, const TermPtr& t1, const TermPtr& t2,
               double tol = kEqualityTol);

std::string print_alg(const AlgTerm& a);
std::string print_closed_nf(const ClosedNF& nf);
std::string print_effect_nf(const EffectNF& nf);

}  // namespace gausscond

#endif
