#include "gausscond/denote.hpp"

#include "gausscond/typecheck.hpp"

#include <stdexcept>

namespace gausscond {

namespace {

Channel denote_rec(const Ctx& ctx, const TermPtr& t) {
  Eigen::Index m = ctx_flat_dim(ctx);
  switch (t->kind) {
    case TermKind::Var: {
      std::vector<int> offsets = ctx_offsets(ctx);
      for (size_t i = ctx.size(); i-- > 0;) {
        if (ctx[i].first == t->name) {
          int width = ctx[i].second.flat_dim();
          Matrix a = Matrix::Zero(width, m);
          a.middleCols(offsets[i], width).setIdentity();
          return lift(affine_map(a, Vector::Zero(width)));
        }
      }
      throw std::invalid_argument("denote: unbound variable '" + t->name + "'");
    }
    case TermKind::Const: {
      Vector b(1);
      b << t->value;
      return lift(affine_map(Matrix::Zero(1, m), b));
    }
    case TermKind::Unit:
      return lift(del_map(m));
    case TermKind::Normal:
      return lift(compose(GaussState::standard_normal(1).as_map(), del_map(m)));
    case TermKind::Add: {
      Channel pair = denote_rec(ctx, mk_pair(t->a, t->b));
      Matrix sum(1, 2);
      sum << 1, 1;
      return compose(lift(affine_map(sum, Vector::Zero(1))), pair);
    }
    case TermKind::Scale: {
      Channel inner = denote_rec(ctx, t->a);
      Matrix sc(1, 1);
      sc << t->value;
      return compose(lift(affine_map(sc, Vector::Zero(1))), inner);
    }
    case TermKind::Pair: {
      Channel left = denote_rec(ctx, t->a);
      Channel right = denote_rec(ctx, t->b);
      return compose(tensor(left, right), lift(copy_map(m)));
    }
    case TermKind::CondEq: {
      Channel pair = denote_rec(ctx, mk_pair(t->a, t->b));
      Matrix diff(1, 2);
      diff << 1, -1;
      Channel delta = compose(lift(affine_map(diff, Vector::Zero(1))), pair);
      return compose(observe(Vector::Zero(1)), delta);
    }
    case TermKind::Let: {
      Ty bound_ty = infer_type(ctx, t->a);
      Channel bound = denote_rec(ctx, t->a);
      Ctx extended = ctx;
      extended.emplace_back(t->name, bound_ty);
      Channel body = denote_rec(extended, t->b);
      Channel widen = compose(tensor(identity_channel(m), bound), lift(copy_map(m)));
      return compose(body, widen);
    }
    case TermKind::LetPair: {
      Ty bound_ty = infer_type(ctx, t->a);
      if (bound_ty.kind() != Ty::Kind::Pair) {
        throw std::invalid_argument("denote: pattern let over a non-pair");
      }
      Channel bound = denote_rec(ctx, t->a);
      Ctx extended = ctx;
      extended.emplace_back(t->name, bound_ty.fst());
      extended.emplace_back(t->name2, bound_ty.snd());
      Channel body = denote_rec(extended, t->b);
      Channel widen = compose(tensor(identity_channel(m), bound), lift(copy_map(m)));
      return compose(body, widen);
    }
  }
  throw std::invalid_argument("denote: malformed term");
}

}  // namespace

Channel denote(const Ctx& ctx, const TermPtr& t) {
  typecheck_or_throw(ctx, t);
  return denote_rec(ctx, t);
}

}  // namespace gausscond
