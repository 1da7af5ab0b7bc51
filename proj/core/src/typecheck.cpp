#include "gausscond/typecheck.hpp"

#include <set>
#include <stdexcept>

namespace gausscond {

namespace {

struct TypeFail {
  TypeError error;
};

[[noreturn]] void fail(const std::string& msg) { throw TypeFail{TypeError{msg}}; }

Ty check(Ctx& ctx, const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var: {
      for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
        if (it->first == t->name) return it->second;
      }
      fail("unbound variable '" + t->name + "'");
    }
    case TermKind::Const:
      return Ty::real();
    case TermKind::Normal:
      return Ty::real();
    case TermKind::Unit:
      return Ty::unit();
    case TermKind::Add: {
      Ty a = check(ctx, t->a);
      Ty b = check(ctx, t->b);
      if (a != Ty::real() || b != Ty::real()) {
        fail("'+' requires both operands of type R (got " + a.show() + " and " +
             b.show() + ")");
      }
      return Ty::real();
    }
    case TermKind::Scale: {
      Ty a = check(ctx, t->a);
      if (a != Ty::real()) {
        fail("scalar multiplication requires an operand of type R (got " +
             a.show() + ")");
      }
      return Ty::real();
    }
    case TermKind::Pair: {
      Ty a = check(ctx, t->a);
      Ty b = check(ctx, t->b);
      return Ty::pair(a, b);
    }
    case TermKind::CondEq: {
      Ty a = check(ctx, t->a);
      Ty b = check(ctx, t->b);
      if (a != Ty::real() || b != Ty::real()) {
        fail("'=:=' conditions expressions of type R only (got " + a.show() +
             " and " + b.show() + ")");
      }
      return Ty::unit();
    }
    case TermKind::Let: {
      Ty bound = check(ctx, t->a);
      ctx.emplace_back(t->name, bound);
      Ty body = check(ctx, t->b);
      ctx.pop_back();
      return body;
    }
    case TermKind::LetPair: {
      Ty bound = check(ctx, t->a);
      if (bound.kind() != Ty::Kind::Pair) {
        fail("pattern let requires a pair (got " + bound.show() + ")");
      }
      ctx.emplace_back(t->name, bound.fst());
      ctx.emplace_back(t->name2, bound.snd());
      Ty body = check(ctx, t->b);
      ctx.pop_back();
      ctx.pop_back();
      return body;
    }
  }
  fail("malformed term");
}

}  // namespace

TypeResult typecheck(const Ctx& ctx, const TermPtr& t) {
  std::set<std::string> names;
  for (const auto& [name, ty] : ctx) {
    if (!names.insert(name).second) {
      return TypeError{"context names must be distinct ('" + name + "' repeats)"};
    }
  }
  Ctx working = ctx;
  try {
    return check(working, t);
  } catch (const TypeFail& f) {
    return f.error;
  }
}

Ty typecheck_or_throw(const Ctx& ctx, const TermPtr& t) {
  TypeResult r = typecheck(ctx, t);
  if (auto* err = std::get_if<TypeError>(&r)) {
    throw std::invalid_argument("type error: " + err->message);
  }
  return std::get<Ty>(r);
}

Ty infer_type(const Ctx& ctx, const TermPtr& t) {
  Ctx working = ctx;
  try {
    return check(working, t);
  } catch (const TypeFail& f) {
    throw std::invalid_argument("type error: " + f.error.message);
  }
}

FlatDims flatten(const Ctx& ctx, const TermPtr& t) {
  Ty ty = typecheck_or_throw(ctx, t);
  return FlatDims{ctx_flat_dim(ctx), ty.flat_dim()};
}

}  // namespace gausscond
