#ifndef GAUSSCOND_CD_LAWS_HPP
#define GAUSSCOND_CD_LAWS_HPP

#include "gen_programs.hpp"

#include <functional>
#include <string>
#include <vector>

namespace gctest {

// one instantiated program equation over a shared context
struct LawInstance {
  std::string law;
  Ctx ctx;
  TermPtr lhs;
  TermPtr rhs;
};

inline Ctx random_real_ctx(Rng& rng, int max_vars = 3) {
  Ctx ctx;
  int n = static_cast<int>(rng.pick(max_vars + 1));
  for (int i = 0; i < n; ++i) ctx.emplace_back("c" + std::to_string(i + 1), Ty::real());
  return ctx;
}

inline std::vector<std::string> ctx_names(const Ctx& ctx) {
  std::vector<std::string> names;
  for (const auto& [name, ty] : ctx) names.push_back(name);
  return names;
}

// a term of type R using the fresh variable `x` exactly once
inline TermPtr gen_linear_use(Rng& rng, const std::vector<std::string>& scope,
                              const std::string& x, GenBudget& b, int depth) {
  if (depth <= 0) return mk_var(x);
  TermPtr inner = gen_linear_use(rng, scope, x, b, depth - 1);
  switch (rng.pick(5)) {
    case 0: return mk_add(inner, gen_real(rng, scope, b));
    case 1: return mk_add(gen_real(rng, scope, b), inner);
    case 2: return mk_scale(std::round(rng.uniform(-2.0, 2.0) * 4.0) / 4.0, inner);
    case 3: {
      std::string y = "w" + std::to_string(depth);
      return mk_let(y, gen_real(rng, scope, b), inner);
    }
    default:
      if (b.conditions > 0) {
        --b.conditions;
        return mk_seq(mk_cond_eq(gen_real(rng, scope, b), gen_real(rng, scope, b)), inner);
      }
      return inner;
  }
}

// a deterministic value expression of type R over the scope
inline TermPtr gen_value_expr(Rng& rng, const std::vector<std::string>& scope, int depth) {
  if (depth <= 0 || rng.chance(0.4)) {
    if (!scope.empty() && rng.chance(0.6)) return mk_var(scope[rng.pick(scope.size())]);
    return mk_const(std::round(rng.uniform(-3.0, 3.0) * 2.0) / 2.0);
  }
  if (rng.chance(0.5)) {
    return mk_add(gen_value_expr(rng, scope, depth - 1),
                  gen_value_expr(rng, scope, depth - 1));
  }
  return mk_scale(std::round(rng.uniform(-2.0, 2.0) * 2.0) / 2.0,
                  gen_value_expr(rng, scope, depth - 1));
}

inline std::vector<LawInstance> instantiate_cd_laws(Rng& rng) {
  std::vector<LawInstance> out;
  GenBudget small{3, 2, 3};

  {  // let.lin: (let x = e in t) == t[e!x] when t uses x exactly once
    Ctx ctx = random_real_ctx(rng);
    auto scope = ctx_names(ctx);
    GenBudget b = small;
    TermPtr e = gen_real(rng, scope, b);
    TermPtr linear = gen_linear_use(rng, scope, "x", b, 1 + rng.pick(3));
    out.push_back({"let.lin", ctx, mk_let("x", e, linear), substitute(linear, "x", e)});
  }
  {  // let.val: (let x = V in t) == t[V/x] for a value expression V
    Ctx ctx = random_real_ctx(rng);
    auto scope = ctx_names(ctx);
    GenBudget b = small;
    TermPtr v = gen_value_expr(rng, scope, 2);
    std::vector<std::string> inner = scope;
    inner.push_back("x");
    TermPtr t = gen_tuple(rng, inner, b, 1 + rng.pick(2));
    out.push_back({"let.val", ctx, mk_let("x", v, t), substitute(t, "x", v)});
  }
  {  // *.beta: let (a, b) = (x1, x2) in a == x1
    Ctx ctx = {{"x1", Ty::real()}, {"x2", Ty::real()}};
    bool first = rng.chance(0.5);
    TermPtr lhs = mk_let_pair("a", "b", mk_pair(mk_var("x1"), mk_var("x2")),
                              mk_var(first ? "a" : "b"));
    out.push_back({"*.beta", ctx, lhs, mk_var(first ? "x1" : "x2")});
  }
  {  // *.eta: let (a, b) = p in (a, b) == p
    Ctx ctx = {{"p", Ty::pair(Ty::real(), Ty::real())}};
    TermPtr lhs = mk_let_pair("a", "b", mk_var("p"), mk_pair(mk_var("a"), mk_var("b")));
    out.push_back({"*.eta", ctx, lhs, mk_var("p")});
  }
  {  // unit.eta: u == () for u of unit type
    Ctx ctx = {{"u", Ty::unit()}};
    out.push_back({"unit.eta", ctx, mk_var("u"), mk_unit()});
  }
  {  // assoc
    Ctx ctx = random_real_ctx(rng);
    auto scope = ctx_names(ctx);
    GenBudget b = small;
    TermPtr e1 = gen_real(rng, scope, b);
    std::vector<std::string> with1 = scope;
    with1.push_back("x1");
    TermPtr e2 = gen_real(rng, with1, b);
    std::vector<std::string> with2 = scope;
    with2.push_back("x2");
    TermPtr e = gen_real(rng, with2, b);  // x1 not free in e
    TermPtr lhs = mk_let("x2", mk_let("x1", e1, e2), e);
    TermPtr rhs = mk_let("x1", e1, mk_let("x2", e2, e));
    out.push_back({"assoc", ctx, lhs, rhs});
  }
  {  // comm: independent bindings commute, conditions included
    Ctx ctx = random_real_ctx(rng);
    auto scope = ctx_names(ctx);
    GenBudget b = small;
    TermPtr e1 = gen_real(rng, scope, b);
    TermPtr e2 = gen_real(rng, scope, b);
    std::vector<std::string> with12 = scope;
    with12.push_back("x1");
    with12.push_back("x2");
    TermPtr e = gen_tuple(rng, with12, b, 1 + rng.pick(2));
    TermPtr lhs = mk_let("x1", e1, mk_let("x2", e2, e));
    TermPtr rhs = mk_let("x2", e2, mk_let("x1", e1, e));
    out.push_back({"comm", ctx, lhs, rhs});
  }
  {  // id: let x = e in x == e
    Ctx ctx = random_real_ctx(rng);
    auto scope = ctx_names(ctx);
    GenBudget b = small;
    TermPtr e = gen_real(rng, scope, b);
    out.push_back({"id", ctx, mk_let("x", e, mk_var("x")), e});
  }
  {  // let.beta: let x1 = x2 in e == e[x2/x1]
    Ctx ctx = {{"x2", Ty::real()}};
    GenBudget b = small;
    std::vector<std::string> with1 = {"x2", "x1"};
    TermPtr e = gen_real(rng, with1, b);
    out.push_back({"let.beta", ctx, mk_let("x1", mk_var("x2"), e),
                   substitute(e, "x1", mk_var("x2"))});
  }
  {  // let.f: f e == let x = e in f x, with f an affine symbol
    Ctx ctx = random_real_ctx(rng);
    auto scope = ctx_names(ctx);
    GenBudget b = small;
    TermPtr e = gen_real(rng, scope, b);
    double alpha = std::round(rng.uniform(-2.0, 2.0) * 2.0) / 2.0;
    auto f = [&](TermPtr arg) { return mk_scale(alpha, arg); };
    out.push_back({"let.f", ctx, f(e), mk_let("x", e, f(mk_var("x")))});
  }
  {  // let.*: (s, t) == let x = s in let y = t in (x, y)
    Ctx ctx = random_real_ctx(rng);
    auto scope = ctx_names(ctx);
    GenBudget b = small;
    TermPtr s = gen_real(rng, scope, b);
    TermPtr t = gen_real(rng, scope, b);
    TermPtr lhs = mk_pair(s, t);
    TermPtr rhs = mk_let("x", s, mk_let("y", t, mk_pair(mk_var("x"), mk_var("y"))));
    out.push_back({"let.*", ctx, lhs, rhs});
  }
  return out;
}

}  // namespace gctest

#endif
