#ifndef GAUSSCOND_FIN_GEN_HPP
#define GAUSSCOND_FIN_GEN_HPP

#include "gausscond/finlang.hpp"

#include <random>
#include <string>
#include <vector>

namespace gctest {

using namespace gausscond;

struct FinGen {
  std::mt19937_64 engine;
  int choices_left = 4;
  int conditions_left = 2;

  explicit FinGen(unsigned seed, int choices = 4, int conditions = 2)
      : engine(seed), choices_left(choices), conditions_left(conditions) {}

  long pick(long n) { return static_cast<long>(engine() % static_cast<unsigned long>(n)); }
  bool chance_half() { return pick(2) == 0; }
  Rat rat8() { return Rat(pick(9)) / 8; }

  // boolean-typed expression over boolean-typed variables in scope
  PTermPtr boolean(const std::vector<std::string>& scope, int depth) {
    if (depth <= 0) return leaf(scope);
    switch (pick(6)) {
      case 0:
      case 1:
        return leaf(scope);
      case 2: {
        std::string name = "f" + std::to_string(depth) + "_" + std::to_string(pick(40));
        PTermPtr bound = boolean(scope, depth - 1);
        std::vector<std::string> inner = scope;
        inner.push_back(name);
        return fin_let(name, bound, boolean(inner, depth - 1));
      }
      case 3:
        return fin_ite(boolean(scope, depth - 1), boolean(scope, depth - 1),
                       boolean(scope, depth - 1));
      case 4:
        if (conditions_left > 0) {
          --conditions_left;
          return fin_seq(fin_cond_eq(boolean(scope, depth - 1), boolean(scope, depth - 1)),
                         boolean(scope, depth - 1));
        }
        return leaf(scope);
      default:
        if (chance_half()) {
          return fin_seq(fin_score(rat8()), boolean(scope, depth - 1));
        }
        return leaf(scope);
    }
  }

  PTermPtr leaf(const std::vector<std::string>& scope) {
    if (!scope.empty() && chance_half()) return fin_var(scope[pick(scope.size())]);
    if (choices_left > 0 && chance_half()) {
      --choices_left;
      return fin_bernoulli(rat8());
    }
    return fin_var(chance_half() ? "true" : "false");
  }
};

struct FinLawInstance {
  std::string law;
  FinCtx ctx;
  PTermPtr lhs;
  PTermPtr rhs;
};

inline PTermPtr fin_substitute(const PTermPtr& t, const std::string& x, const PTermPtr& v) {
  if (!t) return t;
  switch (t->kind) {
    case PTermKind::Var:
      return t->name == x ? v : t;
    case PTermKind::Let: {
      PTermPtr bound = fin_substitute(t->a, x, v);
      PTermPtr body = t->name == x ? t->b : fin_substitute(t->b, x, v);
      return fin_let(t->name, bound, body);
    }
    case PTermKind::LetPair: {
      PTermPtr bound = fin_substitute(t->a, x, v);
      bool shadows = t->name == x || t->name2 == x;
      PTermPtr body = shadows ? t->b : fin_substitute(t->b, x, v);
      return fin_let_pair(t->name, t->name2, bound, body);
    }
    case PTermKind::Pair:
      return fin_pair(fin_substitute(t->a, x, v), fin_substitute(t->b, x, v));
    case PTermKind::CondEq:
      return fin_cond_eq(fin_substitute(t->a, x, v), fin_substitute(t->b, x, v));
    case PTermKind::If:
      return fin_if(fin_substitute(t->a, x, v), fin_substitute(t->b, x, v),
                    fin_substitute(t->c, x, v));
    case PTermKind::Ite:
      return fin_ite(fin_substitute(t->a, x, v), fin_substitute(t->b, x, v),
                     fin_substitute(t->c, x, v));
    case PTermKind::Kern:
      return fin_kern(*t->kernel, fin_substitute(t->a, x, v));
    default:
      return t;
  }
}

// boolean-typed term using the fresh variable x exactly once
inline PTermPtr fin_linear_use(FinGen& gen, const std::vector<std::string>& scope,
                               const std::string& x, int depth) {
  if (depth <= 0) return fin_var(x);
  PTermPtr inner = fin_linear_use(gen, scope, x, depth - 1);
  switch (gen.pick(4)) {
    case 0: {
      std::string y = "w" + std::to_string(depth);
      return fin_let(y, gen.boolean(scope, 1), inner);
    }
    case 1:
      return fin_ite(gen.boolean(scope, 1), inner, gen.boolean(scope, 1));
    case 2:
      if (gen.conditions_left > 0) {
        --gen.conditions_left;
        return fin_seq(fin_cond_eq(gen.boolean(scope, 1), gen.boolean(scope, 1)), inner);
      }
      return inner;
    default:
      return inner;
  }
}

// value expression: variables, outcome literals and pairs of them
inline PTermPtr fin_value_expr(FinGen& gen, const std::vector<std::string>& scope) {
  if (!scope.empty() && gen.chance_half()) return fin_var(scope[gen.pick(scope.size())]);
  return fin_var(gen.chance_half() ? "true" : "false");
}

inline std::vector<FinLawInstance> instantiate_fin_cd_laws(unsigned seed) {
  std::vector<FinLawInstance> out;
  FinTy boolean = FinTy::base(bool_space());

  auto fresh_ctx = [&](FinGen& gen) {
    FinCtx ctx;
    long n = gen.pick(3);
    for (long i = 0; i < n; ++i) ctx.emplace_back("c" + std::to_string(i + 1), boolean);
    return ctx;
  };
  auto names_of = [](const FinCtx& ctx) {
    std::vector<std::string> names;
    for (const auto& [n, ty] : ctx) names.push_back(n);
    return names;
  };

  {
    FinGen gen(seed * 11 + 1);
    FinCtx ctx = fresh_ctx(gen);
    auto scope = names_of(ctx);
    PTermPtr e = gen.boolean(scope, 2);
    PTermPtr linear = fin_linear_use(gen, scope, "x", 1 + static_cast<int>(gen.pick(2)));
    out.push_back({"let.lin", ctx, fin_let("x", e, linear), fin_substitute(linear, "x", e)});
  }
  {
    FinGen gen(seed * 11 + 2);
    FinCtx ctx = fresh_ctx(gen);
    auto scope = names_of(ctx);
    PTermPtr v = fin_value_expr(gen, scope);
    std::vector<std::string> inner = scope;
    inner.push_back("x");
    PTermPtr t = gen.boolean(inner, 2);
    out.push_back({"let.val", ctx, fin_let("x", v, t), fin_substitute(t, "x", v)});
  }
  {
    FinGen gen(seed * 11 + 3);
    FinCtx ctx = {{"x1", boolean}, {"x2", boolean}};
    bool first = gen.chance_half();
    PTermPtr lhs = fin_let_pair("a", "b", fin_pair(fin_var("x1"), fin_var("x2")),
                                fin_var(first ? "a" : "b"));
    out.push_back({"*.beta", ctx, lhs, fin_var(first ? "x1" : "x2")});
  }
  {
    FinCtx ctx = {{"p", FinTy::pair(boolean, boolean)}};
    PTermPtr lhs =
        fin_let_pair("a", "b", fin_var("p"), fin_pair(fin_var("a"), fin_var("b")));
    out.push_back({"*.eta", ctx, lhs, fin_var("p")});
  }
  {
    FinCtx ctx = {{"u", FinTy::unit()}};
    out.push_back({"unit.eta", ctx, fin_var("u"), fin_unit()});
  }
  {
    FinGen gen(seed * 11 + 4);
    FinCtx ctx = fresh_ctx(gen);
    auto scope = names_of(ctx);
    PTermPtr e1 = gen.boolean(scope, 2);
    std::vector<std::string> with1 = scope;
    with1.push_back("x1");
    PTermPtr e2 = gen.boolean(with1, 2);
    std::vector<std::string> with2 = scope;
    with2.push_back("x2");
    PTermPtr e = gen.boolean(with2, 2);
    out.push_back({"assoc", ctx, fin_let("x2", fin_let("x1", e1, e2), e),
                   fin_let("x1", e1, fin_let("x2", e2, e))});
  }
  {
    FinGen gen(seed * 11 + 5);
    FinCtx ctx = fresh_ctx(gen);
    auto scope = names_of(ctx);
    PTermPtr e1 = gen.boolean(scope, 2);
    PTermPtr e2 = gen.boolean(scope, 2);
    std::vector<std::string> both = scope;
    both.push_back("x1");
    both.push_back("x2");
    PTermPtr e = gen.boolean(both, 2);
    out.push_back({"comm", ctx, fin_let("x1", e1, fin_let("x2", e2, e)),
                   fin_let("x2", e2, fin_let("x1", e1, e))});
  }
  {
    FinGen gen(seed * 11 + 6);
    FinCtx ctx = fresh_ctx(gen);
    auto scope = names_of(ctx);
    PTermPtr e = gen.boolean(scope, 2);
    out.push_back({"id", ctx, fin_let("x", e, fin_var("x")), e});
  }
  {
    FinGen gen(seed * 11 + 7);
    FinCtx ctx = {{"x2", boolean}};
    std::vector<std::string> with1 = {"x2", "x1"};
    PTermPtr e = gen.boolean(with1, 2);
    out.push_back({"let.beta", ctx, fin_let("x1", fin_var("x2"), e),
                   fin_substitute(e, "x1", fin_var("x2"))});
  }
  {
    FinGen gen(seed * 11 + 8);
    FinCtx ctx = fresh_ctx(gen);
    auto scope = names_of(ctx);
    PTermPtr e = gen.boolean(scope, 2);
    // f is negation, a deterministic kernel symbol on booleans
    FinObj two = FinObj::base(bool_space());
    SubKernel neg = SubKernel::zero(two, two);
    neg.at(0, 1) = 1;
    neg.at(1, 0) = 1;
    auto f = [&](PTermPtr arg) { return fin_kern(neg, arg); };
    out.push_back({"let.f", ctx, f(e), fin_let("x", e, f(fin_var("x")))});
  }
  {
    FinGen gen(seed * 11 + 9);
    FinCtx ctx = fresh_ctx(gen);
    auto scope = names_of(ctx);
    PTermPtr s = gen.boolean(scope, 2);
    PTermPtr t = gen.boolean(scope, 2);
    out.push_back({"let.*", ctx, fin_pair(s, t),
                   fin_let("x", s, fin_let("y", t, fin_pair(fin_var("x"), fin_var("y"))))});
  }
  return out;
}

// random closed program for evidence extraction
inline PTermPtr random_closed_fin_program(unsigned seed) {
  FinGen gen(seed, 4, 2);
  return gen.boolean({}, 3);
}

}  // namespace gctest

#endif
