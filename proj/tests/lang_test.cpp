#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gausscond/parser.hpp"
#include "gausscond/syntax.hpp"
#include "gausscond/typecheck.hpp"
#include "test_util.hpp"

#include <variant>

using namespace gausscond;

namespace {

TermPtr parse_ok(const std::string& text) {
  ParseResult r = parse(text);
  if (auto* err = std::get_if<ParseError>(&r)) {
    FAIL(err->show());
  }
  return std::get<TermPtr>(r);
}

ParseError parse_err(const std::string& text) {
  ParseResult r = parse(text);
  REQUIRE(std::holds_alternative<ParseError>(r));
  return std::get<ParseError>(r);
}

Ty type_of(const Ctx& ctx, const std::string& text) {
  TypeResult r = typecheck(ctx, parse_ok(text));
  if (auto* err = std::get_if<TypeError>(&r)) {
    FAIL(err->message);
  }
  return std::get<Ty>(r);
}

// random well-scoped ASTs for the print/parse round trip
TermPtr random_term(gctest::Rng& rng, std::vector<std::string>& scope, int depth) {
  int choice = static_cast<int>(rng.pick(depth <= 0 ? 4 : 10));
  switch (choice) {
    case 0: return mk_const(rng.uniform(-4.0, 4.0));
    case 1: return mk_normal();
    case 2: return mk_unit();
    case 3:
      if (!scope.empty()) return mk_var(scope[rng.pick(scope.size())]);
      return mk_const(1.5);
    case 4: return mk_add(random_term(rng, scope, depth - 1), random_term(rng, scope, depth - 1));
    case 5: return mk_scale(rng.uniform(-2.0, 2.0), random_term(rng, scope, depth - 1));
    case 6: return mk_pair(random_term(rng, scope, depth - 1), random_term(rng, scope, depth - 1));
    case 7: {
      std::string name = "v" + std::to_string(scope.size());
      TermPtr bound = random_term(rng, scope, depth - 1);
      scope.push_back(name);
      TermPtr body = random_term(rng, scope, depth - 1);
      scope.pop_back();
      return mk_let(name, bound, body);
    }
    case 8: {
      std::string a = "a" + std::to_string(scope.size());
      std::string b = "b" + std::to_string(scope.size());
      TermPtr bound = mk_pair(random_term(rng, scope, depth - 1),
                              random_term(rng, scope, depth - 1));
      scope.push_back(a);
      scope.push_back(b);
      TermPtr body = random_term(rng, scope, depth - 1);
      scope.pop_back();
      scope.pop_back();
      return mk_let_pair(a, b, bound, body);
    }
    default:
      return mk_cond_eq(random_term(rng, scope, depth - 1),
                        random_term(rng, scope, depth - 1));
  }
}

}  // namespace

TEST_CASE("parsing basic forms") {
  CHECK(parse_ok("normal()")->kind == TermKind::Normal);
  CHECK(parse_ok("()")->kind == TermKind::Unit);
  CHECK(parse_ok("1.5")->value == 1.5);
  CHECK(parse_ok("2e-3")->value == 2e-3);

  TermPtr t = parse_ok("let (x,y) = (normal(), normal()) in (x, y, x - y)");
  CHECK(t->kind == TermKind::LetPair);
  CHECK(t->a->kind == TermKind::Pair);
  // (x, y, x - y) is right-nested
  CHECK(t->b->kind == TermKind::Pair);
  CHECK(t->b->b->kind == TermKind::Pair);
}

TEST_CASE("statement sugar desugars into lets") {
  TermPtr prog = parse_ok("x = normal()\nx =:= 1; x");
  CHECK(prog->kind == TermKind::Let);
  CHECK(prog->name == "x");
  CHECK(prog->b->kind == TermKind::Let);  // the `;` is a unit let
  CHECK(prog->b->name == "_");

  // semicolons and newlines are interchangeable
  CHECK(term_equal(parse_ok("x = normal(); x =:= 1; x"), prog));
}

TEST_CASE("normal with parameters desugars at parse time") {
  TermPtr t = parse_ok("normal(50, 100)");
  REQUIRE(t->kind == TermKind::Add);
  CHECK(t->a->value == 50.0);
  REQUIRE(t->b->kind == TermKind::Scale);
  CHECK(t->b->value == 10.0);
  CHECK(t->b->a->kind == TermKind::Normal);

  ParseError err = parse_err("normal(0, -1)");
  CHECK(err.message.find("variance") != std::string::npos);
}

TEST_CASE("matrix literals multiply tuples") {
  TermPtr t = parse_ok("[[1, 2], [0, 1]] * (x, y)");
  REQUIRE(t->kind == TermKind::Pair);
  CHECK(t->a->kind == TermKind::Add);
  // row 1 is 1*x + 2*y
  CHECK(t->a->a->value == 1.0);
  CHECK(t->a->b->value == 2.0);

  ParseError err = parse_err("[[1, 2], [0, 1]] * (x, y, z)");
  CHECK(err.message.find("columns") != std::string::npos);
  parse_err("[[1, 2]] * 3 * [[1]]");
}

TEST_CASE("parse errors carry position and expectations") {
  ParseError err = parse_err("let x = in x");
  CHECK(err.line == 1);
  CHECK(err.col == 9);
  CHECK(!err.expected.empty());

  ParseError dangling = parse_err("x +");
  CHECK(!dangling.expected.empty());

  ParseError division = parse_err("x / y =:= 1");
  CHECK(division.message.find("unexpected character '/'") != std::string::npos);
}

TEST_CASE("scalar multiplication requires a literal") {
  parse_ok("2 * x");
  parse_ok("x * 2");
  parse_ok("-x");
  ParseError err = parse_err("x * y");
  CHECK(err.message.find("literal") != std::string::npos);
}

TEST_CASE("print then parse is the identity on ASTs") {
  gctest::Rng rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> scope;
    TermPtr t = random_term(rng, scope, 4);
    std::string text = print_term(t);
    ParseResult r = parse(text);
    if (auto* err = std::get_if<ParseError>(&r)) {
      CAPTURE(text);
      FAIL(err->show());
    }
    bool same = term_equal(std::get<TermPtr>(r), t);
    if (!same) CAPTURE(text);
    CHECK(same);
  }
}

TEST_CASE("typing the primitive rules") {
  CHECK(type_of({}, "normal()") == Ty::real());
  CHECK(type_of({}, "normal() =:= 0") == Ty::unit());
  CHECK(type_of({}, "(1, (2, 3))") ==
        Ty::pair(Ty::real(), Ty::pair(Ty::real(), Ty::real())));
  CHECK(type_of({{"x", Ty::real()}}, "x + 1") == Ty::real());

  TypeResult bad = typecheck({}, parse_ok("(() =:= ())"));
  REQUIRE(std::holds_alternative<TypeError>(bad));
  CHECK(std::get<TypeError>(bad).message.find("=:=") != std::string::npos);

  TypeResult unbound = typecheck({}, parse_ok("x + 1"));
  REQUIRE(std::holds_alternative<TypeError>(unbound));

  TypeResult nonpair = typecheck({}, parse_ok("let (a, b) = 1 in a"));
  REQUIRE(std::holds_alternative<TypeError>(nonpair));
}

TEST_CASE("flattening counts real coordinates") {
  CHECK(Ty::pair(Ty::real(), Ty::pair(Ty::real(), Ty::real())).flat_dim() == 3);
  CHECK(Ty::unit().flat_dim() == 0);
  Ctx ctx = {{"x", Ty::real()}, {"p", Ty::pair(Ty::real(), Ty::real())}};
  FlatDims dims = flatten(ctx, parse_ok("(x, p)"));
  CHECK(dims.ctx_dim == 3);
  CHECK(dims.result_dim == 3);
}

TEST_CASE("weakening and exchange preserve the derived type") {
  gctest::Rng rng(62);
  Ctx base = {{"x", Ty::real()}, {"y", Ty::pair(Ty::real(), Ty::real())}};
  TermPtr t = parse_ok("let (u, v) = y in x + u + v");
  Ty ty = std::get<Ty>(typecheck(base, t));

  Ctx widened = base;
  widened.emplace_back("extra", Ty::real());
  CHECK(std::get<Ty>(typecheck(widened, t)) == ty);

  Ctx swapped = {base[1], base[0]};
  CHECK(std::get<Ty>(typecheck(swapped, t)) == ty);
}

TEST_CASE("context names must be distinct") {
  Ctx dup = {{"x", Ty::real()}, {"x", Ty::real()}};
  TypeResult r = typecheck(dup, parse_ok("x"));
  REQUIRE(std::holds_alternative<TypeError>(r));
}

TEST_CASE("shadowing resolves to the innermost binding") {
  CHECK(type_of({}, "let x = 1 in let x = (1, 2) in x") ==
        Ty::pair(Ty::real(), Ty::real()));
}
