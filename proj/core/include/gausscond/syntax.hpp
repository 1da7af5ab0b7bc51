#ifndef GAUSSCOND_SYNTAX_HPP
#define GAUSSCOND_SYNTAX_HPP

#include <memory>
#include <string>
#include <vector>

namespace gausscond {

/// Types of the source language: tau ::= R | I | tau * tau.
class Ty {
 public:
  enum class Kind { Real, Unit, Pair };

  static Ty real();
  static Ty unit();
  static Ty pair(Ty fst, Ty snd);

  Kind kind() const { return kind_; }
  const Ty& fst() const;
  const Ty& snd() const;

  /// Number of real coordinates after flattening pairs depth-first.
  int flat_dim() const;

  bool operator==(const Ty& other) const;
  bool operator!=(const Ty& other) const { return !(*this == other); }

  std::string show() const;

 private:
  Ty(Kind k, std::shared_ptr<const Ty> f, std::shared_ptr<const Ty> s)
      : kind_(k), fst_(std::move(f)), snd_(std::move(s)) {}
  Kind kind_;
  std::shared_ptr<const Ty> fst_, snd_;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

enum class TermKind {
  Var,      // name
  Const,    // value
  Add,      // a + b
  Scale,    // value * a
  Pair,     // (a, b)
  Unit,     // ()
  Let,      // let name = a in b
  LetPair,  // let (name, name2) = a in b
  Normal,   // normal()
  CondEq,   // a =:= b
};

struct Term {
  TermKind kind;
  std::string name;
  std::string name2;
  double value = 0.0;
  TermPtr a;
  TermPtr b;
};

TermPtr mk_var(std::string name);
TermPtr mk_const(double value);
TermPtr mk_add(TermPtr a, TermPtr b);
TermPtr mk_scale(double value, TermPtr a);
TermPtr mk_pair(TermPtr a, TermPtr b);
TermPtr mk_unit();
TermPtr mk_let(std::string name, TermPtr bound, TermPtr body);
TermPtr mk_let_pair(std::string fst, std::string snd, TermPtr bound, TermPtr body);
TermPtr mk_normal();
TermPtr mk_cond_eq(TermPtr a, TermPtr b);
/// s; t, i.e. let _ = s in t.
TermPtr mk_seq(TermPtr s, TermPtr t);

/// Ordered typing context; names must be distinct.
using Ctx = std::vector<std::pair<std::string, Ty>>;

/// Coordinate offset of each context entry under depth-first flattening.
int ctx_flat_dim(const Ctx& ctx);
std::vector<int> ctx_offsets(const Ctx& ctx);

bool term_equal(const TermPtr& a, const TermPtr& b);

/// Number of normal/let/condition symbols; bounds the reduction length.
int effect_symbol_count(const TermPtr& t);

std::vector<std::string> free_vars(const TermPtr& t);

/// Capture-avoiding substitution t[v/x]. The replacement must not contain
/// variables that any binder in t shadows under.
TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& v);

/// Renames binders so that no bound name matches the reserved latent
/// names z1, z2, ...
TermPtr rename_reserved_binders(const TermPtr& t);

std::string print_term(const TermPtr& t);

/// Shortest decimal representation that round-trips through parsing.
std::string format_double(double v);

}  // namespace gausscond

#endif
