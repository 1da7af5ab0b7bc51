#ifndef GAUSSCOND_FINLANG_HPP
#define GAUSSCOND_FINLANG_HPP

#include "gausscond/finprob.hpp"
#include "gausscond/parser.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gausscond {

/// Types of the finite language: declared base spaces, unit, pairs.
class FinTy {
 public:
  enum class Kind { Base, Unit, Pair };

  static FinTy base(FinSpacePtr space);
  static FinTy unit();
  static FinTy pair(FinTy fst, FinTy snd);

  Kind kind() const { return kind_; }
  const FinSpacePtr& space() const { return space_; }
  const FinTy& fst() const;
  const FinTy& snd() const;

  FinObj flat() const;
  bool operator==(const FinTy& other) const;
  bool operator!=(const FinTy& other) const { return !(*this == other); }
  std::string show() const;

 private:
  Kind kind_ = Kind::Unit;
  FinSpacePtr space_;
  std::shared_ptr<const FinTy> fst_, snd_;
};

struct PTerm;
using PTermPtr = std::shared_ptr<const PTerm>;

enum class PTermKind {
  Var,        // name (resolved to a binding or an outcome literal)
  Unit,
  Pair,
  Let,
  LetPair,
  Bernoulli,  // rational
  Uniform,    // space name
  Score,      // rational
  CondEq,     // a =:= b
  If,         // branching choice (language P only)
  Ite,        // eager conditional kernel, allowed in straight-line code
  Kern,       // an explicit kernel applied to a (API-level only)
};

struct PTerm {
  PTermKind kind;
  std::string name;
  std::string name2;
  Rat number;
  std::shared_ptr<const SubKernel> kernel;
  PTermPtr a, b, c;
};

PTermPtr fin_var(std::string name);
PTermPtr fin_unit();
PTermPtr fin_pair(PTermPtr a, PTermPtr b);
PTermPtr fin_let(std::string name, PTermPtr bound, PTermPtr body);
PTermPtr fin_let_pair(std::string fst, std::string snd, PTermPtr bound, PTermPtr body);
PTermPtr fin_seq(PTermPtr s, PTermPtr t);
PTermPtr fin_bernoulli(Rat p);
PTermPtr fin_uniform(std::string space);
PTermPtr fin_score(Rat r);
PTermPtr fin_cond_eq(PTermPtr a, PTermPtr b);
PTermPtr fin_if(PTermPtr cond, PTermPtr then_branch, PTermPtr else_branch);
PTermPtr fin_ite(PTermPtr cond, PTermPtr then_branch, PTermPtr else_branch);
PTermPtr fin_kern(SubKernel kernel, PTermPtr arg);

/// Declared spaces plus the built-in booleans; outcome names resolve
/// to their unique declaring space.
class SpaceTable {
 public:
  SpaceTable();
  void declare(const std::string& name, std::vector<std::string> outcomes);
  FinSpacePtr space(const std::string& name) const;
  std::optional<std::pair<FinSpacePtr, long>> outcome(const std::string& name) const;

 private:
  std::map<std::string, FinSpacePtr> spaces_;
  std::map<std::string, std::pair<FinSpacePtr, long>> outcomes_;
};

struct FinProgram {
  SpaceTable spaces;
  PTermPtr term;
};

/// Parses a `.fin` program: space declarations followed by statements
/// with bernoulli(p/q), score(p/q), uniform(S), ite(c,a,b),
/// if-then-else, =:=, lets and tuples.
std::variant<FinProgram, ParseError> parse_fin(const std::string& text);

using FinCtx = std::vector<std::pair<std::string, FinTy>>;

enum class FinMode { PSL, P };

struct FinTypeError {
  std::string message;
};

std::variant<FinTy, FinTypeError> fin_typecheck(const SpaceTable& spaces,
                                                const FinCtx& ctx, const PTermPtr& t,
                                                FinMode mode);

/// Exact denotation as a subprobability kernel from the flattened
/// context to the flattened result type. If-branching is rejected in
/// straight-line (PSL) mode.
SubKernel eval_term(const SpaceTable& spaces, const FinCtx& ctx, const PTermPtr& t,
                    FinMode mode);

/// Total mass of a closed program, computed directly and cross-checked
/// against the branching wrapper that recovers Z from Z/(Z+1).
Rat model_evidence(const SpaceTable& spaces, const PTermPtr& t);

/// PSL mode compares denotations up to a positive scalar; P mode
/// compares them exactly.
bool equiv_fin(const SpaceTable& spaces, const FinCtx& ctx, const PTermPtr& s,
               const PTermPtr& t, FinMode mode);

}  // namespace gausscond

#endif
