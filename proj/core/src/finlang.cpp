#include "gausscond/finlang.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace gausscond {

FinTy FinTy::base(FinSpacePtr space) {
  FinTy t;
  t.kind_ = Kind::Base;
  t.space_ = std::move(space);
  return t;
}

FinTy FinTy::unit() { return FinTy(); }

FinTy FinTy::pair(FinTy fst, FinTy snd) {
  FinTy t;
  t.kind_ = Kind::Pair;
  t.fst_ = std::make_shared<const FinTy>(std::move(fst));
  t.snd_ = std::make_shared<const FinTy>(std::move(snd));
  return t;
}

const FinTy& FinTy::fst() const {
  if (kind_ != Kind::Pair) throw std::logic_error("FinTy::fst on non-pair");
  return *fst_;
}

const FinTy& FinTy::snd() const {
  if (kind_ != Kind::Pair) throw std::logic_error("FinTy::snd on non-pair");
  return *snd_;
}

namespace {
void collect_factors(const FinTy& t, std::vector<FinSpacePtr>& out) {
  switch (t.kind()) {
    case FinTy::Kind::Base:
      out.push_back(t.space());
      return;
    case FinTy::Kind::Unit:
      return;
    case FinTy::Kind::Pair:
      collect_factors(t.fst(), out);
      collect_factors(t.snd(), out);
      return;
  }
}
}  // namespace

FinObj FinTy::flat() const {
  std::vector<FinSpacePtr> factors;
  collect_factors(*this, factors);
  return FinObj(std::move(factors));
}

bool FinTy::operator==(const FinTy& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::Unit: return true;
    case Kind::Base:
      return space_ == other.space_ || space_->outcomes == other.space_->outcomes;
    case Kind::Pair:
      return *fst_ == *other.fst_ && *snd_ == *other.snd_;
  }
  return false;
}

std::string FinTy::show() const {
  switch (kind_) {
    case Kind::Base: return space_->name;
    case Kind::Unit: return "I";
    case Kind::Pair: {
      std::string f = fst_->show();
      if (fst_->kind() == Kind::Pair) f = "(" + f + ")";
      return f + " * " + snd_->show();
    }
  }
  return "?";
}

namespace {
PTermPtr pnode(PTermKind kind, std::string name = {}, std::string name2 = {},
               Rat number = Rat(0), std::shared_ptr<const SubKernel> kernel = nullptr,
               PTermPtr a = nullptr, PTermPtr b = nullptr, PTermPtr c = nullptr) {
  auto t = std::make_shared<PTerm>();
  t->kind = kind;
  t->name = std::move(name);
  t->name2 = std::move(name2);
  t->number = std::move(number);
  t->kernel = std::move(kernel);
  t->a = std::move(a);
  t->b = std::move(b);
  t->c = std::move(c);
  return t;
}
}  // namespace

PTermPtr fin_var(std::string name) { return pnode(PTermKind::Var, std::move(name)); }
PTermPtr fin_unit() { return pnode(PTermKind::Unit); }
PTermPtr fin_pair(PTermPtr a, PTermPtr b) {
  return pnode(PTermKind::Pair, {}, {}, Rat(0), nullptr, std::move(a), std::move(b));
}
PTermPtr fin_let(std::string name, PTermPtr bound, PTermPtr body) {
  return pnode(PTermKind::Let, std::move(name), {}, Rat(0), nullptr, std::move(bound),
               std::move(body));
}
PTermPtr fin_let_pair(std::string fst, std::string snd, PTermPtr bound, PTermPtr body) {
  return pnode(PTermKind::LetPair, std::move(fst), std::move(snd), Rat(0), nullptr,
               std::move(bound), std::move(body));
}
PTermPtr fin_seq(PTermPtr s, PTermPtr t) {
  return fin_let("_", std::move(s), std::move(t));
}
PTermPtr fin_bernoulli(Rat p) {
  return pnode(PTermKind::Bernoulli, {}, {}, std::move(p));
}
PTermPtr fin_uniform(std::string space) {
  return pnode(PTermKind::Uniform, std::move(space));
}
PTermPtr fin_score(Rat r) { return pnode(PTermKind::Score, {}, {}, std::move(r)); }
PTermPtr fin_cond_eq(PTermPtr a, PTermPtr b) {
  return pnode(PTermKind::CondEq, {}, {}, Rat(0), nullptr, std::move(a), std::move(b));
}
PTermPtr fin_if(PTermPtr cond, PTermPtr then_branch, PTermPtr else_branch) {
  return pnode(PTermKind::If, {}, {}, Rat(0), nullptr, std::move(cond),
               std::move(then_branch), std::move(else_branch));
}
PTermPtr fin_ite(PTermPtr cond, PTermPtr then_branch, PTermPtr else_branch) {
  return pnode(PTermKind::Ite, {}, {}, Rat(0), nullptr, std::move(cond),
               std::move(then_branch), std::move(else_branch));
}
PTermPtr fin_kern(SubKernel kernel, PTermPtr arg) {
  return pnode(PTermKind::Kern, {}, {}, Rat(0),
               std::make_shared<const SubKernel>(std::move(kernel)), std::move(arg));
}

SpaceTable::SpaceTable() {
  FinSpacePtr b = bool_space();
  spaces_[b->name] = b;
  outcomes_["false"] = {b, 0};
  outcomes_["true"] = {b, 1};
}

void SpaceTable::declare(const std::string& name, std::vector<std::string> outcomes) {
  if (spaces_.count(name)) {
    throw std::invalid_argument("space '" + name + "' is already declared");
  }
  FinSpacePtr space = make_space(name, std::move(outcomes));
  for (size_t i = 0; i < space->outcomes.size(); ++i) {
    const std::string& o = space->outcomes[i];
    if (outcomes_.count(o)) {
      throw std::invalid_argument("outcome '" + o + "' is already declared");
    }
    outcomes_[o] = {space, static_cast<long>(i)};
  }
  spaces_[name] = space;
}

FinSpacePtr SpaceTable::space(const std::string& name) const {
  auto it = spaces_.find(name);
  return it == spaces_.end() ? nullptr : it->second;
}

std::optional<std::pair<FinSpacePtr, long>> SpaceTable::outcome(
    const std::string& name) const {
  auto it = outcomes_.find(name);
  if (it == outcomes_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// typechecking

namespace {

struct FinTypeFail {
  FinTypeError error;
};

[[noreturn]] void tfail(const std::string& msg) { throw FinTypeFail{FinTypeError{msg}}; }

FinTy fin_check(const SpaceTable& spaces, FinCtx& ctx, const PTermPtr& t, FinMode mode) {
  switch (t->kind) {
    case PTermKind::Var: {
      for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
        if (it->first == t->name) return it->second;
      }
      if (auto o = spaces.outcome(t->name)) return FinTy::base(o->first);
      tfail("unbound name '" + t->name + "'");
    }
    case PTermKind::Unit:
      return FinTy::unit();
    case PTermKind::Pair:
      return FinTy::pair(fin_check(spaces, ctx, t->a, mode),
                         fin_check(spaces, ctx, t->b, mode));
    case PTermKind::Let: {
      FinTy bound = fin_check(spaces, ctx, t->a, mode);
      ctx.emplace_back(t->name, bound);
      FinTy body = fin_check(spaces, ctx, t->b, mode);
      ctx.pop_back();
      return body;
    }
    case PTermKind::LetPair: {
      FinTy bound = fin_check(spaces, ctx, t->a, mode);
      if (bound.kind() != FinTy::Kind::Pair) {
        tfail("pattern let requires a pair (got " + bound.show() + ")");
      }
      ctx.emplace_back(t->name, bound.fst());
      ctx.emplace_back(t->name2, bound.snd());
      FinTy body = fin_check(spaces, ctx, t->b, mode);
      ctx.pop_back();
      ctx.pop_back();
      return body;
    }
    case PTermKind::Bernoulli:
      if (t->number < 0 || t->number > 1) tfail("bernoulli parameter out of [0, 1]");
      return FinTy::base(bool_space());
    case PTermKind::Uniform: {
      FinSpacePtr s = spaces.space(t->name);
      if (!s) tfail("unknown space '" + t->name + "'");
      return FinTy::base(s);
    }
    case PTermKind::Score:
      if (t->number < 0 || t->number > 1) tfail("score factor out of [0, 1]");
      return FinTy::unit();
    case PTermKind::CondEq: {
      FinTy a = fin_check(spaces, ctx, t->a, mode);
      FinTy b = fin_check(spaces, ctx, t->b, mode);
      if (a != b) {
        tfail("'=:=' needs equal types (got " + a.show() + " and " + b.show() + ")");
      }
      return FinTy::unit();
    }
    case PTermKind::If: {
      if (mode == FinMode::PSL) {
        tfail("if-then-else is not available in straight-line mode");
      }
      FinTy c = fin_check(spaces, ctx, t->a, mode);
      if (c != FinTy::base(bool_space())) tfail("if condition must be boolean");
      FinTy x = fin_check(spaces, ctx, t->b, mode);
      FinTy y = fin_check(spaces, ctx, t->c, mode);
      if (x != y) tfail("if branches need equal types");
      return x;
    }
    case PTermKind::Ite: {
      FinTy c = fin_check(spaces, ctx, t->a, mode);
      if (c != FinTy::base(bool_space())) tfail("ite condition must be boolean");
      FinTy x = fin_check(spaces, ctx, t->b, mode);
      FinTy y = fin_check(spaces, ctx, t->c, mode);
      if (x != y) tfail("ite branches need equal types");
      return x;
    }
    case PTermKind::Kern: {
      FinTy a = fin_check(spaces, ctx, t->a, mode);
      if (!(a.flat() == t->kernel->dom())) {
        tfail("kernel argument does not match its domain");
      }
      // kernels carry only a flattened codomain; expose it as a type
      FinTy out = FinTy::unit();
      const auto& factors = t->kernel->cod().factors();
      for (size_t i = factors.size(); i-- > 0;) {
        FinTy base = FinTy::base(factors[i]);
        out = out.kind() == FinTy::Kind::Unit ? base : FinTy::pair(base, out);
      }
      return out;
    }
  }
  tfail("malformed term");
}

}  // namespace

std::variant<FinTy, FinTypeError> fin_typecheck(const SpaceTable& spaces,
                                                const FinCtx& ctx, const PTermPtr& t,
                                                FinMode mode) {
  FinCtx working = ctx;
  try {
    return fin_check(spaces, working, t, mode);
  } catch (const FinTypeFail& f) {
    return f.error;
  }
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

FinObj ctx_obj(const FinCtx& ctx) {
  std::vector<FinSpacePtr> factors;
  for (const auto& [name, ty] : ctx) collect_factors(ty, factors);
  return FinObj(std::move(factors));
}

std::vector<long> factor_sizes(const FinObj& obj) {
  std::vector<long> sizes;
  for (const auto& f : obj.factors()) sizes.push_back(static_cast<long>(f->outcomes.size()));
  return sizes;
}

// deterministic kernel selecting the factor range [lo, hi) of the domain
SubKernel selector_kernel(const FinObj& dom, size_t lo, size_t hi) {
  std::vector<FinSpacePtr> kept(dom.factors().begin() + lo, dom.factors().begin() + hi);
  FinObj cod = FinObj(kept);
  std::vector<long> sizes = factor_sizes(dom);
  SubKernel out = SubKernel::zero(dom, cod);
  for (long x = 0; x < dom.size(); ++x) {
    long rest = x, y = 0;
    std::vector<long> digits(sizes.size());
    for (size_t i = sizes.size(); i-- > 0;) {
      digits[i] = rest % sizes[i];
      rest /= sizes[i];
    }
    for (size_t i = lo; i < hi; ++i) y = y * sizes[i] + digits[i];
    out.at(y, x) = 1;
  }
  return out;
}

FinTy infer(const SpaceTable& spaces, const FinCtx& ctx, const PTermPtr& t, FinMode mode) {
  FinCtx working = ctx;
  try {
    return fin_check(spaces, working, t, mode);
  } catch (const FinTypeFail& f) {
    throw std::invalid_argument("type error: " + f.error.message);
  }
}

SubKernel eval_rec(const SpaceTable& spaces, const FinCtx& ctx, const PTermPtr& t,
                   FinMode mode) {
  FinObj gamma = ctx_obj(ctx);
  switch (t->kind) {
    case PTermKind::Var: {
      size_t factor_pos = 0;
      for (size_t i = 0; i < ctx.size(); ++i) {
        size_t width = ctx[i].second.flat().factors().size();
        // rightmost binding wins, so scan for the last match
        bool is_last_match = ctx[i].first == t->name;
        for (size_t j = i + 1; j < ctx.size() && is_last_match; ++j) {
          if (ctx[j].first == t->name) is_last_match = false;
        }
        if (is_last_match) {
          return selector_kernel(gamma, factor_pos, factor_pos + width);
        }
        factor_pos += width;
      }
      if (auto o = spaces.outcome(t->name)) {
        SubKernel lit = SubKernel::zero(gamma, FinObj::base(o->first));
        for (long x = 0; x < gamma.size(); ++x) lit.at(o->second, x) = 1;
        return lit;
      }
      throw std::invalid_argument("eval: unbound name '" + t->name + "'");
    }
    case PTermKind::Unit:
      return del_kernel(gamma);
    case PTermKind::Pair: {
      SubKernel a = eval_rec(spaces, ctx, t->a, mode);
      SubKernel b = eval_rec(spaces, ctx, t->b, mode);
      return compose(tensor(a, b), copy_kernel(gamma));
    }
    case PTermKind::Let: {
      FinTy bound_ty = infer(spaces, ctx, t->a, mode);
      SubKernel bound = eval_rec(spaces, ctx, t->a, mode);
      FinCtx extended = ctx;
      extended.emplace_back(t->name, bound_ty);
      SubKernel body = eval_rec(spaces, extended, t->b, mode);
      return compose(body, compose(tensor(SubKernel::identity(gamma), bound),
                                   copy_kernel(gamma)));
    }
    case PTermKind::LetPair: {
      FinTy bound_ty = infer(spaces, ctx, t->a, mode);
      if (bound_ty.kind() != FinTy::Kind::Pair) {
        throw std::invalid_argument("eval: pattern let over a non-pair");
      }
      SubKernel bound = eval_rec(spaces, ctx, t->a, mode);
      FinCtx extended = ctx;
      extended.emplace_back(t->name, bound_ty.fst());
      extended.emplace_back(t->name2, bound_ty.snd());
      SubKernel body = eval_rec(spaces, extended, t->b, mode);
      return compose(body, compose(tensor(SubKernel::identity(gamma), bound),
                                   copy_kernel(gamma)));
    }
    case PTermKind::Bernoulli: {
      SubKernel out = SubKernel::zero(gamma, FinObj::base(bool_space()));
      for (long x = 0; x < gamma.size(); ++x) {
        out.at(0, x) = 1 - t->number;
        out.at(1, x) = t->number;
      }
      return out;
    }
    case PTermKind::Uniform: {
      FinSpacePtr s = spaces.space(t->name);
      if (!s) throw std::invalid_argument("unknown space '" + t->name + "'");
      FinObj obj = FinObj::base(s);
      SubKernel out = SubKernel::zero(gamma, obj);
      for (long x = 0; x < gamma.size(); ++x) {
        for (long y = 0; y < obj.size(); ++y) out.at(y, x) = Rat(1) / obj.size();
      }
      return out;
    }
    case PTermKind::Score:
      return score_kernel(gamma, t->number);
    case PTermKind::CondEq: {
      FinTy a_ty = infer(spaces, ctx, t->a, mode);
      SubKernel pair = eval_rec(spaces, ctx, fin_pair(t->a, t->b), mode);
      return compose(equality_effect(a_ty.flat()), pair);
    }
    case PTermKind::If: {
      if (mode == FinMode::PSL) {
        throw std::invalid_argument("if-then-else is not available in straight-line mode");
      }
      SubKernel c = eval_rec(spaces, ctx, t->a, mode);
      SubKernel yes = eval_rec(spaces, ctx, t->b, mode);
      SubKernel no = eval_rec(spaces, ctx, t->c, mode);
      SubKernel out = SubKernel::zero(gamma, yes.cod());
      for (long x = 0; x < gamma.size(); ++x) {
        for (long y = 0; y < yes.cod().size(); ++y) {
          out.at(y, x) = yes.at(y, x) * c.at(1, x) + no.at(y, x) * c.at(0, x);
        }
      }
      return out;
    }
    case PTermKind::Ite: {
      FinTy branch_ty = infer(spaces, ctx, t->b, mode);
      SubKernel triple =
          eval_rec(spaces, ctx, fin_pair(t->a, fin_pair(t->b, t->c)), mode);
      return compose(ite_kernel(branch_ty.flat()), triple);
    }
    case PTermKind::Kern: {
      SubKernel arg = eval_rec(spaces, ctx, t->a, mode);
      return compose(*t->kernel, arg);
    }
  }
  throw std::invalid_argument("eval: malformed term");
}

}  // namespace

SubKernel eval_term(const SpaceTable& spaces, const FinCtx& ctx, const PTermPtr& t,
                    FinMode mode) {
  infer(spaces, ctx, t, mode);
  return eval_rec(spaces, ctx, t, mode);
}

Rat model_evidence(const SpaceTable& spaces, const PTermPtr& t) {
  SubKernel direct = eval_term(spaces, {}, t, FinMode::P);
  Rat z = direct.column_sum(0);

  PTermPtr wrapper = fin_if(fin_bernoulli(Rat(1) / 2), fin_seq(t, fin_var("true")),
                            fin_var("false"));
  SubDist w = eval_term(spaces, {}, wrapper, FinMode::P);
  SubDist normalized = normalize_dist(w);
  Rat p = normalized.at(1, 0);
  Rat reconstructed = p / (1 - p);
  if (reconstructed != z) {
    throw std::logic_error("model_evidence: wrapper reconstruction disagrees");
  }
  return z;
}

bool equiv_fin(const SpaceTable& spaces, const FinCtx& ctx, const PTermPtr& s,
               const PTermPtr& t, FinMode mode) {
  FinTy ty_s = infer(spaces, ctx, s, mode);
  FinTy ty_t = infer(spaces, ctx, t, mode);
  if (ty_s != ty_t) {
    throw std::invalid_argument("equiv_fin: terms have different types");
  }
  SubKernel ks = eval_term(spaces, ctx, s, mode);
  SubKernel kt = eval_term(spaces, ctx, t, mode);
  return mode == FinMode::PSL ? proportional(ks, kt) : ks == kt;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

enum class FTok {
  Ident, Number, LParen, RParen, LBrace, RBrace, Comma, Semi, Newline, Slash,
  Assign, CondEq, KwLet, KwIn, KwIf, KwThen, KwElse, KwSpace, KwReturn,
  KwBernoulli, KwScore, KwUniform, KwIte, End,
};

struct FToken {
  FTok kind;
  std::string text;
  Rat number;
  int line = 1;
  int col = 1;
};

const char* ftok_name(FTok t) {
  switch (t) {
    case FTok::Ident: return "identifier";
    case FTok::Number: return "number";
    case FTok::LParen: return "'('";
    case FTok::RParen: return "')'";
    case FTok::LBrace: return "'{'";
    case FTok::RBrace: return "'}'";
    case FTok::Comma: return "','";
    case FTok::Semi: return "';'";
    case FTok::Newline: return "newline";
    case FTok::Slash: return "'/'";
    case FTok::Assign: return "'='";
    case FTok::CondEq: return "'=:='";
    case FTok::KwLet: return "'let'";
    case FTok::KwIn: return "'in'";
    case FTok::KwIf: return "'if'";
    case FTok::KwThen: return "'then'";
    case FTok::KwElse: return "'else'";
    case FTok::KwSpace: return "'space'";
    case FTok::KwReturn: return "'return'";
    case FTok::KwBernoulli: return "'bernoulli'";
    case FTok::KwScore: return "'score'";
    case FTok::KwUniform: return "'uniform'";
    case FTok::KwIte: return "'ite'";
    case FTok::End: return "end of input";
  }
  return "?";
}

struct FParseFail {
  ParseError error;
};

[[noreturn]] void ffail(const FToken& at, std::string message,
                        std::vector<std::string> expected = {}) {
  throw FParseFail{ParseError{at.line, at.col, std::move(message), std::move(expected)}};
}

std::vector<FToken> fin_tokenize(const std::string& text) {
  std::vector<FToken> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](FTok kind, std::string t, int l, int c) {
    out.push_back(FToken{kind, std::move(t), Rat(0), l, c});
  };
  while (i < text.size()) {
    char c = text[i];
    int tl = line, tc = col;
    if (c == '\n') {
      push(FTok::Newline, "\n", tl, tc);
      ++i; ++line; col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') { ++i; ++col; continue; }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') { ++i; ++col; }
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      Rat value(text.substr(start, i - start));
      if (i < text.size() && text[i] == '.') {
        ++i;
        size_t frac_start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == frac_start) {
          ffail(FToken{FTok::Number, "", Rat(0), tl, tc}, "malformed number literal",
                {"digit"});
        }
        std::string frac = text.substr(frac_start, i - frac_start);
        Rat scale = 1;
        for (size_t d = 0; d < frac.size(); ++d) scale *= 10;
        value += Rat(frac) / scale;
      }
      FToken tok{FTok::Number, text.substr(start, i - start), value, tl, tc};
      out.push_back(tok);
      col += static_cast<int>(i - start);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        ++i;
      }
      std::string word = text.substr(start, i - start);
      FTok kind = FTok::Ident;
      if (word == "let") kind = FTok::KwLet;
      else if (word == "in") kind = FTok::KwIn;
      else if (word == "if") kind = FTok::KwIf;
      else if (word == "then") kind = FTok::KwThen;
      else if (word == "else") kind = FTok::KwElse;
      else if (word == "space") kind = FTok::KwSpace;
      else if (word == "return") kind = FTok::KwReturn;
      else if (word == "bernoulli") kind = FTok::KwBernoulli;
      else if (word == "score") kind = FTok::KwScore;
      else if (word == "uniform") kind = FTok::KwUniform;
      else if (word == "ite") kind = FTok::KwIte;
      push(kind, word, tl, tc);
      col += static_cast<int>(i - start);
      continue;
    }
    if (text.compare(i, 3, "=:=") == 0) {
      push(FTok::CondEq, "=:=", tl, tc);
      i += 3; col += 3;
      continue;
    }
    switch (c) {
      case '(': push(FTok::LParen, "(", tl, tc); break;
      case ')': push(FTok::RParen, ")", tl, tc); break;
      case '{': push(FTok::LBrace, "{", tl, tc); break;
      case '}': push(FTok::RBrace, "}", tl, tc); break;
      case ',': push(FTok::Comma, ",", tl, tc); break;
      case ';': push(FTok::Semi, ";", tl, tc); break;
      case '/': push(FTok::Slash, "/", tl, tc); break;
      case '=': push(FTok::Assign, "=", tl, tc); break;
      default:
        ffail(FToken{FTok::End, "", Rat(0), tl, tc},
              std::string("unexpected character '") + c + "'");
    }
    ++i; ++col;
  }
  out.push_back(FToken{FTok::End, "", Rat(0), line, col});
  return out;
}

class FinParser {
 public:
  explicit FinParser(std::vector<FToken> toks) : toks_(std::move(toks)) {}

  FinProgram parse_program() {
    FinProgram prog;
    skip_newlines();
    while (peek().kind == FTok::KwSpace) {
      parse_space_decl(prog.spaces);
      skip_newlines();
    }
    prog.term = parse_seq();
    eat_separator();
    if (peek().kind != FTok::End) {
      ffail(peek(), "trailing input after program", {"end of input"});
    }
    return prog;
  }

 private:
  std::vector<FToken> toks_;
  size_t pos_ = 0;
  int fresh_ = 0;

  const FToken& raw_peek() const {
    return pos_ < toks_.size() ? toks_[pos_] : toks_.back();
  }

  const FToken& peek(size_t ahead = 0) const {
    size_t i = pos_, seen = 0;
    while (i < toks_.size()) {
      if (toks_[i].kind != FTok::Newline) {
        if (seen == ahead) return toks_[i];
        ++seen;
      }
      ++i;
    }
    return toks_.back();
  }

  FToken advance() {
    skip_newlines();
    FToken t = raw_peek();
    if (t.kind != FTok::End) ++pos_;
    return t;
  }

  void skip_newlines() {
    while (raw_peek().kind == FTok::Newline) ++pos_;
  }

  FToken expect(FTok kind, const char* what) {
    if (peek().kind != kind) {
      ffail(peek(), std::string("unexpected ") + ftok_name(peek().kind), {what});
    }
    return advance();
  }

  static bool starts_expression(FTok k) {
    switch (k) {
      case FTok::Ident: case FTok::LParen: case FTok::KwLet: case FTok::KwIf:
      case FTok::KwReturn: case FTok::KwBernoulli: case FTok::KwScore:
      case FTok::KwUniform: case FTok::KwIte:
        return true;
      default:
        return false;
    }
  }

  bool at_separator() {
    size_t i = pos_;
    bool saw = false;
    while (i < toks_.size() &&
           (toks_[i].kind == FTok::Newline || toks_[i].kind == FTok::Semi)) {
      saw = true;
      ++i;
    }
    return saw && i < toks_.size() && starts_expression(toks_[i].kind);
  }

  void eat_separator() {
    while (raw_peek().kind == FTok::Newline || raw_peek().kind == FTok::Semi) ++pos_;
  }

  std::string fresh_name() { return "_p" + std::to_string(++fresh_); }

  void parse_space_decl(SpaceTable& spaces) {
    FToken kw = expect(FTok::KwSpace, "'space'");
    FToken name = expect(FTok::Ident, "identifier");
    expect(FTok::Assign, "'='");
    expect(FTok::LBrace, "'{'");
    std::vector<std::string> outcomes;
    outcomes.push_back(expect(FTok::Ident, "identifier").text);
    while (peek().kind == FTok::Comma) {
      advance();
      outcomes.push_back(expect(FTok::Ident, "identifier").text);
    }
    expect(FTok::RBrace, "'}'");
    try {
      spaces.declare(name.text, std::move(outcomes));
    } catch (const std::invalid_argument& e) {
      ffail(kw, e.what());
    }
    if (!at_separator() && peek().kind != FTok::KwSpace && peek().kind != FTok::End) {
      ffail(peek(), "space declaration must end the line", {"newline"});
    }
    eat_separator();
  }

  Rat parse_rational() {
    FToken n = expect(FTok::Number, "number");
    Rat value = n.number;
    if (peek().kind == FTok::Slash) {
      advance();
      FToken d = expect(FTok::Number, "number");
      if (d.number == 0) ffail(d, "zero denominator");
      value /= d.number;
    }
    return value;
  }

  PTermPtr parse_seq() {
    if (peek().kind == FTok::KwLet) return parse_let();
    if (peek().kind == FTok::Ident && peek(1).kind == FTok::Assign) {
      FToken name = advance();
      advance();
      if (name.text == "_") ffail(name, "'_' cannot be assigned; use `e; rest`");
      PTermPtr bound = parse_expr();
      if (!at_separator()) {
        ffail(peek(), "assignment must be followed by further statements",
              {"newline", "';'"});
      }
      eat_separator();
      return fin_let(name.text, bound, parse_seq());
    }
    PTermPtr head = parse_expr();
    if (at_separator()) {
      eat_separator();
      return fin_seq(head, parse_seq());
    }
    return head;
  }

  PTermPtr parse_let() {
    expect(FTok::KwLet, "'let'");
    std::vector<std::string> pattern;
    if (peek().kind == FTok::LParen) {
      advance();
      pattern.push_back(expect(FTok::Ident, "identifier").text);
      while (peek().kind == FTok::Comma) {
        advance();
        pattern.push_back(expect(FTok::Ident, "identifier").text);
      }
      expect(FTok::RParen, "')'");
      if (pattern.size() < 2) ffail(peek(), "tuple pattern needs at least two names");
      for (size_t i = 0; i < pattern.size(); ++i) {
        for (size_t j = i + 1; j < pattern.size(); ++j) {
          if (pattern[i] != "_" && pattern[i] == pattern[j]) {
            ffail(peek(), "tuple pattern names must be distinct");
          }
        }
      }
    } else {
      pattern.push_back(expect(FTok::Ident, "identifier").text);
    }
    expect(FTok::Assign, "'='");
    if (peek().kind == FTok::KwIn || peek().kind == FTok::End) {
      ffail(peek(), "missing bound expression", {"expression"});
    }
    PTermPtr bound = parse_seq();
    PTermPtr body;
    if (peek().kind == FTok::KwIn) {
      advance();
      body = parse_seq();
    } else if (at_separator()) {
      eat_separator();
      body = parse_seq();
    } else {
      ffail(peek(), "let binding needs 'in' or further statements",
            {"'in'", "newline", "';'"});
    }
    if (pattern.size() == 1) return fin_let(pattern[0], bound, body);
    std::vector<std::pair<std::string, std::string>> splits;
    for (size_t i = 0; i + 1 < pattern.size(); ++i) {
      std::string rest = (i + 2 == pattern.size()) ? pattern[i + 1] : fresh_name();
      splits.emplace_back(pattern[i], rest);
    }
    PTermPtr out = body;
    for (size_t i = splits.size(); i-- > 1;) {
      out = fin_let_pair(splits[i].first, splits[i].second,
                         fin_var(splits[i - 1].second), out);
    }
    return fin_let_pair(splits[0].first, splits[0].second, bound, out);
  }

  PTermPtr parse_expr() {
    if (peek().kind == FTok::KwIf) {
      advance();
      PTermPtr c = parse_expr();
      expect(FTok::KwThen, "'then'");
      PTermPtr a = parse_expr();
      expect(FTok::KwElse, "'else'");
      PTermPtr b = parse_expr();
      return fin_if(c, a, b);
    }
    if (peek().kind == FTok::KwReturn) {
      advance();
      return parse_expr();
    }
    PTermPtr lhs = parse_atom();
    if (peek().kind == FTok::CondEq) {
      advance();
      PTermPtr rhs = parse_atom();
      return fin_cond_eq(lhs, rhs);
    }
    return lhs;
  }

  PTermPtr parse_atom() {
    FToken t = peek();
    switch (t.kind) {
      case FTok::Ident:
        advance();
        if (t.text == "_") ffail(t, "'_' is not a referenceable variable");
        return fin_var(t.text);
      case FTok::KwBernoulli: {
        advance();
        expect(FTok::LParen, "'('");
        FToken at = peek();
        Rat p = parse_rational();
        expect(FTok::RParen, "')'");
        if (p < 0 || p > 1) ffail(at, "bernoulli parameter out of [0, 1]");
        return fin_bernoulli(p);
      }
      case FTok::KwScore: {
        advance();
        expect(FTok::LParen, "'('");
        FToken at = peek();
        Rat r = parse_rational();
        expect(FTok::RParen, "')'");
        if (r < 0 || r > 1) ffail(at, "score factor out of [0, 1]");
        return fin_score(r);
      }
      case FTok::KwUniform: {
        advance();
        expect(FTok::LParen, "'('");
        FToken name = expect(FTok::Ident, "identifier");
        expect(FTok::RParen, "')'");
        return fin_uniform(name.text);
      }
      case FTok::KwIte: {
        advance();
        expect(FTok::LParen, "'('");
        PTermPtr c = parse_expr();
        expect(FTok::Comma, "','");
        PTermPtr a = parse_expr();
        expect(FTok::Comma, "','");
        PTermPtr b = parse_expr();
        expect(FTok::RParen, "')'");
        return fin_ite(c, a, b);
      }
      case FTok::LParen: {
        advance();
        if (peek().kind == FTok::RParen) {
          advance();
          return fin_unit();
        }
        std::vector<PTermPtr> elems;
        elems.push_back(parse_seq());
        while (peek().kind == FTok::Comma) {
          advance();
          elems.push_back(parse_seq());
        }
        expect(FTok::RParen, "')'");
        PTermPtr out = elems.back();
        for (size_t i = elems.size() - 1; i-- > 0;) out = fin_pair(elems[i], out);
        return out;
      }
      default:
        ffail(t, std::string("unexpected ") + ftok_name(t.kind),
              {"identifier", "'('", "'let'", "'if'", "'bernoulli'", "'score'",
               "'uniform'", "'ite'"});
    }
  }
};

}  // namespace

std::variant<FinProgram, ParseError> parse_fin(const std::string& text) {
  try {
    FinParser p(fin_tokenize(text));
    return p.parse_program();
  } catch (const FParseFail& f) {
    return f.error;
  }
}

}  // namespace gausscond
