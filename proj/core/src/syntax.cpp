#include "gausscond/syntax.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gausscond {

Ty Ty::real() { return Ty(Kind::Real, nullptr, nullptr); }
Ty Ty::unit() { return Ty(Kind::Unit, nullptr, nullptr); }
Ty Ty::pair(Ty fst, Ty snd) {
  return Ty(Kind::Pair, std::make_shared<const Ty>(std::move(fst)),
            std::make_shared<const Ty>(std::move(snd)));
}

const Ty& Ty::fst() const {
  if (kind_ != Kind::Pair) throw std::logic_error("Ty::fst on non-pair");
  return *fst_;
}

const Ty& Ty::snd() const {
  if (kind_ != Kind::Pair) throw std::logic_error("Ty::snd on non-pair");
  return *snd_;
}

int Ty::flat_dim() const {
  switch (kind_) {
    case Kind::Real: return 1;
    case Kind::Unit: return 0;
    case Kind::Pair: return fst_->flat_dim() + snd_->flat_dim();
  }
  return 0;
}

bool Ty::operator==(const Ty& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ != Kind::Pair) return true;
  return *fst_ == *other.fst_ && *snd_ == *other.snd_;
}

std::string Ty::show() const {
  switch (kind_) {
    case Kind::Real: return "R";
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
TermPtr node(TermKind kind, std::string name = {}, std::string name2 = {},
             double value = 0.0, TermPtr a = nullptr, TermPtr b = nullptr) {
  auto t = std::make_shared<Term>();
  t->kind = kind;
  t->name = std::move(name);
  t->name2 = std::move(name2);
  t->value = value;
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}
}  // namespace

TermPtr mk_var(std::string name) { return node(TermKind::Var, std::move(name)); }
TermPtr mk_const(double value) { return node(TermKind::Const, {}, {}, value); }
TermPtr mk_add(TermPtr a, TermPtr b) {
  return node(TermKind::Add, {}, {}, 0.0, std::move(a), std::move(b));
}
TermPtr mk_scale(double value, TermPtr a) {
  return node(TermKind::Scale, {}, {}, value, std::move(a));
}
TermPtr mk_pair(TermPtr a, TermPtr b) {
  return node(TermKind::Pair, {}, {}, 0.0, std::move(a), std::move(b));
}
TermPtr mk_unit() { return node(TermKind::Unit); }
TermPtr mk_let(std::string name, TermPtr bound, TermPtr body) {
  return node(TermKind::Let, std::move(name), {}, 0.0, std::move(bound), std::move(body));
}
TermPtr mk_let_pair(std::string fst, std::string snd, TermPtr bound, TermPtr body) {
  return node(TermKind::LetPair, std::move(fst), std::move(snd), 0.0,
              std::move(bound), std::move(body));
}
TermPtr mk_normal() { return node(TermKind::Normal); }
TermPtr mk_cond_eq(TermPtr a, TermPtr b) {
  return node(TermKind::CondEq, {}, {}, 0.0, std::move(a), std::move(b));
}
TermPtr mk_seq(TermPtr s, TermPtr t) {
  return mk_let("_", std::move(s), std::move(t));
}

int ctx_flat_dim(const Ctx& ctx) {
  int n = 0;
  for (const auto& [name, ty] : ctx) n += ty.flat_dim();
  return n;
}

std::vector<int> ctx_offsets(const Ctx& ctx) {
  std::vector<int> offsets;
  int n = 0;
  for (const auto& [name, ty] : ctx) {
    offsets.push_back(n);
    n += ty.flat_dim();
  }
  return offsets;
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name || a->name2 != b->name2 ||
      a->value != b->value) {
    return false;
  }
  return term_equal(a->a, b->a) && term_equal(a->b, b->b);
}

int effect_symbol_count(const TermPtr& t) {
  if (!t) return 0;
  int self = 0;
  switch (t->kind) {
    case TermKind::Normal:
    case TermKind::CondEq:
    case TermKind::Let:
    case TermKind::LetPair:
      self = 1;
      break;
    default:
      break;
  }
  return self + effect_symbol_count(t->a) + effect_symbol_count(t->b);
}

namespace {
void collect_free(const TermPtr& t, std::vector<std::string>& bound,
                  std::vector<std::string>& out, std::set<std::string>& seen) {
  if (!t) return;
  switch (t->kind) {
    case TermKind::Var: {
      for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
        if (*it == t->name) return;
      }
      if (seen.insert(t->name).second) out.push_back(t->name);
      return;
    }
    case TermKind::Let:
      collect_free(t->a, bound, out, seen);
      bound.push_back(t->name);
      collect_free(t->b, bound, out, seen);
      bound.pop_back();
      return;
    case TermKind::LetPair:
      collect_free(t->a, bound, out, seen);
      bound.push_back(t->name);
      bound.push_back(t->name2);
      collect_free(t->b, bound, out, seen);
      bound.pop_back();
      bound.pop_back();
      return;
    default:
      collect_free(t->a, bound, out, seen);
      collect_free(t->b, bound, out, seen);
      return;
  }
}
}  // namespace

std::vector<std::string> free_vars(const TermPtr& t) {
  std::vector<std::string> bound, out;
  std::set<std::string> seen;
  collect_free(t, bound, out, seen);
  return out;
}

TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& v) {
  if (!t) return t;
  switch (t->kind) {
    case TermKind::Var:
      return t->name == x ? v : t;
    case TermKind::Let: {
      TermPtr bound = substitute(t->a, x, v);
      TermPtr body = t->name == x ? t->b : substitute(t->b, x, v);
      return mk_let(t->name, bound, body);
    }
    case TermKind::LetPair: {
      TermPtr bound = substitute(t->a, x, v);
      bool shadows = t->name == x || t->name2 == x;
      TermPtr body = shadows ? t->b : substitute(t->b, x, v);
      return mk_let_pair(t->name, t->name2, bound, body);
    }
    case TermKind::Add:
      return mk_add(substitute(t->a, x, v), substitute(t->b, x, v));
    case TermKind::Scale:
      return mk_scale(t->value, substitute(t->a, x, v));
    case TermKind::Pair:
      return mk_pair(substitute(t->a, x, v), substitute(t->b, x, v));
    case TermKind::CondEq:
      return mk_cond_eq(substitute(t->a, x, v), substitute(t->b, x, v));
    default:
      return t;
  }
}

namespace {
bool is_reserved(const std::string& name) {
  if (name.size() < 2 || name[0] != 'z') return false;
  for (size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
  }
  return true;
}

TermPtr rename_binders(const TermPtr& t, int& counter) {
  if (!t) return t;
  switch (t->kind) {
    case TermKind::Let: {
      TermPtr bound = rename_binders(t->a, counter);
      TermPtr body = rename_binders(t->b, counter);
      if (is_reserved(t->name)) {
        std::string fresh = "src_" + t->name + "_" + std::to_string(++counter);
        body = substitute(body, t->name, mk_var(fresh));
        return mk_let(fresh, bound, body);
      }
      return mk_let(t->name, bound, body);
    }
    case TermKind::LetPair: {
      TermPtr bound = rename_binders(t->a, counter);
      TermPtr body = rename_binders(t->b, counter);
      std::string n1 = t->name, n2 = t->name2;
      if (is_reserved(n1)) {
        std::string fresh = "src_" + n1 + "_" + std::to_string(++counter);
        body = substitute(body, n1, mk_var(fresh));
        n1 = fresh;
      }
      if (is_reserved(n2)) {
        std::string fresh = "src_" + n2 + "_" + std::to_string(++counter);
        body = substitute(body, n2, mk_var(fresh));
        n2 = fresh;
      }
      return mk_let_pair(n1, n2, bound, body);
    }
    case TermKind::Add:
      return mk_add(rename_binders(t->a, counter), rename_binders(t->b, counter));
    case TermKind::Scale:
      return mk_scale(t->value, rename_binders(t->a, counter));
    case TermKind::Pair:
      return mk_pair(rename_binders(t->a, counter), rename_binders(t->b, counter));
    case TermKind::CondEq:
      return mk_cond_eq(rename_binders(t->a, counter), rename_binders(t->b, counter));
    default:
      return t;
  }
}
}  // namespace

TermPtr rename_reserved_binders(const TermPtr& t) {
  int counter = 0;
  return rename_binders(t, counter);
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "0";
  return std::string(buf, ptr);
}

namespace {

// precedence: 0 = top (let/seq), 1 = condition, 2 = sum, 3 = scale, 4 = atom
void print_rec(const TermPtr& t, int min_prec, std::ostream& os) {
  auto paren = [&](int prec, auto&& body) {
    if (prec < min_prec) {
      os << "(";
      body();
      os << ")";
    } else {
      body();
    }
  };
  switch (t->kind) {
    case TermKind::Var:
      os << t->name;
      return;
    case TermKind::Const:
      os << format_double(t->value);
      return;
    case TermKind::Unit:
      os << "()";
      return;
    case TermKind::Normal:
      os << "normal()";
      return;
    case TermKind::Pair: {
      os << "(";
      const Term* cur = t.get();
      while (true) {
        print_rec(cur->a, 0, os);
        os << ", ";
        if (cur->b->kind == TermKind::Pair) {
          cur = cur->b.get();
        } else {
          print_rec(cur->b, 0, os);
          break;
        }
      }
      os << ")";
      return;
    }
    case TermKind::Add:
      paren(2, [&] {
        print_rec(t->a, 2, os);
        os << " + ";
        print_rec(t->b, 3, os);
      });
      return;
    case TermKind::Scale:
      paren(3, [&] {
        os << format_double(t->value) << " * ";
        print_rec(t->a, 4, os);
      });
      return;
    case TermKind::CondEq:
      paren(1, [&] {
        print_rec(t->a, 2, os);
        os << " =:= ";
        print_rec(t->b, 2, os);
      });
      return;
    case TermKind::Let:
      paren(0, [&] {
        if (t->name == "_") {
          print_rec(t->a, 1, os);
          os << "; ";
        } else {
          os << "let " << t->name << " = ";
          print_rec(t->a, 0, os);
          os << " in ";
        }
        print_rec(t->b, 0, os);
      });
      return;
    case TermKind::LetPair:
      paren(0, [&] {
        os << "let (" << t->name << ", " << t->name2 << ") = ";
        print_rec(t->a, 0, os);
        os << " in ";
        print_rec(t->b, 0, os);
      });
      return;
  }
}

}  // namespace

std::string print_term(const TermPtr& t) {
  std::ostringstream os;
  print_rec(t, 0, os);
  return os.str();
}

}  // namespace gausscond
