#include "gausscond/interp.hpp"

#include <cctype>
#include <stdexcept>
#include <vector>

namespace gausscond {

bool is_value(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Const:
    case TermKind::Unit:
      return true;
    case TermKind::Pair:
    case TermKind::Add:
      return is_value(t->a) && is_value(t->b);
    case TermKind::Scale:
      return is_value(t->a);
    default:
      return false;
  }
}

namespace {

Eigen::Index latent_index(const std::string& name, Eigen::Index r) {
  if (name.size() < 2 || name[0] != 'z') {
    throw std::invalid_argument("free variable '" + name + "' is not a latent");
  }
  Eigen::Index idx = 0;
  for (size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) {
      throw std::invalid_argument("free variable '" + name + "' is not a latent");
    }
    idx = idx * 10 + (name[i] - '0');
  }
  if (idx < 1 || idx > r) {
    throw std::invalid_argument("latent '" + name + "' out of range");
  }
  return idx - 1;
}

void affine_rows(const TermPtr& v, Eigen::Index r, std::vector<Vector>& rows,
                 std::vector<double>& consts) {
  switch (v->kind) {
    case TermKind::Var:
      rows.push_back(Vector::Unit(r, latent_index(v->name, r)));
      consts.push_back(0.0);
      return;
    case TermKind::Const:
      rows.push_back(Vector::Zero(r));
      consts.push_back(v->value);
      return;
    case TermKind::Unit:
      return;
    case TermKind::Pair:
      affine_rows(v->a, r, rows, consts);
      affine_rows(v->b, r, rows, consts);
      return;
    case TermKind::Add: {
      std::vector<Vector> ra, rb;
      std::vector<double> ca, cb;
      affine_rows(v->a, r, ra, ca);
      affine_rows(v->b, r, rb, cb);
      if (ra.size() != 1 || rb.size() != 1) {
        throw std::invalid_argument("'+' operand is not scalar");
      }
      rows.push_back(ra[0] + rb[0]);
      consts.push_back(ca[0] + cb[0]);
      return;
    }
    case TermKind::Scale: {
      std::vector<Vector> ra;
      std::vector<double> ca;
      affine_rows(v->a, r, ra, ca);
      if (ra.size() != 1) throw std::invalid_argument("scale operand is not scalar");
      rows.push_back(v->value * ra[0]);
      consts.push_back(v->value * ca[0]);
      return;
    }
    default:
      throw std::invalid_argument("term is not a value");
  }
}

}  // namespace

std::pair<Matrix, Vector> value_affine(const TermPtr& value, Eigen::Index r) {
  std::vector<Vector> rows;
  std::vector<double> consts;
  affine_rows(value, r, rows, consts);
  Matrix m(static_cast<Eigen::Index>(rows.size()), r);
  Vector c(static_cast<Eigen::Index>(consts.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    m.row(i) = rows[i].transpose();
    c(i) = consts[i];
  }
  return {m, c};
}

GaussState observable(const TermPtr& value, const GaussState& psi) {
  auto [m, c] = value_affine(value, psi.dim());
  return apply(affine_map(m, c), psi);
}

Ctx latent_ctx(Eigen::Index r) {
  Ctx ctx;
  for (Eigen::Index i = 1; i <= r; ++i) {
    ctx.emplace_back("z" + std::to_string(i), Ty::real());
  }
  return ctx;
}

namespace {

// let x = () in e contracts to e[()/x] anywhere; such bindings carry no
// information and do not count as reduction steps.
TermPtr collapse_unit_lets(const TermPtr& t) {
  if (!t) return t;
  switch (t->kind) {
    case TermKind::Let: {
      TermPtr bound = collapse_unit_lets(t->a);
      TermPtr body = collapse_unit_lets(t->b);
      if (bound->kind == TermKind::Unit) {
        return substitute(body, t->name, mk_unit());
      }
      return mk_let(t->name, bound, body);
    }
    case TermKind::LetPair:
      return mk_let_pair(t->name, t->name2, collapse_unit_lets(t->a),
                         collapse_unit_lets(t->b));
    case TermKind::Add:
      return mk_add(collapse_unit_lets(t->a), collapse_unit_lets(t->b));
    case TermKind::Scale:
      return mk_scale(t->value, collapse_unit_lets(t->a));
    case TermKind::Pair:
      return mk_pair(collapse_unit_lets(t->a), collapse_unit_lets(t->b));
    case TermKind::CondEq:
      return mk_cond_eq(collapse_unit_lets(t->a), collapse_unit_lets(t->b));
    default:
      return t;
  }
}

struct StepOutcome {
  bool bottom = false;
  TermPtr term;
  GaussState state;
};

StepOutcome reduce(const TermPtr& t, const GaussState& psi, double tol) {
  // reduction contexts walk the leftmost non-value position
  auto rebuild = [&](const StepOutcome& inner, auto make) -> StepOutcome {
    if (inner.bottom) return inner;
    return StepOutcome{false, make(inner.term), inner.state};
  };
  switch (t->kind) {
    case TermKind::Normal: {
      Eigen::Index r = psi.dim();
      return StepOutcome{false, mk_var("z" + std::to_string(r + 1)),
                         tensor(psi, GaussState::standard_normal(1))};
    }
    case TermKind::CondEq: {
      if (!is_value(t->a)) {
        return rebuild(reduce(t->a, psi, tol),
                       [&](TermPtr n) { return mk_cond_eq(n, t->b); });
      }
      if (!is_value(t->b)) {
        return rebuild(reduce(t->b, psi, tol),
                       [&](TermPtr n) { return mk_cond_eq(t->a, n); });
      }
      auto [ma, ca] = value_affine(t->a, psi.dim());
      auto [mb, cb] = value_affine(t->b, psi.dim());
      if (ma.rows() != 1 || mb.rows() != 1) {
        throw std::invalid_argument("'=:=' operands must have type R");
      }
      Vector u = (ma - mb).row(0).transpose();
      double b = ca(0) - cb(0);
      auto conditioned = condition_affine_row(psi, u, -b, tol);
      if (!conditioned) return StepOutcome{true, nullptr, GaussState()};
      return StepOutcome{false, mk_unit(), *conditioned};
    }
    case TermKind::Let: {
      if (!is_value(t->a)) {
        return rebuild(reduce(t->a, psi, tol),
                       [&](TermPtr n) { return mk_let(t->name, n, t->b); });
      }
      return StepOutcome{false, substitute(t->b, t->name, t->a), psi};
    }
    case TermKind::LetPair: {
      if (!is_value(t->a)) {
        return rebuild(reduce(t->a, psi, tol), [&](TermPtr n) {
          return mk_let_pair(t->name, t->name2, n, t->b);
        });
      }
      if (t->a->kind != TermKind::Pair) {
        throw std::logic_error("pattern let scrutinee did not reduce to a pair");
      }
      TermPtr body = substitute(t->b, t->name, t->a->a);
      body = substitute(body, t->name2, t->a->b);
      return StepOutcome{false, body, psi};
    }
    case TermKind::Pair: {
      if (!is_value(t->a)) {
        return rebuild(reduce(t->a, psi, tol),
                       [&](TermPtr n) { return mk_pair(n, t->b); });
      }
      return rebuild(reduce(t->b, psi, tol),
                     [&](TermPtr n) { return mk_pair(t->a, n); });
    }
    case TermKind::Add: {
      if (!is_value(t->a)) {
        return rebuild(reduce(t->a, psi, tol),
                       [&](TermPtr n) { return mk_add(n, t->b); });
      }
      return rebuild(reduce(t->b, psi, tol),
                     [&](TermPtr n) { return mk_add(t->a, n); });
    }
    case TermKind::Scale:
      return rebuild(reduce(t->a, psi, tol),
                     [&](TermPtr n) { return mk_scale(t->value, n); });
    default:
      throw std::invalid_argument("step: configuration term is already a value");
  }
}

}  // namespace

std::optional<Config> step(const Config& c, double tol) {
  if (is_value(c.term)) {
    throw std::invalid_argument("step: configuration term is already a value");
  }
  StepOutcome out = reduce(c.term, c.state, tol);
  if (out.bottom) return std::nullopt;
  return Config{collapse_unit_lets(out.term), out.state};
}

RunResult run(const TermPtr& t, const RunOptions& opts) {
  int bound = effect_symbol_count(t);
  Config config{collapse_unit_lets(rename_reserved_binders(t)), GaussState()};
  RunResult result;
  while (!is_value(config.term)) {
    std::optional<Config> next = step(config, opts.tol);
    ++result.steps;
    if (result.steps > bound) {
      throw std::logic_error("run: reduction exceeded the symbol-count bound");
    }
    if (!next) {
      result.bottom = true;
      return result;
    }
    config = *next;
    if (opts.on_step) opts.on_step(config, result.steps);
  }
  result.value = config.term;
  result.state = config.state;
  return result;
}

}  // namespace gausscond
