#include "gausscond/normal_form.hpp"

#include "gausscond/denote.hpp"
#include "gausscond/typecheck.hpp"

#include <sstream>
#include <stdexcept>

namespace gausscond {

namespace {

int count_normals(const TermPtr& t) {
  if (!t) return 0;
  int self = t->kind == TermKind::Normal ? 1 : 0;
  return self + count_normals(t->a) + count_normals(t->b);
}

// affine value: one row of coefficients (over x then z) per coordinate
struct AffValue {
  std::vector<Vector> rows;
  std::vector<double> consts;
  Ty ty = Ty::unit();
};

struct AlgBuilder {
  Eigen::Index width = 0;  // free_vars + total latents
  Eigen::Index free_vars = 0;
  Eigen::Index next_latent = 0;
  std::vector<std::pair<std::string, AffValue>> env;
  std::vector<Vector> cond_rows;
  std::vector<double> cond_rhs;

  AffValue eval(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::Var: {
        for (auto it = env.rbegin(); it != env.rend(); ++it) {
          if (it->first == t->name) return it->second;
        }
        throw std::invalid_argument("to_alg: unbound variable '" + t->name + "'");
      }
      case TermKind::Const: {
        AffValue v;
        v.rows.push_back(Vector::Zero(width));
        v.consts.push_back(t->value);
        v.ty = Ty::real();
        return v;
      }
      case TermKind::Unit:
        return AffValue{{}, {}, Ty::unit()};
      case TermKind::Normal: {
        AffValue v;
        v.rows.push_back(Vector::Unit(width, free_vars + next_latent++));
        v.consts.push_back(0.0);
        v.ty = Ty::real();
        return v;
      }
      case TermKind::Add: {
        AffValue a = eval(t->a), b = eval(t->b);
        AffValue v;
        v.rows.push_back(a.rows.at(0) + b.rows.at(0));
        v.consts.push_back(a.consts.at(0) + b.consts.at(0));
        v.ty = Ty::real();
        return v;
      }
      case TermKind::Scale: {
        AffValue a = eval(t->a);
        AffValue v;
        v.rows.push_back(t->value * a.rows.at(0));
        v.consts.push_back(t->value * a.consts.at(0));
        v.ty = Ty::real();
        return v;
      }
      case TermKind::Pair: {
        AffValue a = eval(t->a), b = eval(t->b);
        AffValue v;
        v.rows = a.rows;
        v.rows.insert(v.rows.end(), b.rows.begin(), b.rows.end());
        v.consts = a.consts;
        v.consts.insert(v.consts.end(), b.consts.begin(), b.consts.end());
        v.ty = Ty::pair(a.ty, b.ty);
        return v;
      }
      case TermKind::CondEq: {
        AffValue a = eval(t->a), b = eval(t->b);
        cond_rows.push_back(a.rows.at(0) - b.rows.at(0));
        cond_rhs.push_back(b.consts.at(0) - a.consts.at(0));
        return AffValue{{}, {}, Ty::unit()};
      }
      case TermKind::Let: {
        AffValue bound = eval(t->a);
        env.emplace_back(t->name, bound);
        AffValue body = eval(t->b);
        env.pop_back();
        return body;
      }
      case TermKind::LetPair: {
        AffValue bound = eval(t->a);
        if (bound.ty.kind() != Ty::Kind::Pair) {
          throw std::invalid_argument("to_alg: pattern let over a non-pair");
        }
        int split = bound.ty.fst().flat_dim();
        AffValue fst, snd;
        fst.ty = bound.ty.fst();
        snd.ty = bound.ty.snd();
        fst.rows.assign(bound.rows.begin(), bound.rows.begin() + split);
        fst.consts.assign(bound.consts.begin(), bound.consts.begin() + split);
        snd.rows.assign(bound.rows.begin() + split, bound.rows.end());
        snd.consts.assign(bound.consts.begin() + split, bound.consts.end());
        env.emplace_back(t->name, fst);
        env.emplace_back(t->name2, snd);
        AffValue body = eval(t->b);
        env.pop_back();
        env.pop_back();
        return body;
      }
    }
    throw std::invalid_argument("to_alg: malformed term");
  }
};

Matrix stack_rows(const std::vector<Vector>& rows, Eigen::Index width) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), width);
  for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) = rows[i].transpose();
  return m;
}

Vector to_vector(const std::vector<double>& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = v[i];
  return out;
}

}  // namespace

AlgTerm to_alg(const Ctx& ctx, const TermPtr& t) {
  typecheck_or_throw(ctx, t);
  AlgBuilder builder;
  builder.free_vars = static_cast<Eigen::Index>(ctx.size());
  builder.width = builder.free_vars + count_normals(t);
  for (size_t i = 0; i < ctx.size(); ++i) {
    if (ctx[i].second != Ty::real()) {
      throw std::invalid_argument("to_alg: context variables must have type R");
    }
    AffValue v;
    v.rows.push_back(Vector::Unit(builder.width, static_cast<Eigen::Index>(i)));
    v.consts.push_back(0.0);
    v.ty = Ty::real();
    builder.env.emplace_back(ctx[i].first, v);
  }
  AffValue result = builder.eval(t);

  AlgTerm alg;
  alg.free_vars = builder.free_vars;
  alg.latents = builder.next_latent;
  Eigen::Index used = alg.free_vars + alg.latents;
  alg.cond_coeff = stack_rows(builder.cond_rows, builder.width).leftCols(used);
  alg.cond_rhs = to_vector(builder.cond_rhs);
  alg.ret_coeff = stack_rows(result.rows, builder.width).leftCols(used);
  alg.ret_const = to_vector(result.consts);
  return alg;
}

Channel channel_of_alg(const AlgTerm& a) {
  Eigen::Index m = a.free_vars;
  if (a.bottom) {
    // a single unsatisfiable condition 0 =:= 1
    Matrix lin = Matrix::Zero(a.outputs() + 1, m);
    Vector b = Vector::Zero(a.outputs() + 1);
    Vector obs(1);
    obs << 1.0;
    return Channel(a.outputs(), GaussMap(lin, b, PsdMatrix::zero(a.outputs() + 1)), obs);
  }
  Eigen::Index n = a.outputs(), k = a.conditions();
  Matrix lin(n + k, m);
  lin.topRows(n) = a.ret_coeff.leftCols(m);
  lin.bottomRows(k) = a.cond_coeff.leftCols(m);
  Vector b(n + k);
  b << a.ret_const, Vector::Zero(k);
  Matrix zpart(n + k, a.latents);
  zpart.topRows(n) = a.ret_coeff.rightCols(a.latents);
  zpart.bottomRows(k) = a.cond_coeff.rightCols(a.latents);
  Matrix sigma = zpart * zpart.transpose();
  return Channel(n, GaussMap(lin, b, PsdMatrix(sigma)), a.cond_rhs);
}

namespace {

[[noreturn]] void not_applicable(const std::string& why) {
  throw std::invalid_argument("rewrite not applicable: " + why);
}

double max_abs(const Eigen::Ref<const Matrix>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Matrix drop_column(const Matrix& m, Eigen::Index col) {
  Matrix out(m.rows(), m.cols() - 1);
  out.leftCols(col) = m.leftCols(col);
  out.rightCols(m.cols() - col - 1) = m.rightCols(m.cols() - col - 1);
  return out;
}

Matrix drop_row(const Matrix& m, Eigen::Index row) {
  Matrix out(m.rows() - 1, m.cols());
  out.topRows(row) = m.topRows(row);
  out.bottomRows(m.rows() - row - 1) = m.bottomRows(m.rows() - row - 1);
  return out;
}

Vector drop_entry(const Vector& v, Eigen::Index i) {
  Vector out(v.size() - 1);
  out.head(i) = v.head(i);
  out.tail(v.size() - i - 1) = v.tail(v.size() - i - 1);
  return out;
}

}  // namespace

AlgTerm rewrite(const AlgTerm& a, Axiom axiom, const RewriteArgs& args) {
  if (a.bottom && axiom != Axiom::C3) {
    return a;  // bottom absorbs every rewrite
  }
  AlgTerm out = a;
  switch (axiom) {
    case Axiom::Disc: {
      Eigen::Index col = a.free_vars + args.index;
      if (args.index < 0 || args.index >= a.latents) not_applicable("no such latent");
      if (max_abs(a.cond_coeff.col(col)) != 0.0) {
        not_applicable("latent occurs in a condition");
      }
      if (max_abs(a.ret_coeff.col(col)) != 0.0) {
        not_applicable("latent occurs in the return");
      }
      out.cond_coeff = drop_column(a.cond_coeff, col);
      out.ret_coeff = drop_column(a.ret_coeff, col);
      out.latents -= 1;
      return out;
    }
    case Axiom::Orth: {
      const Matrix& u = args.transform;
      if (u.rows() != a.latents || u.cols() != a.latents) {
        not_applicable("transform must act on the latent block");
      }
      if (a.latents > 0 &&
          (u * u.transpose() - Matrix::Identity(a.latents, a.latents))
                  .cwiseAbs()
                  .maxCoeff() > 1e-8) {
        not_applicable("transform is not orthogonal");
      }
      out.cond_coeff.rightCols(a.latents) = a.cond_coeff.rightCols(a.latents) * u;
      out.ret_coeff.rightCols(a.latents) = a.ret_coeff.rightCols(a.latents) * u;
      return out;
    }
    case Axiom::C1: {
      if (args.index < 0 || args.index >= a.conditions() || args.index2 < 0 ||
          args.index2 >= a.conditions()) {
        not_applicable("condition index out of range");
      }
      out.cond_coeff.row(args.index).swap(out.cond_coeff.row(args.index2));
      std::swap(out.cond_rhs(args.index), out.cond_rhs(args.index2));
      return out;
    }
    case Axiom::C2:
      return out;  // binders and conditions already commute in flat form
    case Axiom::C3:
      if (!a.bottom) not_applicable("term is not bottom");
      return a;
    case Axiom::Taut: {
      Eigen::Index i = args.index;
      if (i < 0 || i >= a.conditions()) not_applicable("condition index out of range");
      if (max_abs(a.cond_coeff.row(i)) != 0.0 || a.cond_rhs(i) != 0.0) {
        not_applicable("condition is not 0 = 0");
      }
      out.cond_coeff = drop_row(a.cond_coeff, i);
      out.cond_rhs = drop_entry(a.cond_rhs, i);
      return out;
    }
    case Axiom::Fail: {
      Eigen::Index i = args.index;
      if (i < 0 || i >= a.conditions()) not_applicable("condition index out of range");
      if (max_abs(a.cond_coeff.row(i)) != 0.0 || a.cond_rhs(i) == 0.0) {
        not_applicable("condition is not 0 = c with c nonzero");
      }
      out = AlgTerm{};
      out.free_vars = a.free_vars;
      out.latents = 0;
      out.bottom = true;
      out.cond_coeff = Matrix::Zero(0, a.free_vars);
      out.cond_rhs = Vector::Zero(0);
      out.ret_coeff = Matrix::Zero(a.outputs(), a.free_vars);
      out.ret_const = Vector::Zero(a.outputs());
      return out;
    }
    case Axiom::Subs: {
      Eigen::Index i = args.index, target = args.index2;
      if (i < 0 || i >= a.conditions()) not_applicable("condition index out of range");
      if (target < 0 || target >= a.outputs()) not_applicable("return row out of range");
      out.ret_coeff.row(target) += args.factor * a.cond_coeff.row(i);
      out.ret_const(target) -= args.factor * a.cond_rhs(i);
      return out;
    }
    case Axiom::Init: {
      Eigen::Index i = args.index;
      if (i < 0 || i >= a.conditions()) not_applicable("condition index out of range");
      Vector row = a.cond_coeff.row(i).transpose();
      if (max_abs(row.head(a.free_vars)) != 0.0) {
        not_applicable("condition mentions free variables");
      }
      Eigen::Index latent = -1;
      for (Eigen::Index j = 0; j < a.latents; ++j) {
        double v = row(a.free_vars + j);
        if (v == 0.0) continue;
        if (latent >= 0 || v != 1.0) not_applicable("condition is not z_j = c");
        latent = j;
      }
      if (latent < 0) not_applicable("condition is not z_j = c");
      double c = a.cond_rhs(i);
      Eigen::Index col = a.free_vars + latent;
      // substitute z_latent := c everywhere, then drop row and latent
      out.cond_rhs -= a.cond_coeff.col(col) * c;
      out.ret_const += a.ret_coeff.col(col) * c;
      out.cond_coeff = drop_column(out.cond_coeff, col);
      out.ret_coeff = drop_column(out.ret_coeff, col);
      out.cond_coeff = drop_row(out.cond_coeff, i);
      out.cond_rhs = drop_entry(out.cond_rhs, i);
      out.latents -= 1;
      return out;
    }
    case Axiom::Cong: {
      const Matrix& s = args.transform;
      if (s.rows() != a.conditions() || s.cols() != a.conditions()) {
        not_applicable("transform must act on the condition rows");
      }
      if (a.conditions() > 0) {
        Eigen::FullPivLU<Matrix> lu(s);
        if (!lu.isInvertible()) not_applicable("transform is not invertible");
      }
      out.cond_coeff = s * a.cond_coeff;
      out.cond_rhs = s * a.cond_rhs;
      return out;
    }
  }
  not_applicable("unknown axiom");
}

ClosedNF normalize_closed(const AlgTerm& a) {
  if (a.free_vars != 0) {
    throw std::invalid_argument("normalize_closed: term has free variables");
  }
  ClosedNF nf;
  if (a.bottom) {
    nf.bottom = true;
    return nf;
  }
  Matrix b = a.cond_coeff;  // conditions x latents
  RankSplit split = rank_split(b);
  Vector c = split.s * a.cond_rhs;
  Eigen::Index r = split.rank;
  // rows past the rank are 0 = c_i: tautologies or failures
  if (c.size() > r) {
    double scale = c.size() > 0 ? std::max(1.0, c.cwiseAbs().maxCoeff()) : 1.0;
    if (c.tail(c.size() - r).cwiseAbs().maxCoeff() > kSupportTol * scale) {
      nf.bottom = true;
      return nf;
    }
  }
  // orthogonal change of coordinates w = T z; leading w's are initialized
  Matrix e = a.ret_coeff * split.t.transpose();
  nf.c = a.ret_const;
  if (r > 0) nf.c += e.leftCols(r) * c.head(r);
  Matrix rest = e.rightCols(a.latents - r);
  nf.m = PsdMatrix(Matrix(rest * rest.transpose()));
  return nf;
}

EffectNF normalize_effect(const AlgTerm& a) {
  if (a.outputs() != 0) {
    throw std::invalid_argument("normalize_effect: term has outputs");
  }
  EffectNF nf;
  if (a.bottom) {
    nf.bottom = true;
    return nf;
  }
  Matrix f = a.cond_coeff.leftCols(a.free_vars);
  Matrix g = a.cond_coeff.rightCols(a.latents);
  RrefResult red = rref_transform(f);
  Matrix g2 = red.s * g;
  Vector h2 = red.s * a.cond_rhs;
  Eigen::Index r = static_cast<Eigen::Index>(red.pivot_cols.size());
  Eigen::Index q = a.conditions() - r;

  // the zero rows form a closed system over the latents; its normal form
  // provides the residual nu z. B z + c the pivot rows are conditioned on.
  // Elimination dust in that block must not masquerade as a constraint.
  double scale = std::max(1.0, max_abs(g2));
  scale = std::max(scale, max_abs(h2));
  double dust = kRankTol * scale;
  Matrix wz = g2.bottomRows(q);
  Vector wo = h2.tail(q);
  wz = (wz.cwiseAbs().array() <= dust).select(Matrix::Zero(q, a.latents), wz);
  wo = (wo.cwiseAbs().array() <= dust).select(Vector::Zero(q), wo);

  AlgTerm closed;
  closed.free_vars = 0;
  closed.latents = a.latents;
  closed.cond_coeff = wz;
  closed.cond_rhs = wo;
  closed.ret_coeff = -g2.topRows(r);
  closed.ret_const = h2.head(r);
  ClosedNF residual = normalize_closed(closed);
  if (residual.bottom) {
    nf.bottom = true;
    return nf;
  }
  nf.a = red.r.topRows(r);
  nf.c = residual.c;
  nf.m = residual.m;
  return nf;
}

bool approx_equal(const ClosedNF& x, const ClosedNF& y, double tol) {
  if (x.bottom || y.bottom) return x.bottom == y.bottom;
  return approx_equal(x.c, y.c, tol) && approx_equal(x.m.mat(), y.m.mat(), tol);
}

bool approx_equal(const EffectNF& x, const EffectNF& y, double tol) {
  if (x.bottom || y.bottom) return x.bottom == y.bottom;
  return approx_equal(x.a, y.a, tol) && approx_equal(x.c, y.c, tol) &&
         approx_equal(x.m.mat(), y.m.mat(), tol);
}

bool alg_equiv(const Ctx& ctx, const TermPtr& t1, const TermPtr& t2, double tol) {
  Ty ty1 = typecheck_or_throw(ctx, t1);
  Ty ty2 = typecheck_or_throw(ctx, t2);
  if (ty1 != ty2) {
    throw std::invalid_argument("alg_equiv: terms have different types");
  }
  bool all_real = true;
  for (const auto& [name, ty] : ctx) {
    if (ty != Ty::real()) all_real = false;
  }
  if (ctx.empty()) {
    return approx_equal(normalize_closed(to_alg(ctx, t1)),
                        normalize_closed(to_alg(ctx, t2)), tol);
  }
  if (all_real && ty1.flat_dim() == 0) {
    return approx_equal(normalize_effect(to_alg(ctx, t1)),
                        normalize_effect(to_alg(ctx, t2)), tol);
  }
  return equiv(denote(ctx, t1), denote(ctx, t2), tol);
}

namespace {

std::string affine_string(const Eigen::RowVectorXd& row, double constant,
                          Eigen::Index free_vars) {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](double coeff, const std::string& var) {
    if (coeff == 0.0) return;
    if (!first) os << " + ";
    if (coeff == 1.0) {
      os << var;
    } else {
      os << format_double(coeff) << "*" << var;
    }
    first = false;
  };
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    std::string var = j < free_vars ? "x" + std::to_string(j + 1)
                                    : "z" + std::to_string(j - free_vars + 1);
    emit(row(j), var);
  }
  if (constant != 0.0 || first) {
    if (!first) os << " + ";
    os << format_double(constant);
  }
  return os.str();
}

std::string vector_string(const Vector& v) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << format_double(v(i));
  }
  os << "]";
  return os.str();
}

std::string matrix_string(const Matrix& m) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) os << ", ";
    os << vector_string(m.row(i).transpose());
  }
  os << "]";
  return os.str();
}

}  // namespace

std::string print_alg(const AlgTerm& a) {
  if (a.bottom) return "bot";
  std::ostringstream os;
  if (a.latents > 0) {
    os << "nu";
    for (Eigen::Index j = 0; j < a.latents; ++j) os << " z" << j + 1;
    os << ". ";
  }
  for (Eigen::Index i = 0; i < a.conditions(); ++i) {
    os << "(" << affine_string(a.cond_coeff.row(i), 0.0, a.free_vars) << " =:= "
       << format_double(a.cond_rhs(i)) << "); ";
  }
  os << "return (";
  for (Eigen::Index i = 0; i < a.outputs(); ++i) {
    if (i) os << ", ";
    os << affine_string(a.ret_coeff.row(i), a.ret_const(i), a.free_vars);
  }
  os << ")";
  return os.str();
}

std::string print_closed_nf(const ClosedNF& nf) {
  if (nf.bottom) return "bot";
  return "closed: c = " + vector_string(nf.c) + "; AA^T = " + matrix_string(nf.m.mat());
}

std::string print_effect_nf(const EffectNF& nf) {
  if (nf.bottom) return "bot";
  return "effect: A = " + matrix_string(nf.a) + "; c = " + vector_string(nf.c) +
         "; BB^T = " + matrix_string(nf.m.mat());
}

}  // namespace gausscond
