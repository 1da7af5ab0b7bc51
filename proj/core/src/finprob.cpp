#include "gausscond/finprob.hpp"

#include <stdexcept>
#include <utility>

namespace gausscond {

FinSpacePtr bool_space() {
  static FinSpacePtr space =
      std::make_shared<const FinSpace>(FinSpace{"bool", {"false", "true"}});
  return space;
}

FinSpacePtr make_space(std::string name, std::vector<std::string> outcomes) {
  if (outcomes.empty()) {
    throw std::invalid_argument("finite space '" + name + "' needs at least one outcome");
  }
  return std::make_shared<const FinSpace>(FinSpace{std::move(name), std::move(outcomes)});
}

FinObj::FinObj(std::vector<FinSpacePtr> factors) : factors_(std::move(factors)) {
  for (const auto& f : factors_) size_ *= static_cast<long>(f->outcomes.size());
}

std::string FinObj::label(long index) const {
  if (factors_.empty()) return "()";
  std::vector<std::string> parts(factors_.size());
  for (size_t i = factors_.size(); i-- > 0;) {
    long n = static_cast<long>(factors_[i]->outcomes.size());
    parts[i] = factors_[i]->outcomes[index % n];
    index /= n;
  }
  if (parts.size() == 1) return parts[0];
  std::string out = "(";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out + ")";
}

bool FinObj::operator==(const FinObj& other) const {
  if (factors_.size() != other.factors_.size()) return false;
  for (size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i] != other.factors_[i] &&
        factors_[i]->outcomes != other.factors_[i]->outcomes) {
      return false;
    }
  }
  return true;
}

FinObj operator*(const FinObj& a, const FinObj& b) {
  std::vector<FinSpacePtr> factors = a.factors_;
  factors.insert(factors.end(), b.factors_.begin(), b.factors_.end());
  return FinObj(std::move(factors));
}

SubKernel::SubKernel(FinObj dom, FinObj cod, std::vector<Rat> entries)
    : dom_(std::move(dom)), cod_(std::move(cod)), entries_(std::move(entries)) {
  if (static_cast<long>(entries_.size()) != dom_.size() * cod_.size()) {
    throw std::invalid_argument("SubKernel: entry count does not match shape");
  }
  for (long x = 0; x < dom_.size(); ++x) {
    Rat sum = 0;
    for (long y = 0; y < cod_.size(); ++y) {
      if (at(y, x) < 0) throw std::invalid_argument("SubKernel: negative mass");
      sum += at(y, x);
    }
    if (sum > 1) throw std::invalid_argument("SubKernel: column mass exceeds 1");
  }
}

SubKernel SubKernel::zero(FinObj dom, FinObj cod) {
  long n = dom.size() * cod.size();
  return SubKernel(std::move(dom), std::move(cod), std::vector<Rat>(n, Rat(0)));
}

SubKernel SubKernel::identity(const FinObj& x) {
  SubKernel k = zero(x, x);
  for (long i = 0; i < x.size(); ++i) k.at(i, i) = 1;
  return k;
}

Rat SubKernel::column_sum(long x) const {
  Rat sum = 0;
  for (long y = 0; y < cod_.size(); ++y) sum += at(y, x);
  return sum;
}

bool SubKernel::is_stochastic() const {
  for (long x = 0; x < dom_.size(); ++x) {
    if (column_sum(x) != 1) return false;
  }
  return true;
}

bool SubKernel::operator==(const SubKernel& other) const {
  return dom_ == other.dom_ && cod_ == other.cod_ && entries_ == other.entries_;
}

SubDist dist(FinObj space, std::vector<Rat> masses) {
  return SubKernel(FinObj::unit(), std::move(space), std::move(masses));
}

SubDist point_dist(const FinObj& space, long outcome) {
  SubKernel d = SubKernel::zero(FinObj::unit(), space);
  d.at(outcome, 0) = 1;
  return d;
}

SubDist uniform_dist(const FinObj& space) {
  std::vector<Rat> masses(space.size(), Rat(1) / space.size());
  return dist(space, std::move(masses));
}

SubKernel compose(const SubKernel& g, const SubKernel& f) {
  if (!(g.dom() == f.cod())) {
    throw std::invalid_argument("compose: kernel shapes do not match");
  }
  SubKernel out = SubKernel::zero(f.dom(), g.cod());
  for (long x = 0; x < f.dom().size(); ++x) {
    for (long y = 0; y < f.cod().size(); ++y) {
      const Rat& fyx = f.at(y, x);
      if (fyx == 0) continue;
      for (long z = 0; z < g.cod().size(); ++z) {
        out.at(z, x) += g.at(z, y) * fyx;
      }
    }
  }
  return out;
}

SubKernel tensor(const SubKernel& f, const SubKernel& g) {
  FinObj dom = f.dom() * g.dom();
  FinObj cod = f.cod() * g.cod();
  SubKernel out = SubKernel::zero(dom, cod);
  for (long xf = 0; xf < f.dom().size(); ++xf) {
    for (long xg = 0; xg < g.dom().size(); ++xg) {
      long x = xf * g.dom().size() + xg;
      for (long yf = 0; yf < f.cod().size(); ++yf) {
        for (long yg = 0; yg < g.cod().size(); ++yg) {
          long y = yf * g.cod().size() + yg;
          out.at(y, x) = f.at(yf, xf) * g.at(yg, xg);
        }
      }
    }
  }
  return out;
}

SubKernel copy_kernel(const FinObj& x) {
  SubKernel out = SubKernel::zero(x, x * x);
  for (long i = 0; i < x.size(); ++i) out.at(i * x.size() + i, i) = 1;
  return out;
}

SubKernel del_kernel(const FinObj& x) {
  SubKernel out = SubKernel::zero(x, FinObj::unit());
  for (long i = 0; i < x.size(); ++i) out.at(0, i) = 1;
  return out;
}

SubKernel swap_kernel(const FinObj& x, const FinObj& y) {
  SubKernel out = SubKernel::zero(x * y, y * x);
  for (long i = 0; i < x.size(); ++i) {
    for (long j = 0; j < y.size(); ++j) {
      out.at(j * x.size() + i, i * y.size() + j) = 1;
    }
  }
  return out;
}

SubKernel proj1_kernel(const FinObj& x, const FinObj& y) {
  SubKernel out = SubKernel::zero(x * y, x);
  for (long i = 0; i < x.size(); ++i) {
    for (long j = 0; j < y.size(); ++j) out.at(i, i * y.size() + j) = 1;
  }
  return out;
}

SubKernel proj2_kernel(const FinObj& x, const FinObj& y) {
  SubKernel out = SubKernel::zero(x * y, y);
  for (long i = 0; i < x.size(); ++i) {
    for (long j = 0; j < y.size(); ++j) out.at(j, i * y.size() + j) = 1;
  }
  return out;
}

SubKernel equality_effect(const FinObj& x) {
  SubKernel out = SubKernel::zero(x * x, FinObj::unit());
  for (long i = 0; i < x.size(); ++i) out.at(0, i * x.size() + i) = 1;
  return out;
}

SubKernel score_kernel(const FinObj& dom, const Rat& r) {
  if (r < 0 || r > 1) {
    throw std::invalid_argument("score: factor must lie in [0, 1]");
  }
  SubKernel out = SubKernel::zero(dom, FinObj::unit());
  for (long i = 0; i < dom.size(); ++i) out.at(0, i) = r;
  return out;
}

SubKernel ite_kernel(const FinObj& x) {
  FinObj two = FinObj::base(bool_space());
  FinObj dom = two * x * x;
  SubKernel out = SubKernel::zero(dom, x);
  long n = x.size();
  for (long b = 0; b < 2; ++b) {
    for (long i = 0; i < n; ++i) {
      for (long j = 0; j < n; ++j) {
        long input = (b * n + i) * n + j;
        out.at(b == 1 ? i : j, input) = 1;
      }
    }
  }
  return out;
}

Rat total_mass(const SubDist& d) {
  if (d.dom().size() != 1) {
    throw std::invalid_argument("total_mass: not a distribution");
  }
  return d.column_sum(0);
}

SubDist normalize_dist(const SubDist& d) {
  Rat z = total_mass(d);
  if (z == 0) return d;
  std::vector<Rat> masses(d.cod().size());
  for (long y = 0; y < d.cod().size(); ++y) masses[y] = d.at(y, 0) / z;
  return dist(d.cod(), std::move(masses));
}

bool proportional(const SubKernel& p, const SubKernel& q) {
  if (!(p.dom() == q.dom()) || !(p.cod() == q.cod())) {
    throw std::invalid_argument("proportional: kernel shapes differ");
  }
  Rat lambda = 0;
  for (long x = 0; x < p.dom().size(); ++x) {
    for (long y = 0; y < p.cod().size(); ++y) {
      const Rat& a = p.at(y, x);
      const Rat& b = q.at(y, x);
      if ((a == 0) != (b == 0)) return false;
      if (a == 0) continue;
      Rat ratio = a / b;
      if (lambda == 0) {
        lambda = ratio;
      } else if (ratio != lambda) {
        return false;
      }
    }
  }
  return true;  // identical zero patterns; all ratios agreed
}

bool proj_discardable(const SubKernel& p) {
  Rat first = p.column_sum(0);
  if (first == 0) return false;
  for (long x = 1; x < p.dom().size(); ++x) {
    if (p.column_sum(x) != first) return false;
  }
  return true;
}

SubKernel subkernel_of_channel(const FinChannel& c) {
  SubKernel out = SubKernel::zero(c.dom, c.cod);
  long kn = c.k.size();
  for (long x = 0; x < c.dom.size(); ++x) {
    for (long y = 0; y < c.cod.size(); ++y) {
      out.at(y, x) = c.q.at(y * kn + c.k0, x);
    }
  }
  return out;
}

FinChannel channel_of_subkernel(const SubKernel& rho) {
  if (rho.cod().size() == 0) {
    throw std::invalid_argument("channel_of_subkernel: empty codomain");
  }
  FinObj two = FinObj::base(bool_space());
  SubKernel q = SubKernel::zero(rho.dom(), rho.cod() * two);
  for (long x = 0; x < rho.dom().size(); ++x) {
    Rat kept = 0;
    for (long y = 0; y < rho.cod().size(); ++y) {
      q.at(y * 2 + 1, x) = rho.at(y, x);
      kept += rho.at(y, x);
    }
    q.at(0 * 2 + 0, x) = 1 - kept;  // residual failure mass on (y0, false)
  }
  return FinChannel{rho.dom(), rho.cod(), two, 1, std::move(q)};
}

std::optional<SubDist> channel_posterior(const FinChannel& c, const SubDist& prior) {
  if (!(prior.cod() == c.dom)) {
    throw std::invalid_argument("channel_posterior: prior space mismatch");
  }
  long kn = c.k.size();
  SubKernel joint = SubKernel::zero(FinObj::unit(), c.dom * c.cod);
  Rat z = 0;
  for (long x = 0; x < c.dom.size(); ++x) {
    for (long y = 0; y < c.cod.size(); ++y) {
      Rat mass = prior.at(x, 0) * c.q.at(y * kn + c.k0, x);
      joint.at(x * c.cod.size() + y, 0) = mass;
      z += mass;
    }
  }
  if (z == 0) return std::nullopt;
  return normalize_dist(joint);
}

SubDist conditioning_product(const SubDist& p, const SubDist& q) {
  if (!(p.cod() == q.cod())) {
    throw std::invalid_argument("conditioning_product: outcome spaces differ");
  }
  SubDist out = SubKernel::zero(FinObj::unit(), p.cod());
  for (long y = 0; y < p.cod().size(); ++y) out.at(y, 0) = p.at(y, 0) * q.at(y, 0);
  return out;
}

}  // namespace gausscond
