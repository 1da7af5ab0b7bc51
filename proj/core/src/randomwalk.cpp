#include "gausscond/randomwalk.hpp"

#include <stdexcept>

namespace gausscond {

TermPtr random_walk_term(int n, const std::map<int, double>& obs) {
  if (n < 2) throw std::invalid_argument("random walk needs at least one step");
  for (const auto& [index, value] : obs) {
    if (index < 1 || index >= n) {
      throw std::invalid_argument("observation index " + std::to_string(index) +
                                  " out of range [1, " + std::to_string(n) + ")");
    }
  }
  auto var_name = [](int i) { return "y" + std::to_string(i); };

  // return value (y1, ..., y_{n-1})
  TermPtr result = mk_var(var_name(n - 1));
  for (int i = n - 2; i >= 1; --i) result = mk_pair(mk_var(var_name(i)), result);

  // observations condition after the model is built
  TermPtr body = result;
  for (auto it = obs.rbegin(); it != obs.rend(); ++it) {
    body = mk_seq(mk_cond_eq(mk_var(var_name(it->first)), mk_const(it->second)), body);
  }

  // y[i] = y[i-1] + normal(0,1), with y[0] = 0 folded into y[1]
  for (int i = n - 1; i >= 1; --i) {
    TermPtr step = i == 1 ? mk_normal() : mk_add(mk_var(var_name(i - 1)), mk_normal());
    body = mk_let(var_name(i), step, body);
  }
  return body;
}

std::vector<WalkRow> random_walk_posterior(int n, const std::map<int, double>& obs) {
  RunResult res = run(random_walk_term(n, obs));
  if (res.bottom) return {};
  GaussState out = observable(res.value, res.state);
  std::vector<WalkRow> rows;
  for (int i = 1; i < n; ++i) {
    rows.push_back(WalkRow{i, out.mean()(i - 1), out.cov().mat()(i - 1, i - 1)});
  }
  return rows;
}

}  // namespace gausscond
