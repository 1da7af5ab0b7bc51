#include "gausscond/denote.hpp"
#include "gausscond/finlang.hpp"
#include "gausscond/interp.hpp"
#include "gausscond/normal_form.hpp"
#include "gausscond/parser.hpp"
#include "gausscond/randomwalk.hpp"
#include "gausscond/typecheck.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <variant>

using json = nlohmann::ordered_json;
using namespace gausscond;

namespace {

constexpr int kExitPosterior = 0;
constexpr int kExitError = 1;
constexpr int kExitBottom = 2;
constexpr int kExitDistinguished = 3;

double default_tol() {
  if (const char* env = std::getenv("GAUSS_COND_TOL")) {
    try {
      return std::stod(env);
    } catch (...) {
      return kSupportTol;
    }
  }
  return kSupportTol;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << report.dump(2) << "\n";
  }
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out.push_back(vector_json(m.row(i).transpose()));
  }
  return out;
}

int fail_report(const std::string& message, const std::string& out_path) {
  json report;
  report["status"] = "error";
  report["error"] = message;
  emit(report, out_path);
  return kExitError;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct LoadedGauss {
  TermPtr term;
  Ctx ctx;  // free variables, lexicographically ordered, all R
};

std::variant<LoadedGauss, std::string> load_gauss(const std::string& path) {
  ParseResult parsed = parse(read_file(path));
  if (auto* err = std::get_if<ParseError>(&parsed)) {
    return path + ": " + err->show();
  }
  LoadedGauss out;
  out.term = std::get<TermPtr>(parsed);
  std::vector<std::string> frees = free_vars(out.term);
  std::sort(frees.begin(), frees.end());
  for (const auto& name : frees) out.ctx.emplace_back(name, Ty::real());
  TypeResult ty = typecheck(out.ctx, out.term);
  if (auto* err = std::get_if<TypeError>(&ty)) {
    return path + ": type error: " + err->message;
  }
  return out;
}

int cmd_run(const std::string& path, bool denot, bool both, bool trace,
            double tol, const std::string& out_path) {
  auto loaded = load_gauss(path);
  if (auto* err = std::get_if<std::string>(&loaded)) {
    return fail_report(*err, out_path);
  }
  LoadedGauss prog = std::get<LoadedGauss>(loaded);
  if (!prog.ctx.empty()) {
    return fail_report(path + ": program has free variables; `run` needs a closed program",
                       out_path);
  }

  json report;
  StateResult operational, denotational;
  if (!denot || both) {
    RunOptions opts;
    opts.tol = tol;
    if (trace) {
      opts.on_step = [](const Config& c, int steps) {
        json line;
        line["step"] = steps;
        line["term"] = print_term(c.term);
        line["mean"] = vector_json(c.state.mean());
        line["cov"] = matrix_json(c.state.cov().mat());
        std::cout << line.dump() << "\n";
      };
    }
    RunResult r = run(prog.term, opts);
    report["engine"] = both ? "both" : "operational";
    report["steps"] = r.steps;
    if (!r.bottom) {
      report["value"] = print_term(r.value);
      operational = observable(r.value, r.state);
    }
  }
  if (denot || both) {
    if (!both) report["engine"] = "denotational";
    denotational = eval_state(denote({}, prog.term), tol);
  }
  if (both) {
    bool agree = operational.has_value() == denotational.has_value() &&
                 (!operational || approx_equal(*operational, *denotational, 1e-8));
    if (!agree) {
      return fail_report("operational and denotational results disagree", out_path);
    }
  }
  StateResult result = (denot && !both) ? denotational : operational;
  if (!result) {
    report["status"] = "bottom";
    emit(report, out_path);
    return kExitBottom;
  }
  report["status"] = "posterior";
  report["mean"] = vector_json(result->mean());
  report["cov"] = matrix_json(result->cov().mat());
  emit(report, out_path);
  return kExitPosterior;
}

json canonical_json(const CanonicalChannel& canon) {
  json out;
  if (canon.bottom) {
    out["kind"] = "bottom";
    return out;
  }
  out["kind"] = "channel";
  out["A"] = matrix_json(canon.a);
  out["D0"] = matrix_json(canon.d0);
  out["joint_mean"] = vector_json(canon.joint.mean());
  out["joint_cov"] = matrix_json(canon.joint.cov().mat());
  return out;
}

int cmd_equiv_gauss(const std::string& path1, const std::string& path2, double tol,
                    unsigned seed, const std::string& out_path) {
  auto l1 = load_gauss(path1);
  if (auto* err = std::get_if<std::string>(&l1)) return fail_report(*err, out_path);
  auto l2 = load_gauss(path2);
  if (auto* err = std::get_if<std::string>(&l2)) return fail_report(*err, out_path);
  LoadedGauss a = std::get<LoadedGauss>(l1), b = std::get<LoadedGauss>(l2);

  // both programs share the union of their free variables
  std::set<std::string> names;
  for (const auto& [n, ty] : a.ctx) names.insert(n);
  for (const auto& [n, ty] : b.ctx) names.insert(n);
  Ctx ctx;
  for (const auto& n : names) ctx.emplace_back(n, Ty::real());

  Ty ty1 = typecheck_or_throw(ctx, a.term);
  Ty ty2 = typecheck_or_throw(ctx, b.term);
  if (ty1 != ty2) {
    return fail_report("programs have different types (" + ty1.show() + " vs " +
                           ty2.show() + ")",
                       out_path);
  }

  bool same = alg_equiv(ctx, a.term, b.term, tol);
  Channel c1 = denote(ctx, a.term);
  Channel c2 = denote(ctx, b.term);
  bool probed = probe_equiv(c1, c2, probe_priors(c1.dom(), seed), tol);

  json report;
  report["verdict"] = same ? "EQUIVALENT" : "DISTINGUISHED";
  report["probe_agrees"] = probed == same;
  report["canonical"] = json::array({canonical_json(canonicalize(c1, tol)),
                                     canonical_json(canonicalize(c2, tol))});
  emit(report, out_path);
  std::cout << (same ? "EQUIVALENT" : "DISTINGUISHED") << "\n";
  return same ? kExitPosterior : kExitDistinguished;
}

int cmd_equiv_fin(const std::string& path1, const std::string& path2,
                  const std::string& mode_name, const std::string& out_path) {
  auto r1 = parse_fin(read_file(path1));
  if (auto* err = std::get_if<ParseError>(&r1)) {
    return fail_report(path1 + ": " + err->show(), out_path);
  }
  auto r2 = parse_fin(read_file(path2));
  if (auto* err = std::get_if<ParseError>(&r2)) {
    return fail_report(path2 + ": " + err->show(), out_path);
  }
  FinProgram a = std::get<FinProgram>(r1), b = std::get<FinProgram>(r2);
  FinMode mode = mode_name == "p" ? FinMode::P : FinMode::PSL;

  bool same;
  try {
    // both programs evaluate over the first file's space table
    same = equiv_fin(a.spaces, {}, a.term, b.term, mode);
  } catch (const std::exception& e) {
    return fail_report(e.what(), out_path);
  }
  json report;
  report["mode"] = mode == FinMode::P ? "p" : "psl";
  report["verdict"] = same ? "EQUIVALENT" : "DISTINGUISHED";
  emit(report, out_path);
  std::cout << (same ? "EQUIVALENT" : "DISTINGUISHED") << "\n";
  return same ? kExitPosterior : kExitDistinguished;
}

int cmd_normalize(const std::string& path, const std::string& out_path) {
  auto loaded = load_gauss(path);
  if (auto* err = std::get_if<std::string>(&loaded)) {
    return fail_report(*err, out_path);
  }
  LoadedGauss prog = std::get<LoadedGauss>(loaded);
  Ty ty = typecheck_or_throw(prog.ctx, prog.term);

  json report;
  AlgTerm alg = to_alg(prog.ctx, prog.term);
  report["algebraic"] = print_alg(alg);
  if (prog.ctx.empty()) {
    ClosedNF nf = normalize_closed(alg);
    report["kind"] = nf.bottom ? "bottom" : "closed";
    report["pretty"] = print_closed_nf(nf);
    if (!nf.bottom) {
      report["mean"] = vector_json(nf.c);
      report["cov"] = matrix_json(nf.m.mat());
    }
    emit(report, out_path);
    return nf.bottom ? kExitBottom : kExitPosterior;
  }
  if (ty.flat_dim() == 0) {
    EffectNF nf = normalize_effect(alg);
    report["kind"] = nf.bottom ? "bottom" : "effect";
    report["pretty"] = print_effect_nf(nf);
    if (!nf.bottom) {
      report["A"] = matrix_json(nf.a);
      report["c"] = vector_json(nf.c);
      report["cov"] = matrix_json(nf.m.mat());
    }
    emit(report, out_path);
    return nf.bottom ? kExitBottom : kExitPosterior;
  }
  CanonicalChannel canon = canonicalize(denote(prog.ctx, prog.term));
  report["kind"] = canon.bottom ? "bottom" : "channel";
  report.update(canonical_json(canon));
  emit(report, out_path);
  return canon.bottom ? kExitBottom : kExitPosterior;
}

int cmd_walk(int n, const std::vector<std::string>& obs_args,
             const std::string& out_path) {
  std::map<int, double> obs;
  for (const auto& arg : obs_args) {
    size_t eq = arg.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --obs expects INDEX=VALUE, got '" << arg << "'\n";
      return kExitError;
    }
    try {
      obs[std::stoi(arg.substr(0, eq))] = std::stod(arg.substr(eq + 1));
    } catch (...) {
      std::cerr << "error: malformed observation '" << arg << "'\n";
      return kExitError;
    }
  }
  std::vector<WalkRow> rows;
  try {
    rows = random_walk_posterior(n, obs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  if (rows.empty()) {
    std::cerr << "error: observations are infeasible\n";
    return kExitBottom;
  }
  std::ostringstream csv;
  csv << "i,mean,variance\n";
  char buf[128];
  for (const WalkRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g\n", row.index, row.mean,
                  row.variance);
    csv << buf;
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path);
    out << csv.str();
  }
  return kExitPosterior;
}

int cmd_fin_run(const std::string& path, const std::string& mode_name,
                const std::string& out_path) {
  auto parsed = parse_fin(read_file(path));
  if (auto* err = std::get_if<ParseError>(&parsed)) {
    return fail_report(path + ": " + err->show(), out_path);
  }
  FinProgram prog = std::get<FinProgram>(parsed);
  FinMode mode = mode_name == "psl" ? FinMode::PSL : FinMode::P;
  SubDist result = SubKernel::zero(FinObj::unit(), FinObj::unit());
  try {
    auto ty = fin_typecheck(prog.spaces, {}, prog.term, mode);
    if (auto* err = std::get_if<FinTypeError>(&ty)) {
      return fail_report(path + ": type error: " + err->message, out_path);
    }
    result = eval_term(prog.spaces, {}, prog.term, mode);
  } catch (const std::exception& e) {
    return fail_report(e.what(), out_path);
  }

  json report;
  report["mode"] = mode == FinMode::P ? "p" : "psl";
  Rat z = total_mass(result);
  json mass;
  for (long y = 0; y < result.cod().size(); ++y) {
    mass[result.cod().label(y)] = rat_string(result.at(y, 0));
  }
  report["mass"] = mass;
  report["evidence"] = rat_string(z);
  if (z == 0) {
    report["status"] = "bottom";
    emit(report, out_path);
    return kExitBottom;
  }
  SubDist posterior = normalize_dist(result);
  json post;
  for (long y = 0; y < posterior.cod().size(); ++y) {
    post[posterior.cod().label(y)] = rat_string(posterior.at(y, 0));
  }
  report["posterior"] = post;
  report["status"] = "posterior";
  emit(report, out_path);
  return kExitPosterior;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian and finite probabilistic programs with exact conditioning"};
  app.require_subcommand(1);

  std::string path, path2, out_path, mode = "psl";
  bool denot = false, both = false, trace = false;
  double tol = default_tol();
  unsigned seed = 0;
  int walk_n = 100;
  std::vector<std::string> obs_args;

  CLI::App* run_cmd = app.add_subcommand("run", "run a .gauss program");
  run_cmd->add_option("file", path)->required();
  run_cmd->add_flag("--denot", denot, "evaluate denotationally instead of running");
  run_cmd->add_flag("--both", both, "run both engines and assert agreement");
  run_cmd->add_flag("--trace", trace, "print one JSON line per reduction step");
  run_cmd->add_option("--tol", tol, "support/equality tolerance");
  run_cmd->add_option("--out", out_path, "write the report to a file");

  CLI::App* equiv_cmd = app.add_subcommand("equiv", "decide equivalence of two programs");
  equiv_cmd->add_option("file1", path)->required();
  equiv_cmd->add_option("file2", path2)->required();
  equiv_cmd->add_option("--mode", mode, "psl or p (finite programs only)")
      ->check(CLI::IsMember({"psl", "p"}));
  equiv_cmd->add_option("--tol", tol, "comparison tolerance");
  equiv_cmd->add_option("--seed", seed, "seed for the probe prior family");
  equiv_cmd->add_option("--out", out_path, "write the report to a file");

  CLI::App* norm_cmd = app.add_subcommand("normalize", "print the equational normal form");
  norm_cmd->add_option("file", path)->required();
  norm_cmd->add_option("--out", out_path, "write the report to a file");

  CLI::App* walk_cmd = app.add_subcommand("walk", "random-walk posterior as CSV");
  walk_cmd->add_option("n", walk_n, "number of steps (indices run from 1 to n-1)");
  walk_cmd->add_option("--obs", obs_args, "exact observation INDEX=VALUE");
  walk_cmd->add_option("--out", out_path, "write the CSV to a file");

  CLI::App* fin_run_cmd = app.add_subcommand("fin-run", "run a .fin program");
  fin_run_cmd->add_option("file", path)->required();
  fin_run_cmd->add_option("--mode", mode, "psl or p")->check(CLI::IsMember({"psl", "p"}));
  fin_run_cmd->add_option("--out", out_path, "write the report to a file");

  CLI::App* fin_equiv_cmd =
      app.add_subcommand("fin-equiv", "decide equivalence of two .fin programs");
  fin_equiv_cmd->add_option("file1", path)->required();
  fin_equiv_cmd->add_option("file2", path2)->required();
  fin_equiv_cmd->add_option("--mode", mode, "psl or p")->check(CLI::IsMember({"psl", "p"}));
  fin_equiv_cmd->add_option("--out", out_path, "write the report to a file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(path, denot, both, trace, tol, out_path);
    if (equiv_cmd->parsed()) {
      if (ends_with(path, ".fin") || ends_with(path2, ".fin")) {
        return cmd_equiv_fin(path, path2, mode, out_path);
      }
      return cmd_equiv_gauss(path, path2, tol, seed, out_path);
    }
    if (norm_cmd->parsed()) return cmd_normalize(path, out_path);
    if (walk_cmd->parsed()) return cmd_walk(walk_n, obs_args, out_path);
    if (fin_run_cmd->parsed()) {
      return cmd_fin_run(path, fin_run_cmd->count("--mode") ? mode : "p", out_path);
    }
    if (fin_equiv_cmd->parsed()) return cmd_equiv_fin(path, path2, mode, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
