// tpca: solve, generate, and benchmark tensor principal component problems.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tpca/experiment.hpp"
#include "tpca/extensions.hpp"
#include "tpca/kernels.hpp"
#include "tpca/oracle.hpp"
#include "tpca/tensor_io.hpp"

using json = nlohmann::ordered_json;
using namespace tpca;

namespace {

struct SolveOptions {
  std::string input;
  std::string method = "sdp";
  SolverConfig cfg;
  bool json = false;
};

struct Outcome {
  bool certified = false;
  bool fallback = false;
  double lambda = 0.0;
  std::vector<Vector> vectors;
  const SolveReport* report = nullptr;
  double objective = 0.0;
  double rank_one_ratio = 0.0;
  int iterations = 0;
  Termination termination = Termination::iter_cap;
};

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string label(const std::string& name) { return name + std::string(name.size() < 16 ? 16 - name.size() : 1, ' '); }

std::string fmt_vec(const Vector& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s;
}

int cmd_solve(const SolveOptions& opt) {
  const TensorFile file = read_tensor_file(opt.input);
  const Method method = parse_method(opt.method);
  Outcome out;
  LeadingPc pc;
  std::string problem;

  switch (file.kind) {
    case TensorKind::super_symmetric: {
      problem = file.order() % 2 == 0 ? "homogeneous" : "homogeneous_odd";
      pc = solve_leading_pc(to_super_symmetric(file), method, opt.cfg);
      out.certified = pc.pc.certified;
      out.fallback = pc.used_fallback;
      out.lambda = pc.pc.lambda_star;
      out.vectors = {pc.pc.x_star};
      out.report = &pc.report;
      out.objective = pc.report.objective;
      out.rank_one_ratio = pc.report.rank_one_ratio;
      out.iterations = pc.report.iterations;
      out.termination = pc.report.termination;
      break;
    }
    case TensorKind::partial_symmetric: {
      problem = "biquadratic";
      const BiquadraticResult r = solve_biquadratic(to_partial_symmetric(file), opt.cfg);
      out.certified = r.certified;
      out.fallback = r.used_fallback;
      out.lambda = r.lambda;
      out.vectors = {r.x, r.y};
      out.objective = r.objective;
      out.rank_one_ratio = r.rank_one_ratio;
      out.iterations = r.iterations;
      out.termination = r.termination;
      break;
    }
    case TensorKind::general: {
      const GeneralTensor F = to_general(file);
      MultilinearResult r;
      if (F.order() == 3) {
        problem = "trilinear";
        r = solve_trilinear(F, opt.cfg);
      } else if (F.order() == 4) {
        problem = "quadrilinear";
        r = solve_quadrilinear(F, opt.cfg);
      } else if (F.order() % 2 == 0) {
        problem = "multilinear";
        r = solve_multilinear(F, method, opt.cfg);
      } else {
        throw DomainError("general tensors of order " + std::to_string(F.order()) + " are not supported");
      }
      out.certified = r.certified;
      out.fallback = r.used_fallback;
      out.lambda = r.value;
      out.vectors = r.blocks;
      break;
    }
  }

  if (opt.json) {
    json j;
    j["problem"] = problem;
    j["method"] = file.kind == TensorKind::partial_symmetric ? "sdp" : opt.method;
    j["certified"] = out.certified;
    j["fallback"] = out.fallback;
    j["lambda"] = out.lambda;
    if (out.vectors.size() == 1) {
      j["x"] = to_std(out.vectors.front());
    } else {
      json blocks = json::array();
      for (const Vector& v : out.vectors) blocks.push_back(to_std(v));
      j["blocks"] = blocks;
    }
    if (file.kind != TensorKind::general) {
      j["objective"] = out.objective;
      j["rank_one_ratio"] = out.rank_one_ratio;
      j["iterations"] = out.iterations;
      j["termination"] = to_string(out.termination);
    }
    if (out.report) {
      j["nuclear_norm"] = out.report->nuclear_norm;
      j["neg_eig_mass"] = out.report->neg_eig_mass;
      j["primal_residual"] = out.report->primal_residual;
      j["rel_change"] = out.report->rel_change;
    }
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "problem         " << problem << '\n';
    std::cout << "status          " << (out.certified ? "certified rank-one" : "not rank-one (local fallback)") << '\n';
    std::cout << "lambda          " << fmt(out.lambda) << '\n';
    if (out.vectors.size() == 1) {
      std::cout << "x               " << fmt_vec(out.vectors.front()) << '\n';
    } else {
      for (std::size_t b = 0; b < out.vectors.size(); ++b)
        std::cout << label("x" + std::to_string(b + 1)) << fmt_vec(out.vectors[b]) << '\n';
    }
    if (file.kind != TensorKind::general) {
      std::cout << "objective       " << fmt(out.objective) << '\n';
      std::cout << "rank_one_ratio  " << fmt(out.rank_one_ratio) << '\n';
      std::cout << "iterations      " << out.iterations << '\n';
      std::cout << "termination     " << to_string(out.termination) << '\n';
    }
    if (out.report) {
      std::cout << "nuclear_norm    " << fmt(out.report->nuclear_norm) << '\n';
      std::cout << "neg_eig_mass    " << fmt(out.report->neg_eig_mass) << '\n';
    }
  }
  return out.certified ? 0 : 2;
}

struct GenOptions {
  int n = 3;
  int m = 0;
  int order = 4;
  std::string kind = "super_symmetric";
  std::string dist = "gaussian";
  std::uint64_t seed = 0;
  std::string output = "-";
};

int cmd_gen(const GenOptions& opt) {
  TensorFile f;
  switch (parse_kind(opt.kind)) {
    case TensorKind::super_symmetric:
      f = to_file(parse_distribution(opt.dist) == Distribution::gaussian ? random_gaussian(opt.n, opt.order, opt.seed)
                                                                          : random_uniform(opt.n, opt.order, opt.seed));
      break;
    case TensorKind::general:
      f = to_file(random_general(std::vector<int>(static_cast<std::size_t>(opt.order), opt.n), opt.seed));
      break;
    case TensorKind::partial_symmetric:
      f = to_file(random_partial_symmetric(opt.n, opt.m > 0 ? opt.m : opt.n, opt.seed));
      break;
  }
  if (opt.output == "-")
    write_tensor_file(std::cout, f);
  else
    write_tensor_file(opt.output, f);
  return 0;
}

struct ExperimentOptions {
  std::vector<std::string> sizes;
  std::vector<std::string> methods{"sdp"};
  int order = 4;
  int trials = 100;
  std::string dist = "gaussian";
  std::uint64_t seed = 0;
  int threads = 0;
  SolverConfig cfg;
  std::string output = "-";
};

int cmd_experiment(const ExperimentOptions& opt) {
  ExperimentSpec spec;
  for (const auto& s : opt.sizes) spec.sizes.push_back(ProblemSize::parse(s));
  spec.methods.clear();
  for (const auto& m : opt.methods) spec.methods.push_back(parse_method(m));
  spec.order = opt.order;
  spec.trials = opt.trials;
  spec.distribution = parse_distribution(opt.dist);
  spec.seed_base = opt.seed;
  spec.threads = opt.threads;
  spec.cfg = opt.cfg;
  const auto rows = run_experiment(spec);
  if (opt.output == "-") {
    write_csv(std::cout, rows);
  } else {
    std::ofstream out(opt.output);
    if (!out) throw std::runtime_error("cannot write '" + opt.output + "'");
    write_csv(out, rows);
  }
  return 0;
}

struct OracleOptions {
  std::string input;
  int restarts = 20;
  int resolution = 0;
  std::uint64_t seed = 0;
};

int cmd_oracle(const OracleOptions& opt) {
  const TensorFile file = read_tensor_file(opt.input);
  OracleResult r;
  std::string how;
  if (file.kind == TensorKind::super_symmetric) {
    const SuperSymmetricTensor F = to_super_symmetric(file);
    if (F.dim() <= 3 && F.order() % 2 == 0) {
      r = sphere_grid_max(F, opt.resolution);
      how = "sphere_grid";
      const OracleResult local = multistart_local(F, opt.restarts, opt.seed);
      if (local.value > r.value) r = local;
    } else {
      r = multistart_local(F, opt.restarts, opt.seed);
      how = "multistart";
    }
  } else if (file.kind == TensorKind::partial_symmetric) {
    r = product_grid_max(to_partial_symmetric(file), opt.resolution);
    how = "product_grid";
  } else {
    r = circle_product_grid_max(to_general(file), opt.resolution > 0 ? opt.resolution : 64);
    how = "circle_grid";
  }
  std::cout << "oracle          " << how << '\n';
  std::cout << "value           " << fmt(r.value) << '\n';
  for (std::size_t b = 0; b < r.argmax.size(); ++b)
    std::cout << label(r.argmax.size() == 1 ? "x" : "x" + std::to_string(b + 1)) << fmt_vec(r.argmax[b]) << '\n';
  return 0;
}

void add_solver_flags(CLI::App* app, SolverConfig& cfg) {
  app->add_option("--rho", cfg.rho, "Nuclear-norm penalty")->capture_default_str();
  app->add_option("--mu", cfg.mu, "ADMM penalty parameter")->capture_default_str();
  app->add_option("--tol", cfg.tol, "Stopping tolerance")->capture_default_str();
  app->add_option("--max-iter", cfg.max_iter, "Iteration cap")->capture_default_str();
  app->add_option("--rank-tol", cfg.rank_tol, "Rank-one certificate threshold")->capture_default_str();
  app->add_option("--seed", cfg.seed, "Seed for randomized post-processing")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor principal component analysis by convex matrix relaxations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tpca 1.0");

  SolveOptions solve_opt;
  auto* solve = app.add_subcommand("solve", "Compute the leading principal component of a tensor file");
  solve->add_option("input", solve_opt.input, "Tensor file")->required();
  solve->add_option("--method", solve_opt.method, "Convex model: nnp or sdp")
      ->check(CLI::IsMember({"nnp", "sdp"}))
      ->capture_default_str();
  solve->add_flag("--json", solve_opt.json, "Print the report as JSON");
  add_solver_flags(solve, solve_opt.cfg);

  GenOptions gen_opt;
  auto* gen = app.add_subcommand("gen", "Write a random tensor file");
  gen->add_option("--n", gen_opt.n, "Dimension")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--m", gen_opt.m, "Second dimension (partial_symmetric)")->check(CLI::NonNegativeNumber);
  gen->add_option("--order", gen_opt.order, "Tensor order")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--kind", gen_opt.kind, "super_symmetric, general or partial_symmetric")
      ->check(CLI::IsMember({"super_symmetric", "general", "partial_symmetric"}))
      ->capture_default_str();
  gen->add_option("--dist", gen_opt.dist, "gaussian or uniform")
      ->check(CLI::IsMember({"gaussian", "uniform"}))
      ->capture_default_str();
  gen->add_option("--seed", gen_opt.seed, "Random seed")->capture_default_str();
  gen->add_option("-o,--output", gen_opt.output, "Output path, '-' for stdout")->capture_default_str();

  ExperimentOptions exp_opt;
  auto* exp = app.add_subcommand("experiment", "Rank-one frequency experiment, CSV output");
  exp->add_option("--n", exp_opt.sizes, "Problem sizes, e.g. 3,4,5 or 4x4,4x6 for bi-quadratic")
      ->delimiter(',')
      ->required();
  exp->add_option("--method", exp_opt.methods, "nnp, sdp or both")->delimiter(',')->capture_default_str();
  exp->add_option("--order", exp_opt.order, "Tensor order")->check(CLI::Range(2, 12))->capture_default_str();
  exp->add_option("--trials", exp_opt.trials, "Instances per size")->check(CLI::PositiveNumber)->capture_default_str();
  exp->add_option("--dist", exp_opt.dist, "gaussian or uniform")
      ->check(CLI::IsMember({"gaussian", "uniform"}))
      ->capture_default_str();
  exp->add_option("--seed-base", exp_opt.seed, "Trial t uses seed-base + t")->capture_default_str();
  exp->add_option("--threads", exp_opt.threads, "Worker threads (default: TPCA_THREADS or all cores)");
  exp->add_option("-o,--output", exp_opt.output, "CSV path, '-' for stdout")->capture_default_str();
  add_solver_flags(exp, exp_opt.cfg);

  OracleOptions or_opt;
  auto* orc = app.add_subcommand("oracle", "Brute-force reference value for small tensors");
  orc->add_option("input", or_opt.input, "Tensor file")->required();
  orc->add_option("--restarts", or_opt.restarts, "Local restarts")->check(CLI::PositiveNumber)->capture_default_str();
  orc->add_option("--resolution", or_opt.resolution, "Grid points per angle (0: default)");
  orc->add_option("--seed", or_opt.seed, "Random seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve) return cmd_solve(solve_opt);
    if (*gen) return cmd_gen(gen_opt);
    if (*exp) return cmd_experiment(exp_opt);
    if (*orc) return cmd_oracle(or_opt);
  } catch (const ParseError& e) {
    std::cerr << "error: " << solve_opt.input << or_opt.input << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
