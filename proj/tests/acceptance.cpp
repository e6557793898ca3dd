// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <string>
#include <vector>

#include "support.hpp"
#include "tpca/experiment.hpp"
#include "tpca/extensions.hpp"
#include "tpca/kernels.hpp"
#include "tpca/oracle.hpp"

using namespace tpca;
using namespace tpca::testing;

namespace {

int failures = 0;
const int kThreads = default_threads();

// Collects the solve contract of every criterion-1/2 run.
struct ContractLog {
  std::mutex mu;
  int solves = 0;
  int not_converged = 0;
  int bound_violations = 0;
  double worst_bound_slack = 1e300;

  void add(const SolveReport& r, const SolverConfig& cfg) {
    std::lock_guard lock(mu);
    ++solves;
    if (r.termination != Termination::converged || r.iterations > cfg.max_iter ||
        r.rel_change + r.primal_residual > cfg.tol)
      ++not_converged;
    if (r.method == Method::nnp) {
      const double slack = r.penalized_objective - (r.diagonal_bound - 1e-6);
      worst_bound_slack = std::min(worst_bound_slack, slack);
      if (slack < 0.0) ++bound_violations;
    }
  }
} contract;

void report(int id, bool ok, const std::string& detail, double seconds) {
  if (!ok) ++failures;
  std::printf("criterion %2d: %s  %s  (%.1fs)\n", id, ok ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
}

template <class F>
void timed(int id, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(id, ok, detail, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

bool worked_examples(std::string& detail) {
  const Vector x1 = vec({-0.6671, -0.2472, 0.7027}), x2 = vec({0.0116, 0.9992, 0.0382});
  bool ok = true;
  double worst = 0.0;
  for (Method m : {Method::nnp, Method::sdp}) {
    const SolverConfig cfg;
    const auto a = solve(quartic_example(), m, cfg);
    const auto b = solve(fiber_example(), m, cfg);
    contract.add(a, cfg);
    contract.add(b, cfg);
    const double da = sign_free_distance(a.extracted_x, x1), db = sign_free_distance(b.extracted_x, x2);
    worst = std::max({worst, da, db});
    ok = ok && a.certified && b.certified && da <= 1e-3 && db <= 1e-3;
  }
  detail = fmt("both examples certified under nnp and sdp, worst component error %.1e", worst);
  return ok;
}

bool rank_one_frequency(std::string& detail) {
  bool ok = true;
  for (Method m : {Method::nnp, Method::sdp}) {
    detail += std::string(to_string(m)) + ":";
    for (int n = 3; n <= 6; ++n) {
      std::atomic<int> certified = 0;
      parallel_for(100, kThreads, [&](int t) {
        const SolverConfig cfg;
        const auto r = solve(random_gaussian(n, 4, static_cast<std::uint64_t>(1000 * n + t)), m, cfg);
        contract.add(r, cfg);
        if (r.certified) ++certified;
      });
      detail += fmt(" n=%d %d/100", n, certified.load());
      ok = ok && certified >= 95;
    }
    detail += "  ";
  }
  return ok;
}

bool model_agreement(std::string& detail) {
  std::mutex mu;
  double worst_obj = 0.0, worst_x = 0.0;
  parallel_for(40, kThreads, [&](int t) {
    const int n = t < 20 ? 6 : 7;
    const auto F = random_gaussian(n, 4, static_cast<std::uint64_t>(5000 + t));
    const auto a = solve_nnp(F), b = solve_sdp(F);
    const double dobj = std::abs(a.objective - b.objective);
    const double dx = (a.X - b.X).norm() / b.X.norm();
    std::lock_guard lock(mu);
    worst_obj = std::max(worst_obj, dobj);
    worst_x = std::max(worst_x, dx);
  });
  detail = fmt("20 instances each at n=6,7: max |obj diff| %.1e, max rel ||X diff|| %.1e", worst_obj, worst_x);
  return worst_obj <= 1e-3 && worst_x <= 1e-2;
}

bool global_certification(std::string& detail) {
  std::mutex mu;
  int certified = 0, matched = 0;
  double worst = 0.0;
  parallel_for(100, kThreads, [&](int t) {
    const int n = t < 50 ? 2 : 3;
    const auto F = random_gaussian(n, 4, static_cast<std::uint64_t>(7000 + t));
    const auto r = solve_sdp(F);
    if (!r.certified) return;
    const double gap = rel(r.objective, sphere_grid_max(F).value);
    std::lock_guard lock(mu);
    ++certified;
    worst = std::max(worst, gap);
    if (gap <= 1e-3) ++matched;
  });
  detail = fmt("%d/100 certified, %d of those match the sphere grid, worst gap %.1e", certified, matched, worst);
  return matched == certified && certified > 0;
}

bool projection(std::string& detail) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  double worst_kkt = 0.0, worst_trace = 0.0, worst_sym = 0.0;
  auto check = [&](const SymmetricMatrix& Z, int n) {
    const auto r = project_C(Z, n, 2);
    worst_kkt = std::max(worst_kkt, (r.X - kkt_project(Z, n, 2)).cwiseAbs().maxCoeff());
    worst_trace = std::max(worst_trace, std::abs(r.X.trace() - 1.0));
    worst_sym = std::max(worst_sym, is_super_symmetric(matr_inv(r.X, n, 2), 0.0).max_violation);
    return r;
  };
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 2;
    Eigen::MatrixXd M(n * n, n * n);
    for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = g(rng);
    check(0.5 * (M + M.transpose()), n);
  }
  const auto hand = check(2.0 * matr(rank_one(1.0, vec({1, 0}), 4)), 2);
  const auto T = matr_inv(hand.X, 2, 2);
  const bool hand_ok = std::abs(hand.lambda + 0.75) < 1e-12 && std::abs(T({0, 0, 0, 0}) - 13.0 / 8) < 1e-12 &&
                       std::abs(T({0, 0, 1, 1}) + 1.0 / 8) < 1e-12 && std::abs(T({1, 1, 1, 1}) + 3.0 / 8) < 1e-12 &&
                       T({0, 0, 0, 1}) == 0.0 && T({0, 1, 1, 1}) == 0.0;
  detail = fmt("max diff vs dense KKT %.1e, trace error %.1e, symmetry %.1e, lambda=-3/4 case %s", worst_kkt,
               worst_trace, worst_sym, hand_ok ? "ok" : "wrong");
  return worst_kkt <= 1e-8 && worst_trace <= 1e-14 && worst_sym <= 1e-12 && hand_ok;
}

bool rank_one_equivalence(std::string& detail) {
  std::mt19937_64 rng(123);
  std::normal_distribution<double> g;
  double worst_ratio = 0.0, worst_rec = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + t % 5, d = t % 3 == 0 ? 1 : 2;
    const Vector a = random_unit(n, rng);
    const double lam = std::abs(g(rng)) + 0.1;
    const auto T = rank_one(lam, a, 2 * d);
    const auto r = rank_one_ratio(matr(T));
    worst_ratio = std::max(worst_ratio, r.ratio);
    const Vector x = recover_vector(r.eigenvector, n, d);
    auto diff = rank_one(r.eigenvalue, x, 2 * d);
    diff -= T;
    worst_rec = std::max(worst_rec, diff.norm() / T.norm());
  }
  detail = fmt("200 tensors: max ratio %.1e, max reconstruction error %.1e", worst_ratio, worst_rec);
  return worst_ratio <= 1e-10 && worst_rec <= 1e-8;
}

bool reduction_identities(std::string& detail) {
  std::mt19937_64 rng(321);
  std::normal_distribution<double> g;
  auto gauss = [&](int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = g(rng);
    return v;
  };
  auto relerr = [](double a, double b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); };
  double tri = 0, quad = 0, multi = 0, odd = 0;

  const GeneralTensor F3 = random_general({3, 4, 5}, 1);
  const auto G3 = trilinear_to_biquadratic(F3);
  const GeneralTensor F4 = random_general({2, 3, 4, 2}, 2);
  const auto G4 = quadrilinear_to_biquadratic(F4);
  const GeneralTensor F6 = random_general({2, 2, 3, 2, 2, 2}, 3);
  const auto T6 = multilinear_embed(F6);
  const BlockEmbedding E6({2, 2, 3, 2, 2, 2});
  const auto F5 = random_gaussian(3, 5, 4);
  const auto G10 = odd_to_even(F5);
  for (int p = 0; p < 100; ++p) {
    const Vector x = gauss(3), y = gauss(4);
    Vector v(5);
    for (int k = 0; k < 5; ++k) v[k] = brute_multilinear(F3, {x, y, Vector::Unit(5, k)});
    tri = std::max(tri, relerr(G3.eval(x, y), v.squaredNorm()));

    const std::vector<Vector> b4{gauss(2), gauss(3), gauss(4), gauss(2)};
    Vector s(6), t(5);
    s << b4[0], b4[2];
    t << b4[1], b4[3];
    quad = std::max(quad, relerr(G4.eval(s, t), brute_multilinear(F4, b4)));

    std::vector<Vector> b6;
    for (int k : E6.sizes()) b6.push_back(gauss(k));
    multi = std::max(multi, relerr(eval_homogeneous(T6, E6.stack(b6)), brute_multilinear(F6, b6)));

    const Vector z = gauss(3);
    Vector w(3);
    for (int k = 0; k < 3; ++k) {
      std::vector<Vector> args(4, z);
      args.push_back(Vector::Unit(3, k));
      w[k] = brute_multilinear(F5.to_dense(), args);
    }
    odd = std::max(odd, relerr(eval_homogeneous(G10, z), w.squaredNorm()));
  }
  detail = fmt("100 probes each: tri-linear %.1e, quadri-linear %.1e, multi-linear %.1e, odd order %.1e", tri, quad,
               multi, odd);
  return std::max({tri, quad, multi, odd}) <= 1e-10;
}

bool biquadratic_frequency(std::string& detail) {
  bool ok = true;
  for (auto [n, m] : {std::pair{4, 4}, std::pair{4, 6}}) {
    std::atomic<int> certified = 0;
    parallel_for(100, kThreads, [&](int t) {
      if (solve_biquadratic(random_partial_symmetric(n, m, static_cast<std::uint64_t>(9000 + 100 * m + t))).certified)
        ++certified;
    });
    detail += fmt("(%d,%d): %d/100  ", n, m, certified.load());
    ok = ok && certified >= 95;
  }
  return ok;
}

bool third_order_success(std::string& detail) {
  bool ok = true;
  for (Distribution dist : {Distribution::gaussian, Distribution::uniform}) {
    std::atomic<int> attained = 0;
    parallel_for(100, kThreads, [&](int t) {
      const auto seed = static_cast<std::uint64_t>(11000 + t);
      const auto F = dist == Distribution::gaussian ? random_gaussian(4, 3, seed) : random_uniform(4, 3, seed);
      const double oracle = multistart_local(F, 50, seed).value;
      const double got = solve_leading_pc(F, Method::sdp).pc.lambda_star;
      if (got >= oracle - 1e-3 * std::max(1.0, std::abs(oracle))) ++attained;
    });
    detail += fmt("%s: %d/100  ", dist == Distribution::gaussian ? "gaussian" : "uniform", attained.load());
    ok = ok && attained >= 98;
  }
  return ok;
}

bool admm_contract(std::string& detail) {
  detail = fmt("%d solves: %d without converged stop, %d penalty-bound violations (min slack %.2e)", contract.solves,
               contract.not_converged, contract.bound_violations, contract.worst_bound_slack);
  return contract.solves > 0 && contract.not_converged == 0 && contract.bound_violations == 0;
}

}  // namespace

int main() {
  std::printf("kernels: %s, threads: %d\n", std::string(kernels::isa_name(kernels::active_isa())).c_str(), kThreads);
  timed(1, worked_examples);
  timed(2, rank_one_frequency);
  timed(3, model_agreement);
  timed(4, global_certification);
  timed(5, projection);
  timed(6, rank_one_equivalence);
  timed(7, reduction_identities);
  timed(8, biquadratic_frequency);
  timed(9, third_order_success);
  timed(10, admm_contract);
  std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
