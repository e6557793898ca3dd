#include "tpca/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "tpca/extensions.hpp"

namespace tpca {

Distribution parse_distribution(std::string_view s) {
  if (s == "gaussian") return Distribution::gaussian;
  if (s == "uniform") return Distribution::uniform;
  throw DomainError("unknown distribution '" + std::string(s) + "'");
}

std::string ProblemSize::label() const {
  return m > 0 ? std::to_string(n) + "x" + std::to_string(m) : std::to_string(n);
}

ProblemSize ProblemSize::parse(std::string_view s) {
  auto to_int = [&](std::string_view t) {
    if (t.empty() || t.size() > 6 || t.find_first_not_of("0123456789") != std::string_view::npos)
      throw DomainError("bad problem size '" + std::string(s) + "'");
    const int v = std::stoi(std::string(t));
    if (v < 1) throw DomainError("problem sizes must be positive");
    return v;
  };
  ProblemSize out;
  if (auto x = s.find('x'); x != std::string_view::npos) {
    out.n = to_int(s.substr(0, x));
    out.m = to_int(s.substr(x + 1));
  } else {
    out.n = to_int(s);
  }
  return out;
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw DomainError("trials must be at least 1");
  if (sizes.empty()) throw DomainError("no problem sizes given");
  if (methods.empty()) throw DomainError("no methods given");
  if (order < 2) throw DomainError("order must be at least 2");
  cfg.validate();
}

int default_threads() {
  if (const char* env = std::getenv("TPCA_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, count));
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (err) std::rethrow_exception(err);
}

namespace {

struct Trial {
  bool ok = false;
  bool rank_one = false;
  int iterations = 0;
  double objective = 0.0;
  double seconds = 0.0;
};

Trial run_trial(const ExperimentSpec& spec, const ProblemSize& size, Method method, std::uint64_t seed) {
  Trial t;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (size.m > 0) {
      const BiquadraticResult r = solve_biquadratic(random_partial_symmetric(size.n, size.m, seed), spec.cfg);
      t.rank_one = r.certified;
      t.iterations = r.iterations;
      t.objective = r.objective;
    } else {
      const SuperSymmetricTensor F = spec.distribution == Distribution::gaussian
                                         ? random_gaussian(size.n, spec.order, seed)
                                         : random_uniform(size.n, spec.order, seed);
      const SolveReport r = spec.order % 2 == 0 ? solve(F, method, spec.cfg)
                                                : solve_leading_pc(F, method, spec.cfg).report;
      t.rank_one = r.certified;
      t.iterations = r.iterations;
      t.objective = r.objective;
    }
    t.ok = true;
  } catch (const std::exception&) {
    t.ok = false;
  }
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return t;
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const int threads = spec.threads > 0 ? spec.threads : default_threads();
  std::vector<ExperimentRow> rows;
  for (const ProblemSize& size : spec.sizes) {
    // The bi-quadratic model has a single (PSD) relaxation.
    std::vector<Method> methods = spec.methods;
    if (size.m > 0) methods = {Method::sdp};

    std::vector<std::vector<Trial>> per_method;
    for (Method method : methods) {
      std::vector<Trial> trials(static_cast<std::size_t>(spec.trials));
      parallel_for(spec.trials, threads, [&](int i) {
        trials[static_cast<std::size_t>(i)] = run_trial(spec, size, method, spec.seed_base + static_cast<std::uint64_t>(i));
      });
      per_method.push_back(std::move(trials));
    }

    std::optional<double> gap;
    if (methods.size() >= 2) {
      double g = 0.0;
      for (int i = 0; i < spec.trials; ++i) {
        const auto& a = per_method[0][static_cast<std::size_t>(i)];
        const auto& b = per_method[1][static_cast<std::size_t>(i)];
        if (a.ok && b.ok) g = std::max(g, std::abs(a.objective - b.objective));
      }
      gap = g;
    }

    for (std::size_t q = 0; q < methods.size(); ++q) {
      ExperimentRow row;
      row.n = size.label();
      row.trials = spec.trials;
      row.method = methods[q];
      row.max_obj_gap = gap;
      int ok = 0;
      for (const Trial& t : per_method[q]) {
        if (!t.ok) {
          ++row.failed_trials;
          continue;
        }
        ++ok;
        row.rank_one_count += t.rank_one ? 1 : 0;
        row.mean_iter += t.iterations;
        row.mean_objective += t.objective;
        row.mean_wall_time += t.seconds;
      }
      if (ok > 0) {
        row.mean_iter /= ok;
        row.mean_objective /= ok;
        row.mean_wall_time /= ok;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kCsvHeader << '\n';
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%.1f,%.10g,%.6f,%s,%d,", r.n.c_str(), r.trials, r.rank_one_count,
                  r.mean_iter, r.mean_objective, r.mean_wall_time, std::string(to_string(r.method)).c_str(),
                  r.failed_trials);
    out << buf;
    if (r.max_obj_gap) {
      std::snprintf(buf, sizeof buf, "%.3e", *r.max_obj_gap);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace tpca
