#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tpca/admm.hpp"

namespace tpca {

enum class Distribution { gaussian, uniform };
Distribution parse_distribution(std::string_view s);

/// Problem size of one experiment row: n for super-symmetric instances,
/// n x m for bi-quadratic ones.
struct ProblemSize {
  int n = 0;
  int m = 0;  ///< 0 unless bi-quadratic
  std::string label() const;
  static ProblemSize parse(std::string_view s);  ///< "5" or "4x6"
};

struct ExperimentSpec {
  std::vector<ProblemSize> sizes;
  int order = 4;  ///< tensor order for super-symmetric instances
  int trials = 100;
  std::vector<Method> methods{Method::sdp};
  Distribution distribution = Distribution::gaussian;
  SolverConfig cfg;
  std::uint64_t seed_base = 0;  ///< trial t uses seed_base + t
  int threads = 0;              ///< 0: TPCA_THREADS or hardware concurrency

  void validate() const;
};

struct ExperimentRow {
  std::string n;
  int trials = 0;
  int rank_one_count = 0;
  double mean_iter = 0.0;
  double mean_objective = 0.0;
  double mean_wall_time = 0.0;  ///< seconds, machine dependent
  Method method = Method::sdp;
  int failed_trials = 0;
  std::optional<double> max_obj_gap;  ///< max |obj_nnp - obj_sdp| when both ran
};

/// Column order of the CSV output.
inline constexpr const char* kCsvHeader =
    "n,trials,rank_one_count,mean_iter,mean_objective,mean_wall_time,method,failed_trials,max_obj_gap";

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec);
void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);

/// Worker count from TPCA_THREADS, else hardware concurrency (at least 1).
int default_threads();

/// Runs body(i) for i in [0, count) on `threads` workers. Exceptions from
/// body are rethrown after all workers finish.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace tpca
