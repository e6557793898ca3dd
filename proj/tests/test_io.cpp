#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "tpca/experiment.hpp"
#include "tpca/tensor_io.hpp"

using namespace tpca;
using namespace tpca::testing;

namespace {

TensorFile parse(const std::string& text) {
  std::istringstream in(text);
  return parse_tensor_file(in);
}

std::string dump(const TensorFile& f) {
  std::ostringstream out;
  write_tensor_file(out, f);
  return out.str();
}

void check_error(const std::string& text, int line, int column) {
  CAPTURE(text);
  try {
    parse(text);
    FAIL("no error raised");
  } catch (const ParseError& e) {
    CHECK(e.line() == line);
    CHECK(e.column() == column);
  }
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("super-symmetric round trip is bit exact") {
    const auto F = random_gaussian(3, 4, 5);
    const auto back = to_super_symmetric(parse(dump(to_file(F))));
    CHECK(std::equal(F.values().begin(), F.values().end(), back.values().begin()));
    CHECK(dump(to_file(back)) == dump(to_file(F)));
  }

  TEST_CASE("general and partial round trips") {
    const GeneralTensor g = random_general({2, 3, 4}, 6);
    const auto gb = to_general(parse(dump(to_file(g))));
    CHECK(gb.dims() == g.dims());
    CHECK(std::equal(g.values().begin(), g.values().end(), gb.values().begin()));

    const auto p = random_partial_symmetric(3, 2, 7);
    const auto pf = parse(dump(to_file(p)));
    CHECK(pf.kind == TensorKind::partial_symmetric);
    const auto pb = to_partial_symmetric(pf);
    CHECK(std::equal(p.dense().values().begin(), p.dense().values().end(), pb.dense().values().begin()));
  }

  TEST_CASE("reads the documented layout") {
    const auto f = parse(
        "tpca-tensor 1\n"
        "# comment\n"
        "kind super_symmetric\n"
        "dims 2 2\n"
        "entries 2\n"
        "1 1 0.5   # trailing comment\n"
        "1 2 -3e-1\n");
    CHECK(f.format_version == 1);
    CHECK(f.entries.size() == 2);
    const auto F = to_super_symmetric(f);
    CHECK(F({1, 0}) == -0.3);
    CHECK(F({0, 0}) == 0.5);
    CHECK(parse_kind("general") == TensorKind::general);
    CHECK_THROWS(parse_kind("sparse"));
  }

  TEST_CASE("parse errors carry line and column") {
    const std::string head = "tpca-tensor 1\nkind super_symmetric\ndims 3 3\n";
    check_error("tpca-tensor 2\n", 1, 13);
    check_error("matrix 1\n", 1, 1);
    check_error(head + "entries 1\n1 4 0.5\n", 5, 3);
    check_error(head + "entries 1\n2 1 0.5\n", 5, 1);
    check_error(head + "entries 2\n1 2 0.5\n1 2 0.5\n", 6, 1);
    check_error(head + "entries 1\n1 2 abc\n", 5, 5);
    check_error(head + "entries 2\n1 2 0.5\n", 6, 1);
    check_error("tpca-tensor 1\nkind partial_symmetric\ndims 2 2 2 2\nentries 1\n2 1 1 1 1.0\n", 5, 1);
    CHECK_THROWS_AS(read_tensor_file("/nonexistent/file.tensor"), std::runtime_error);
  }

  TEST_CASE("problem sizes") {
    CHECK(ProblemSize::parse("5").n == 5);
    CHECK(ProblemSize::parse("5").m == 0);
    const auto s = ProblemSize::parse("4x6");
    CHECK(s.n == 4);
    CHECK(s.m == 6);
    CHECK(s.label() == "4x6");
    CHECK_THROWS(ProblemSize::parse("x"));
    CHECK_THROWS(ProblemSize::parse("0"));
    CHECK(parse_distribution("uniform") == Distribution::uniform);
  }

  TEST_CASE("experiment rows and csv schema") {
    ExperimentSpec spec;
    spec.sizes = {ProblemSize::parse("3"), ProblemSize::parse("2x2")};
    spec.trials = 3;
    spec.methods = {Method::sdp, Method::nnp};
    spec.threads = 2;
    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].method == Method::sdp);
    CHECK(rows[1].method == Method::nnp);
    CHECK(rows[2].n == "2x2");
    for (const auto& r : rows) {
      CHECK(r.trials == 3);
      CHECK(r.failed_trials == 0);
      CHECK(r.rank_one_count <= 3);
    }
    REQUIRE(rows[1].max_obj_gap.has_value());
    CHECK(*rows[1].max_obj_gap <= 1e-3);

    std::ostringstream out;
    write_csv(out, rows);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == kCsvHeader);
    int count = 0;
    while (std::getline(in, line)) {
      ++count;
      CHECK(std::count(line.begin(), line.end(), ',') == 8);
    }
    CHECK(count == 3);

    // Thread count never changes results.
    spec.threads = 1;
    const auto serial = run_experiment(spec);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      CHECK(serial[k].mean_objective == rows[k].mean_objective);
      CHECK(serial[k].rank_one_count == rows[k].rank_one_count);
    }
  }

  TEST_CASE("parallel_for rethrows worker errors") {
    std::vector<int> hits(50, 0);
    parallel_for(50, 4, [&](int i) { hits[static_cast<std::size_t>(i)] = 1; });
    CHECK(std::count(hits.begin(), hits.end(), 1) == 50);
    CHECK_THROWS_AS(parallel_for(10, 3, [](int i) {
      if (i == 7) throw DomainError("boom");
    }),
                    DomainError);
  }
}
