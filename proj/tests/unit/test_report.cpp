#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "gelfand/cli.hpp"
#include "gelfand/continuation.hpp"
#include "gelfand/errors.hpp"
#include "gelfand/report.hpp"

using namespace gelfand;
namespace fs = std::filesystem;

namespace {

Branch small_branch(const ProblemSpec& tmpl) {
  StopCriteria stop;
  stop.points_after_fold = 20;
  return trace_branch(tmpl, lambda_zero_solution(tmpl), {}, stop);
}

struct CliRun {
  int status;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gelfand_atlas");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run_cli(int(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::path("report_test_out") / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("number formatting and CSV quoting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("branch table round trip reproduces the fold refinement") {
  for (const auto& tmpl : {ProblemSpec::second_order(2), ProblemSpec::fourth_order(5)}) {
    const auto b = small_branch(tmpl);
    const std::string text = branch_csv(b);
    CHECK(text.rfind("s,lambda,u0,w0,delta_u_at_1,pohozaev_residual,mu1\r\n", 0) == 0);
    const auto back = read_branch_csv(text, tmpl);
    REQUIRE(back.points.size() == b.points.size());
    for (std::size_t i = 0; i < b.points.size(); ++i) {
      CHECK(back.points[i].lambda == b.points[i].lambda);
      CHECK(back.points[i].params == b.points[i].params);
    }
    REQUIRE(back.fold_index.has_value());
    CHECK(*back.fold_index == *b.fold_index);
    const double a = find_lambda_star(b, 1e-10).value;
    const double c = find_lambda_star(back, 1e-10).value;
    CHECK(std::fabs(a - c) <= 1e-12);
    CHECK(branch_csv(back) == text);
  }
}

TEST_CASE("malformed branch tables are rejected") {
  const auto tmpl = ProblemSpec::second_order(2);
  CHECK_THROWS_AS(read_branch_csv("", tmpl), Error);
  CHECK_THROWS_AS(read_branch_csv("s,lambda\r\n0,0\r\n", tmpl), Error);
  CHECK_THROWS_AS(read_branch_csv("s,lambda,u0,w0,delta_u_at_1\r\n0,x,0,,0\r\n", tmpl), Error);
}

TEST_CASE("bifurcation diagram markup") {
  const auto b = small_branch(ProblemSpec::second_order(2));
  const std::string svg = branch_svg(b, 1.0, "o2_n2");
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg.find("fold 1.000000") != std::string::npos);
  CHECK(svg == branch_svg(b, 1.0, "o2_n2"));
}

TEST_CASE("atomic writes leave no temporary file") {
  const auto d = scratch("atomic");
  write_atomic(d / "a.txt", "first");
  write_atomic(d / "a.txt", "second");
  CHECK(read_file(d / "a.txt") == "second");
  CHECK_FALSE(fs::exists(d / "a.txt.tmp"));
}

TEST_CASE("constants JSON") {
  const auto j = constants_json(reference_constants(5));
  CHECK(j["q_rhs"].get<double>() == 6.5625);
  CHECK(j["a1"].get<double>() == -1.75);
  CHECK(j["lambda_conj_4th"].get<double>() == 7.8125);
  CHECK(constants_json(reference_constants(2))["q_rhs"].is_null());
}

TEST_CASE("cli lambda-star for the two-dimensional exponential problem") {
  const auto d = scratch("lstar");
  const auto r = cli({"lambda-star", "--order", "2", "--dim", "2", "--g", "exp2u", "--out-dir", d.string()});
  CHECK(r.status == 0);
  CHECK(r.out == "lambda_star ≈ 1.000 ± 1e-3\n");
  CHECK(fs::exists(d / "lambda_star_o2_n2_exp2u.csv"));
}

TEST_CASE("cli identities and rigidity reports") {
  auto r = cli({"identities", "--check", "pohozaev-roots", "--dim", "5", "--lambda", "6.5625"});
  REQUIRE(r.status == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["roots"][0].get<double>() == doctest::Approx(-1.75).epsilon(1e-14));
  CHECK(j["roots"][1].get<double>() == doctest::Approx(-0.75).epsilon(1e-14));
  CHECK(j["constants"]["n"].get<int>() == 5);

  r = cli({"rigidity", "--metric", "round", "--dim", "5"});
  REQUIRE(r.status == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["report"]["all_pass"].get<bool>());
  CHECK(j["report"]["distance_to_round"].get<double>() == 0.0);
}

TEST_CASE("cli failures") {
  auto r = cli({"identities", "--check", "pohozaev-roots", "--dim", "5", "--lambda", "9"});
  CHECK(r.status == 2);
  CHECK(r.err.find("NoRealRoots") != std::string::npos);
  r = cli({"frobnicate"});
  CHECK(r.status == 1);
  r = cli({"solve", "--order", "3"});
  CHECK(r.status == 1);
  r = cli({"solve", "--order", "4", "--dim", "5"});
  CHECK(r.status == 2);
  CHECK(r.err.find("InvalidArgument") != std::string::npos);
  r = cli({"lambda-star", "--refine-tol", "-1"});
  CHECK(r.status == 2);
}

TEST_CASE("cli outputs are byte-identical across runs") {
  const auto d = scratch("determinism");
  for (const char* tag : {"a", "b"}) {
    const auto r = cli({"branch", "--order", "4", "--dim", "5", "--after-fold", "20", "--mu1-every", "10", "--grid", "200",
                        "--csv", (d / (std::string(tag) + ".csv")).string(), "--svg", (d / (std::string(tag) + ".svg")).string()});
    REQUIRE(r.status == 0);
    const auto s = cli({"solve", "--order", "4", "--dim", "5", "--lambda", "6.5625", "--json",
                        (d / (std::string(tag) + ".json")).string()});
    REQUIRE(s.status == 0);
  }
  CHECK(read_file(d / "a.csv") == read_file(d / "b.csv"));
  CHECK(read_file(d / "a.svg") == read_file(d / "b.svg"));
  CHECK(read_file(d / "a.json") == read_file(d / "b.json"));
  CHECK(read_file(d / "a.csv").find(",\r\n") != std::string::npos);
}
