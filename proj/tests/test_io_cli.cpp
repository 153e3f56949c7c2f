#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "sympmarg/circuit.hpp"
#include "sympmarg/cli.hpp"
#include "sympmarg/io.hpp"
#include "sympmarg/sampling.hpp"

using namespace sympmarg;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
  json last() const {
    std::istringstream lines(out);
    std::string line, prev;
    while (std::getline(lines, line))
      if (!line.empty()) prev = line;
    return prev.empty() ? json() : json::parse(prev);
  }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("sympmarg_test_" + name)).string();
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("matrix text round trip is exact") {
  std::mt19937_64 rng(61);
  const RandomState st = random_state(3, 4.0, rng);
  const MatrixFile f{3, MatrixKind::Covariance, st.gamma};
  std::ostringstream first;
  write_matrix(first, f);
  std::istringstream in(first.str());
  const MatrixFile back = read_matrix(in);
  CHECK(back.n == 3);
  CHECK(back.kind == MatrixKind::Covariance);
  CHECK(max_abs(back.body - st.gamma) == 0.0);
  std::ostringstream second;
  write_matrix(second, back);
  CHECK(first.str() == second.str());
}

TEST_CASE("comments and blank lines are ignored") {
  std::istringstream in("# header\nn 1\n\nordering xpxp\nkind symplectic # trailing\n2 0\n0 0.5\n");
  const MatrixFile f = read_matrix(in);
  CHECK(f.kind == MatrixKind::Symplectic);
  CHECK(f.body(0, 0) == 2.0);
  CHECK(f.body(1, 1) == 0.5);
}

TEST_CASE("parse errors name the position") {
  std::istringstream bad("n 1\nordering xpxp\nkind covariance\n1 0\n0 abc\n");
  try {
    read_matrix(bad);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    const std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
    CHECK(msg.find("abc") != std::string::npos);
  }
  std::istringstream short_row("n 1\nordering xpxp\nkind covariance\n1 0\n0\n");
  CHECK_THROWS_AS(read_matrix(short_row), Error);
  std::istringstream missing_row("n 1\nordering xpxp\nkind covariance\n1 0\n");
  CHECK_THROWS_AS(read_matrix(missing_row), Error);
  std::istringstream other_order("n 1\nordering xxpp\nkind covariance\n1 0\n0 1\n");
  CHECK_THROWS_AS(read_matrix(other_order), Error);
}

TEST_CASE("vector parsing") {
  CHECK(parse_vector("1.5,2,3") == std::vector<double>{1.5, 2, 3});
  CHECK(parse_vector(" 1 , 2 ") == std::vector<double>{1, 2});
  try {
    parse_vector("1,x,3");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("entry 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_vector("1,,2"), Error);
  CHECK_THROWS_AS(parse_vector("nan"), Error);
}

TEST_CASE("real formatting round trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 2.0 + std::sqrt(3.0), -7.25})
    CHECK(std::strtod(format_real(v).c_str(), nullptr) == v);
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("check exit codes") {
  const Outcome ok = run({"check", "--c", "1.5,1.5", "--d", "1,2"});
  CHECK(ok.code == 0);
  const json r = ok.last();
  CHECK(r["command"] == "check");
  CHECK(r["verdict"] == "feasible");
  CHECK(r["exit_code"] == 0);
  CHECK(r["tolerances"].size() == 7);

  CHECK(run({"check", "--c", "1,1,5", "--d", "1,1,1"}).code == 1);
  CHECK(run({"check", "--pure", "--b", "1,1,3"}).code == 1);
  CHECK(run({"check", "--pure", "--b", "1,1,2"}).code == 0);
  CHECK(run({"check", "--c", "1,2", "--d", "1"}).code == 2);
  CHECK(run({"check", "--c", "1,x", "--d", "1,1"}).code == 2);
  CHECK(run({"check", "--c", "1,2", "--d", "0,1"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("unsorted input is accepted on the command line") {
  const Outcome o = run({"check", "--c", "2,1.5", "--d", "2,1"});
  CHECK(o.code == 0);
}

TEST_CASE("tolerance flag and environment") {
  CHECK(run({"check", "--c", "1,1", "--d", "1,1.0000001"}).code == 1);
  CHECK(run({"check", "--tol", "1e-6", "--c", "1,1", "--d", "1,1.0000001"}).code == 0);
  setenv(cli::kTolEnv, "1e-5", 1);
  const Outcome o = run({"check", "--c", "1,1", "--d", "1,1.0000001"});
  CHECK(o.code == 0);
  CHECK(o.last()["tolerances"]["tol_ineq"] == 1e-5);
  setenv(cli::kTolEnv, "oops", 1);
  CHECK(run({"check", "--c", "1,1", "--d", "1,1"}).code == 2);
  unsetenv(cli::kTolEnv);
}

TEST_CASE("inputs digest is stable") {
  const json a = run({"check", "--c", "1.5,1.5", "--d", "1,2"}).last();
  const json b = run({"check", "--c", "1.5,1.5", "--d", "1,2"}).last();
  const json c = run({"check", "--c", "1.5,1.5", "--d", "1,2.5"}).last();
  CHECK(a["inputs_digest"] == b["inputs_digest"]);
  CHECK(a["inputs_digest"] != c["inputs_digest"]);
  CHECK(cli::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(cli::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("synth writes a matrix that passes the check") {
  const std::string path = temp_path("synth.mat");
  CHECK(run({"synth", "--c", "2,2", "--d", "1,1", "--out", path}).code == 0);
  CHECK(run({"check", "--matrix", path}).code == 0);
  const MatrixFile f = load_matrix(path);
  CHECK(f.n == 2);
  CHECK(std::abs(std::abs(f.body(0, 2)) - std::sqrt(3.0)) < 1e-12);
  CHECK(run({"synth", "--c", "1,5", "--d", "1,1"}).code == 1);
  CHECK(run({"synth", "--b", "1,1,2", "--out", path}).code == 0);
  CHECK(run({"euler", "--matrix", path}).code == 2);
  std::filesystem::remove(path);
}

TEST_CASE("williamson and euler commands") {
  const std::string path = temp_path("w.mat");
  const std::string prefix = temp_path("w");
  CHECK(run({"synth", "--c", "1.5,1.5,2", "--d", "1,1.2,1.5", "--out", path}).code == 0);
  CHECK(run({"williamson", "--matrix", path, "--out", prefix}).code == 0);
  const MatrixFile s = load_matrix(prefix + ".S.mat");
  CHECK(s.kind == MatrixKind::Symplectic);
  CHECK(run({"euler", "--matrix", prefix + ".S.mat", "--out", prefix}).code == 0);
  const Matrix o = load_matrix(prefix + ".O.mat").body;
  const Matrix q = load_matrix(prefix + ".Q.mat").body;
  const Matrix v = load_matrix(prefix + ".V.mat").body;
  CHECK(max_abs(o * q * v - s.body) < 1e-9);
  CHECK(run({"williamson", "--matrix", temp_path("missing.mat")}).code == 2);
  for (const char* ext : {".S.mat", ".D.mat", ".O.mat", ".Q.mat", ".V.mat"}) std::filesystem::remove(prefix + ext);
  std::filesystem::remove(path);
}

TEST_CASE("malformed matrix file is an input error") {
  const std::string path = temp_path("bad.mat");
  {
    std::ofstream f(path);
    f << "n 1\nordering xpxp\nkind covariance\n1 0\n0 zz\n";
  }
  const Outcome o = run({"check", "--matrix", path});
  CHECK(o.code == 2);
  CHECK(o.err.find("row 2") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("entropy command") {
  const Outcome o = run({"entropy", "--c", "1.5,1.5,2"});
  CHECK(o.code == 0);
  const json r = o.last();
  CHECK(std::abs(r["global_upper_bound"].get<double>() - (3.0 * std::log2(3.0) - 2.0)) < 1e-12);
  CHECK(run({"entropy", "--c", "0.5"}).code == 2);
}

TEST_CASE("prepare command") {
  const std::string path = temp_path("circuit.txt");
  CHECK(run({"prepare", "--b", "1,1", "--out", path}).code == 0);
  std::ifstream in(path);
  const PreparationCircuit c = read_circuit(in);
  CHECK(c.squeezers[0].z == doctest::Approx(2.0 + std::sqrt(3.0)));
  CHECK(run({"prepare", "--c", "1,1", "--d", "1,1"}).code == 0);
  CHECK(run({"prepare", "--c", "1.5,1.5,2", "--d", "1,1.2,1.5"}).code == 0);
  CHECK(run({"prepare", "--c", "1,5", "--d", "1,1"}).code == 1);
  std::filesystem::remove(path);
}

TEST_CASE("verify command") {
  const Outcome ok = run({"verify", "--trials", "3", "--seed", "7", "--threads", "1"});
  CHECK(ok.code == 0);
  const Outcome bad = run({"verify", "--trials", "3", "--seed", "7", "--threads", "1", "--inject-sign-flip"});
  CHECK(bad.code == 1);
  CHECK(bad.last()["total_violations"].get<int>() > 0);
}

}  // TEST_SUITE
