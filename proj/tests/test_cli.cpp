/*
 * Copyright 2026 The coagfrag Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <tuple>
#include <vector>

#include "doctest.h"

#include "coagfrag/cli.hpp"
#include "coagfrag/json_io.hpp"

using namespace coagfrag;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::initializer_list<std::string> args) {
  std::vector<std::string> store{"coagfrag"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : store) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "coagfrag_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("list-diagrams") {
  const Outcome o = run({"list-diagrams"});
  CHECK(o.code == 0);
  const auto l = lines(o.out);
  REQUIRE(l.size() == 6);
  CHECK(l[0].rfind("pitman_pd\t", 0) == 0);
}

TEST_CASE("samples are deterministic and indexed") {
  const Outcome a = run({"sample", "--family", "pd", "--alpha", "0.5", "--theta", "1", "--n", "3",
                         "--n-atoms", "50", "--seed", "9"});
  const Outcome b = run({"sample", "--family", "pd", "--alpha", "0.5", "--theta", "1", "--n", "3",
                         "--n-atoms", "50", "--seed", "9"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto l = lines(a.out);
  REQUIRE(l.size() == 3);
  const Json j = Json::parse(l[2]);
  CHECK(j["index"] == 2);
  CHECK(j["freqs"].size() == 50);
}

TEST_CASE("a point mass at zero is the zero zeta") {
  const Outcome a = run({"sample", "--family", "pa_zeta", "--alpha", "0.4", "--zeta", "const:0",
                         "--n", "4", "--n-atoms", "20", "--seed", "2"});
  const Outcome b = run({"sample", "--family", "pa_zeta", "--alpha", "0.4", "--zeta", "zero",
                         "--n", "4", "--n-atoms", "20", "--seed", "2"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("flags override the config file") {
  const auto cfg = scratch("sample.json");
  std::ofstream(cfg) << R"({"family": "pd", "alpha": 0.3, "theta": 1.0, "n": 2, "n_atoms": 30, "seed": 5})";
  const Outcome mixed = run({"sample", "--config", cfg.string(), "--alpha", "0.6"});
  const Outcome flags = run({"sample", "--family", "pd", "--alpha", "0.6", "--theta", "1",
                             "--n", "2", "--n-atoms", "30", "--seed", "5"});
  const Outcome file = run({"sample", "--config", cfg.string()});
  CHECK(mixed.code == 0);
  CHECK(mixed.out == flags.out);
  CHECK(file.out != flags.out);
}

TEST_CASE("configuration errors exit with 2") {
  CHECK(run({"sample", "--family", "nope"}).code == 2);
  CHECK(run({"sample", "--family", "pd", "--alpha", "1.5", "--theta", "0"}).code == 2);
  CHECK(run({"sample", "--family", "pd", "--bogus", "1"}).code == 2);
  CHECK(run({"sample", "--config", "/nonexistent/cfg.json"}).code == 2);
  CHECK(run({"verify"}).code == 2);
  CHECK(run({"verify", "--diagram", "pitman_pd", "--alpha", "0.5", "--theta", "1"}).code == 2);
  CHECK(run({"density", "--alpha", "0.5", "--grid", "1:2"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("verify reports a panel per direction") {
  const Outcome o = run({"verify", "--diagram", "dgm_general", "--alpha", "0.5", "--zeta", "const:1",
                         "--n-replicas", "500", "--n-atoms", "200", "--seeds", "1",
                         "--min-pass", "1", "--frag-child-atoms", "100"});
  CHECK((o.code == 0 || o.code == 4));
  const Json j = Json::parse(o.out);
  CHECK(j.contains("version"));
  CHECK(j["config"]["diagram"] == "dgm_general");
  const auto& tests = j["reports"][0]["tests"];
  int frag = 0, coag = 0;
  for (const auto& t : tests) {
    frag += t["direction"] == "frag";
    coag += t["direction"] == "coag";
  }
  CHECK(frag >= 3);
  CHECK(coag >= 3);
}

TEST_CASE("a broken fixture exits with 4 and writes both files") {
  const auto prefix = scratch("broken").string();
  const Outcome o = run({"verify", "--diagram", "dgm_pd", "--alpha", "0.5", "--theta", "0.5",
                         "--variant", "broken_frag", "--direction", "frag", "--stats", "P1",
                         "--n-replicas", "4000", "--n-atoms", "300", "--seeds", "2",
                         "--min-pass", "1", "--frag-child-atoms", "200", "--out", prefix});
  CHECK(o.code == 4);
  std::ifstream csv(prefix + ".csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "diagram_id,statistic,stat_value,p_value,pass,seed,N");
  std::string row;
  std::getline(csv, row);
  CHECK(row.rfind("dgm_pd,frag:P1,", 0) == 0);
  std::ifstream js(prefix + ".json");
  const Json j = Json::parse(js);
  CHECK(j["pass"] == false);
  CHECK(j["config"]["variant"] == "broken_frag");
  CHECK(j["reports"][0]["params"]["diagram"]["variant"] == "broken_frag");
}

TEST_CASE("sampled files round-trip through verify") {
  const auto a = scratch("a.jsonl").string(), b = scratch("b.jsonl").string(),
             c = scratch("c.jsonl").string();
  for (auto [path, seed, theta] : {std::tuple{a, "1", "1"}, {b, "2", "1"}, {c, "3", "4"}}) {
    REQUIRE(run({"sample", "--family", "pd", "--alpha", "0.5", "--theta", theta, "--n", "1500",
                 "--n-atoms", "200", "--seed", seed, "--out", path})
                .code == 0);
  }
  CHECK(run({"verify", "--input-a", a, "--input-b", b, "--stats", "P1,P2"}).code == 0);
  CHECK(run({"verify", "--input-a", a, "--input-b", c, "--stats", "P1,P2"}).code == 4);
}

TEST_CASE("density table matches the closed form at one half") {
  const Outcome o = run({"density", "--alpha", "0.5", "--grid", "0.05:20:40"});
  REQUIRE(o.code == 0);
  const auto l = lines(o.out);
  REQUIRE(l.size() == 41);
  CHECK(l[0].rfind("x,stable_density,stable_cdf", 0) == 0);
  for (std::size_t i = 1; i < l.size(); ++i) {
    double x = 0, f = 0, F = 0;
    REQUIRE(std::sscanf(l[i].c_str(), "%lf,%lf,%lf", &x, &f, &F) == 3);
    const double exact = std::exp(-0.25 / x) / (2.0 * std::sqrt(M_PI) * std::pow(x, 1.5));
    CHECK(f == doctest::Approx(exact).epsilon(1e-8));
    CHECK(F == doctest::Approx(std::erfc(0.5 / std::sqrt(x))).epsilon(1e-8));
    CHECK(f >= 0.0);
  }
}

TEST_CASE("installed binary") {
  const std::string tool = COAGFRAG_TOOL_PATH;
  const auto out = scratch("list.txt").string();
  CHECK(std::system((tool + " list-diagrams > " + out).c_str()) == 0);
  std::ifstream in(out);
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("pitman_pd", 0) == 0);
  const int status = std::system((tool + " sample --family pd --alpha 2 --theta 0 > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(status) == 2);
  const std::string threads =
      "COAGFRAG_THREADS=1 " + tool + " sample --family pd --alpha 0.5 --theta 0 --n 2 --n-atoms 5 > /dev/null";
  CHECK(std::system(threads.c_str()) == 0);
}
