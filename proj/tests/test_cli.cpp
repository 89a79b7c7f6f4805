/*
 * Copyright 2026 The overlap-lab Authors
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

#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("overlap_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string at(const std::string& name) { return (scratch() / name).string(); }

Result run(const std::string& args) {
  std::string cmd = std::string(OVERLAP_LAB_BIN) + " " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
  int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void put(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

const std::string& boot() {
  static const std::string path = [] {
    std::string p = at("boot.json");
    REQUIRE(run("bootstrap --w 0,1,2,3,4 --output " + p).code == 0);
    return p;
  }();
  return path;
}

}  // namespace

TEST_CASE("validate exit codes") {
  CHECK(run("validate --input " + boot()).code == 0);

  std::string text = slurp(boot());
  put(at("trunc.json"), text.substr(0, text.size() / 2));
  Result r = run("validate --input " + at("trunc.json"));
  CHECK(r.code == 2);
  CHECK(r.out.find("line") != std::string::npos);

  auto j = nlohmann::ordered_json::parse(text);
  auto& w = j["w"];
  w.erase(w.size() - 1);
  j["eta"].erase("4");
  for (auto* key : {"h", "g"})
    for (auto it = j[key].begin(); it != j[key].end();) {
      std::string k = it.key();
      if (k.find('4') != std::string::npos)
        it = j[key].erase(it);
      else
        ++it;
    }
  put(at("four.json"), j.dump());
  r = run("validate --input " + at("four.json") + " --format json");
  CHECK(r.code == 1);
  CHECK(r.out.find("(*)_1") != std::string::npos);

  CHECK(run("validate --input " + at("missing.json")).code == 2);
  CHECK(run("validate").code == 2);
}

TEST_CASE("chain is deterministic and meets its bounds") {
  std::string a = at("run_a.json"), b = at("run_b.json");
  Result r1 = run("chain --input " + boot() + " --add 7 --add 8 --min-n 60 --seed 5 --output " + a);
  Result r2 = run("chain --input " + boot() + " --add 7 --add 8 --min-n 60 --seed 5 --output " + b);
  REQUIRE(r1.code == 0);
  auto body = [](const std::string& out) { return out.substr(0, out.find("written:")); };
  CHECK(body(r1.out) == body(r2.out));
  CHECK(slurp(a) == slurp(b));
  auto j = nlohmann::ordered_json::parse(slurp(a));
  const auto& last = j["chain"].back();
  CHECK(last["w"].size() >= 7);
  CHECK(last["w"].dump().find("7,8") != std::string::npos);
  CHECK(last["n"].get<std::size_t>() > 60);
  CHECK(j["schema"] == "overlap-lab/1");
}

TEST_CASE("extend, leq and amalgamate") {
  std::string q = at("ext.json");
  REQUIRE(run("extend --input " + boot() + " --beta 9 --output " + q).code == 0);
  CHECK(run("validate --input " + q).code == 0);
  CHECK(run("leq --input " + boot() + " --other " + q).code == 0);
  CHECK(run("leq --input " + q + " --other " + boot()).code == 1);
  CHECK(run("extend --input " + boot() + " --beta 2").code == 2);
  Result r = run("amalgamate --input " + boot() + " --other " + boot() + " --format json");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"N0\": 1") != std::string::npos);
}

TEST_CASE("ndrk subcommand") {
  put(at("one.json"), R"({"n":3,"trees":[["010"]]})");
  Result r = run("ndrk --input " + at("one.json") + " --iota 2 --max-u 3");
  CHECK(r.code == 0);
  CHECK(r.out.find("NDRK: 0") != std::string::npos);

  put(at("rich.json"), R"({"n":3,"trees":[["000","001","110","111"],["010","101"]]})");
  std::string wit = at("wit.json");
  r = run("ndrk --input " + at("rich.json") + " --iota 2 --max-u 3 --witness " + wit);
  CHECK(r.code == 0);
  CHECK(r.out.find("NDRK: 2") != std::string::npos);
  CHECK(run("check-chain --input " + wit).code == 0);

  put(at("bad.json"), R"({"n":3,"trees":[["01"]]})");
  CHECK(run("ndrk --input " + at("bad.json") + " --iota 2").code == 2);
}

TEST_CASE("rank subcommand") {
  Result r = run("rank --order 10 --theta 9 --max-w 2 --format json");
  REQUIRE(r.code == 0);
  auto j = nlohmann::ordered_json::parse(r.out);
  std::size_t rows = 0;
  for (const auto& row : j["result"]["table"]) {
    ++rows;
    CHECK(row["rk"] == (row["w"].size() == 1 ? 0 : -1));
  }
  CHECK(rows == 55);

  r = run("rank --order 4 --theta 5 --max-w 3 --star --format json");
  REQUIRE(r.code == 0);
  for (const auto& row : nlohmann::ordered_json::parse(r.out)["result"]["table"]) {
    CHECK(row["rk"] == -1);
    CHECK(row["rk_star"] == -1);
  }

  r = run("rank --order 6 --theta 2 --max-w 3 --star --format json");
  REQUIRE(r.code == 0);
  for (const auto& row : nlohmann::ordered_json::parse(r.out)["result"]["table"])
    CHECK(row["rk_star"].get<int>() <= row["rk"].get<int>());

  CHECK(run("rank --order 4 --theta 0").code == 2);
}

TEST_CASE("overlap and lemma subcommands") {
  put(at("f.json"), R"({"n":2,"trees":[["00","11"],["01","10"]]})");
  Result r = run("overlap --input " + at("f.json") + " --x 00 --y 11");
  CHECK(r.code == 0);
  CHECK(r.out.find("overlap: 4") != std::string::npos);
  CHECK(run("stnd --input " + at("f.json") + " --x 00 --y 11 --k 4").out.find("stnd: true") !=
        std::string::npos);
  CHECK(run("stnd --input " + at("f.json") + " --x 00 --y 11 --k 5").out.find("stnd: false") !=
        std::string::npos);
  CHECK(run("lemma43 --part 1 --depth 6 --cases 50 --seed 1").code == 0);
}
