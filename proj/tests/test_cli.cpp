#include "helpers.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "choicelab/io.hpp"

using namespace choicelab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(CHOICELAB_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("choicelab_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string put(const std::string& name, const std::string& body) {
  const auto path = scratch() / name;
  std::ofstream(path) << body;
  return path.string();
}

const char* kNscParams = R"({"model":"nsc","items":["a","b","c"],"nests":[["a","b"],["c"]],
  "sigma":[{"set":["a"],"w":"1"},{"set":["b"],"w":"2"},{"set":["a","b"],"w":"4"},{"set":["c"],"w":"3"}]})";

const char* kRcgParams = R"({"model":"rcg","items":["a","b","c"],
  "m":[{"set":["a","b"],"w":"1/2"},{"set":["c"],"w":"1/4"},{"set":["a","b","c"],"w":"1/4"}]})";

std::string generated(const char* name, const char* params, const char* model) {
  const auto pfile = put(std::string(name) + ".params.json", params);
  const auto out = (scratch() / (std::string(name) + ".scc.json")).string();
  const auto r = cli(std::string("gen --model ") + model + " --params " + pfile + " -o " + out);
  REQUIRE(r.code == 0);
  return out;
}

}  // namespace

TEST_CASE("cli: check on RCG data with POS1 and REL_ADD") {
  const auto scc = generated("rcg", kRcgParams, "rcg");
  const auto r = cli("check " + scc + " --axioms POS1,REL_ADD");
  CHECK(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j.at("holds") == true);
  CHECK(j.at("reports").size() == 2);
}

TEST_CASE("cli: check reports failures with exit 1") {
  const auto scc = generated("nsc", kNscParams, "nsc");
  const auto r = cli("check " + scc + " --axioms REL_ADD --witness-cap 3");
  CHECK(r.code == 1);
  const auto j = Json::parse(r.out);
  CHECK(j.at("reports").at(0).at("witnesses").size() <= 3);
}

TEST_CASE("cli: classify the NSC example") {
  const auto scc = generated("nsc", kNscParams, "nsc");
  const auto r = cli("classify " + scc);
  CHECK(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j.at("membership").at("nsc").at("verdict") == "holds");
  CHECK(j.at("membership").at("logit").at("verdict") == "fails");
  CHECK(j.at("relationship_violations").empty());
}

TEST_CASE("cli: identify logit on NSC data fails with a report") {
  const auto scc = generated("nsc", kNscParams, "nsc");
  const auto r = cli("identify " + scc + " --model logit");
  CHECK(r.code == 1);
  const auto j = Json::parse(r.out);
  CHECK(j.contains("precondition_failed"));
  const auto ok = cli("identify " + scc + " --model nsc");
  CHECK(ok.code == 0);
  CHECK(Json::parse(ok.out).at("round_trip_exact") == true);
}

TEST_CASE("cli: malformed input and usage errors exit 2") {
  const auto bad = put("bad.json", "{ not json");
  CHECK(cli("check " + bad).code == 2);
  CHECK(cli("check " + (scratch() / "missing.json").string()).code == 2);
  CHECK(cli("frobnicate").code == 2);
  const auto scc = generated("rcg", kRcgParams, "rcg");
  CHECK(cli("check " + scc + " --axioms NOPE").code == 2);
}

TEST_CASE("cli: eval") {
  const auto pfile = put("eval.params.json", kRcgParams);
  const auto r = cli("eval --params " + pfile + " --menu a,c --set a");
  CHECK(r.code == 0);
  CHECK(r.out.find("1/2") != std::string::npos);
}

TEST_CASE("cli: output is byte-identical across runs") {
  const auto scc = generated("nsc", kNscParams, "nsc");
  CHECK(cli("classify " + scc).out == cli("classify " + scc).out);
  CHECK(cli("fuzz --model ic --trials 5 --seed 3").out == cli("fuzz --model ic --trials 5 --seed 3").out);
}

TEST_CASE("cli: estimate and simulate") {
  const auto counts = put("c.csv", "menu;set;count\na;a;10\nb;b;4\na,b;a;50\na,b;b;25\na,b;a,b;25\n");
  const auto r = cli("estimate " + counts);
  CHECK(r.code == 0);
  const auto any = parse_scc(Json::parse(r.out));
  REQUIRE(std::holds_alternative<FloatScc>(any));
  const auto scc = generated("rcg", kRcgParams, "rcg");
  const auto sim = cli("simulate " + scc + " --draws 100 --seed 1");
  CHECK(sim.code == 0);
  CHECK(sim.out.rfind("menu;set;count", 0) == 0);
}
