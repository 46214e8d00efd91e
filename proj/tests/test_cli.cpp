#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <eqk/json_io.hpp>

namespace {

std::string g_binary;
std::string g_dir;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string cmd = g_binary + " " + args + " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    result.output.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string write_file(const std::string& name, const std::string& content) {
  const std::string path = g_dir + "/" + name;
  std::ofstream out(path);
  REQUIRE(out.good());
  out << content;
  return path;
}

// The manifest carries wall-clock timing; strip it before determinism checks.
eqk::json numerical_part(const std::string& text) {
  eqk::json j = eqk::json::parse(text);
  j.erase("manifest");
  return j;
}

}  // namespace

TEST_CASE("construct then verify round-trips with exit code 0") {
  const std::string norm = write_file("lp2n3.json", R"({"dim":3,"family":{"lp":{"p":2.0}}})");
  const std::string points = g_dir + "/points.json";
  const auto built = run("construct --norm " + norm + " --out " + points);
  CHECK(built.exit_code == 0);

  const auto verified = run("verify --points " + points + " --norm " + norm);
  CHECK(verified.exit_code == 0);
  const auto cert = eqk::json::parse(verified.output);
  CHECK(cert.at("verdict") == "pass");
  CHECK(cert.at("m") == 4);
}

TEST_CASE("every norm family round-trips construct -> verify at default tolerances") {
  const std::array<std::string, 6> specs = {
      R"({"dim":4,"family":{"lp":{"p":1.5}}})",
      R"({"dim":3,"family":{"lp":{"p":"inf"}}})",
      R"({"dim":3,"family":{"owl":{"w":[2,1,0.5]}}})",
      R"({"dim":3,"family":{"perm_mix":{"p":2,"alpha":1,"beta":0.5}}})",
      R"({"dim":3,"family":{"musielak_orlicz":{"gauge":"luxemburg","functions":[{"power":{"p":2}},{"indicator":{"b":1}},{"piecewise_linear":{"breakpoints":[0,0.5],"slopes":[0,2],"cutoff":1.5}}]}}})",
      R"({"dim":5,"family":{"linfty_hyperplane":{"a":[0.5,-1,1,2,-2.5]}}})",
  };
  int idx = 0;
  for (const auto& body : specs) {
    const std::string norm = write_file("family" + std::to_string(idx) + ".json", body);
    const std::string points = g_dir + "/family" + std::to_string(idx) + "_points.json";
    CHECK(run("construct --norm " + norm + " --out " + points).exit_code == 0);
    CHECK(run("verify --points " + points).exit_code == 0);
    ++idx;
  }
}

TEST_CASE("a corrupted point fails verification with exit code 1") {
  const std::string norm = write_file("lp2n3b.json", R"({"dim":3,"family":{"lp":{"p":2.0}}})");
  const std::string points = g_dir + "/points_bad.json";
  REQUIRE(run("construct --norm " + norm + " --out " + points).exit_code == 0);

  eqk::json doc;
  {
    std::ifstream in(points);
    in >> doc;
  }
  doc["points"][0][0] = 1.01;  // nudge one coordinate
  write_file("points_bad.json", doc.dump());

  const auto verified = run("verify --points " + points + " --norm " + norm);
  CHECK(verified.exit_code == 1);
  CHECK(eqk::json::parse(verified.output).at("verdict") == "fail");
}

TEST_CASE("malformed json and usage errors exit with code 2") {
  const std::string broken = write_file("broken.json", "{\"dim\": 3, ");
  CHECK(run("construct --norm " + broken).exit_code == 2);
  CHECK(run("construct").exit_code == 2);
  CHECK(run("bogus-subcommand").exit_code == 2);
  const std::string mismatched =
      write_file("mismatched.json", R"({"dim":4,"family":{"owl":{"w":[2,1]}}})");
  CHECK(run("construct --norm " + mismatched).exit_code == 2);
}

TEST_CASE("radius prints the closed-form value") {
  const auto r = run("radius --p 2 --n 100");
  CHECK(r.exit_code == 0);
  const auto doc = eqk::json::parse(r.output);
  CHECK(doc.at("R").get<double>() > 1.0);
  CHECK(doc.at("R").get<double>() < 1.01);
  CHECK(run("radius").exit_code == 2);
}

TEST_CASE("identical seeds reproduce identical numerical output") {
  const std::string norm = write_file(
      "owl.json", R"({"dim":4,"family":{"owl":{"w":[3,2,1,1]}}})");
  const auto first = run("--seed 5 construct --norm " + norm);
  const auto second = run("--seed 5 construct --norm " + norm);
  REQUIRE(first.exit_code == 0);
  CHECK(numerical_part(first.output) == numerical_part(second.output));

  const auto o1 = run("--seed 9 oracle --norm " + write_file("lp22.json", R"({"dim":2,"family":{"lp":{"p":2.0}}})") + " --m 3");
  const auto o2 = run("--seed 9 oracle --norm " + g_dir + "/lp22.json --m 3");
  REQUIRE(o1.exit_code == 0);
  CHECK(numerical_part(o1.output) == numerical_part(o2.output));
}

TEST_CASE("perturb subcommand solves and reports") {
  const std::string base = write_file("pbase.json", R"({"dim":3,"family":{"lp":{"p":4.0}}})");
  const std::string target = write_file(
      "ptarget.json",
      R"({"dim":3,"family":{"scaled":{"base":{"dim":3,"family":{"lp":{"p":4.0}}},"diag":[1.0,1.0005,0.9995]}}})");
  const auto result = run("perturb --base " + base + " --target " + target + " --variant symmetric");
  CHECK(result.exit_code == 0);
  const auto doc = eqk::json::parse(result.output);
  CHECK(doc.at("certificate").at("verdict") == "pass");
  CHECK(doc.at("points").size() == 3);

  // distortion beyond the certified radius is a parameter-selection failure
  const std::string far_target = write_file(
      "pfar.json",
      R"({"dim":3,"family":{"scaled":{"base":{"dim":3,"family":{"lp":{"p":4.0}}},"diag":[1.0,1.2,0.8]}}})");
  CHECK(run("perturb --base " + base + " --target " + far_target + " --variant symmetric")
            .exit_code == 3);
}

TEST_CASE("radius --base reports R_lower with parameters") {
  const std::string base = write_file("rbase.json", R"({"dim":3,"family":{"lp":{"p":2.0}}})");
  const auto result = run("radius --base " + base + " --variant symmetric");
  CHECK(result.exit_code == 0);
  const auto doc = eqk::json::parse(result.output);
  CHECK(doc.at("R_lower").get<double>() > 1.0);
  CHECK(doc.at("heuristic_flags").size() > 0);
}

TEST_CASE("smoothness subcommand") {
  const std::string norm = write_file("sm.json", R"({"dim":3,"family":{"lp":{"p":2.0}}})");
  const auto result = run("smoothness --norm " + norm + " --t 0.1 --n 3");
  CHECK(result.exit_code == 0);
  const auto doc = eqk::json::parse(result.output);
  CHECK(doc.at("rho_lower_estimate").get<double>() == doctest::Approx(0.0049875621).epsilon(1e-4));
  CHECK(doc.at("eps0").get<double>() == doctest::Approx(1.0 / 16.0));

  const std::string rough = write_file("sm1.json", R"({"dim":3,"family":{"lp":{"p":1.0}}})");
  CHECK(run("smoothness --norm " + rough + " --t 0.1 --n 3").exit_code == 3);
}

TEST_CASE("oracle subcommand finds the sup-norm square") {
  const std::string norm = write_file("or.json", R"({"dim":2,"family":{"lp":{"p":"inf"}}})");
  const auto result = run("oracle --norm " + norm + " --m 4 --restarts 64");
  CHECK(result.exit_code == 0);
  const auto doc = eqk::json::parse(result.output);
  CHECK(doc.at("found") == true);
  CHECK(doc.at("certificate").at("verdict") == "pass");
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: eqk_cli_tests <path-to-eqk-binary> [doctest args]\n");
    return 1;
  }
  g_binary = argv[1];
  g_dir = []() {
    char tmpl[] = "/tmp/eqk-cli-XXXXXX";
    const char* dir = mkdtemp(tmpl);
    return std::string(dir ? dir : "/tmp");
  }();
  doctest::Context context;
  context.applyCommandLine(argc - 1, argv + 1);
  return context.run();
}
