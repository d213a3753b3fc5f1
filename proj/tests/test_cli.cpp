#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result immstab(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + IMMSTAB_EXE + "\" " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json json_of(const Result& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_CASE("analyze clifford") {
  const Result r = immstab("analyze --surface clifford --resolution 64 --no-timestamp");
  REQUIRE(r.code == 0);
  const auto j = json_of(r)["results"]["resolutions"][0];
  CHECK(std::fabs(j["H"]["min"].get<double>() - 1.0) < 1e-10);
  CHECK(std::fabs(j["H"]["max"].get<double>() - 1.0) < 1e-10);
  CHECK(std::fabs(j["K"]["min"].get<double>()) < 1e-10);
  CHECK(std::fabs(j["K"]["max"].get<double>()) < 1e-10);
}

TEST_CASE("residuals on Enneper") {
  const Result r = immstab("residuals --surface enneper --resolution 64,128 --no-timestamp");
  REQUIRE(r.code == 0);
  const auto j = json_of(r)["results"];
  CHECK(j["all_converge"] == true);
  CHECK(j["summary"].size() == 4);
  CHECK(j["residuals"].size() == 8);
}

TEST_CASE("cap certificate of the plane") {
  const Result r = immstab("stability --route cap --surface plane3 --kappa0 1 --omega0 6.2831853 --no-timestamp");
  REQUIRE(r.code == 0);
  const auto c = json_of(r)["results"]["certificate"];
  CHECK(c["verdict"] == "certified");
  CHECK(std::fabs(c["certified_mu"].get<double>() - 2.0) < 1e-6);
}

TEST_CASE("errors are single structured objects with mapped exit codes") {
  const Result unknown = immstab("analyze --surface torus");
  CHECK(unknown.code == 4);
  const auto e = json_of(unknown);
  CHECK(e.size() == 3);
  CHECK(e["error"]["kind"] == "configuration");
  CHECK(immstab("analyze --surface enneper --bogus").code == 4);
  CHECK(immstab("analyze --surface 'sphere_patch(x)'").code == 4);
  CHECK(immstab("stability --surface plane3 --route definition").code == 4);
  const Result nonflat = immstab("stability --surface holograph_w2 --frame parallel --route flat");
  CHECK(nonflat.code == 3);
  CHECK(json_of(nonflat)["error"]["kind"] == "non_flat_bundle");
  CHECK(immstab("stability --surface 'sphere_patch(2)' --route definition --mu 1").code == 3);
  CHECK(immstab("stability --surface enneper --route definition --mu 2.5").code == 2);
  CHECK(immstab("stability --surface plane3 --route cap --kappa0 1 --omega0 20").code == 3);
}

TEST_CASE("no-timestamp reports are byte-identical") {
  const std::string args = "variation --surface enneper --cases 2 --seed 7 --no-timestamp";
  const Result a = immstab(args), b = immstab(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const Result t = immstab("analyze --surface plane3 --resolution 16");
  CHECK(json_of(t).contains("timestamp"));
  CHECK(json_of(t).contains("timing"));
}

TEST_CASE("output directory override and CSV") {
  const auto dir = std::filesystem::temp_directory_path() / "immstab_cli_test";
  std::filesystem::remove_all(dir);
  const Result r = immstab("hopf --surface holograph_w3 --resolution 32,64 --output rep.csv --format csv --dump-fields f.csv",
                           "IMMSTAB_OUTPUT_DIR=" + dir.string());
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream rep(dir / "rep.csv"), fields(dir / "f.csv");
  REQUIRE(rep);
  REQUIRE(fields);
  std::string header;
  std::getline(rep, header);
  CHECK(header == "name,resolution,max_abs,l2,convergence_order");
  std::getline(fields, header);
  CHECK(header.rfind("u,v,W,K,re_H1,im_H1,re_dbar_H1,im_dbar_H1", 0) == 0);
}

TEST_CASE("config files") {
  const auto path = std::filesystem::temp_directory_path() / "immstab_cli_test.cfg";
  std::ofstream(path) << "[run]\nsurface = enneper\nresolution = 32\n[stability]\nroute = definition\nmu = 1.5\n";
  const Result r = immstab("stability --config " + path.string() + " --no-timestamp");
  REQUIRE(r.code == 0);
  const auto j = json_of(r);
  CHECK(j["config"]["stability"]["mu"] == 1.5);
  CHECK(j["results"]["certificate"]["verdict"] == "certified");
  // command-line flags win over the file
  const Result o = immstab("stability --config " + path.string() + " --mu 2.5 --no-timestamp");
  CHECK(o.code == 2);
}
