#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "imm/config.hpp"
#include "imm/errors.hpp"
#include "imm/geometry.hpp"
#include "imm/run.hpp"

using namespace imm;

namespace {

IniFile ini(const std::string& text) {
  std::istringstream in(text);
  return parse_ini(in);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::internal;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("key = value with sections") {
  const IniFile f = ini("# run\nsurface = enneper ; trailing\n\n[stability]\nroute=cap\n kappa0 = 0.5 \n");
  CHECK(f.get("", "surface") == "enneper");
  CHECK(f.get("stability", "kappa0") == "0.5");
  CHECK_FALSE(f.get("stability", "mu"));
  CHECK(kind_of([] { ini("[run\n"); }) == ErrorKind::parse);
  CHECK(kind_of([] { ini("novalue\n"); }) == ErrorKind::parse);
  CHECK(kind_of([] { ini("[a]\n[a]\n"); }) == ErrorKind::parse);
}

TEST_CASE("apply and finalize") {
  RunConfig cfg;
  cfg.command = "stability";
  apply_ini(ini("[run]\nsurface = plane3\nresolution = 32, 64\n[stability]\nroute = cap\nkappa0 = 1\nomega0 = 6.2831853\n"),
            "x", cfg);
  finalize(cfg);
  CHECK(cfg.resolutions == std::vector<int>{32, 64});
  CHECK(*cfg.stability.kappa0 == 1.0);
  CHECK(to_json(cfg)["stability"]["route"] == "cap");

  RunConfig r;
  r.command = "residuals";
  r.surface = "enneper";
  finalize(r);
  CHECK(r.resolutions == std::vector<int>{64, 128, 256});

  auto bad = [](const std::string& text, const std::string& command = "residuals") {
    RunConfig c;
    c.command = command;
    c.surface = "enneper";
    return kind_of([&] {
      apply_ini(ini(text), "x", c);
      finalize(c);
    });
  };
  CHECK(bad("resolution = 128, 64\n") == ErrorKind::configuration);
  CHECK(bad("resolution = 4\n") == ErrorKind::configuration);
  CHECK(bad("resolution = 64x\n") == ErrorKind::parse);
  CHECK(bad("colour = red\n") == ErrorKind::configuration);
  CHECK(bad("[mystery]\nx = 1\n") == ErrorKind::configuration);
  CHECK(bad("format = xml\n") == ErrorKind::configuration);
  CHECK(bad("[stability]\nroute = cap\n", "stability") == ErrorKind::configuration);
  CHECK(bad("[stability]\nroute = wishful\n", "stability") == ErrorKind::configuration);
  CHECK(bad("[variation]\noracle = maybe\n", "variation") == ErrorKind::parse);
}

TEST_CASE("surface files") {
  const std::string path = temp_file("imm_test_catenoid.cfg",
                                     "[surface]\nname = catenoid\ndim = 3\nconformal = true\n"
                                     "x1 = cosh(v) * cos(u)\nx2 = cosh(v) * sin(u)\nx3 = v\n");
  // written with exp since cosh is not in the grammar
  const std::string ok = temp_file("imm_test_catenoid2.cfg",
                                   "[surface]\nname = catenoid\ndim = 3\nconformal = true\n"
                                   "x1 = (exp(v) + exp(-v)) / 2 * cos(u)\nx2 = (exp(v) + exp(-v)) / 2 * sin(u)\nx3 = v\n");
  CHECK(kind_of([&] { resolve_surface(path); }) == ErrorKind::parse);
  const Surface s = resolve_surface(ok);
  CHECK(s.name == "catenoid");
  CHECK(s.patch->claims_conformal());
  const SurfaceSample p = sample_surface(*make_frame(s), 0.3, 0.2);
  CHECK(std::fabs(p.H) < 1e-12);
  CHECK(p.K == doctest::Approx(-1.0 / std::pow(std::cosh(0.2), 4)).epsilon(1e-12));
  CHECK(kind_of([] { resolve_surface("missing/file.cfg"); }) == ErrorKind::configuration);
  CHECK(kind_of([] { resolve_surface("torus"); }) == ErrorKind::configuration);
  const std::string short_dim = temp_file("imm_test_short.cfg", "[surface]\ndim = 3\nx1 = u\nx2 = v\n");
  CHECK(kind_of([&] { resolve_surface(short_dim); }) == ErrorKind::configuration);
}

TEST_CASE("run produces schema-versioned reports") {
  RunConfig cfg;
  cfg.command = "analyze";
  cfg.surface = "sphere_patch(2)";
  cfg.resolutions = {32};
  finalize(cfg);
  const RunOutcome out = run(cfg);
  CHECK(out.exit_code == 0);
  CHECK(out.report["schema_version"] == schema_version);
  CHECK(out.report.contains("timestamp"));
  CHECK(out.report["results"]["resolutions"][0]["H"]["max"].get<double>() == doctest::Approx(0.5));
  cfg.timestamp = false;
  const auto a = run(cfg).report, b = run(cfg).report;
  CHECK_FALSE(a.contains("timestamp"));
  CHECK_FALSE(a.contains("timing"));
  CHECK(a.dump() == b.dump());
  CHECK(to_csv(a).rfind("resolution,quantity,min,max\n", 0) == 0);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorKind::configuration) == 4);
  CHECK(exit_code_for(ErrorKind::parse) == 4);
  CHECK(exit_code_for(ErrorKind::precondition) == 3);
  CHECK(exit_code_for(ErrorKind::non_flat_bundle) == 3);
  CHECK(exit_code_for(ErrorKind::internal) == 5);
  const auto e = error_report(ErrorKind::domain, "omega0 out of range");
  CHECK(e["error"]["kind"] == "domain");
  CHECK(e["error"]["exit_code"] == 3);
}
