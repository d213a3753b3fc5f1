#include "imm/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <memory>

#include "imm/errors.hpp"
#include "imm/patch.hpp"

namespace imm {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw Error(ErrorKind::parse, key + ": '" + text + "' is not a number");
  }
  return x;
}

long long parse_integer(const std::string& key, const std::string& text) {
  long long x = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw Error(ErrorKind::parse, key + ": '" + text + "' is not an integer");
  }
  return x;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "yes" || text == "1" || text == "on") return true;
  if (text == "false" || text == "no" || text == "0" || text == "off") return false;
  throw Error(ErrorKind::parse, key + ": '" + text + "' is not a boolean");
}

std::vector<int> parse_resolutions(const std::string& text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item = trim(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    out.push_back(static_cast<int>(parse_integer("resolution", item)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool one_of(const std::string& x, std::initializer_list<const char*> options) {
  return std::any_of(options.begin(), options.end(), [&](const char* o) { return x == o; });
}

[[noreturn]] void unknown_key(const std::string& section, const IniFile::Entry& e) {
  throw Error(ErrorKind::configuration,
              "unknown key '" + e.key + "' in section [" + section + "] (line " + std::to_string(e.line) + ")");
}

}  // namespace

const std::vector<IniFile::Entry>* IniFile::section(const std::string& name) const {
  for (const auto& [n, entries] : sections) {
    if (n == name) return &entries;
  }
  return nullptr;
}

std::optional<std::string> IniFile::get(const std::string& sec, const std::string& key) const {
  const auto* entries = section(sec);
  if (!entries) return std::nullopt;
  std::optional<std::string> value;
  for (const auto& e : *entries) {
    if (e.key == key) value = e.value;
  }
  return value;
}

IniFile parse_ini(std::istream& in, const std::string& origin) {
  IniFile ini;
  ini.sections.emplace_back("", std::vector<IniFile::Entry>{});
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']' || text.size() < 3) {
        throw Error(ErrorKind::parse, origin + ":" + std::to_string(line) + ": malformed section header");
      }
      const std::string name = trim(text.substr(1, text.size() - 2));
      auto it = std::find_if(ini.sections.begin(), ini.sections.end(), [&](const auto& s) { return s.first == name; });
      if (it != ini.sections.end()) {
        throw Error(ErrorKind::parse, origin + ":" + std::to_string(line) + ": duplicate section [" + name + "]");
      }
      ini.sections.emplace_back(name, std::vector<IniFile::Entry>{});
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::parse, origin + ":" + std::to_string(line) + ": expected key = value");
    }
    IniFile::Entry e{trim(text.substr(0, eq)), trim(text.substr(eq + 1)), line};
    if (e.key.empty()) throw Error(ErrorKind::parse, origin + ":" + std::to_string(line) + ": empty key");
    ini.sections.back().second.push_back(std::move(e));
  }
  return ini;
}

IniFile read_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  return parse_ini(in, path);
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"analyze", "residuals", "variation", "hopf", "stability"};
  return names;
}

void apply_ini(const IniFile& ini, const std::string& path, RunConfig& cfg) {
  for (const auto& [sec, entries] : ini.sections) {
    if (sec == "surface") {
      cfg.surface = path;
      continue;
    }
    for (const auto& e : entries) {
      const std::string& k = e.key;
      const std::string& v = e.value;
      if (sec.empty() || sec == "run") {
        if (k == "command") cfg.command = v;
        else if (k == "surface") cfg.surface = v;
        else if (k == "resolution" || k == "resolutions") cfg.resolutions = parse_resolutions(v);
        else if (k == "frame") cfg.frame = v;
        else if (k == "derivative") cfg.derivative = v;
        else if (k == "output") cfg.output = v;
        else if (k == "format") cfg.format = v;
        else unknown_key(sec.empty() ? "run" : sec, e);
      } else if (sec == "variation") {
        auto& o = cfg.variation;
        if (k == "weight") o.weight = v;
        else if (k == "direction") o.direction = v;
        else if (k == "phi") o.phi = v;
        else if (k == "oracle") o.oracle = parse_bool(k, v);
        else if (k == "cases") o.cases = static_cast<int>(parse_integer(k, v));
        else if (k == "seed") o.seed = static_cast<unsigned long long>(parse_integer(k, v));
        else if (k == "eps") o.eps = parse_double(k, v);
        else unknown_key(sec, e);
      } else if (sec == "hopf") {
        if (k == "dump_fields") cfg.hopf.dump_fields = v;
        else if (k == "zero_radius") cfg.hopf.zero_radius = parse_double(k, v);
        else unknown_key(sec, e);
      } else if (sec == "stability") {
        auto& o = cfg.stability;
        if (k == "route") o.route = v;
        else if (k == "kappa0") o.kappa0 = parse_double(k, v);
        else if (k == "omega0") o.omega0 = parse_double(k, v);
        else if (k == "omega0_factor") o.omega0_factor = parse_double(k, v);
        else if (k == "mu") o.mu = parse_double(k, v);
        else if (k == "a") o.a = parse_double(k, v);
        else if (k == "mesh_size") o.mesh_size = parse_double(k, v);
        else if (k == "q") o.q = v;
        else if (k == "weight") o.weight = v;
        else unknown_key(sec, e);
      } else {
        throw config_error("unknown section [" + sec + "] in '" + path + "'");
      }
    }
  }
}

void finalize(RunConfig& cfg) {
  if (std::find(command_names().begin(), command_names().end(), cfg.command) == command_names().end()) {
    throw config_error("unknown command '" + cfg.command + "'");
  }
  if (cfg.surface.empty()) throw config_error("no surface given");
  if (cfg.resolutions.empty()) {
    if (cfg.command == "residuals" || cfg.command == "hopf") cfg.resolutions = {64, 128, 256};
    else if (cfg.command == "stability") cfg.resolutions = {128};
    else cfg.resolutions = {64};
  }
  for (int m : cfg.resolutions) {
    if (m < 8 || m > 4096) throw config_error("resolution " + std::to_string(m) + " outside [8, 4096]");
  }
  if (cfg.command == "residuals" || cfg.command == "hopf") {
    for (std::size_t i = 1; i < cfg.resolutions.size(); ++i) {
      if (cfg.resolutions[i] <= cfg.resolutions[i - 1]) {
        throw config_error("resolutions must be strictly increasing for convergence studies");
      }
    }
  }
  if (!one_of(cfg.frame, {"default", "gram_schmidt", "parallel", "analytic"})) {
    throw config_error("frame must be gram_schmidt, parallel, analytic or default");
  }
  if (!one_of(cfg.derivative, {"analytic", "fd", "mixed"})) {
    throw config_error("derivative must be analytic, fd or mixed");
  }
  if (!one_of(cfg.format, {"json", "csv"})) throw config_error("format must be json or csv");

  const auto& v = cfg.variation;
  if (!one_of(v.weight, {"const", "exp_x3", "radial"})) throw config_error("unknown weight '" + v.weight + "'");
  if (!one_of(v.direction, {"constant", "rotating", "random"})) {
    throw config_error("unknown direction preset '" + v.direction + "'");
  }
  if (!one_of(v.phi, {"radial", "tensor", "random"})) throw config_error("unknown phi preset '" + v.phi + "'");
  if (v.cases < 1 || v.cases > 1000) throw config_error("cases must lie in [1, 1000]");
  if (!(v.eps > 0.0 && v.eps < 1.0)) throw config_error("eps must lie in (0, 1)");

  if (!(cfg.hopf.zero_radius > 0.0 && cfg.hopf.zero_radius < 1.0)) throw config_error("zero_radius must lie in (0, 1)");

  const auto& s = cfg.stability;
  if (!one_of(s.route, {"definition", "graph", "cap", "fermat", "flat", "threshold"})) {
    throw config_error("unknown route '" + s.route + "'");
  }
  if (!(s.mesh_size > 0.0 && s.mesh_size <= 0.5)) throw config_error("mesh_size must lie in (0, 0.5]");
  if (!one_of(s.q, {"zero", "two_h_squared"})) throw config_error("q must be zero or two_h_squared");
  if (!one_of(s.weight, {"const", "exp_x3", "radial"})) throw config_error("unknown weight '" + s.weight + "'");
  if (cfg.command == "stability") {
    if (s.route == "definition" && !s.mu) throw config_error("route definition needs --mu");
    if (s.route == "cap" && !s.kappa0) throw config_error("route cap needs --kappa0");
    if (s.mu && !(*s.mu > 0.0)) throw config_error("mu must be positive");
    if (!(s.omega0_factor > 1.0)) throw config_error("omega0_factor must exceed 1");
  }
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["command"] = cfg.command;
  j["surface"] = cfg.surface;
  j["resolutions"] = cfg.resolutions;
  j["frame"] = cfg.frame;
  j["derivative"] = cfg.derivative;
  j["format"] = cfg.format;
  if (cfg.command == "variation") {
    const auto& v = cfg.variation;
    j["variation"] = {{"weight", v.weight}, {"direction", v.direction}, {"phi", v.phi}, {"oracle", v.oracle},
                      {"cases", v.cases},   {"seed", v.seed},           {"eps", v.eps}};
  } else if (cfg.command == "hopf") {
    j["hopf"] = {{"dump_fields", cfg.hopf.dump_fields}, {"zero_radius", cfg.hopf.zero_radius}};
  } else if (cfg.command == "stability") {
    const auto& s = cfg.stability;
    nlohmann::json o = {{"route", s.route}, {"mesh_size", s.mesh_size}, {"q", s.q}, {"weight", s.weight},
                        {"omega0_factor", s.omega0_factor}, {"a", s.a}};
    o["kappa0"] = s.kappa0 ? nlohmann::json(*s.kappa0) : nlohmann::json(nullptr);
    o["omega0"] = s.omega0 ? nlohmann::json(*s.omega0) : nlohmann::json(nullptr);
    o["mu"] = s.mu ? nlohmann::json(*s.mu) : nlohmann::json(nullptr);
    j["stability"] = o;
  }
  return j;
}

Surface surface_from_ini(const IniFile& ini, const std::string& origin) {
  if (!ini.section("surface")) throw config_error("'" + origin + "' has no [surface] section");
  for (const auto& e : *ini.section("surface")) {
    const bool component = e.key.size() >= 2 && e.key[0] == 'x' &&
                           std::all_of(e.key.begin() + 1, e.key.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (!component && !one_of(e.key, {"name", "dim", "conformal", "graph"})) unknown_key("surface", e);
  }
  const auto dim_text = ini.get("surface", "dim");
  if (!dim_text) throw config_error("surface '" + origin + "' needs dim");
  const long long n = parse_integer("dim", *dim_text);
  if (n < 3 || n > 8) throw config_error("surface dim must lie in [3, 8]");
  std::vector<Expression> comps;
  for (long long c = 1; c <= n; ++c) {
    const std::string key = "x" + std::to_string(c);
    const auto text = ini.get("surface", key);
    if (!text) throw config_error("surface '" + origin + "' is missing component " + key);
    try {
      comps.push_back(Expression::parse(*text));
    } catch (const Error& err) {
      throw Error(ErrorKind::parse, key + ": " + err.what());
    }
  }
  Surface s;
  s.name = ini.get("surface", "name").value_or(std::filesystem::path(origin).stem().string());
  auto patch = std::make_shared<ExpressionPatch>(s.name, std::move(comps));
  patch->set_claims_conformal(parse_bool("conformal", ini.get("surface", "conformal").value_or("false")));
  patch->set_is_graph(parse_bool("graph", ini.get("surface", "graph").value_or("false")));
  s.patch = patch;
  return s;
}

Surface resolve_surface(const std::string& spec) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(spec, ec)) return surface_from_ini(read_ini(spec), spec);
  if (spec.find('/') != std::string::npos || spec.ends_with(".cfg") || spec.ends_with(".ini")) {
    throw config_error("surface file '" + spec + "' not found");
  }
  return make_surface(spec);
}

}  // namespace imm
