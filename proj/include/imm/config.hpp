#pragma once

// Run configuration: a line-oriented key=value format with [section] headers,
// and the surface resolver that accepts catalog names or surface files.

#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "imm/catalog.hpp"
#include "json.hpp"

namespace imm {

/// Sections in file order; keys outside any section belong to "".
struct IniFile {
  struct Entry {
    std::string key, value;
    int line = 0;
  };
  std::vector<std::pair<std::string, std::vector<Entry>>> sections;

  const std::vector<Entry>* section(const std::string& name) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
};

/// '#' and ';' start comments; blank lines are ignored. Throws
/// Error(ErrorKind::parse) naming the offending line.
IniFile parse_ini(std::istream& in, const std::string& origin = "<config>");
IniFile read_ini(const std::string& path);

struct VariationOptions {
  std::string weight = "const";
  std::string direction = "random";  // constant | rotating | random
  std::string phi = "random";        // radial | tensor | random
  bool oracle = true;
  int cases = 1;
  unsigned long long seed = 1;
  double eps = 1e-2;
};

struct HopfOptions {
  std::string dump_fields;  // CSV path for the per-node Hopf fields, empty = none
  double zero_radius = 0.9;
};

struct StabilityOptions {
  std::string route = "definition";  // definition | graph | cap | fermat | flat | threshold
  std::optional<double> kappa0, omega0, mu;
  double omega0_factor = 1.02;  // cap route without omega0: omega0 = factor * Q
  double a = 1.0;               // threshold route
  double mesh_size = 0.1;
  std::string q = "zero";       // definition route: zero | two_h_squared
  std::string weight = "const";
};

struct RunConfig {
  std::string command;  // analyze | residuals | variation | hopf | stability
  std::string surface;  // catalog name or path of a surface file
  std::vector<int> resolutions;  // empty: per-command default
  std::string frame = "default";
  std::string derivative = "analytic";  // analytic | fd | mixed (Weingarten by fd)
  std::string output;                   // empty: stdout
  std::string format = "json";
  bool timestamp = true;
  VariationOptions variation;
  HopfOptions hopf;
  StabilityOptions stability;
};

const std::vector<std::string>& command_names();

/// Applies [run], [variation], [hopf] and [stability] entries of a config
/// file on top of cfg. A [surface] section makes the file itself the surface.
void apply_ini(const IniFile& ini, const std::string& path, RunConfig& cfg);

/// Fills per-command defaults and checks every field; throws configuration errors.
void finalize(RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);

/// Catalog spec, or a file with a [surface] section:
///   name = ..., dim = n, x1 = <expr>, ..., xn = <expr>, conformal = bool, graph = bool
Surface resolve_surface(const std::string& spec);
Surface surface_from_ini(const IniFile& ini, const std::string& origin);

}  // namespace imm
