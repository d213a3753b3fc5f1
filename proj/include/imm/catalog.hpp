#pragma once

#include <string>
#include <vector>

#include "imm/frame.hpp"
#include "imm/patch.hpp"

namespace imm {

/// A named patch together with its preferred normal frame.
struct Surface {
  std::string name;  // canonical, e.g. "sphere_patch(2)"
  PatchPtr patch;
  AnalyticFrame::Fn frame_fn;  // empty when no closed-form frame is known
  bool frame_torsion_free = false;
  std::vector<int> seed_order;  // Gram-Schmidt seeds (0-based), empty = e3..en
};

/// The seven reference surfaces.
const std::vector<std::string>& catalog_names();

/// Catalog lookup. Accepts "name" or "name(param)" for sphere_patch,
/// cmc_graph and enneper4; also knows grim_reaper and holograph_w3.
Surface make_surface(const std::string& spec);

/// Frame kinds: "default" (analytic when the catalog has one, else
/// Gram-Schmidt), "gram_schmidt", "analytic", "parallel".
FramePtr make_frame(const Surface& s, const std::string& kind = "default");

}  // namespace imm
