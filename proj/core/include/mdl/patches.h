#ifndef MDL_PATCHES_H_
#define MDL_PATCHES_H_

#include <string>
#include <vector>

#include "mdl/dota.h"
#include "mdl/geometry.h"

namespace mdl {

struct PatchConfig {
  int patch = 600;
  int gap = 100;
  std::vector<double> scales = {0.5, 1.0};
  // An instance belongs to a window when at least this fraction of its
  // area lies inside. It is kept whole, not clipped.
  double min_inside_fraction = 0.7;
};

// Window [x0, x1) x [y0, y1) in scaled-image pixels.
struct PatchWindow {
  std::string image_id;
  double scale = 1.0;
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  std::vector<DotaInstance> instances;  // window-local coordinates
};

// Scaled image length: round(length * scale), at least 1.
int scaled_length(int length, double scale);

// Origins 0, stride, 2 stride, ...; the last window is pulled back so its
// far edge is the image edge.
std::vector<int> window_origins(int length, int patch, int stride);

std::vector<PatchWindow> plan_patches(int image_width, int image_height,
                                      const PatchConfig& config = {});
std::vector<PatchWindow> plan_patches(const DotaAnnotation& annotation, int image_width,
                                      int image_height, const PatchConfig& config = {});

// original -> window-local: p * scale - origin. window-local -> original
// is the exact inverse.
Point2 to_window(Point2 original, const PatchWindow& window);
Point2 to_original(Point2 local, const PatchWindow& window);
ObbVertices to_window(const ObbVertices& original, const PatchWindow& window);
ObbVertices to_original(const ObbVertices& local, const PatchWindow& window);

}  // namespace mdl

#endif  // MDL_PATCHES_H_
