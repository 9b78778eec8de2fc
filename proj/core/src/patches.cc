#include "mdl/patches.h"

#include <algorithm>
#include <cmath>

#include "mdl/errors.h"

namespace mdl {
namespace {

bool belongs_to(const ObbVertices& scaled_box, const PatchWindow& w, double min_fraction) {
  const double full = simple_polygon_area(scaled_box.v);
  if (full <= 0.0) {
    return std::all_of(scaled_box.v.begin(), scaled_box.v.end(), [&](Point2 p) {
      return p.x >= w.x0 && p.x <= w.x1 && p.y >= w.y0 && p.y <= w.y1;
    });
  }
  const auto inside = clip_to_rect(scaled_box.v, w.x0, w.y0, w.x1, w.y1);
  return simple_polygon_area(inside) >= min_fraction * full;
}

}  // namespace

int scaled_length(int length, double scale) {
  return std::max(1, static_cast<int>(std::lround(length * scale)));
}

std::vector<int> window_origins(int length, int patch, int stride) {
  std::vector<int> out;
  int left = 0;
  while (true) {
    if (left + patch >= length) {
      out.push_back(std::max(length - patch, 0));
      break;
    }
    out.push_back(left);
    left += stride;
  }
  return out;
}

std::vector<PatchWindow> plan_patches(int image_width, int image_height,
                                      const PatchConfig& config) {
  if (image_width < 1 || image_height < 1) {
    throw InvalidInputError("plan_patches: image dimensions must be positive");
  }
  if (config.patch < 1 || config.gap < 0 || config.gap >= config.patch) {
    throw InvalidInputError("plan_patches: need patch >= 1 and 0 <= gap < patch");
  }
  const int stride = config.patch - config.gap;
  std::vector<PatchWindow> windows;
  for (double scale : config.scales) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw InvalidInputError("plan_patches: scales must be positive");
    }
    const int w = scaled_length(image_width, scale);
    const int h = scaled_length(image_height, scale);
    for (int y0 : window_origins(h, config.patch, stride)) {
      for (int x0 : window_origins(w, config.patch, stride)) {
        PatchWindow win;
        win.scale = scale;
        win.x0 = x0;
        win.y0 = y0;
        win.x1 = std::min(x0 + config.patch, w);
        win.y1 = std::min(y0 + config.patch, h);
        windows.push_back(std::move(win));
      }
    }
  }
  return windows;
}

std::vector<PatchWindow> plan_patches(const DotaAnnotation& annotation, int image_width,
                                      int image_height, const PatchConfig& config) {
  std::vector<PatchWindow> windows = plan_patches(image_width, image_height, config);
  for (PatchWindow& win : windows) {
    win.image_id = annotation.image_id;
    for (const DotaInstance& inst : annotation.instances) {
      const ObbVertices s = scaled(inst.box, win.scale);
      if (!belongs_to(s, win, config.min_inside_fraction)) continue;
      DotaInstance local = inst;
      local.box = to_window(inst.box, win);
      win.instances.push_back(local);
    }
  }
  return windows;
}

Point2 to_window(Point2 original, const PatchWindow& window) {
  return {original.x * window.scale - window.x0, original.y * window.scale - window.y0};
}

Point2 to_original(Point2 local, const PatchWindow& window) {
  return {(local.x + window.x0) / window.scale, (local.y + window.y0) / window.scale};
}

ObbVertices to_window(const ObbVertices& original, const PatchWindow& window) {
  ObbVertices out;
  for (std::size_t i = 0; i < 4; ++i) out.v[i] = to_window(original.v[i], window);
  return out;
}

ObbVertices to_original(const ObbVertices& local, const PatchWindow& window) {
  ObbVertices out;
  for (std::size_t i = 0; i < 4; ++i) out.v[i] = to_original(local.v[i], window);
  return out;
}

}  // namespace mdl
