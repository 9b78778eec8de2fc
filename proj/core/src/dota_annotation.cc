#include "mdl/dota.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mdl/errors.h"

namespace mdl {
namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_number(std::string_view token, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw ParseError(line_no, "not a number: '" + std::string(token) + "'");
  }
  return v;
}

ObbVertices parse_box(std::span<const std::string_view> tokens, std::size_t line_no) {
  std::array<double, 8> xs{};
  for (std::size_t i = 0; i < 8; ++i) xs[i] = parse_number(tokens[i], line_no);
  return ObbVertices::from_flat(xs);
}

// Calls fn(line, line_no) for each non-blank line.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) fn(line, line_no);
    if (end == text.size()) break;
    start = end + 1;
  }
}

std::vector<std::filesystem::path> txt_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

std::optional<int> category_id(std::string_view name) {
  const auto it = std::find(kDotaCategories.begin(), kDotaCategories.end(), name);
  if (it == kDotaCategories.end()) return std::nullopt;
  return static_cast<int>(it - kDotaCategories.begin());
}

DotaAnnotation parse_annotation(std::string_view text, std::string image_id) {
  DotaAnnotation ann;
  ann.image_id = std::move(image_id);
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (line.starts_with("imagesource:") || line.starts_with("gsd:")) return;
    const auto tokens = tokenize(line);
    if (tokens.size() != 10) {
      throw ParseError(line_no, "expected 10 fields, got " + std::to_string(tokens.size()));
    }
    DotaInstance inst;
    inst.box = parse_box(tokens, line_no);
    const auto cat = category_id(tokens[8]);
    if (!cat) throw ParseError(line_no, "unknown category '" + std::string(tokens[8]) + "'");
    inst.category = *cat;
    if (tokens[9] == "0") {
      inst.difficult = false;
    } else if (tokens[9] == "1") {
      inst.difficult = true;
    } else {
      throw ParseError(line_no, "difficult flag must be 0 or 1");
    }
    ann.instances.push_back(inst);
  });
  return ann;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << file.rdbuf();
  return ss.str();
}

std::vector<DotaAnnotation> load_annotation_dir(const std::filesystem::path& dir) {
  std::vector<DotaAnnotation> out;
  for (const auto& path : txt_files(dir)) {
    try {
      out.push_back(parse_annotation(read_text_file(path), path.stem().string()));
    } catch (const ParseError& e) {
      throw ParseError(e.line(), path.filename().string() + ": " + e.message());
    }
  }
  return out;
}

std::vector<ImageDetection> parse_task1_predictions(std::string_view text, int class_id) {
  std::vector<ImageDetection> out;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const auto tokens = tokenize(line);
    if (tokens.size() != 10) {
      throw ParseError(line_no, "expected 10 fields, got " + std::to_string(tokens.size()));
    }
    ImageDetection det;
    det.image_id = std::string(tokens[0]);
    det.detection.score = parse_number(tokens[1], line_no);
    if (det.detection.score < 0.0 || det.detection.score > 1.0) {
      throw ParseError(line_no, "score outside [0, 1]");
    }
    det.detection.box = parse_box(std::span(tokens).subspan(2), line_no);
    det.detection.class_id = class_id;
    out.push_back(std::move(det));
  });
  return out;
}

std::vector<ImageDetection> load_prediction_dir(const std::filesystem::path& dir) {
  std::vector<ImageDetection> out;
  for (const auto& path : txt_files(dir)) {
    std::string stem = path.stem().string();
    if (stem.starts_with("Task1_")) stem = stem.substr(6);
    const auto cat = category_id(stem);
    if (!cat) throw InvalidInputError("prediction file for unknown category: " + path.string());
    auto dets = parse_task1_predictions(read_text_file(path), *cat);
    out.insert(out.end(), std::make_move_iterator(dets.begin()),
               std::make_move_iterator(dets.end()));
  }
  return out;
}

ObbVertices convexified(const ObbVertices& box) {
  if (is_convex(box)) return box;
  const auto hull = convex_hull(box.v);
  ObbVertices out;
  for (std::size_t i = 0; i < 4; ++i) {
    out.v[i] = hull.empty() ? box.v[0] : hull[std::min(i, hull.size() - 1)];
  }
  return out;
}

}  // namespace mdl
