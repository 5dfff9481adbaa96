#include "ppfit/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "ppfit/errors.hpp"

namespace ppfit {

std::string_view to_string(DatasetId id) {
  switch (id) {
    case DatasetId::A: return "A";
    case DatasetId::B: return "B";
    case DatasetId::C: return "C";
    case DatasetId::Custom: return "custom";
  }
  return "?";
}

DatasetId parse_dataset(std::string_view name) {
  if (name == "A" || name == "a") return DatasetId::A;
  if (name == "B" || name == "b") return DatasetId::B;
  if (name == "C" || name == "c") return DatasetId::C;
  throw UsageError(fmt::format("unknown dataset '{}' (expected A|B|C)", name));
}

DatasetSpec preset(DatasetId id, double noise_scale, std::uint64_t seed) {
  using std::numbers::pi;
  DatasetSpec s;
  s.id = id;
  s.noise_scale = noise_scale;
  s.seed = seed;
  switch (id) {
    case DatasetId::A:
      s.formula = "sin(x)";
      s.generator = [](double x) { return std::sin(x); };
      s.a = 0.0;
      s.b = pi / 2.0;
      s.n = 50;
      s.segments = 2;
      break;
    case DatasetId::B:
      s.formula = "sin(x)";
      s.generator = [](double x) { return std::sin(x); };
      s.a = 0.0;
      s.b = 2.0 * pi;
      s.n = 100;
      s.segments = 2;
      break;
    case DatasetId::C:
      s.formula = "sin(4*pi*x^2)";
      s.generator = [](double x) { return std::sin(x * x * 4.0 * pi); };
      s.a = 0.0;
      s.b = 1.0;
      s.n = 100;
      s.segments = 3;
      break;
    case DatasetId::Custom:
      throw UsageError("custom datasets have no preset");
  }
  return s;
}

double NormalSampler::uniform() {
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double NormalSampler::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

SampleSet rescale(const PointCloud& points, int segments) {
  if (points.size() == 0) throw UsageError("point cloud is empty");
  const auto t = build_transform(points.x.front(), points.x.back(), segments);
  const double end = 2.0 * segments;
  SampleSet out;
  out.transform = t;
  out.y = points.y;
  out.x.reserve(points.size());
  for (double x : points.x)
    out.x.push_back(std::clamp(t.to_scaled(x), 0.0, end));
  out.x.back() = end;
  return out;
}

GeneratedData generate(const DatasetSpec& spec) {
  if (spec.n < 2) throw UsageError("a dataset needs at least 2 samples");
  if (!spec.generator) throw UsageError("dataset has no generator");
  if (spec.noise_scale < 0.0) throw UsageError("noise scale must be >= 0");

  PointCloud pts;
  pts.x.resize(spec.n);
  pts.y.resize(spec.n);
  const double step = (spec.b - spec.a) / (spec.n - 1);
  for (int i = 0; i < spec.n; ++i)
    pts.x[i] = i + 1 == spec.n ? spec.b : spec.a + i * step;

  NormalSampler noise(spec.seed);
  for (int i = 0; i < spec.n; ++i) {
    pts.y[i] = spec.generator(pts.x[i]);
    if (spec.noise_scale > 0.0) pts.y[i] += spec.noise_scale * noise();
  }
  SampleSet scaled = rescale(pts, spec.segments);
  return {std::move(pts), std::move(scaled)};
}

namespace {

double parse_number(std::string_view field, int line) {
  // from_chars rejects leading '+' and whitespace; trim spaces only.
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\r'))
    field.remove_suffix(1);
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(value))
    throw ParseError(
        fmt::format("line {}: cannot parse '{}' as a number", line, field),
        line);
  return value;
}

}  // namespace

PointCloud parse_csv(std::string_view text) {
  PointCloud pts;
  int line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != "x,y")
        throw ParseError(
            fmt::format("line {}: expected header 'x,y', got '{}'", line_no, line),
            line_no);
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos ||
        line.find(',', comma + 1) != std::string_view::npos)
      throw ParseError(
          fmt::format("line {}: expected two comma-separated fields", line_no),
          line_no);
    const double x = parse_number(line.substr(0, comma), line_no);
    const double y = parse_number(line.substr(comma + 1), line_no);
    if (!pts.x.empty() && !(x > pts.x.back()))
      throw ParseError(
          fmt::format("line {}: x values must be strictly increasing", line_no),
          line_no);
    pts.x.push_back(x);
    pts.y.push_back(y);
  }
  if (!header_seen) throw ParseError("line 1: missing header 'x,y'", 1);
  return pts;
}

PointCloud read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string format_csv(const PointCloud& points) {
  std::string out = "x,y\n";
  for (std::size_t i = 0; i < points.size(); ++i)
    out += fmt::format("{:.17g},{:.17g}\n", points.x[i], points.y[i]);
  return out;
}

void write_csv(const PointCloud& points, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << format_csv(points);
  if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace ppfit
