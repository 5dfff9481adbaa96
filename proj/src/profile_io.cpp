#include "ppfit/profile_io.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "ppfit/errors.hpp"

namespace ppfit {

nlohmann::json profile_to_json(const PiecewisePolynomial& scaled_pp,
                               const DomainTransform& transform) {
  const auto exported = to_export_form(scaled_pp, transform);
  nlohmann::json segments = nlohmann::json::array();
  for (int i = 0; i < exported.num_segments(); ++i)
    segments.push_back(
        {{"powers_ascending", absolute_power_coefficients(exported, i)}});
  const auto knots = exported.knots();
  return {{"domain", {knots.front(), knots.back()}},
          {"knots", std::vector<double>(knots.begin(), knots.end())},
          {"degree", exported.degree()},
          {"segments", std::move(segments)}};
}

void write_profile(const PiecewisePolynomial& scaled_pp,
                   const DomainTransform& transform,
                   const std::filesystem::path& path) {
  write_json(profile_to_json(scaled_pp, transform), path);
}

ExportedProfile ExportedProfile::from_json(const nlohmann::json& j) {
  try {
    ExportedProfile p;
    p.domain_begin = j.at("domain").at(0).get<double>();
    p.domain_end = j.at("domain").at(1).get<double>();
    p.degree = j.at("degree").get<int>();
    p.knots = j.at("knots").get<std::vector<double>>();
    for (const auto& s : j.at("segments"))
      p.powers_ascending.push_back(
          s.at("powers_ascending").get<std::vector<double>>());
    if (p.knots.size() != p.powers_ascending.size() + 1)
      throw UsageError("profile knot count does not match segment count");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(fmt::format("malformed profile: {}", e.what()));
  }
}

ExportedProfile ExportedProfile::read(const std::filesystem::path& path) {
  return from_json(read_json(path));
}

double ExportedProfile::operator()(double x) const {
  if (x < knots.front() || x > knots.back())
    throw DomainError(fmt::format("x = {} outside profile domain", x));
  const auto it = std::lower_bound(knots.begin() + 1, knots.end(), x);
  const auto& c = powers_ascending[it - knots.begin() - 1];
  double acc = 0.0;
  for (auto r = c.rbegin(); r != c.rend(); ++r) acc = acc * x + *r;
  return acc;
}

std::string format_loss_curve(const TrainingTrace& trace) {
  std::string out = "epoch,total,l2,lck\n";
  for (const auto& r : trace.records)
    out += fmt::format("{},{:.17g},{:.17g},{:.17g}\n", r.epoch, r.total, r.l2,
                       r.ck);
  return out;
}

void write_loss_curve(const TrainingTrace& trace,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << format_loss_curve(trace);
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(fmt::format("'{}' is not valid JSON: {}", path.string(),
                                 e.what()));
  }
}

}  // namespace ppfit
