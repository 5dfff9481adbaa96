#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppfit/optim.hpp"
#include "ppfit/ppmodel.hpp"

namespace ppfit {

// Drive-ready profile: knots and ascending power coefficients about absolute
// x, all in original units.
//   { "domain": [a, b], "knots": [...], "degree": d,
//     "segments": [ { "powers_ascending": [c0, ..., cd] }, ... ] }
nlohmann::json profile_to_json(const PiecewisePolynomial& scaled_pp,
                               const DomainTransform& transform);
void write_profile(const PiecewisePolynomial& scaled_pp,
                   const DomainTransform& transform,
                   const std::filesystem::path& path);

// Standalone reader for the profile format; evaluates with plain Horner on
// the stored coefficients and does not go through PiecewisePolynomial.
struct ExportedProfile {
  double domain_begin = 0.0;
  double domain_end = 0.0;
  int degree = 0;
  std::vector<double> knots;
  std::vector<std::vector<double>> powers_ascending;

  static ExportedProfile from_json(const nlohmann::json& j);
  static ExportedProfile read(const std::filesystem::path& path);
  double operator()(double x) const;
};

// Loss curve CSV with header "epoch,total,l2,lck".
std::string format_loss_curve(const TrainingTrace& trace);
void write_loss_curve(const TrainingTrace& trace,
                      const std::filesystem::path& path);

void write_json(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace ppfit
