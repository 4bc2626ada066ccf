#pragma once
// Experiment configuration: a JSON document with nested tables. Every knob the
// commands read is written back into `resolved`, so reports show the full setup.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "levylap/algebra.hpp"
#include "levylap/connection.hpp"
#include "levylap/geometry.hpp"
#include "levylap/transport.hpp"

namespace levylap::cli {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedRotation {
  std::string id;
  algebra::RotationCurve w;
};

struct Tolerances {
  double instanton_ratio = 1e-10;
  double codifferential = 1e-6;
  double action_relative = 0.01;
  double charge_absolute = 0.02;
  double lemma2_r_squared = 0.99;
  double nonvanishing = 1e-3;
};

struct HolonomySettings {
  std::size_t loops = 50;
  double scale = 0.3;
  Point4 base{};
  bool synthetic_so2 = false;
  std::string expect;  // "", "Trivial", "SO2", "SO3"
  std::size_t orbit_samples = 64;
};

struct ExperimentConfig {
  json resolved;
  std::uint64_t seed = 1;
  geometry::MetricChart chart = geometry::MetricChart::flat();
  connection::Connection connection = connection::Connection::zero();
  std::vector<NamedRotation> rotations;
  std::vector<transport::Curve> curves;
  transport::TransportOptions transport;
  connection::Region region;
  int grid = 20;
  double grid_half_width = 2.0;
  std::string levy_expect = "vanish";
  std::optional<double> expect_charge;
  HolonomySettings holonomy;
  std::vector<double> lemma2_r;
  std::size_t lemma2_curve = 0;
  std::size_t lemma2_rotation = 0;
  Tolerances tol;
};

ExperimentConfig load_config(const json& doc, std::optional<std::uint64_t> seed_override = {});
ExperimentConfig load_config_file(const std::string& path, std::optional<std::uint64_t> seed_override = {});

// FNV-1a 64 of the compact dump of the resolved configuration, as 16 hex digits.
std::string config_hash(const json& resolved);

}  // namespace levylap::cli
