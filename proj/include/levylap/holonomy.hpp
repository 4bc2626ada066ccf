#pragma once
// Holonomy of the Levi-Civita connection on self-dual 2-forms: loop holonomies in
// the v_i^+ basis, classification of the restricted holonomy group, the bivector w^+_W
// and the rotation-curve conditions of the trivial / SO(2) / SO(3) cases.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levylap/algebra.hpp"
#include "levylap/geometry.hpp"
#include "levylap/transport.hpp"

namespace levylap::holonomy {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Mat6 = std::array<std::array<double, 6>, 6>;

enum class HolonomyClass { Trivial, SO2, SO3 };
const char* to_string(HolonomyClass c);

struct HolonomyClassification {
  HolonomyClass cls = HolonomyClass::Trivial;
  int algebra_dimension = 0;
  Vec3 fixed_axis{};                    // unit coefficients in the v_i^+ basis (SO2 only)
  std::optional<geometry::Bivector> fixed_bivector;  // the same element at the basepoint
  std::vector<double> singular_values;
  std::size_t sample_count = 0;
  std::vector<Vec3> logs;  // per-loop so(3) logarithms
};

struct ClassifierOptions {
  double relative_cutoff = 1e-6;
  double absolute_floor = 1e-9;
};

// K_ij = <v_i^+(m), v_j^+(gamma, 1)>: the transport around the loop in the v^+ basis.
Mat3 loop_holonomy_2forms(const geometry::MetricChart& chart, const transport::Curve& loop,
                          const transport::TransportOptions& opt = {});
// Same on all of Lambda^2 in the basis (v_1^+, v_2^+, v_3^+, v_1^-, v_2^-, v_3^-).
Mat6 loop_holonomy_bivectors(const geometry::MetricChart& chart, const transport::Curve& loop,
                             const transport::TransportOptions& opt = {});

Vec3 so3_log(const Mat3& k);
Mat3 so3_exp(const Vec3& w);
double orthogonality_defect(const Mat3& k);
double determinant(const Mat3& k);

// Rank of the span of the holonomy logarithms decides the class; rank 2 throws
// ClassificationFailure.
HolonomyClassification classify_generators(const std::vector<Mat3>& holonomies,
                                           const ClassifierOptions& opt = {});
HolonomyClassification classify_holonomy(const geometry::MetricChart& chart,
                                         const std::vector<transport::Curve>& loops,
                                         const transport::TransportOptions& topt = {},
                                         int jobs = 1, const ClassifierOptions& opt = {});

// Seeded three-mode Fourier loops at `base`.
std::vector<transport::Curve> loop_family(std::uint64_t seed, std::size_t count, const Point4& base,
                                          double scale);
// Rotations about v_1^+ by seeded random angles, standing in for a holonomy group
// that fixes a self-dual bivector.
std::vector<Mat3> synthetic_so2_holonomies(std::uint64_t seed, std::size_t count);
HolonomyClassification classify_synthetic_so2(const geometry::MetricChart& chart, const Point4& basepoint,
                                              std::uint64_t seed, std::size_t count = 50,
                                              const ClassifierOptions& opt = {});

// w^+_W(gamma, 1) = sum_i alpha_i^+ v_i^+(gamma, 1), alpha from the spatial
// log-derivative W' W^{-1}.
geometry::Bivector w_plus(const algebra::RotationCurve& w, const transport::TransportResult& path);

struct WConditionReport {
  bool pass = false;
  HolonomyClass cls = HolonomyClass::Trivial;
  Vec3 alpha_plus{};       // from W' W^{-1}
  Vec3 alpha_plus_body{};  // from W^{-1} W'
  double projection_v1 = 0.0;
  double projection_v2 = 0.0;
  std::string note;
};

WConditionReport check_W_conditions(const algebra::RotationCurve& w, const HolonomyClassification& cls,
                                    double tolerance = 1e-8);

// Dimension of the linear span of the orbit of w (coefficients in the v^+ basis) under
// sampled elements of the classified group.
int orbit_span_report(const HolonomyClassification& cls, const Vec3& w, std::uint64_t seed = 7,
                      std::size_t samples = 64);

}  // namespace levylap::holonomy
