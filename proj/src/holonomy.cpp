#include "levylap/holonomy.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "levylap/errors.hpp"
#include "levylap/parallel.hpp"
#include "levylap/rng.hpp"

namespace levylap::holonomy {

const char* to_string(HolonomyClass c) {
  switch (c) {
    case HolonomyClass::Trivial:
      return "Trivial";
    case HolonomyClass::SO2:
      return "SO2";
    case HolonomyClass::SO3:
      return "SO3";
  }
  return "?";
}

namespace {

transport::TransportResult loop_transport(const geometry::MetricChart& chart, const transport::Curve& loop,
                                          const transport::TransportOptions& opt) {
  if (!loop.is_loop(1e-10)) throw ContractViolation("loop holonomy: curve " + loop.name() + " is not closed");
  return transport::levi_civita_transport(chart, loop, opt);
}

double norm3v(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

void attach_fixed_bivector(HolonomyClassification& c, const geometry::MetricChart& chart, const Point4& m) {
  if (c.cls != HolonomyClass::SO2) return;
  const auto b = geometry::selfdual_basis(geometry::orthonormal_frame(chart, m), chart.metric(m), chart.orientation());
  geometry::Bivector f;
  for (int i = 0; i < 3; ++i) f.c += c.fixed_axis[i] * b.plus[i].c;
  c.fixed_bivector = f;
}

}  // namespace

Mat3 loop_holonomy_2forms(const geometry::MetricChart& chart, const transport::Curve& loop,
                          const transport::TransportOptions& opt) {
  const auto p = loop_transport(chart, loop, opt);
  const auto b0 = p.bivectors(0);
  const auto b1 = p.bivectors(p.size() - 1);
  const Mat4& g = p.g[0];
  Mat3 k{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) k[i][j] = geometry::inner(g, b0.plus[i], b1.plus[j]);
  return k;
}

Mat6 loop_holonomy_bivectors(const geometry::MetricChart& chart, const transport::Curve& loop,
                             const transport::TransportOptions& opt) {
  const auto p = loop_transport(chart, loop, opt);
  const auto b0 = p.bivectors(0);
  const auto b1 = p.bivectors(p.size() - 1);
  auto at = [](const geometry::SelfDualBasis& b, int i) { return i < 3 ? b.plus[i] : b.minus[i - 3]; };
  Mat6 k{};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) k[i][j] = geometry::inner(p.g[0], at(b0, i), at(b1, j));
  return k;
}

Vec3 so3_log(const Mat3& k) {
  const Vec3 vee{k[2][1] - k[1][2], k[0][2] - k[2][0], k[1][0] - k[0][1]};
  const double c = std::clamp(0.5 * (k[0][0] + k[1][1] + k[2][2] - 1.0), -1.0, 1.0);
  const double th = std::acos(c);
  if (th < 1e-6) {
    // theta / (2 sin theta) = 1/2 + theta^2 / 12 + ...
    const double f = 0.5 + th * th / 12.0;
    return {f * vee[0], f * vee[1], f * vee[2]};
  }
  if (M_PI - th < 1e-4) {
    // Near pi the axis is the dominant eigenvector of the symmetric part.
    Eigen::Matrix3d s;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s(i, j) = 0.5 * (k[i][j] + k[j][i]);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(s);
    Eigen::Vector3d ax = es.eigenvectors().col(2);
    if (ax[0] * vee[0] + ax[1] * vee[1] + ax[2] * vee[2] < 0.0) ax = -ax;
    return {th * ax[0], th * ax[1], th * ax[2]};
  }
  const double f = th / (2.0 * std::sin(th));
  return {f * vee[0], f * vee[1], f * vee[2]};
}

Mat3 so3_exp(const Vec3& w) {
  const double th = norm3v(w);
  Mat3 k{};
  for (int i = 0; i < 3; ++i) k[i][i] = 1.0;
  if (th == 0.0) return k;
  const Vec3 n{w[0] / th, w[1] / th, w[2] / th};
  const double s = std::sin(th), c = 1.0 - std::cos(th);
  const double x[3][3] = {{0, -n[2], n[1]}, {n[2], 0, -n[0]}, {-n[1], n[0], 0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double x2 = 0.0;
      for (int l = 0; l < 3; ++l) x2 += x[i][l] * x[l][j];
      k[i][j] += s * x[i][j] + c * x2;
    }
  return k;
}

double orthogonality_defect(const Mat3& k) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int l = 0; l < 3; ++l) s += k[l][i] * k[l][j];
      worst = std::fmax(worst, std::fabs(s - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

double determinant(const Mat3& k) {
  return k[0][0] * (k[1][1] * k[2][2] - k[1][2] * k[2][1]) - k[0][1] * (k[1][0] * k[2][2] - k[1][2] * k[2][0]) +
         k[0][2] * (k[1][0] * k[2][1] - k[1][1] * k[2][0]);
}

HolonomyClassification classify_generators(const std::vector<Mat3>& holonomies, const ClassifierOptions& opt) {
  HolonomyClassification out;
  out.sample_count = holonomies.size();
  Eigen::MatrixXd span(3, std::max<std::size_t>(1, holonomies.size()));
  span.setZero();
  for (std::size_t i = 0; i < holonomies.size(); ++i) {
    const Vec3 w = so3_log(holonomies[i]);
    out.logs.push_back(w);
    for (int r = 0; r < 3; ++r) span(r, Eigen::Index(i)) = w[r];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(span, Eigen::ComputeFullU);
  const Eigen::VectorXd sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i) out.singular_values.push_back(sv[i]);
  while (out.singular_values.size() < 3) out.singular_values.push_back(0.0);
  const double top = out.singular_values[0];
  int rank = 0;
  if (top > opt.absolute_floor) {
    for (double s : out.singular_values)
      if (s > opt.relative_cutoff * top) ++rank;
  }
  out.algebra_dimension = rank;
  switch (rank) {
    case 0:
      out.cls = HolonomyClass::Trivial;
      break;
    case 1: {
      out.cls = HolonomyClass::SO2;
      Eigen::Vector3d ax = svd.matrixU().col(0);
      // Sign convention: largest component positive.
      Eigen::Index imax;
      ax.cwiseAbs().maxCoeff(&imax);
      if (ax[imax] < 0) ax = -ax;
      out.fixed_axis = {ax[0], ax[1], ax[2]};
      break;
    }
    case 3:
      out.cls = HolonomyClass::SO3;
      break;
    default: {
      std::string msg = "holonomy classification: logarithms span a 2-dimensional subspace (singular values";
      for (double s : out.singular_values) msg += " " + std::to_string(s);
      throw ClassificationFailure(msg + ")");
    }
  }
  return out;
}

HolonomyClassification classify_holonomy(const geometry::MetricChart& chart,
                                         const std::vector<transport::Curve>& loops,
                                         const transport::TransportOptions& topt, int jobs,
                                         const ClassifierOptions& opt) {
  std::vector<Mat3> hol(loops.size());
  parallel_for(loops.size(), jobs, [&](std::size_t i) { hol[i] = loop_holonomy_2forms(chart, loops[i], topt); });
  HolonomyClassification out = classify_generators(hol, opt);
  if (!loops.empty()) attach_fixed_bivector(out, chart, loops.front().basepoint());
  return out;
}

std::vector<transport::Curve> loop_family(std::uint64_t seed, std::size_t count, const Point4& base, double scale) {
  std::vector<transport::Curve> out;
  out.reserve(count);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) out.push_back(transport::Curve::fourier_loop(rng.next_u64(), base, scale, 3));
  return out;
}

std::vector<Mat3> synthetic_so2_holonomies(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  std::vector<Mat3> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(so3_exp({rng.uniform(-M_PI * 0.9, M_PI * 0.9), 0.0, 0.0}));
  return out;
}

HolonomyClassification classify_synthetic_so2(const geometry::MetricChart& chart, const Point4& basepoint,
                                              std::uint64_t seed, std::size_t count, const ClassifierOptions& opt) {
  HolonomyClassification out = classify_generators(synthetic_so2_holonomies(seed, count), opt);
  attach_fixed_bivector(out, chart, basepoint);
  return out;
}

geometry::Bivector w_plus(const algebra::RotationCurve& w, const transport::TransportResult& path) {
  const algebra::Omega alpha = algebra::alpha_coefficients(w, algebra::Derivative::Spatial);
  const auto b = path.bivectors(path.size() - 1);
  geometry::Bivector out;
  for (int i = 0; i < 3; ++i) out.c += alpha.plus[i] * b.plus[i].c;
  return out;
}

WConditionReport check_W_conditions(const algebra::RotationCurve& w, const HolonomyClassification& cls,
                                    double tolerance) {
  w.require_side(algebra::Side::Left, "check_W_conditions");
  WConditionReport r;
  r.cls = cls.cls;
  r.alpha_plus = algebra::alpha_coefficients(w, algebra::Derivative::Spatial).plus;
  r.alpha_plus_body = algebra::alpha_coefficients(w, algebra::Derivative::Body).plus;
  const Vec3& a = r.alpha_plus;
  switch (cls.cls) {
    case HolonomyClass::SO3:
      r.projection_v1 = norm3v(a);
      r.pass = r.projection_v1 > tolerance;
      r.note = r.pass ? "alpha^+ nonzero" : "integral of L_W vanishes";
      break;
    case HolonomyClass::SO2: {
      const Vec3& n = cls.fixed_axis;
      const double p1 = a[0] * n[0] + a[1] * n[1] + a[2] * n[2];
      const Vec3 rest{a[0] - p1 * n[0], a[1] - p1 * n[1], a[2] - p1 * n[2]};
      r.projection_v1 = std::fabs(p1);
      r.projection_v2 = norm3v(rest);
      r.pass = r.projection_v1 > tolerance && r.projection_v2 > tolerance;
      r.note = r.pass ? "both projections nonzero"
                      : (r.projection_v1 <= tolerance ? "projection on V1 vanishes" : "projection on V2 vanishes");
      break;
    }
    case HolonomyClass::Trivial:
      r.pass = false;
      r.note = "trivial holonomy on self-dual 2-forms: the criterion needs a conformal change of metric";
      break;
  }
  return r;
}

int orbit_span_report(const HolonomyClassification& cls, const Vec3& w, std::uint64_t seed, std::size_t samples) {
  Rng rng(seed);
  Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
  auto add = [&](const Vec3& v) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) gram(i, j) += v[i] * v[j];
  };
  add(w);
  for (std::size_t s = 0; s < samples; ++s) {
    Mat3 k{};
    switch (cls.cls) {
      case HolonomyClass::Trivial:
        k = so3_exp({0, 0, 0});
        break;
      case HolonomyClass::SO2: {
        const double th = rng.uniform(-M_PI, M_PI);
        const Vec3& n = cls.fixed_axis;
        k = so3_exp({th * n[0], th * n[1], th * n[2]});
        break;
      }
      case HolonomyClass::SO3: {
        const Vec3 ax = rng.unit_vec3();
        const double th = rng.uniform(0.0, M_PI);
        k = so3_exp({th * ax[0], th * ax[1], th * ax[2]});
        break;
      }
    }
    Vec3 v{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) v[i] += k[i][j] * w[j];
    add(v);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(gram);
  const Eigen::Vector3d ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  if (!(top > 1e-24)) return 0;
  int rank = 0;
  for (int i = 0; i < 3; ++i)
    if (ev[i] > 1e-10 * top) ++rank;
  return rank;
}

}  // namespace levylap::holonomy
