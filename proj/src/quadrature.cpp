#include "levylap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levylap/errors.hpp"

namespace levylap {

double determinant(const Mat4& a) {
  // Laplace expansion over 2x2 minors of the first two rows.
  const double s0 = a(0, 0) * a(1, 1) - a(1, 0) * a(0, 1);
  const double s1 = a(0, 0) * a(1, 2) - a(1, 0) * a(0, 2);
  const double s2 = a(0, 0) * a(1, 3) - a(1, 0) * a(0, 3);
  const double s3 = a(0, 1) * a(1, 2) - a(1, 1) * a(0, 2);
  const double s4 = a(0, 1) * a(1, 3) - a(1, 1) * a(0, 3);
  const double s5 = a(0, 2) * a(1, 3) - a(1, 2) * a(0, 3);
  const double c5 = a(2, 2) * a(3, 3) - a(3, 2) * a(2, 3);
  const double c4 = a(2, 1) * a(3, 3) - a(3, 1) * a(2, 3);
  const double c3 = a(2, 1) * a(3, 2) - a(3, 1) * a(2, 2);
  const double c2 = a(2, 0) * a(3, 3) - a(3, 0) * a(2, 3);
  const double c1 = a(2, 0) * a(3, 2) - a(3, 0) * a(2, 2);
  const double c0 = a(2, 0) * a(3, 1) - a(3, 0) * a(2, 1);
  return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
}

Mat4 inverse(const Mat4& a) {
  const double s0 = a(0, 0) * a(1, 1) - a(1, 0) * a(0, 1);
  const double s1 = a(0, 0) * a(1, 2) - a(1, 0) * a(0, 2);
  const double s2 = a(0, 0) * a(1, 3) - a(1, 0) * a(0, 3);
  const double s3 = a(0, 1) * a(1, 2) - a(1, 1) * a(0, 2);
  const double s4 = a(0, 1) * a(1, 3) - a(1, 1) * a(0, 3);
  const double s5 = a(0, 2) * a(1, 3) - a(1, 2) * a(0, 3);
  const double c5 = a(2, 2) * a(3, 3) - a(3, 2) * a(2, 3);
  const double c4 = a(2, 1) * a(3, 3) - a(3, 1) * a(2, 3);
  const double c3 = a(2, 1) * a(3, 2) - a(3, 1) * a(2, 2);
  const double c2 = a(2, 0) * a(3, 3) - a(3, 0) * a(2, 3);
  const double c1 = a(2, 0) * a(3, 2) - a(3, 0) * a(2, 2);
  const double c0 = a(2, 0) * a(3, 1) - a(3, 0) * a(2, 1);
  const double det = s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
  if (!std::isfinite(det) || std::fabs(det) < 1e-300) {
    throw NumericError("matrix inverse: singular or non-finite matrix");
  }
  const double id = 1.0 / det;
  Mat4 b;
  b(0, 0) = (a(1, 1) * c5 - a(1, 2) * c4 + a(1, 3) * c3) * id;
  b(0, 1) = (-a(0, 1) * c5 + a(0, 2) * c4 - a(0, 3) * c3) * id;
  b(0, 2) = (a(3, 1) * s5 - a(3, 2) * s4 + a(3, 3) * s3) * id;
  b(0, 3) = (-a(2, 1) * s5 + a(2, 2) * s4 - a(2, 3) * s3) * id;
  b(1, 0) = (-a(1, 0) * c5 + a(1, 2) * c2 - a(1, 3) * c1) * id;
  b(1, 1) = (a(0, 0) * c5 - a(0, 2) * c2 + a(0, 3) * c1) * id;
  b(1, 2) = (-a(3, 0) * s5 + a(3, 2) * s2 - a(3, 3) * s1) * id;
  b(1, 3) = (a(2, 0) * s5 - a(2, 2) * s2 + a(2, 3) * s1) * id;
  b(2, 0) = (a(1, 0) * c4 - a(1, 1) * c2 + a(1, 3) * c0) * id;
  b(2, 1) = (-a(0, 0) * c4 + a(0, 1) * c2 - a(0, 3) * c0) * id;
  b(2, 2) = (a(3, 0) * s4 - a(3, 1) * s2 + a(3, 3) * s0) * id;
  b(2, 3) = (-a(2, 0) * s4 + a(2, 1) * s2 - a(2, 3) * s0) * id;
  b(3, 0) = (-a(1, 0) * c3 + a(1, 1) * c1 - a(1, 2) * c0) * id;
  b(3, 1) = (a(0, 0) * c3 - a(0, 1) * c1 + a(0, 2) * c0) * id;
  b(3, 2) = (-a(3, 0) * s3 + a(3, 1) * s1 - a(3, 2) * s0) * id;
  b(3, 3) = (a(2, 0) * s3 - a(2, 1) * s1 + a(2, 2) * s0) * id;
  return b;
}

Mat4 weighted_sum(std::span<const Mat4> values, std::span<const double> weights) {
  if (values.size() != weights.size()) {
    throw ContractViolation("weighted_sum: value/weight count mismatch");
  }
  Mat4 out;
  if (values.empty()) return out;
  // Mat4 is 16 contiguous doubles with no padding.
  static_assert(sizeof(Mat4) == 16 * sizeof(double));
  simd::active().weighted_sum16(values.front().v.data(), weights.data(), values.size(),
                                out.v.data());
  return out;
}

namespace {

void append_segment(std::vector<double>& t, std::vector<double>& w, std::vector<int>& side,
                    double a, double b, int steps) {
  const double h = (b - a) / steps;
  for (int i = 0; i <= steps; ++i) {
    t.push_back(i == steps ? b : a + i * h);
    const double c = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w.push_back(c * h / 3.0);
    side.push_back(i == 0 ? 1 : (i == steps ? -1 : 0));
  }
}

}  // namespace

TimeGrid TimeGrid::uniform(int steps) { return with_breakpoints({}, steps, 2); }

TimeGrid TimeGrid::with_breakpoints(std::span<const double> breakpoints, int steps,
                                    int min_steps) {
  if (steps < 2) throw ContractViolation("TimeGrid: need at least two steps");
  std::vector<double> cuts{0.0};
  for (double b : breakpoints) {
    if (!(b > 0.0 && b < 1.0)) continue;
    cuts.push_back(b);
  }
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double x, double y) { return std::fabs(x - y) < 1e-14; }),
             cuts.end());

  TimeGrid g;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double len = cuts[s + 1] - cuts[s];
    int n = std::max(min_steps, static_cast<int>(std::ceil(steps * len - 1e-9)));
    if (n % 2 == 1) ++n;
    g.bounds_.push_back(g.t_.size());
    append_segment(g.t_, g.w_, g.side_, cuts[s], cuts[s + 1], n);
  }
  g.bounds_.push_back(g.t_.size());
  return g;
}

std::size_t TimeGrid::index_of(double t) const {
  auto it = std::lower_bound(t_.begin(), t_.end(), t - 1e-12);
  if (it == t_.end() || std::fabs(*it - t) > 1e-12) {
    throw ContractViolation("TimeGrid: t = " + std::to_string(t) + " is not a grid node");
  }
  return static_cast<std::size_t>(it - t_.begin());
}

double TimeGrid::integrate(std::span<const double> values) const {
  if (values.size() != w_.size()) throw ContractViolation("TimeGrid::integrate: size mismatch");
  return simd::active().dot(values.data(), w_.data(), values.size());
}

Mat4 TimeGrid::integrate(std::span<const Mat4> values) const {
  return weighted_sum(values, w_);
}

double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
  if (intervals < 2 || intervals % 2 != 0) {
    throw ContractViolation("simpson: interval count must be even and >= 2");
  }
  const double h = (b - a) / intervals;
  std::vector<double> vals(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) {
    const double c = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    vals[static_cast<std::size_t>(i)] = c * f(a + i * h);
  }
  return pairwise_sum(vals) * h / 3.0;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace levylap
