#pragma once
// Time grids on [0, 1] with composite Simpson weights and deterministic reductions.

#include <functional>
#include <span>
#include <vector>

#include "levylap/mat4.hpp"

namespace levylap {

// Nodes on [0, 1] split into segments at breakpoints. Each segment carries an even
// number of uniform steps so composite Simpson applies per segment. A breakpoint
// appears twice: as the last node of one segment and the first of the next, so
// integrands may take one-sided limits there.
class TimeGrid {
 public:
  static TimeGrid uniform(int steps);
  // Breakpoints strictly inside (0, 1); the segment [a, b] gets
  // max(min_steps, ceil(steps * (b - a))) steps rounded up to even.
  static TimeGrid with_breakpoints(std::span<const double> breakpoints, int steps,
                                   int min_steps = 16);

  std::size_t size() const { return t_.size(); }
  double t(std::size_t k) const { return t_[k]; }
  const std::vector<double>& nodes() const { return t_; }
  const std::vector<double>& weights() const { return w_; }
  // Index of the first node of each segment, plus size() as sentinel.
  const std::vector<std::size_t>& segment_bounds() const { return bounds_; }
  // +1 for a segment's first node, -1 for its last, 0 inside: which one-sided limit
  // the node represents.
  int side(std::size_t k) const { return side_[k]; }
  // Index of the first node equal to t (within 1e-12), or throws ContractViolation.
  std::size_t index_of(double t) const;

  double integrate(std::span<const double> values) const;
  Mat4 integrate(std::span<const Mat4> values) const;

 private:
  std::vector<double> t_;
  std::vector<double> w_;
  std::vector<std::size_t> bounds_;
  std::vector<int> side_;
};

// Composite Simpson on [a, b] with an even number of intervals.
double simpson(const std::function<double(double)>& f, double a, double b, int intervals);

// Pairwise (cascade) summation: fixed association order independent of threading.
double pairwise_sum(std::span<const double> values);

}  // namespace levylap
