#pragma once
// Levy traces of second-derivative kernels, the transport kernels of U_{1,0}, and the
// modified Levy Laplacian of parallel transport computed along two routes.

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "levylap/algebra.hpp"
#include "levylap/connection.hpp"
#include "levylap/errors.hpp"
#include "levylap/quadrature.hpp"
#include "levylap/transport.hpp"

namespace levylap::levy {

using algebra::RotationCurve;
using connection::Connection;
using geometry::MetricChart;
using transport::Curve;
using transport::TransportOptions;

// 4x4 block with entries in a coefficient ring (double, or Mat4 for Hom-valued kernels).
template <class C>
using Block = std::array<C, 16>;

inline double ring_abs(double x) { return std::fabs(x); }
inline double ring_abs(const Mat4& x) { return max_abs(x); }

template <class C>
struct KernelTriple {
  TimeGrid grid;
  std::vector<Block<C>> levy;      // Q^L(t_k), symmetric
  std::vector<Block<C>> singular;  // Q^S(t_k), antisymmetric
  // Optional Volterra table Q^V(t_j, t_k), row-major; never read by the traces.
  std::vector<Block<C>> volterra;

  // Sizes match the grid and blocks have the right symmetry (relative tolerance).
  void validate(double tolerance = 1e-10) const {
    if (levy.size() != grid.size() || singular.size() != grid.size()) {
      throw ContractViolation("KernelTriple: kernel tables do not match the grid");
    }
    double scale = 1.0, worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          scale = std::fmax(scale, ring_abs(levy[k][4 * a + b]));
          scale = std::fmax(scale, ring_abs(singular[k][4 * a + b]));
          worst = std::fmax(worst, ring_abs(levy[k][4 * a + b] - levy[k][4 * b + a]));
          worst = std::fmax(worst, ring_abs(singular[k][4 * a + b] + singular[k][4 * b + a]));
        }
    }
    if (worst > tolerance * scale) {
      throw ContractViolation("KernelTriple: Q^L not symmetric or Q^S not antisymmetric");
    }
  }
};

namespace detail {

template <class C>
C zero() {
  return C{};
}

template <class C>
C integrate(const TimeGrid& grid, const std::vector<C>& v) {
  if constexpr (std::is_same_v<C, double>) {
    return grid.integrate(std::span<const double>(v));
  } else {
    return grid.integrate(std::span<const Mat4>(v));
  }
}

// tr(X Q) = sum_ab X_ab Q_ba with X a real 4x4 matrix.
template <class C>
C trace_with(const Mat4& x, const Block<C>& q) {
  C s = zero<C>();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (x(a, b) != 0.0) s += x(a, b) * q[4 * b + a];
  return s;
}

// Entrywise projection of a ring-valued antisymmetric block onto Lie(S^3_L) / Lie(S^3_R).
template <class C>
Block<C> project(const Block<C>& q, bool left) {
  Block<C> out{};
  for (int i = 0; i < 3; ++i) {
    const Mat4 e = left ? algebra::left_basis(i) : algebra::right_basis(i);
    // <Q, e> = -tr(Q e) = -sum_ab Q_ab e_ba
    C c = zero<C>();
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (e(b, a) != 0.0) c += (-0.25 * e(b, a)) * q[4 * a + b];
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (e(a, b) != 0.0) out[4 * a + b] += e(a, b) * c;
  }
  return out;
}

}  // namespace detail

// int_0^1 tr Q^L(t) dt
template <class C>
C levy_trace(const KernelTriple<C>& q) {
  q.validate();
  std::vector<C> tr(q.grid.size());
  for (std::size_t k = 0; k < q.grid.size(); ++k) {
    C s = detail::zero<C>();
    for (int a = 0; a < 4; ++a) s += q.levy[k][5 * a];
    tr[k] = s;
  }
  return detail::integrate(q.grid, tr);
}

template <class C>
struct ModifiedTrace {
  C value{};           // two-term form
  C three_term{};      // levy - singular_plus - singular_minus
  C levy{};            // int tr Q^L
  C singular{};        // int tr(R Q^S)
  C singular_plus{};   // int tr(R^+ Q^S_+)
  C singular_minus{};  // int tr(R^- Q^S_-)
};

// tr^W_L Q = int tr Q^L - int tr(R Q^S) with R the chosen log-derivative of W. The
// kernel-conjugation definition Q(u, v) -> Q(Wu, Wv) produces the spatial derivative
// R = W' W^{-1}; the body derivative W^{-1} W' agrees with it for one-parameter
// subgroups.
template <class C>
ModifiedTrace<C> modified_levy_trace(const RotationCurve& w, const KernelTriple<C>& q,
                                     algebra::Derivative derivative = algebra::Derivative::Spatial) {
  q.validate();
  const std::size_t n = q.grid.size();
  std::vector<C> lv(n), s(n), sp(n), sm(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Mat4 r = w.derivative(q.grid.t(k), derivative);
    const Mat4 rp = algebra::project_left(r), rm = algebra::project_right(r);
    C t = detail::zero<C>();
    for (int a = 0; a < 4; ++a) t += q.levy[k][5 * a];
    lv[k] = t;
    s[k] = detail::trace_with(r, q.singular[k]);
    sp[k] = detail::trace_with(rp, detail::project(q.singular[k], true));
    sm[k] = detail::trace_with(rm, detail::project(q.singular[k], false));
  }
  ModifiedTrace<C> out;
  out.levy = detail::integrate(q.grid, lv);
  out.singular = detail::integrate(q.grid, s);
  out.singular_plus = detail::integrate(q.grid, sp);
  out.singular_minus = detail::integrate(q.grid, sm);
  out.value = out.levy - out.singular;
  out.three_term = out.levy - out.singular_plus - out.singular_minus;
  return out;
}

// Per-node data shared by both routes.
struct TransportKernels {
  transport::TransportResult path;
  KernelTriple<Mat4> kernels;
  std::vector<Mat4> u_1t;                    // U_{1,t}
  std::vector<connection::FormMat> f;        // F_mn(gamma(t)), chart components
  std::vector<connection::FormMat> f_plus;   // F_+ via the chart Hodge star
  std::vector<Mat4> ym;                      // (D_A^* F)_n gamma'^n
};

// K^S_mn = U_{1,t} F(e_m, e_n) U_{t,0};
// K^L_mn = -1/2 U_{1,t} (nabla_{e_m} F(e_n, gamma') + nabla_{e_n} F(e_m, gamma')) U_{t,0}.
TransportKernels transport_kernels(const Connection& a, const MetricChart& chart, const Curve& gamma,
                                   const TransportOptions& opt = {});

struct LevyResult {
  Mat4 value;           // Delta^W_L U_{1,0}(gamma) = term_ym - term_rot
  Mat4 term_ym;         // int U_{1,t} (D_A^* F)(gamma') U_{t,0} dt
  Mat4 term_rot;        // int U_{1,t} tr(R F) U_{t,0} dt, F in the transported frame
  Mat4 term_rot_plus;   // 2 sqrt(2) int U_{1,t} F_+<v^+_R> U_{t,0} dt via transported bivectors
  Mat4 term_rot_minus;  // same with F_- and v^-_R
  Mat4 kernel_route;    // modified Levy trace of the transport kernels
  double route_discrepancy = 0.0;  // max |value - kernel_route|
  double split_discrepancy = 0.0;  // max |term_rot - term_rot_plus - term_rot_minus|
  double threshold = 0.0;          // vanishing threshold for |value|
  std::size_t nodes = 0;

  double norm() const { return frobenius_norm(value); }
  bool vanishes() const { return norm() < threshold; }
};

// Self-calibrated "zero": 10x the route discrepancy, floored at 1e-10 and capped at 1e-5.
double vanishing_threshold(double route_discrepancy);

LevyResult modified_levy_laplacian_transport(const TransportKernels& tk, const RotationCurve& w);
LevyResult modified_levy_laplacian_transport(const Connection& a, const MetricChart& chart,
                                             const Curve& gamma, const RotationCurve& w,
                                             const TransportOptions& opt = {});

struct FunctionalResult {
  double value = 0.0;       // modified Levy trace of the kernel triple of L_f
  double direct = 0.0;      // int Laplace-Beltrami f(gamma(t)) dt
  double singular = 0.0;    // int tr(R Q^S), identically zero here
};

// L_f(gamma) = int f(gamma(t)) dt has Q^L_mn = Hess f(e_m, e_n) and Q^S = 0.
KernelTriple<double> functional_kernels(const geometry::ScalarField& f, const MetricChart& chart,
                                        const Curve& gamma, const TransportOptions& opt = {});
FunctionalResult levy_laplacian_functional(const geometry::ScalarField& f, const MetricChart& chart,
                                           const Curve& gamma, const RotationCurve& w,
                                           const TransportOptions& opt = {});

struct Lemma2Row {
  double r = 0.0;
  Mat4 value;             // int_0^1 L^W(gamma_r, t, t) dt
  double residual = 0.0;  // |value - endpoint| (Frobenius)
};

struct Lemma2Report {
  std::vector<Lemma2Row> rows;
  Mat4 endpoint;          // tr((int R) L_+(gamma, 1)) in the transported frame
  Mat4 endpoint_bivector; // 2 sqrt(2) L_+(gamma(1))<w^+_W(gamma, 1)>
  double c_fit = 0.0;     // least-squares slope of residual against r through the origin
  double r_squared = 0.0;
  bool bound_holds = false;  // residual <= c_fit r (1 + 1e-3) + 1e-12 for every r
};

Lemma2Report lemma2_limit(const Connection& a, const MetricChart& chart, const Curve& gamma,
                          const RotationCurve& w, const std::vector<double>& r_sequence,
                          const TransportOptions& opt = {});

}  // namespace levylap::levy
