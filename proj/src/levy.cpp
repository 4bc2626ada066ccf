#include "levylap/levy.hpp"

#include <algorithm>
#include <cmath>

namespace levylap::levy {

using connection::FormMat;

namespace {

// F(e_a, e_b) for the frame columns of e.
FormMat frame_components(const FormMat& f, const Mat4& e) {
  FormMat t{}, out{};
  for (int a = 0; a < 4; ++a)
    for (int n = 0; n < 4; ++n)
      for (int m = 0; m < 4; ++m)
        if (e(m, a) != 0.0) t[a][n] += e(m, a) * f[m][n];
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int n = 0; n < 4; ++n)
        if (e(n, b) != 0.0) out[a][b] += e(n, b) * t[a][n];
  return out;
}

// sum_ab x_ab f_ba
Mat4 trace_form(const Mat4& x, const FormMat& f) {
  Mat4 s;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (x(a, b) != 0.0) s += x(a, b) * f[b][a];
  return s;
}

// F<B> = 1/2 F_mn B^mn
Mat4 pair(const FormMat& f, const geometry::Bivector& b) {
  Mat4 s;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      if (b.c(m, n) != 0.0) s += (0.5 * b.c(m, n)) * f[m][n];
  return s;
}

geometry::Bivector combine(const std::array<geometry::Bivector, 3>& v, const Vec3& c) {
  geometry::Bivector out;
  for (int i = 0; i < 3; ++i) out.c += c[i] * v[i].c;
  return out;
}

FormMat conjugate(const FormMat& f, const Mat4& u) {
  FormMat out{};
  const Mat4 ut = u.transposed();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) out[a][b] = ut * f[a][b] * u;
  return out;
}

}  // namespace

TransportKernels transport_kernels(const Connection& a, const MetricChart& chart, const Curve& gamma,
                                   const TransportOptions& opt) {
  TransportKernels tk;
  tk.path = transport::transport(a, chart, gamma, opt);
  const auto& p = tk.path;
  const std::size_t n = p.size();
  tk.kernels.grid = p.grid;
  tk.kernels.levy.resize(n);
  tk.kernels.singular.resize(n);
  tk.u_1t.resize(n);
  tk.f.resize(n);
  tk.f_plus.resize(n);
  tk.ym.resize(n);
  const Mat4 uend = p.u_end();
  for (std::size_t k = 0; k < n; ++k) {
    const Point4& x = p.x[k];
    const Vec4& v = p.v[k];
    const Mat4& e = p.e[k];
    const Mat4 u0 = p.u[k];
    const Mat4 u1 = uend * u0.transposed();
    tk.u_1t[k] = u1;

    const connection::CurvatureJet cj = connection::curvature_jet(a.jet(x));
    const geometry::Christoffel gam = geometry::christoffel(chart, x);
    const auto nabla = connection::covariant_derivative(cj, gam);
    tk.f[k] = cj.f;
    const FormMat st = connection::hodge_star(chart, x, cj.f);
    for (int m = 0; m < 4; ++m)
      for (int nn = 0; nn < 4; ++nn) tk.f_plus[k][m][nn] = 0.5 * (cj.f[m][nn] + st[m][nn]);

    const auto dstar = connection::codifferential(cj, inverse(p.g[k]), gam);
    Mat4 ym;
    for (int nn = 0; nn < 4; ++nn) ym += v[nn] * dstar[nn];
    tk.ym[k] = ym;

    // g[l][m] = nabla_l F_mn v^n, then contract l and m with the frame.
    std::array<std::array<Mat4, 4>, 4> g{};
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m)
        for (int nn = 0; nn < 4; ++nn)
          if (v[nn] != 0.0) g[l][m] += v[nn] * nabla[l][m][nn];
    const FormMat nf = frame_components(g, e);  // nf[a][b] = nabla_{e_a} F(e_b, v)
    const FormMat ff = frame_components(cj.f, e);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        tk.kernels.levy[k][4 * i + j] = -0.5 * (u1 * (nf[i][j] + nf[j][i]) * u0);
        tk.kernels.singular[k][4 * i + j] = u1 * ff[i][j] * u0;
      }
    }
  }
  return tk;
}

double vanishing_threshold(double route_discrepancy) {
  return std::min(1e-5, 10.0 * std::max(route_discrepancy, 1e-10));
}

LevyResult modified_levy_laplacian_transport(const TransportKernels& tk, const RotationCurve& w) {
  const auto& p = tk.path;
  const std::size_t n = p.size();
  std::vector<Mat4> ym(n), rot(n), rp(n), rm(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Mat4 r = w.right_log_derivative(p.grid.t(k));
    const Mat4& u0 = p.u[k];
    const Mat4& u1 = tk.u_1t[k];
    ym[k] = u1 * tk.ym[k] * u0;
    rot[k] = u1 * trace_form(r, frame_components(tk.f[k], p.e[k])) * u0;

    const algebra::Omega om = algebra::omega_coefficients(r);
    const geometry::SelfDualBasis vb = p.bivectors(k);
    FormMat fminus{};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) fminus[a][b] = tk.f[k][a][b] - tk.f_plus[k][a][b];
    const double c = algebra::kBivectorTraceConstant;
    rp[k] = c * (u1 * pair(tk.f_plus[k], combine(vb.plus, om.plus)) * u0);
    rm[k] = c * (u1 * pair(fminus, combine(vb.minus, om.minus)) * u0);
  }
  LevyResult res;
  res.nodes = n;
  res.term_ym = p.grid.integrate(ym);
  res.term_rot = p.grid.integrate(rot);
  res.term_rot_plus = p.grid.integrate(rp);
  res.term_rot_minus = p.grid.integrate(rm);
  res.value = res.term_ym - res.term_rot;
  res.kernel_route = modified_levy_trace(w, tk.kernels).value;
  res.route_discrepancy = max_abs(res.value - res.kernel_route);
  res.split_discrepancy = max_abs(res.term_rot - res.term_rot_plus - res.term_rot_minus);
  res.threshold = vanishing_threshold(res.route_discrepancy);
  return res;
}

LevyResult modified_levy_laplacian_transport(const Connection& a, const MetricChart& chart, const Curve& gamma,
                                             const RotationCurve& w, const TransportOptions& opt) {
  return modified_levy_laplacian_transport(transport_kernels(a, chart, gamma, opt), w);
}

KernelTriple<double> functional_kernels(const geometry::ScalarField& f, const MetricChart& chart,
                                        const Curve& gamma, const TransportOptions& opt) {
  const auto p = transport::levi_civita_transport(chart, gamma, opt);
  KernelTriple<double> q;
  q.grid = p.grid;
  q.levy.resize(p.size());
  q.singular.assign(p.size(), Block<double>{});
  for (std::size_t k = 0; k < p.size(); ++k) {
    const Point4& x = p.x[k];
    const geometry::Christoffel gam = geometry::christoffel(chart, x);
    const Vec4 df = f.gradient(x);
    Mat4 hess = f.hessian(x);
    for (int m = 0; m < 4; ++m)
      for (int nn = 0; nn < 4; ++nn)
        for (int kk = 0; kk < 4; ++kk) hess(m, nn) -= gam[kk](m, nn) * df[kk];
    const Mat4 hf = p.e[k].transposed() * hess * p.e[k];
    for (int i = 0; i < 16; ++i) q.levy[k][i] = hf.v[i];
  }
  return q;
}

FunctionalResult levy_laplacian_functional(const geometry::ScalarField& f, const MetricChart& chart,
                                           const Curve& gamma, const RotationCurve& w,
                                           const TransportOptions& opt) {
  const KernelTriple<double> q = functional_kernels(f, chart, gamma, opt);
  const auto mt = modified_levy_trace(w, q);
  std::vector<double> lap(q.grid.size());
  for (std::size_t k = 0; k < q.grid.size(); ++k) {
    lap[k] = geometry::laplace_beltrami(chart, gamma.point(q.grid.t(k), q.grid.side(k)).x, f);
  }
  FunctionalResult out;
  out.value = mt.value;
  out.singular = mt.singular;
  out.direct = q.grid.integrate(std::span<const double>(lap));
  return out;
}

Lemma2Report lemma2_limit(const Connection& a, const MetricChart& chart, const Curve& gamma,
                          const RotationCurve& w, const std::vector<double>& r_sequence,
                          const TransportOptions& opt) {
  w.require_side(algebra::Side::Left, "lemma2_limit");
  for (std::size_t i = 0; i < r_sequence.size(); ++i) {
    if (!(r_sequence[i] > 0.0 && r_sequence[i] <= 1.0)) throw DomainError("lemma2_limit: r outside (0, 1]");
    if (i > 0 && !(r_sequence[i] < r_sequence[i - 1])) {
      throw ContractViolation("lemma2_limit: r sequence must decrease");
    }
  }
  TransportOptions o = opt;
  o.min_segment_steps = std::max(o.min_segment_steps, o.steps);

  Lemma2Report rep;
  {
    const auto p = transport::transport(a, chart, gamma, o);
    const std::size_t last = p.size() - 1;
    const Mat4 uend = p.u_end();
    const FormMat f = connection::curvature_form(a.jet(p.x[last]));
    const FormMat st = connection::hodge_star(chart, p.x[last], f);
    FormMat fp{};
    for (int m = 0; m < 4; ++m)
      for (int nn = 0; nn < 4; ++nn) fp[m][nn] = 0.5 * (f[m][nn] + st[m][nn]);
    const Mat4 ar = algebra::project_left(w.integrated(algebra::Derivative::Spatial));
    rep.endpoint = trace_form(ar, conjugate(frame_components(fp, p.e[last]), uend));
    const algebra::Omega alpha = algebra::omega_coefficients(ar);
    const geometry::SelfDualBasis vb = p.bivectors(last);
    rep.endpoint_bivector =
        algebra::kBivectorTraceConstant * pair(conjugate(fp, uend), combine(vb.plus, alpha.plus));
  }

  for (double r : r_sequence) {
    const Curve gr = transport::reparameterize_r(gamma, r);
    const auto p = transport::transport(a, chart, gr, o);
    std::vector<Mat4> vals(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
      const Mat4 rr = w.right_log_derivative(p.grid.t(k));
      const FormMat f = connection::curvature_form(a.jet(p.x[k]));
      vals[k] = trace_form(rr, conjugate(frame_components(f, p.e[k]), p.u[k]));
    }
    Lemma2Row row;
    row.r = r;
    row.value = p.grid.integrate(vals);
    row.residual = frobenius_norm(row.value - rep.endpoint);
    rep.rows.push_back(row);
  }

  double srr = 0.0, srx = 0.0, mean = 0.0;
  for (const auto& row : rep.rows) {
    srr += row.r * row.r;
    srx += row.r * row.residual;
    mean += row.residual;
  }
  if (!rep.rows.empty()) {
    mean /= double(rep.rows.size());
    rep.c_fit = srx / srr;
    double ss_res = 0.0, ss_tot = 0.0;
    rep.bound_holds = true;
    for (const auto& row : rep.rows) {
      const double fit = rep.c_fit * row.r;
      ss_res += (row.residual - fit) * (row.residual - fit);
      ss_tot += (row.residual - mean) * (row.residual - mean);
      if (row.residual > fit * (1.0 + 1e-3) + 1e-12) rep.bound_holds = false;
    }
    rep.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  }
  return rep;
}

}  // namespace levylap::levy
