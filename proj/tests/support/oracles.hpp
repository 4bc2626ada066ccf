#pragma once
// Independent reference computations for the tests: finite differences of the
// transport map, and the explicit kernel-conjugation form of the modified trace.

#include <cstdint>
#include <functional>

#include "levylap/algebra.hpp"
#include "levylap/connection.hpp"
#include "levylap/levy.hpp"
#include "levylap/rng.hpp"
#include "levylap/transport.hpp"

namespace levylap::oracle {

using levylap::operator*;
using levylap::operator+;
using levylap::operator-;

// Random chart vector field with h(0) = 0 and h(1) generally nonzero.
transport::VectorField random_direction(Rng& rng, double size = 1.0);

// Central difference [U(gamma + eps h) - U(gamma - eps h)] / (2 eps) on a flat chart.
Mat4 fd_first_variation(const connection::Connection& a, const transport::Curve& gamma,
                        const transport::VectorField& h, double eps = 1e-4,
                        const transport::TransportOptions& opt = {});

// Two bumps supported on [t0, t0 + delta]: u = sin^2(pi s) a and
// v = sin^2(pi s) cos(pi s) b with s = (t - t0) / delta.
struct Window {
  double t0 = 0.4;
  double delta = 0.02;
  Vec4 a{1, 0, 0, 0};
  Vec4 b{0, 1, 0, 0};
  bool same_profile = false;  // use sin^2 for v as well
};

transport::VectorField window_u(const Window& w);
transport::VectorField window_v(const Window& w);

struct SecondVariation {
  Mat4 fd;         // polarized fourth-order second differences
  Mat4 predicted;  // local + volterra
  Mat4 levy;       // int K^L(u, v)
  Mat4 singular;   // 1/2 int K^S(u', v) + K^S(v', u)
  Mat4 volterra;   // ordered double integral of F(., gamma') pairs
  double relative_error() const;
};

// Flat chart only: the frame is the identity and chart perturbations are the
// frame perturbations.
SecondVariation window_second_variation(const connection::Connection& a, const transport::Curve& gamma,
                                        const Window& w, double eps_scale = 0.05,
                                        int steps = 2000, int window_steps = 400);

// Q'(u, v) = Q(W u, W v) written as a kernel triple: W^T Q^L W plus the symmetric part
// of W'^T Q^S W, and W^T Q^S W. W' by central differences.
template <class C>
levy::KernelTriple<C> conjugate_kernels(const levy::KernelTriple<C>& q, const algebra::RotationCurve& w,
                                        double h = 1e-6);

levy::KernelTriple<double> random_scalar_triple(Rng& rng, int steps = 200);
levy::KernelTriple<Mat4> random_matrix_triple(Rng& rng, int steps = 200);

Mat4 random_so4(Rng& rng, double size = 1.0);
Mat4 random_left(Rng& rng, double size = 1.0);
// One of several curve kinds, chosen by `index`.
algebra::RotationCurve random_rotation_curve(Rng& rng, int index);

}  // namespace levylap::oracle
