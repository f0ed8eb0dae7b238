// Test-only reference model: explicit 4x4 density matrix and polariser
// transmission operators, trace-evaluated. Shares no code with the library.
#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace bellkit::testing {

using cplx = std::complex<double>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;
using Mat4 = std::array<std::array<cplx, 4>, 4>;

inline Mat2 identity2() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }

// eps_par * |t><t| + eps_perp * |t_perp><t_perp| in the (H, V) basis with
// |t> = (sin t, cos t), |t_perp> = (cos t, -sin t).
inline Mat2 transmission(double t, double eps_par, double eps_perp) {
  const double s = std::sin(t), c = std::cos(t);
  Mat2 m{};
  m[0][0] = eps_par * s * s + eps_perp * c * c;
  m[0][1] = eps_par * s * c - eps_perp * c * s;
  m[1][0] = m[0][1];
  m[1][1] = eps_par * c * c + eps_perp * s * s;
  return m;
}

inline Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 m{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) m[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
  return m;
}

// (|HH> + f|VV>)(...)^dagger / (1 + |f|^2), interference scaled by mu.
// Basis order: HH, HV, VH, VV.
inline Mat4 density(cplx f, double mu = 1.0) {
  Mat4 rho{};
  const double norm = 1.0 + std::norm(f);
  rho[0][0] = 1.0 / norm;
  rho[3][3] = std::norm(f) / norm;
  rho[0][3] = mu * std::conj(f) / norm;
  rho[3][0] = mu * f / norm;
  return rho;
}

inline double trace_product(const Mat4& rho, const Mat4& op) {
  cplx tr = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) tr += rho[i][k] * op[k][i];
  return tr.real();
}

inline double coincidence(cplx f, double mu, double t1, double par1, double perp1, double eta1,
                          double t2, double par2, double perp2, double eta2) {
  return eta1 * eta2 *
         trace_product(density(f, mu), kron(transmission(t1, par1, perp1), transmission(t2, par2, perp2)));
}

inline double arm1_only(cplx f, double t1, double par1, double perp1) {
  return trace_product(density(f), kron(transmission(t1, par1, perp1), identity2()));
}

inline double arm2_only(cplx f, double t2, double par2, double perp2) {
  return trace_product(density(f), kron(identity2(), transmission(t2, par2, perp2)));
}

// <t1 t2|psi> for the unnormalised |psi> = |HH> + f|VV>, with the analyser
// eigenvectors chosen per outcome (par -> |t>, perp -> |t_perp>).
inline cplx amplitude(cplx f, double t1, bool perp1, double t2, bool perp2) {
  const auto vec = [](double t, bool perp) {
    return perp ? std::array<double, 2>{std::cos(t), -std::sin(t)}
                : std::array<double, 2>{std::sin(t), std::cos(t)};
  };
  const auto a = vec(t1, perp1), b = vec(t2, perp2);
  return a[0] * b[0] + f * (a[1] * b[1]);
}

}  // namespace bellkit::testing
