// Initial-data constructors (compatible DG initialization through potentials
// interpolated into the continuous space), exact reference solutions, and the
// energy / involution / error functionals used by all experiments.

#pragma once

#include <functional>
#include <string>

#include "compatdg/operators.hpp"

namespace compatdg {

using ScalarFn = std::function<double(const Eigen::Vector2d&)>;
using VectorFn = std::function<Eigen::VectorXd(const Eigen::Vector2d&)>;

/// DG field set to the exact gradient of the interpolated scalar potential;
/// the curl functional of the result vanishes identically. Element-local L2
/// projection would break that property and is deliberately not offered.
FieldDG init_compatible_grad(const CompatibleOperators& ops, const ScalarFn& z,
                             int m_out = 2);

/// DG field set to the exact curl of the interpolated 3-component vector
/// potential; the divergence functional of the result vanishes identically.
FieldDG init_compatible_curl(const CompatibleOperators& ops, const VectorFn& a,
                             int m_out = 3);

/// Named reference solutions evaluated at (x, t):
///   tgv2d              -> (v1, v2, p), stationary vortex on [0, 2*pi]^2
///   mm_planewave       -> (B1, B2, B3, p, E1, E2, E3, q), period sqrt(2)
///   acoustic_planewave -> (p, v1, v2), wavelength 0.25, unit speed
/// Throws std::invalid_argument for an unknown name.
Eigen::VectorXd exact_solution(const std::string& name, const Eigen::Vector2d& x, double t);

enum class System { acoustics, maxwell, maxwellglm, euler };
System system_from_name(const std::string& name);
std::string system_name(System s);

struct State {
  System system = System::acoustics;
  FieldDG dg_vec;   // v (acoustics, euler, m=2) or B (maxwell, m=3)
  FieldDG dg_scal;  // q (maxwell-glm only)
  FieldFEM fem_vec; // E (maxwell, maxwell-glm)
  FieldFEM fem_scal;// p (acoustics, maxwell-glm, euler)
};

/// Total energy 1/2 * int (sum of squared fields), by quadrature that is
/// exact for the piecewise-polynomial integrands. Euler uses 1/2 rho v^2.
double energy(const State& s, double rho = 1.0);

/// Exact quadrature of 1/2 * int w^2 for a single field.
double field_energy(const FieldDG& w);
double field_energy(const FieldFEM& w);

struct InvolutionErrors {
  double eps_c = 0.0;  // max_i | int grad(psi_i) x w |, componentwise
  double eps_d = 0.0;  // max_i | int grad(psi_i) . w |
};
InvolutionErrors involution_errors(const CompatibleOperators& ops, const FieldDG& w);

/// Componentwise L2 errors against an exact solution at time t; quadrature
/// exactness at least 2 * (N + 2).
Eigen::VectorXd l2_error(const FieldDG& f, const VectorFn& exact);
Eigen::VectorXd l2_error(const FieldFEM& f, const VectorFn& exact);

}  // namespace compatdg
