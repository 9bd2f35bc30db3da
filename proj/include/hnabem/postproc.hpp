#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "hnabem/geometry.hpp"
#include "hnabem/hna_space.hpp"
#include "hnabem/osciquad.hpp"

namespace hnabem {

/// v_p = Psi + sum_n a_n phi_n on the screen. Immutable.
class BoundarySolution {
public:
    BoundarySolution(std::shared_ptr<const HnaSpace> space, Eigen::VectorXcd coeffs, IncidentWave incident);

    const HnaSpace& space() const { return *space_; }
    std::shared_ptr<const HnaSpace> space_ptr() const { return space_; }
    const Eigen::VectorXcd& coeffs() const { return coeffs_; }
    const IncidentWave& incident() const { return incident_; }

    /// v_p(s); throws DomainError when s is not on the closed screen.
    Complex v(double s) const;
    /// v_p(s) - Psi(s).
    Complex phi(double s) const;

    /// Polynomial factor v_{j,p}^{+/-}(s) of the given wave direction on
    /// segment j, i.e. the e^{+/-iks} part of phi divided by e^{+/-iks}.
    Complex amplitude(int segment, Direction dir, double s) const;

    /// Same factor restricted to one element, usable at complex s.
    Complex element_amplitude(int element, Complex s) const;

    /// Sorted union of the mesh points of both meshes on a segment.
    std::vector<double> breakpoints(int segment) const;

private:
    int element_at(int segment, Direction dir, double s) const;

    std::shared_ptr<const HnaSpace> space_;
    Eigen::VectorXcd coeffs_;
    IncidentWave incident_;
};

/// eval_boundary(sol, s) = sol.v(s).
inline Complex eval_boundary(const BoundarySolution& sol, double s) { return sol.v(s); }

/// ||v_p||_{L^1}: 20 Gauss points per panel of the merged mesh, panels no
/// longer than one wavelength.
double l1_norm(const BoundarySolution& sol);

/// S v_p(c) for c on the screen, via the oscillatory quadrature.
Complex single_layer_on_screen(const BoundarySolution& sol, double c, const QuadParams& params);

/// max |S v_p(c) - u^i(c)| over the given points: the Dirichlet residual on the screen.
double boundary_residual(const BoundarySolution& sol, const std::vector<double>& points, const QuadParams& params);

/// Scattered field u^s(x) = -int Phi(x, y) v_p(y) ds(y). Throws DomainError on
/// the closed screen.
Complex near_field(const BoundarySolution& sol, double x1, double x2);

/// u^i(x) + u^s(x).
Complex total_field(const BoundarySolution& sol, double x1, double x2);

/// u_p^inf(theta) = -int exp(-iks cos theta) v_p(s) ds.
Complex far_field(const BoundarySolution& sol, double theta, const QuadParams& params);

/// Contribution of Psi alone to the far-field pattern.
Complex far_field_psi(const Screen& screen, const IncidentWave& w, double theta, const QuadParams& params);

enum class HalfPlane { upper, lower };

/// Aperture field from the screen total field u at x: u^r + u above, u^i - u
/// below, with u^r the wave in direction (d1, -d2). Throws DomainError for d2 >= 0.
Complex babinet_aperture(Complex u, const IncidentWave& w, double x1, double x2, HalfPlane side);
/// Side taken from the sign of x2; throws DomainError for x2 = 0.
Complex babinet_aperture(Complex u, const IncidentWave& w, double x1, double x2);

/// ||v_p - v_ref||_{L^1} / ||v_ref||_{L^1} on the union of both solutions'
/// meshes, refined to one reference wavelength. Throws DomainError for a zero
/// reference or mismatched screens.
double rel_L1_error(const BoundarySolution& sol, const BoundarySolution& ref);

/// Relative max error of u^s on the unit circle about (0.5, 0).
double near_field_Linf_error(const BoundarySolution& sol, const BoundarySolution& ref, int samples = 200);

/// Relative max error of u^inf on a uniform theta grid.
double far_field_Linf_error(const BoundarySolution& sol, const BoundarySolution& ref, const QuadParams& params,
                            int samples = 720);

}  // namespace hnabem
