#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hnabem/geometry.hpp"
#include "hnabem/hna_space.hpp"
#include "hnabem/osciquad.hpp"

namespace hnabem {

/// First-kind Chebyshev nodes (a+b)/2 + (b-a)/2 cos(pi (l - 1/2)/count), ascending.
std::vector<double> chebyshev_nodes(double a, double b, int count);

/// Density weights of ascending points inside [a, b]: half the distance to each
/// neighbour, the element end standing in for a missing neighbour. Sums to b - a.
std::vector<double> collocation_weights(const std::vector<double>& points, double a, double b);

/// Where a collocation point came from. Points on the overlap of the two largest
/// elements of a segment are `merged`; the first half of them is booked to the
/// e^{+iks} mesh and the second half to the e^{-iks} mesh.
struct CollocationOrigin {
    int segment;
    Direction dir;
    int element;  // index into HnaSpace::elements()
    bool merged;
    int local;  // position within its element (or merged interval)
};

struct CollocationSet {
    std::vector<double> points;
    std::vector<double> weights;
    std::vector<CollocationOrigin> origin;

    int size() const { return static_cast<int>(points.size()); }
};

/// ceil(C_OS (q+1)) Chebyshev nodes per element, except that the two largest
/// elements of each segment jointly receive 2 ceil(C_OS (p+1)) nodes on their
/// intersection. Points are ordered by segment then position. C_OS >= 1.
CollocationSet collocation_points(const HnaSpace& space, double c_os);

/// `count` check points strictly between consecutive collocation points of the
/// same segment, distributed with the collocation density.
std::vector<double> off_collocation_points(const CollocationSet& colloc, const Screen& screen, int count);

using Amplitude = std::function<Complex(Complex)>;

/// Integrals in general form whose sum is
///   scale * int_lo^hi H0(k|c - s|) amp(s) exp(i kappa k s) ds,
/// kappa in [-1, 1]: Case A (c <= lo) translates, Case B (c >= hi) reflects,
/// Case C splits at c. amp must accept complex arguments.
std::vector<GeneralOscIntegral> transform_density_integrals(double c, double k, double lo, double hi, Complex scale,
                                                            double kappa, const Amplitude& amp);

/// Integrals in general form whose sum is S phi_n(c): one in Cases A and B,
/// two when c lies inside the support.
std::vector<GeneralOscIntegral> transform_matrix_integral(const BasisFunction& f, double c, double k);

/// Same for S Psi(c), one or two per segment.
std::vector<GeneralOscIntegral> transform_spsi_integrals(const Screen& screen, const IncidentWave& w, double c);

Complex eval_S_basis(const BasisFunction& f, double c, double k, const QuadParams& params);
Complex eval_SPsi(const Screen& screen, const IncidentWave& w, double c, const QuadParams& params);

struct WeightedSystem {
    Eigen::MatrixXcd A;  // sqrt(w_m) S phi_n(c_m)
    Eigen::VectorXcd b;  // sqrt(w_m) (u^i(c_m) - S Psi(c_m))
    CollocationSet colloc;
};

/// Dense assembly, entries computed concurrently on `threads` workers (0 means
/// hardware concurrency). Each entry is written exactly once, so the result does
/// not depend on scheduling. Quadrature failures are rethrown as NumericalError
/// naming the entry.
WeightedSystem assemble(const HnaSpace& space, const IncidentWave& w, const CollocationSet& colloc,
                        const QuadParams& params, int threads = 0);

/// `m n re im` rows for A (1-based), then `m re im` rows for b.
std::string dump_system(const WeightedSystem& sys);

}  // namespace hnabem
