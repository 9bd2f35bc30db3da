#pragma once

#include <string>
#include <vector>

#include "hnabem/geometry.hpp"

namespace hnabem {

/// Reference graded mesh on [0, 1]: x_0 = 0, x_i = sigma^{l-i}.
struct GradedMesh {
    double sigma;
    int layers;
    std::vector<double> points;
};

/// Throws ParameterError unless 0 < sigma < 1/2 and l >= 1.
GradedMesh graded_mesh(double sigma, int l);

/// (p)_i = p - floor((l+1-i) p / l) for i < l and (p)_l = p; entry i-1 holds (p)_i.
std::vector<int> degree_vector(int p, int l);

/// Wave direction of a basis function: exp(+iks) or exp(-iks).
enum class Direction { plus = 0, minus = 1 };

inline int sign(Direction d) { return d == Direction::plus ? 1 : -1; }
std::string to_string(Direction d);

/// One element of the mesh carrying one wave direction on one segment.
struct MeshElement {
    int segment;
    Direction dir;
    int index;  // 0 = smallest element
    double a;
    double b;
    int degree;
    int first_basis;  // basis indices first_basis .. first_basis + degree
};

struct BasisFunction {
    int segment;
    Direction dir;
    int element;  // index into HnaSpace::elements()
    double a;
    double b;
    int degree;
};

/// The HNA space V_N: per segment, an e^{+iks} mesh graded toward the left
/// endpoint and an e^{-iks} mesh graded toward the right endpoint, each element
/// carrying L^2-normalised Legendre polynomials up to its degree.
///
/// Basis order: segment, direction (+ then -), element (smallest first), degree.
class HnaSpace {
public:
    HnaSpace(Screen screen, double k, int p, double sigma, int layers);

    const Screen& screen() const { return screen_; }
    double k() const { return k_; }
    int p() const { return p_; }
    double sigma() const { return sigma_; }
    int layers() const { return layers_; }

    int size() const { return static_cast<int>(basis_.size()); }
    const std::vector<BasisFunction>& basis() const { return basis_; }
    const BasisFunction& basis(int n) const { return basis_.at(static_cast<std::size_t>(n)); }
    const std::vector<MeshElement>& elements() const { return elements_; }

    /// Elements of one (segment, direction) mesh, smallest first.
    std::vector<const MeshElement*> mesh(int segment, Direction dir) const;

    /// phi_n(s); zero outside its element. Throws std::out_of_range for bad n.
    Complex eval(int n, double s) const;

    /// `segment direction element_lo element_hi degree` per element.
    std::string summary() const;

private:
    Screen screen_;
    double k_;
    int p_;
    double sigma_;
    int layers_;
    std::vector<MeshElement> elements_;
    std::vector<BasisFunction> basis_;
};

/// Layer count 0 selects the default l = 2(p+1).
HnaSpace build_space(const Screen& screen, double k, int p, double sigma = 0.15, int layers = 0);

/// 2 N_Gamma sum_i ((p)_i + 1).
int space_dimension(int segments, int p, int layers);

}  // namespace hnabem
