#include "hnabem/hna_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hnabem/errors.hpp"

namespace hnabem {

GradedMesh graded_mesh(double sigma, int l) {
    if (!(sigma > 0 && sigma < 0.5)) throw ParameterError("graded_mesh: sigma must lie in (0, 1/2)");
    if (l < 1) throw ParameterError("graded_mesh: layer count must be >= 1");
    GradedMesh m{sigma, l, std::vector<double>(static_cast<std::size_t>(l) + 1)};
    m.points[0] = 0.0;
    for (int i = 1; i <= l; ++i) m.points[i] = std::pow(sigma, l - i);
    return m;
}

std::vector<int> degree_vector(int p, int l) {
    if (p < 0) throw ParameterError("degree_vector: p must be >= 0");
    if (l < 1) throw ParameterError("degree_vector: layer count must be >= 1");
    std::vector<int> deg(static_cast<std::size_t>(l));
    for (int i = 1; i < l; ++i) deg[i - 1] = p - ((l + 1 - i) * p) / l;
    deg[l - 1] = p;
    return deg;
}

std::string to_string(Direction d) { return d == Direction::plus ? "+" : "-"; }

int space_dimension(int segments, int p, int layers) {
    int per_mesh = 0;
    for (int q : degree_vector(p, layers)) per_mesh += q + 1;
    return 2 * segments * per_mesh;
}

HnaSpace::HnaSpace(Screen screen, double k, int p, double sigma, int layers)
    : screen_(std::move(screen)), k_(k), p_(p), sigma_(sigma), layers_(layers) {
    if (!(k > 0) || !std::isfinite(k)) throw ParameterError("build_space: k must be positive");
    if (screen_.segment_count() == 0) throw ValidationError("build_space: empty screen");
    const GradedMesh ref = graded_mesh(sigma, layers);
    const std::vector<int> deg = degree_vector(p, layers);
    for (int j = 0; j < screen_.segment_count(); ++j) {
        const Segment& seg = screen_.segment(j);
        const double L = seg.length();
        for (Direction dir : {Direction::plus, Direction::minus}) {
            for (int i = 0; i < layers; ++i) {
                MeshElement e{j, dir, i, 0.0, 0.0, deg[i], size()};
                if (dir == Direction::plus) {
                    e.a = seg.lo + L * ref.points[i];
                    e.b = i + 1 == layers ? seg.hi : seg.lo + L * ref.points[i + 1];
                } else {
                    e.a = i + 1 == layers ? seg.lo : seg.hi - L * ref.points[i + 1];
                    e.b = seg.hi - L * ref.points[i];
                }
                // Elements are stored in absolute coordinates, so the far end of a
                // segment cannot resolve arbitrarily fine grading.
                const double scale = std::max({std::fabs(e.a), std::fabs(e.b), 1.0});
                if (!(e.b - e.a > 16 * std::numeric_limits<double>::epsilon() * scale))
                    throw ParameterError("build_space: smallest element (sigma^(l-1) L = " +
                                         std::to_string(L * ref.points[1]) +
                                         ") is below double resolution; reduce layers or p");
                const int eidx = static_cast<int>(elements_.size());
                elements_.push_back(e);
                for (int q = 0; q <= e.degree; ++q) basis_.push_back({j, dir, eidx, e.a, e.b, q});
            }
        }
    }
}

std::vector<const MeshElement*> HnaSpace::mesh(int segment, Direction dir) const {
    std::vector<const MeshElement*> out;
    for (const auto& e : elements_)
        if (e.segment == segment && e.dir == dir) out.push_back(&e);
    return out;
}

Complex HnaSpace::eval(int n, double s) const {
    const BasisFunction& f = basis(n);
    if (s < f.a || s > f.b) return 0.0;
    const double phase = sign(f.dir) * k_ * s;
    return legendre_normalized(f.degree, f.a, f.b, s) * Complex(std::cos(phase), std::sin(phase));
}

std::string HnaSpace::summary() const {
    std::ostringstream os;
    os.precision(17);
    os << "# segment direction element_lo element_hi degree\n";
    for (const auto& e : elements_)
        os << e.segment << ' ' << to_string(e.dir) << ' ' << e.a << ' ' << e.b << ' ' << e.degree << '\n';
    return os.str();
}

HnaSpace build_space(const Screen& screen, double k, int p, double sigma, int layers) {
    if (p < 0) throw ParameterError("build_space: p must be >= 0");
    if (layers == 0) layers = 2 * (p + 1);
    return HnaSpace(screen, k, p, sigma, layers);
}

}  // namespace hnabem
