#include "hnabem/postproc.hpp"

#include <algorithm>
#include <cmath>

#include "hnabem/discretization.hpp"
#include "hnabem/errors.hpp"

namespace hnabem {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr int kPanelPoints = 20;

Complex cis(double x) { return {std::cos(x), std::sin(x)}; }

// Breakpoints refined so that no panel exceeds max_len.
std::vector<double> refine(const std::vector<double>& pts, double max_len) {
    std::vector<double> out{pts.front()};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i], b = pts[i + 1];
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_len)));
        for (int j = 1; j <= pieces; ++j) out.push_back(j == pieces ? b : a + (b - a) * j / pieces);
    }
    return out;
}

std::vector<double> merge_sorted(std::vector<double> a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

template <class Fn>
double l1_on_panels(const std::vector<double>& edges, Fn&& f) {
    const auto rule = gauss_rule(RuleKind::legendre, kPanelPoints);
    double sum = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        double s = 0.0;
        for (std::size_t j = 0; j < rule->count(); ++j) s += rule->weights[j] * std::abs(f(a + 0.5 * (b - a) * (rule->nodes[j] + 1)));
        sum += 0.5 * (b - a) * s;
    }
    return sum;
}

// int_lo^hi g(s) exp(ik kappa s) ds by the oscillatory quadrature, g smooth;
// negative kappa is handled by the reflection s = hi - t.
Complex smooth_oscillatory(const std::function<Complex(Complex)>& g, double k, double kappa, double lo, double hi,
                           const QuadParams& params) {
    GeneralOscIntegral I;
    I.k = k;
    I.T = hi - lo;
    I.has_log_singularity = false;
    if (kappa >= 0) {
        I.alpha = kappa;
        I.F = [&](Complex t) { return g(lo + t); };
        return cis(k * kappa * lo) * integrate(I, params).value;
    }
    I.alpha = -kappa;
    I.F = [&](Complex t) { return g(hi - t); };
    return cis(k * kappa * hi) * integrate(I, params).value;
}

}  // namespace

BoundarySolution::BoundarySolution(std::shared_ptr<const HnaSpace> space, Eigen::VectorXcd coeffs,
                                   IncidentWave incident)
    : space_(std::move(space)), coeffs_(std::move(coeffs)), incident_(incident) {
    if (!space_) throw ValidationError("BoundarySolution: null space");
    if (coeffs_.size() != space_->size()) throw ValidationError("BoundarySolution: coefficient count mismatch");
}

int BoundarySolution::element_at(int segment, Direction dir, double s) const {
    const auto& elems = space_->elements();
    int best = -1;
    for (std::size_t e = 0; e < elems.size(); ++e) {
        const MeshElement& m = elems[e];
        if (m.segment != segment || m.dir != dir) continue;
        if (s >= m.a && s < m.b) return static_cast<int>(e);
        if (s == m.b) best = static_cast<int>(e);
    }
    return best;
}

Complex BoundarySolution::element_amplitude(int element, Complex s) const {
    const MeshElement& m = space_->elements().at(static_cast<std::size_t>(element));
    Complex sum = 0.0;
    for (int q = 0; q <= m.degree; ++q) sum += coeffs_(m.first_basis + q) * legendre_normalized(q, m.a, m.b, s);
    return sum;
}

Complex BoundarySolution::amplitude(int segment, Direction dir, double s) const {
    const int e = element_at(segment, dir, s);
    if (e < 0) return 0.0;
    return element_amplitude(e, s);
}

Complex BoundarySolution::phi(double s) const {
    const int j = space_->screen().locate(s);
    if (j < 0) throw DomainError("eval_boundary: point is not on the screen");
    const double ks = space_->k() * s;
    return amplitude(j, Direction::plus, s) * cis(ks) + amplitude(j, Direction::minus, s) * cis(-ks);
}

Complex BoundarySolution::v(double s) const { return eval_psi(incident_, s) + phi(s); }

std::vector<double> BoundarySolution::breakpoints(int segment) const {
    std::vector<double> pts;
    for (const auto& m : space_->elements()) {
        if (m.segment != segment) continue;
        pts.push_back(m.a);
        pts.push_back(m.b);
    }
    return merge_sorted(pts, {});
}

double l1_norm(const BoundarySolution& sol) {
    const double wavelength = 2 * kPi / sol.space().k();
    double sum = 0.0;
    for (int j = 0; j < sol.space().screen().segment_count(); ++j)
        sum += l1_on_panels(refine(sol.breakpoints(j), wavelength), [&](double s) { return sol.v(s); });
    return sum;
}

Complex single_layer_on_screen(const BoundarySolution& sol, double c, const QuadParams& params) {
    const HnaSpace& space = sol.space();
    Complex sum = eval_SPsi(space.screen(), sol.incident(), c, params);
    const auto& elems = space.elements();
    for (std::size_t e = 0; e < elems.size(); ++e) {
        const MeshElement& m = elems[e];
        const int idx = static_cast<int>(e);
        const Amplitude amp = [&sol, idx](Complex s) { return sol.element_amplitude(idx, s); };
        for (const auto& I : transform_density_integrals(c, space.k(), m.a, m.b, Complex(0.0, 0.25),
                                                         static_cast<double>(sign(m.dir)), amp))
            sum += integrate(I, params).value;
    }
    return sum;
}

double boundary_residual(const BoundarySolution& sol, const std::vector<double>& points, const QuadParams& params) {
    double worst = 0.0;
    for (double c : points)
        worst = std::max(worst, std::abs(single_layer_on_screen(sol, c, params) - eval_incident(sol.incident(), c, 0.0)));
    return worst;
}

Complex near_field(const BoundarySolution& sol, double x1, double x2) {
    const Screen& screen = sol.space().screen();
    const double k = sol.space().k();
    if (x2 == 0.0 && screen.locate(x1) >= 0) throw DomainError("near_field: point lies on the screen");
    const auto rule = gauss_rule(RuleKind::legendre, kPanelPoints);
    const double half_wave = kPi / k;

    struct Panel {
        double a, b;
        int depth;
    };
    Complex total = 0.0;
    for (int j = 0; j < screen.segment_count(); ++j) {
        const auto edges = refine(sol.breakpoints(j), half_wave);
        std::vector<Panel> stack;
        for (std::size_t p = edges.size() - 1; p > 0; --p) stack.push_back({edges[p - 1], edges[p], 0});
        while (!stack.empty()) {
            const Panel pn = stack.back();
            stack.pop_back();
            const double len = pn.b - pn.a;
            const double nearest = std::clamp(x1, pn.a, pn.b);
            const double dist = std::hypot(x1 - nearest, x2);
            if (dist < 2 * len && pn.depth < 60) {
                const double mid = 0.5 * (pn.a + pn.b);
                stack.push_back({mid, pn.b, pn.depth + 1});
                stack.push_back({pn.a, mid, pn.depth + 1});
                continue;
            }
            Complex s = 0.0;
            for (std::size_t q = 0; q < rule->count(); ++q) {
                const double y = pn.a + 0.5 * len * (rule->nodes[q] + 1);
                const double r = std::hypot(x1 - y, x2);
                s += rule->weights[q] * hankel_h0(k * r) * sol.v(y);
            }
            total += 0.5 * len * s;
        }
    }
    return -0.25 * kI * total;
}

Complex total_field(const BoundarySolution& sol, double x1, double x2) {
    return eval_incident(sol.incident(), x1, x2) + near_field(sol, x1, x2);
}

Complex far_field_psi(const Screen& screen, const IncidentWave& w, double theta, const QuadParams& params) {
    if (w.d2 == 0.0) return 0.0;
    const Complex scale(0.0, -2.0 * w.k * std::abs(w.d2));
    const auto one = [](Complex) { return Complex(1.0); };
    Complex sum = 0.0;
    for (const auto& seg : screen.segments())
        sum += smooth_oscillatory(one, w.k, w.d1 - std::cos(theta), seg.lo, seg.hi, params);
    return -scale * sum;
}

Complex far_field(const BoundarySolution& sol, double theta, const QuadParams& params) {
    const HnaSpace& space = sol.space();
    Complex sum = 0.0;
    const auto& elems = space.elements();
    const double ct = std::cos(theta);
    for (std::size_t e = 0; e < elems.size(); ++e) {
        const MeshElement& m = elems[e];
        const int idx = static_cast<int>(e);
        const auto amp = [&sol, idx](Complex s) { return sol.element_amplitude(idx, s); };
        sum += smooth_oscillatory(amp, space.k(), sign(m.dir) - ct, m.a, m.b, params);
    }
    return far_field_psi(space.screen(), sol.incident(), theta, params) - sum;
}

Complex babinet_aperture(Complex u, const IncidentWave& w, double x1, double x2, HalfPlane side) {
    if (!(w.d2 < 0)) throw DomainError("babinet_aperture: requires d2 < 0");
    if (side == HalfPlane::upper) {
        const IncidentWave reflected{w.k, w.d1, -w.d2};
        return eval_incident(reflected, x1, x2) + u;
    }
    return eval_incident(w, x1, x2) - u;
}

Complex babinet_aperture(Complex u, const IncidentWave& w, double x1, double x2) {
    if (x2 == 0.0) throw DomainError("babinet_aperture: half-plane is ambiguous on x2 = 0");
    return babinet_aperture(u, w, x1, x2, x2 > 0 ? HalfPlane::upper : HalfPlane::lower);
}

double rel_L1_error(const BoundarySolution& sol, const BoundarySolution& ref) {
    const Screen& a = sol.space().screen();
    const Screen& b = ref.space().screen();
    if (a.endpoints() != b.endpoints()) throw DomainError("rel_L1_error: solutions live on different screens");
    const double wavelength = 2 * kPi / ref.space().k();
    double num = 0.0, den = 0.0;
    for (int j = 0; j < b.segment_count(); ++j) {
        const auto edges = refine(merge_sorted(ref.breakpoints(j), sol.breakpoints(j)), wavelength);
        num += l1_on_panels(edges, [&](double s) { return sol.v(s) - ref.v(s); });
        den += l1_on_panels(edges, [&](double s) { return ref.v(s); });
    }
    if (!(den > 0)) throw DomainError("rel_L1_error: reference has zero norm");
    return num / den;
}

double near_field_Linf_error(const BoundarySolution& sol, const BoundarySolution& ref, int samples) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double th = 2 * kPi * i / samples;
        const double x1 = 0.5 + std::cos(th), x2 = std::sin(th);
        const Complex ur = near_field(ref, x1, x2);
        num = std::max(num, std::abs(near_field(sol, x1, x2) - ur));
        den = std::max(den, std::abs(ur));
    }
    if (!(den > 0)) throw DomainError("near_field_Linf_error: reference field vanishes");
    return num / den;
}

double far_field_Linf_error(const BoundarySolution& sol, const BoundarySolution& ref, const QuadParams& params,
                            int samples) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double th = 2 * kPi * i / samples;
        const Complex ur = far_field(ref, th, params);
        num = std::max(num, std::abs(far_field(sol, th, params) - ur));
        den = std::max(den, std::abs(ur));
    }
    if (!(den > 0)) throw DomainError("far_field_Linf_error: reference pattern vanishes");
    return num / den;
}

}  // namespace hnabem
