#include "hnabem/discretization.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "hnabem/errors.hpp"

namespace hnabem {

namespace {

Complex cis(double x) { return {std::cos(x), std::sin(x)}; }

// Integrals of (scale) H0(k|c - s|) amp(s) exp(i kappa k s) over [lo, hi],
// with H0 written as its scaled form times exp(ik|c - s|).
void append_integrals(double c, double k, double lo, double hi, Complex scale, double kappa,
                      const Amplitude& amp, std::vector<GeneralOscIntegral>& out) {
    if (c <= lo) {
        const Complex pre = scale * cis(k * ((lo - c) + kappa * lo));
        const double off = lo - c;
        GeneralOscIntegral I;
        I.F = [=](Complex t) { return pre * hankel_h0_scaled(k * (off + t)) * amp(lo + t); };
        I.k = k;
        I.T = hi - lo;
        I.alpha = 1 + kappa;
        I.t0 = c - lo;
        out.push_back(std::move(I));
    } else if (c >= hi) {
        const Complex pre = scale * cis(k * ((c - hi) + kappa * hi));
        const double off = c - hi;
        GeneralOscIntegral I;
        I.F = [=](Complex t) { return pre * hankel_h0_scaled(k * (off + t)) * amp(hi - t); };
        I.k = k;
        I.T = hi - lo;
        I.alpha = 1 - kappa;
        I.t0 = hi - c;
        out.push_back(std::move(I));
    } else {
        append_integrals(c, k, lo, c, scale, kappa, amp, out);
        append_integrals(c, k, c, hi, scale, kappa, amp, out);
    }
}

}  // namespace

std::vector<GeneralOscIntegral> transform_density_integrals(double c, double k, double lo, double hi, Complex scale,
                                                            double kappa, const Amplitude& amp) {
    std::vector<GeneralOscIntegral> out;
    append_integrals(c, k, lo, hi, scale, kappa, amp, out);
    return out;
}

std::vector<double> chebyshev_nodes(double a, double b, int count) {
    if (count < 1) throw ParameterError("chebyshev_nodes: count must be >= 1");
    std::vector<double> c(static_cast<std::size_t>(count));
    for (int l = 1; l <= count; ++l)
        c[l - 1] = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(kPi * (l - 0.5) / count);
    std::sort(c.begin(), c.end());
    return c;
}

std::vector<double> collocation_weights(const std::vector<double>& c, double a, double b) {
    const std::size_t m = c.size();
    if (m == 0) return {};
    for (std::size_t i = 1; i < m; ++i)
        if (!(c[i] > c[i - 1])) throw ValidationError("collocation_weights: points must be strictly ascending");
    if (m == 1) return {b - a};
    std::vector<double> w(m);
    w[0] = (c[1] - c[0]) / 2 + (c[0] - a);
    for (std::size_t i = 1; i + 1 < m; ++i) w[i] = (c[i + 1] - c[i]) / 2 + (c[i] - c[i - 1]) / 2;
    w[m - 1] = (b - c[m - 1]) + (c[m - 1] - c[m - 2]) / 2;
    return w;
}

CollocationSet collocation_points(const HnaSpace& space, double c_os) {
    if (!(c_os >= 1) || !std::isfinite(c_os)) throw ParameterError("collocation_points: C_OS must be >= 1");
    auto count = [&](int q) { return static_cast<int>(std::ceil(c_os * (q + 1) - 1e-12)); };
    CollocationSet set;
    const auto& elems = space.elements();
    for (int j = 0; j < space.screen().segment_count(); ++j) {
        struct Chunk {
            double a, b;
            std::vector<double> pts;
            std::vector<double> w;
            int elem;
            bool merged;
        };
        std::vector<Chunk> chunks;
        int largest[2] = {-1, -1};
        for (Direction dir : {Direction::plus, Direction::minus}) {
            const auto mesh = space.mesh(j, dir);
            for (const MeshElement* e : mesh) {
                const int idx = static_cast<int>(e - elems.data());
                if (e->index + 1 == static_cast<int>(mesh.size())) {
                    largest[static_cast<int>(dir)] = idx;
                    continue;
                }
                Chunk ch{e->a, e->b, chebyshev_nodes(e->a, e->b, count(e->degree)), {}, idx, false};
                ch.w = collocation_weights(ch.pts, ch.a, ch.b);
                chunks.push_back(std::move(ch));
            }
        }
        const MeshElement& lp = elems[largest[0]];
        const MeshElement& lm = elems[largest[1]];
        const double lo = std::max(lp.a, lm.a), hi = std::min(lp.b, lm.b);
        Chunk merged{lo, hi, chebyshev_nodes(lo, hi, count(lp.degree) + count(lm.degree)), {}, -1, true};
        merged.w = collocation_weights(merged.pts, lo, hi);
        chunks.push_back(std::move(merged));

        struct Entry {
            double s, w;
            CollocationOrigin o;
        };
        std::vector<Entry> entries;
        for (const auto& ch : chunks) {
            const int half = static_cast<int>(ch.pts.size()) / 2;
            for (std::size_t i = 0; i < ch.pts.size(); ++i) {
                CollocationOrigin o;
                o.segment = j;
                o.merged = ch.merged;
                o.local = static_cast<int>(i);
                if (ch.merged) {
                    const bool first = static_cast<int>(i) < half;
                    o.element = first ? largest[0] : largest[1];
                    o.dir = first ? Direction::plus : Direction::minus;
                } else {
                    o.element = ch.elem;
                    o.dir = elems[ch.elem].dir;
                }
                entries.push_back({ch.pts[i], ch.w[i], o});
            }
        }
        std::stable_sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) { return x.s < y.s; });
        for (const auto& e : entries) {
            set.points.push_back(e.s);
            set.weights.push_back(e.w);
            set.origin.push_back(e.o);
        }
    }
    return set;
}

std::vector<double> off_collocation_points(const CollocationSet& colloc, const Screen& screen, int count) {
    std::vector<std::pair<double, double>> gaps;
    for (int m = 0; m + 1 < colloc.size(); ++m) {
        const double a = colloc.points[m], b = colloc.points[m + 1];
        if (b > a && screen.locate(a) == screen.locate(b)) gaps.emplace_back(a, b);
    }
    std::vector<double> out;
    if (gaps.empty() || count <= 0) return out;
    // Fractional positions in "gap index" space, so the check points follow
    // the collocation density but never coincide with a collocation point.
    const double G = static_cast<double>(gaps.size());
    for (int i = 0; i < count; ++i) {
        const double x = (i + 0.5) * G / count;
        const auto g = std::min(static_cast<std::size_t>(x), gaps.size() - 1);
        const double f = std::clamp(x - static_cast<double>(g), 0.1, 0.9);
        out.push_back(gaps[g].first + f * (gaps[g].second - gaps[g].first));
    }
    return out;
}

std::vector<GeneralOscIntegral> transform_matrix_integral(const BasisFunction& f, double c, double k) {
    std::vector<GeneralOscIntegral> out;
    const int q = f.degree;
    const double a = f.a, b = f.b;
    const Amplitude amp = [=](Complex s) { return legendre_normalized(q, a, b, s); };
    append_integrals(c, k, a, b, Complex(0.0, 0.25), static_cast<double>(sign(f.dir)), amp, out);
    return out;
}

std::vector<GeneralOscIntegral> transform_spsi_integrals(const Screen& screen, const IncidentWave& w, double c) {
    std::vector<GeneralOscIntegral> out;
    if (w.d2 == 0.0) return out;
    const Amplitude one = [](Complex) { return Complex(1.0); };
    const Complex scale = 0.5 * w.k * std::abs(w.d2);
    for (const auto& seg : screen.segments()) append_integrals(c, w.k, seg.lo, seg.hi, scale, w.d1, one, out);
    return out;
}

Complex eval_S_basis(const BasisFunction& f, double c, double k, const QuadParams& params) {
    Complex sum = 0.0;
    for (const auto& I : transform_matrix_integral(f, c, k)) sum += integrate(I, params).value;
    return sum;
}

Complex eval_SPsi(const Screen& screen, const IncidentWave& w, double c, const QuadParams& params) {
    Complex sum = 0.0;
    for (const auto& I : transform_spsi_integrals(screen, w, c)) sum += integrate(I, params).value;
    return sum;
}

WeightedSystem assemble(const HnaSpace& space, const IncidentWave& w, const CollocationSet& colloc,
                        const QuadParams& params, int threads) {
    params.validate();
    const int M = colloc.size();
    const int N = space.size();
    WeightedSystem sys;
    sys.A.resize(M, N);
    sys.b.resize(M);
    sys.colloc = colloc;

    // Row m is one task: b_m and all A_{m,n}.
    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr error;
    auto worker = [&] {
        for (int m = next++; m < M; m = next++) {
            const double c = colloc.points[m];
            const double sw = std::sqrt(colloc.weights[m]);
            int n = -1;
            try {
                sys.b(m) = sw * (eval_incident(w, c, 0.0) - eval_SPsi(space.screen(), w, c, params));
                for (n = 0; n < N; ++n) sys.A(m, n) = sw * eval_S_basis(space.basis(n), c, space.k(), params);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!error) {
                    std::ostringstream os;
                    os << "assemble: entry (m=" << m;
                    if (n < 0)
                        os << ", right-hand side): ";
                    else
                        os << ", n=" << n << "): ";
                    os << e.what();
                    error = std::make_exception_ptr(NumericalError(os.str()));
                }
                next = M;
                return;
            }
        }
    };
    int nt = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    nt = std::max(1, std::min(nt, M));
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    if (!sys.A.allFinite() || !sys.b.allFinite()) throw NumericalError("assemble: non-finite entries");
    return sys;
}

std::string dump_system(const WeightedSystem& sys) {
    std::ostringstream os;
    os.precision(17);
    os << "# A " << sys.A.rows() << ' ' << sys.A.cols() << '\n';
    for (Eigen::Index m = 0; m < sys.A.rows(); ++m)
        for (Eigen::Index n = 0; n < sys.A.cols(); ++n)
            os << m + 1 << ' ' << n + 1 << ' ' << sys.A(m, n).real() << ' ' << sys.A(m, n).imag() << '\n';
    os << "# b " << sys.b.size() << '\n';
    for (Eigen::Index m = 0; m < sys.b.size(); ++m)
        os << m + 1 << ' ' << sys.b(m).real() << ' ' << sys.b(m).imag() << '\n';
    return os.str();
}

}  // namespace hnabem
