#include "hnabem/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>

#include "hnabem/errors.hpp"

namespace hnabem {

namespace {
constexpr double kMinGap = 1e-12;
}

double Screen::total_length() const {
    double sum = 0.0;
    for (const auto& seg : segments_) sum += seg.length();
    return sum;
}

int Screen::locate(double s) const {
    for (std::size_t j = 0; j < segments_.size(); ++j)
        if (s >= segments_[j].lo && s <= segments_[j].hi) return static_cast<int>(j);
    return -1;
}

std::vector<std::pair<double, double>> Screen::endpoints() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(segments_.size());
    for (const auto& seg : segments_) out.emplace_back(seg.lo, seg.hi);
    return out;
}

Screen make_screen(const std::vector<std::pair<double, double>>& endpoints, bool rescale) {
    if (endpoints.empty()) throw ValidationError("make_screen: empty interval list");
    for (std::size_t j = 0; j < endpoints.size(); ++j) {
        const auto [lo, hi] = endpoints[j];
        if (!std::isfinite(lo) || !std::isfinite(hi))
            throw ValidationError("make_screen: non-finite endpoint in interval " + std::to_string(j));
        if (!(hi > lo)) throw ValidationError("make_screen: interval " + std::to_string(j) + " is empty or reversed");
        if (j > 0) {
            const double prev_hi = endpoints[j - 1].second;
            if (lo < prev_hi) throw ValidationError("make_screen: intervals overlap or are unsorted at " + std::to_string(j));
            if (lo - prev_hi < kMinGap)
                throw ValidationError("make_screen: gap before interval " + std::to_string(j) + " is below 1e-12");
        }
    }
    Screen screen;
    const double shift = rescale ? endpoints.front().first : 0.0;
    const double scale = rescale ? endpoints.back().second - shift : 1.0;
    if (!rescale && endpoints.front().first != 0.0)
        throw ValidationError("make_screen: first endpoint must be 0 (or pass rescale)");
    for (const auto& [lo, hi] : endpoints) {
        Segment seg{(lo - shift) / scale, (hi - shift) / scale};
        screen.segments_.push_back(seg);
    }
    if (rescale) {
        screen.segments_.front().lo = 0.0;
        screen.segments_.back().hi = 1.0;
        for (std::size_t j = 1; j < screen.segments_.size(); ++j)
            if (screen.segments_[j].lo - screen.segments_[j - 1].hi < kMinGap)
                throw ValidationError("make_screen: gap falls below 1e-12 after rescaling");
    }
    return screen;
}

Screen cantor_prefractal(int level) {
    if (level < 0) throw ParameterError("cantor_prefractal: level must be >= 0");
    if (level > 30) throw ParameterError("cantor_prefractal: level above 30 is not representable");
    // Left endpoints are a / 3^level with base-3 digits of a in {0, 2}.
    const std::int64_t denom = [&] {
        std::int64_t d = 1;
        for (int i = 0; i < level; ++i) d *= 3;
        return d;
    }();
    std::vector<std::pair<double, double>> ends;
    const std::int64_t count = std::int64_t{1} << level;
    ends.reserve(static_cast<std::size_t>(count));
    for (std::int64_t idx = 0; idx < count; ++idx) {
        std::int64_t a = 0;
        for (int bit = level - 1; bit >= 0; --bit) a = 3 * a + (((idx >> bit) & 1) ? 2 : 0);
        ends.emplace_back(static_cast<double>(a) / static_cast<double>(denom),
                          static_cast<double>(a + 1) / static_cast<double>(denom));
    }
    return make_screen(ends);
}

std::string format_screen(const Screen& screen) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& seg : screen.segments()) os << seg.lo << ' ' << seg.hi << '\n';
    return os.str();
}

Screen parse_screen(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<double, double>> ends;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double lo, hi;
        if (!(ls >> lo)) continue;
        std::string extra;
        if (!(ls >> hi) || (ls >> extra))
            throw ValidationError("parse_screen: line " + std::to_string(lineno) + " is not `lo hi`");
        ends.emplace_back(lo, hi);
    }
    return make_screen(ends);
}

IncidentWave make_incident(double k, double d1, double d2) {
    if (!(k > 0) || !std::isfinite(k)) throw ParameterError("incident wave: k must be positive");
    if (std::abs(d1 * d1 + d2 * d2 - 1.0) > 1e-14)
        throw ParameterError("incident wave: direction must be a unit vector");
    return IncidentWave{k, d1, d2};
}

Complex eval_incident(const IncidentWave& w, double x1, double x2) {
    const double phase = w.k * (x1 * w.d1 + x2 * w.d2);
    return {std::cos(phase), std::sin(phase)};
}

Complex eval_psi(const IncidentWave& w, double s) {
    const double phase = w.k * w.d1 * s;
    return Complex(0.0, -2.0 * w.k * std::abs(w.d2)) * Complex(std::cos(phase), std::sin(phase));
}

}  // namespace hnabem
