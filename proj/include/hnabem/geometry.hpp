#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hnabem/specfun.hpp"

namespace hnabem {

/// One open interval (lo, hi) of the screen on the line x2 = 0.
struct Segment {
    double lo;
    double hi;

    double length() const { return hi - lo; }
};

/// A finite union of disjoint colinear open intervals, sorted left to right,
/// with the first endpoint at 0. Immutable once built.
class Screen {
public:
    Screen() = default;

    const std::vector<Segment>& segments() const { return segments_; }
    const Segment& segment(int j) const { return segments_.at(static_cast<std::size_t>(j)); }
    int segment_count() const { return static_cast<int>(segments_.size()); }
    double diam() const { return segments_.empty() ? 0.0 : segments_.back().hi - segments_.front().lo; }
    double total_length() const;

    /// Index of the segment whose closure contains s, or -1.
    int locate(double s) const;

    std::vector<std::pair<double, double>> endpoints() const;

private:
    friend Screen make_screen(const std::vector<std::pair<double, double>>&, bool);
    std::vector<Segment> segments_;
};

/// Validates and builds a screen. Intervals must be sorted, non-degenerate and
/// separated by gaps of at least 1e-12; the first must start at 0 unless
/// `rescale` is set, in which case the screen is shifted and scaled onto [0, 1].
Screen make_screen(const std::vector<std::pair<double, double>>& endpoints, bool rescale = false);

/// Middle-third Cantor prefractal of the given level on [0, 1].
Screen cantor_prefractal(int level);

/// `lo hi` per line with 17 significant digits; blank lines and `#` comments
/// are ignored when parsing.
std::string format_screen(const Screen& screen);
Screen parse_screen(const std::string& text);

/// Plane wave u^i(x) = exp(ik x.d).
struct IncidentWave {
    double k = 1.0;
    double d1 = 0.0;
    double d2 = -1.0;
};

/// Checks k > 0 and |d| = 1 to 1e-14.
IncidentWave make_incident(double k, double d1, double d2);

Complex eval_incident(const IncidentWave& w, double x1, double x2);

/// Physical-optics term -2ik|d2| exp(ik d1 s) on the screen.
Complex eval_psi(const IncidentWave& w, double s);

}  // namespace hnabem
