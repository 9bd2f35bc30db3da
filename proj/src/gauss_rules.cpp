// Gaussian rule factories: classical Gauss-Legendre / Gauss-Laguerre and the
// generalised (logarithmic) rules used for singular integrands.
//
// Log rules up to kMaxTabulated points come from tables generated in quad
// precision by tools/gauss_tables.cpp; larger ones are built on demand in
// long double, where the moment accuracy degrades slowly with n.

#include <map>
#include <mutex>

#include "gauss_generalized.hpp"
#include "hnabem/specfun.hpp"

namespace hnabem {

namespace {

struct TabulatedRule {
    RuleKind kind;
    int n;
    int offset;  // into kLogRuleData, n (node, weight) pairs
};

#include "gauss_tables.inc"

using Kit = gauss_detail::Kit<long double>;

QuadRule to_rule(RuleKind kind, const Kit::RawRule& raw) {
    QuadRule q{kind, {}, {}};
    q.nodes.assign(raw.nodes.begin(), raw.nodes.end());
    q.weights.assign(raw.weights.begin(), raw.weights.end());
    return q;
}

bool from_table(RuleKind kind, int n, QuadRule& out) {
    for (const auto& t : kLogRules) {
        if (t.kind != kind || t.n != n) continue;
        out.kind = kind;
        out.nodes.resize(n);
        out.weights.resize(n);
        for (int i = 0; i < n; ++i) {
            out.nodes[i] = kLogRuleData[t.offset + 2 * i];
            out.weights[i] = kLogRuleData[t.offset + 2 * i + 1];
        }
        return true;
    }
    return false;
}

QuadRule build_rule(RuleKind kind, int n) {
    QuadRule q{kind, {}, {}};
    switch (kind) {
        case RuleKind::legendre: return to_rule(kind, Kit::gauss_legendre_raw(n));
        case RuleKind::laguerre: return to_rule(kind, Kit::gauss_laguerre_raw(n));
        case RuleKind::legendre_log:
            if (from_table(kind, n, q)) return q;
            return to_rule(kind, Kit::generalized_rule(Kit::LegendreLogFamily{n}));
        case RuleKind::laguerre_log:
            if (from_table(kind, n, q)) return q;
            return to_rule(kind, Kit::generalized_rule(Kit::LaguerreLogFamily{n}));
    }
    throw ParameterError("gauss_rule: unknown rule kind");
}

}  // namespace

std::shared_ptr<const QuadRule> gauss_rule(RuleKind kind, int n) {
    if (n < 1) throw ParameterError("gauss_rule: point count must be >= 1");
    static std::mutex mutex;
    static std::map<std::pair<RuleKind, int>, std::shared_ptr<const QuadRule>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[{kind, n}];
    if (!slot) slot = std::make_shared<const QuadRule>(build_rule(kind, n));
    return slot;
}

}  // namespace hnabem
