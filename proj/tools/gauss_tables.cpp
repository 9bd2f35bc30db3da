// Writes src/gauss_tables.inc: generalised log-weight Gauss rules computed in
// quad precision (long double where the quad continuation stalls) and rounded
// to double.
//
//   hnabem_gauss_tables src/gauss_tables.inc --laguerre-long-double-from=27 1-40

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

using boost::multiprecision::float128;

namespace Eigen {
template <>
struct NumTraits<float128> : GenericNumTraits<float128> {
    using Real = float128;
    using NonInteger = float128;
    using Literal = float128;
    using Nested = float128;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 2,
        AddCost = 8,
        MulCost = 8,
    };
    static float128 epsilon() { return std::numeric_limits<float128>::epsilon(); }
    static float128 dummy_precision() { return float128(1e-28); }
    static float128 highest() { return std::numeric_limits<float128>::max(); }
    static float128 lowest() { return -std::numeric_limits<float128>::max(); }
    static float128 infinity() { return std::numeric_limits<float128>::infinity(); }
    static float128 quiet_NaN() { return std::numeric_limits<float128>::quiet_NaN(); }
    static int digits10() { return std::numeric_limits<float128>::digits10; }
};
}  // namespace Eigen

#include "../src/gauss_generalized.hpp"
using Kit = hnabem::gauss_detail::Kit<float128>;
using KitLD = hnabem::gauss_detail::Kit<long double>;

namespace {

namespace fs = std::filesystem;

// One finished rule per file so an interrupted run can resume.
fs::path fragment(const fs::path& dir, const char* kind, int n) {
    return dir / (std::string(kind) + "_" + std::to_string(n) + ".txt");
}

// Largest error of the rule on the orthogonal polynomials of the plain
// weight, whose integrals are known in closed form:
//   int_0^1 P_j(2x-1) = [j = 0],   int_0^1 P_j(2x-1) log x = -1 (j = 0), (-1)^(j+1) / (j(j+1)),
//   int_0^inf L_j e^-x = [j = 0],  int_0^inf L_j log x e^-x = -gamma (j = 0), -1/j.
// Both families are bounded by 1 in the relevant norm, so this is an absolute
// accuracy measure (monomial moments are ill-conditioned for large n).
float128 identity_error(bool half_line, const std::vector<float128>& x, const std::vector<float128>& w) {
    const int n = static_cast<int>(x.size());
    std::vector<float128> q(n), ql(n);
    for (int i = 0; i < n; ++i) {
        const float128 t = half_line ? x[i] : 2 * x[i] - 1;
        float128 p0 = 1, p1 = half_line ? 1 - t : t;
        for (int j = 0; j < n; ++j) {
            float128 pj = j == 0 ? float128(1) : p1;
            if (j >= 2) {
                pj = half_line ? ((2 * j - 1 - t) * p1 - (j - 1) * p0) / j : ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = pj;
            }
            q[j] += w[i] * pj;
            ql[j] += w[i] * pj * log(x[i]);
        }
    }
    float128 worst = 0;
    for (int j = 0; j < n; ++j) {
        float128 want_log;
        if (j == 0)
            want_log = half_line ? -boost::math::constants::euler<float128>() : float128(-1);
        else
            want_log = half_line ? float128(-1) / j : float128(j % 2 ? 1 : -1) / (j * (j + 1));
        worst = std::max({worst, abs(q[j] - (j == 0 ? 1 : 0)), abs(ql[j] - want_log)});
    }
    return worst;
}

// The quad-precision continuation stalls for some n where the long double one
// does not: the family is numerically rank deficient and the retained rank
// differs between the two precisions. The long double rule is then tabulated
// if its moments check out.
template <class FamilyLD>
Kit::RawRule long_double_rule(int n) {
    const KitLD::RawRule ld = KitLD::generalized_rule(FamilyLD{n});
    Kit::RawRule r;
    for (int i = 0; i < n; ++i) {
        r.nodes.push_back(float128(ld.nodes[i]));
        r.weights.push_back(float128(ld.weights[i]));
    }
    const float128 err = identity_error(FamilyLD::half_line, r.nodes, r.weights);
    if (!(err < 1e-14)) throw std::runtime_error("long double rule fails the identity check");
    return r;
}

template <class Family, class FamilyLD>
void build(const fs::path& dir, const char* kind, int n, bool long_double_only) {
    const fs::path path = fragment(dir, kind, n);
    if (fs::exists(path)) return;
    try {
        Kit::RawRule r;
        try {
            if (long_double_only) throw std::runtime_error("quad precision skipped");
            r = Kit::generalized_rule(Family{n});
        } catch (const std::exception& e) {
            std::cerr << kind << " n=" << n << ": " << e.what() << "; trying long double\n";
            r = long_double_rule<FamilyLD>(n);
        }
        std::cerr << kind << " n=" << n << " identity error "
                  << static_cast<double>(identity_error(Family::half_line, r.nodes, r.weights)) << '\n';
        std::ofstream os(path.string() + ".tmp");
        char buf[128];
        for (int i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g\n", static_cast<double>(r.nodes[i]),
                          static_cast<double>(r.weights[i]));
            os << buf;
        }
        os.close();
        fs::rename(path.string() + ".tmp", path);
        std::cerr << kind << " n=" << n << " done\n";
    } catch (const std::exception& e) {
        std::cerr << kind << " n=" << n << " skipped: " << e.what() << '\n';
    }
}

std::vector<int> parse_list(int argc, char** argv, int& laguerre_ld_from) {
    std::vector<int> ns;
    const std::string flag = "--laguerre-long-double-from=";
    for (int i = 2; i < argc; ++i) {
        const std::string a = argv[i];
        if (a.rfind(flag, 0) == 0) {
            laguerre_ld_from = std::stoi(a.substr(flag.size()));
            continue;
        }
        const auto dash = a.find('-');
        if (dash == std::string::npos) {
            ns.push_back(std::stoi(a));
        } else {
            for (int n = std::stoi(a.substr(0, dash)); n <= std::stoi(a.substr(dash + 1)); ++n) ns.push_back(n);
        }
    }
    return ns;
}

}  // namespace

// usage: gauss_tables <out.inc> [--laguerre-long-double-from=N] <n | lo-hi>...
// Rules are cached in <out.inc>.d/; the .inc lists every cached rule. The
// quad-precision Laguerre-log continuation stalls from n = 27 on, so larger
// Laguerre-log rules can be sent straight to the long double path.
int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: gauss_tables <out.inc> [--laguerre-long-double-from=N] <n | lo-hi>...\n";
        return 2;
    }
    const fs::path out = argv[1];
    const fs::path dir = out.string() + ".d";
    fs::create_directories(dir);
    int laguerre_ld_from = 1 << 30;
    for (int n : parse_list(argc, argv, laguerre_ld_from)) {
        build<Kit::LegendreLogFamily, KitLD::LegendreLogFamily>(dir, "legendre_log", n, false);
        build<Kit::LaguerreLogFamily, KitLD::LaguerreLogFamily>(dir, "laguerre_log", n, n >= laguerre_ld_from);
    }

    std::string data, index;
    int offset = 0;
    for (int n = 1; n <= 200; ++n)
        for (const char* kind : {"legendre_log", "laguerre_log"}) {
            std::ifstream in(fragment(dir, kind, n));
            if (!in) continue;
            std::string line;
            int count = 0;
            while (std::getline(in, line))
                if (!line.empty()) {
                    const auto sp = line.find(' ');
                    data += "    " + line.substr(0, sp) + ", " + line.substr(sp + 1) + ",\n";
                    ++count;
                }
            if (count != n) {
                std::cerr << "bad fragment " << fragment(dir, kind, n) << '\n';
                return 1;
            }
            index += "    {RuleKind::" + std::string(kind) + ", " + std::to_string(n) + ", " + std::to_string(offset) +
                     "},\n";
            offset += 2 * n;
        }
    std::ofstream os(out);
    os << "// Generated by tools/gauss_tables.cpp; do not edit.\n"
       << "constexpr double kLogRuleData[] = {\n" << data << "};\n"
       << "constexpr TabulatedRule kLogRules[] = {\n" << index << "};\n";
    return 0;
}
