#include "hnabem/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hnabem/errors.hpp"

namespace hnabem {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    std::vector<T> out;
    std::string tok;
    while (in >> tok) {
        if (!tok.empty() && tok.back() == ',') tok.pop_back();
        if (tok.empty()) continue;
        std::istringstream ts(tok);
        T v;
        char extra;
        if (!(ts >> v) || (ts >> extra)) throw ConfigError("config: bad value '" + tok + "' for " + key);
        out.push_back(v);
    }
    return out;
}

template <class T>
T parse_one(const std::string& key, const std::string& value) {
    const auto v = parse_list<T>(key, value);
    if (v.size() != 1) throw ConfigError("config: " + key + " expects a single value");
    return v.front();
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    return os.str();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    auto dbl = [](double& field) -> Setter { return [&field](const std::string& k, const std::string& v) { field = parse_one<double>(k, v); }; };
    auto integer = [](int& field) -> Setter { return [&field](const std::string& k, const std::string& v) { field = parse_one<int>(k, v); }; };
    const std::map<std::string, Setter> setters = {
        {"screen",
         [&](const std::string& k, const std::string& v) {
             const auto xs = parse_list<double>(k, v);
             if (xs.empty() || xs.size() % 2 != 0) throw ConfigError("config: screen needs an even number of endpoints");
             c.screen.clear();
             for (std::size_t i = 0; i < xs.size(); i += 2) c.screen.emplace_back(xs[i], xs[i + 1]);
         }},
        {"cantor_level", integer(c.cantor_level)},
        {"k", dbl(c.k)},
        {"d",
         [&](const std::string& k, const std::string& v) {
             const auto xs = parse_list<double>(k, v);
             if (xs.size() != 2) throw ConfigError("config: d expects two components");
             const double n = std::hypot(xs[0], xs[1]);
             if (!(n > 0)) throw ConfigError("config: d must be nonzero");
             c.d1 = xs[0] / n;
             c.d2 = xs[1] / n;
         }},
        {"p", integer(c.p)},
        {"sigma", dbl(c.sigma)},
        {"layers", integer(c.layers)},
        {"c_os", dbl(c.c_os)},
        {"epsilon", dbl(c.epsilon)},
        {"c_osc", dbl(c.quad.c_osc)},
        {"c_sing", dbl(c.quad.c_sing)},
        {"n_q", integer(c.quad.n_q)},
        {"theta_samples", integer(c.theta_samples)},
        {"boundary_samples", integer(c.boundary_samples)},
        {"p_list", [&](const std::string& k, const std::string& v) { c.p_list = parse_list<int>(k, v); }},
        {"k_list", [&](const std::string& k, const std::string& v) { c.k_list = parse_list<double>(k, v); }},
        {"p_ref", integer(c.p_ref)},
        {"near_samples", integer(c.near_samples)},
        {"far_samples", integer(c.far_samples)},
        {"levels", [&](const std::string& k, const std::string& v) { c.levels = parse_list<int>(k, v); }},
        {"k_min", dbl(c.k_min)},
        {"k_max", dbl(c.k_max)},
        {"k_step", dbl(c.k_step)},
        {"t0_min", dbl(c.t0_min)},
        {"t0_max", dbl(c.t0_max)},
        {"t0_step", dbl(c.t0_step)},
    };

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (value.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty value for " + key);
        try {
            it->second(key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!(c.k > 0)) throw ConfigError("config: k must be positive");
    if (c.p < 0) throw ConfigError("config: p must be >= 0");
    if (c.theta_samples < 1 || c.boundary_samples < 1 || c.near_samples < 1 || c.far_samples < 1)
        throw ConfigError("config: sample counts must be positive");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

Screen RunConfig::make_screen() const {
    if (cantor_level >= 0) return cantor_prefractal(cantor_level);
    return hnabem::make_screen(screen);
}

IncidentWave RunConfig::incident() const { return make_incident(k, d1, d2); }

SolverOptions RunConfig::solver_options(int threads) const {
    SolverOptions o;
    o.p = p;
    o.sigma = sigma;
    o.layers = layers;
    o.c_os = c_os;
    o.epsilon = epsilon;
    o.quad = quad;
    o.threads = threads;
    return o;
}

std::string RunConfig::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (cantor_level >= 0) {
        os << "# cantor_level = " << cantor_level << '\n';
    } else {
        os << "# screen =";
        for (const auto& [lo, hi] : screen) os << ' ' << lo << ' ' << hi;
        os << '\n';
    }
    os << "# k = " << k << "\n# d = " << d1 << ' ' << d2 << "\n# p = " << p << "\n# sigma = " << sigma
       << "\n# layers = " << (layers > 0 ? layers : 2 * (p + 1)) << "\n# c_os = " << c_os << "\n# epsilon = " << epsilon
       << "\n# c_osc = " << quad.c_osc << "\n# c_sing = " << quad.c_sing << "\n# n_q = " << quad.n_q
       << "\n# theta_samples = " << theta_samples << "\n# boundary_samples = " << boundary_samples << '\n';
    if (!p_list.empty()) os << "# p_list = " << join(p_list) << '\n';
    if (!k_list.empty()) os << "# k_list = " << join(k_list) << '\n';
    os << "# p_ref = " << p_ref << "\n# near_samples = " << near_samples << "\n# far_samples = " << far_samples << '\n';
    if (!levels.empty()) os << "# levels = " << join(levels) << '\n';
    os << "# k_min = " << k_min << "\n# k_max = " << k_max << "\n# k_step = " << k_step << "\n# t0_min = " << t0_min
       << "\n# t0_max = " << t0_max << "\n# t0_step = " << t0_step << '\n';
    return os.str();
}

}  // namespace hnabem
