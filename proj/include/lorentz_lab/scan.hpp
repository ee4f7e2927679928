#pragma once

#include <algorithm>
#include <span>
#include <vector>

// Linear-time prefix/suffix primitives. Every nested sup and every
// running integral in the library goes through one of these.
namespace lorentz_lab::scan {

inline std::vector<double> suffix_max(std::span<const double> g) {
    std::vector<double> out(g.size());
    double run = 0.0;
    bool first = true;
    for (std::size_t i = g.size(); i-- > 0;) {
        run = first ? g[i] : std::max(run, g[i]);
        first = false;
        out[i] = run;
    }
    return out;
}

inline std::vector<double> prefix_max(std::span<const double> g) {
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        out[i] = i == 0 ? g[0] : std::max(out[i - 1], g[i]);
    return out;
}

/// out[i] = g[0] + ... + g[i]
inline std::vector<double> prefix_sum(std::span<const double> g) {
    std::vector<double> out(g.size());
    double run = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        run += g[i];
        out[i] = run;
    }
    return out;
}

/// out[i] = g[i] + ... + g[n-1]
inline std::vector<double> suffix_sum(std::span<const double> g) {
    std::vector<double> out(g.size());
    double run = 0.0;
    for (std::size_t i = g.size(); i-- > 0;) {
        run += g[i];
        out[i] = run;
    }
    return out;
}

}  // namespace lorentz_lab::scan
