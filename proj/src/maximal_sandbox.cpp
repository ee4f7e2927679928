#include "lorentz_lab/maximal_sandbox.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>

#include "lorentz_lab/errors.hpp"
#include "lorentz_lab/extended.hpp"
#include "lorentz_lab/hardy_suprema.hpp"
#include "lorentz_lab/lorentz.hpp"
#include "lorentz_lab/parallel.hpp"

namespace lorentz_lab {

MaximalSpec MaximalSpec::classical() { return MaximalSpec{PowerLog{1.0, 0.0, 0.0, 1.0}, 1.0, PowerLog{}}; }

bool MaximalSpec::is_classical() const {
    return alpha == 1.0 && phi.pure_power() && phi.exponent == 1.0 && phi.scale == 1.0 && b.pure_power() &&
           b.exponent == 0.0 && b.scale == 1.0;
}

DecreasingStep SampledMaximal::rearranged() const {
    std::vector<std::pair<double, double>> pieces(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) pieces[k] = {values[k], measures[k]};
    return rearrange_pieces(std::move(pieces));
}

// ---------------------------------------------------------------- geometry

double disc_rect_area(double r, double x0, double x1, double y0, double y1) {
    if (!(r > 0.0)) return 0.0;
    const double a = std::max(x0, -r);
    const double b = std::min(x1, r);
    if (!(a < b) || !(y0 < y1)) return 0.0;
    const double r2 = r * r;
    auto S = [&](double x) { return std::sqrt(std::max(0.0, r2 - x * x)); };
    auto F = [&](double x) {  // antiderivative of S
        const double c = std::clamp(x / r, -1.0, 1.0);
        return 0.5 * (x * S(x) + r2 * std::asin(c));
    };
    std::vector<double> cuts{a, b};
    for (double y : {y0, y1}) {
        if (std::abs(y) < r) {
            const double x = std::sqrt(r2 - y * y);
            for (double c : {-x, x})
                if (c > a && c < b) cuts.push_back(c);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double c = cuts[i];
        const double d = cuts[i + 1];
        if (!(d > c)) continue;
        const double s = S(0.5 * (c + d));
        if (std::min(y1, s) <= std::max(y0, -s)) continue;
        const double upper = y1 < s ? y1 * (d - c) : F(d) - F(c);
        const double lower = y0 > -s ? y0 * (d - c) : -(F(d) - F(c));
        area += upper - lower;
    }
    return std::max(0.0, area);
}

namespace {

using Pieces = std::vector<std::pair<double, double>>;
using Rect = std::array<double, 4>;  // x0, x1, y0, y1 (y unused in R^1)

double overlap(double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

class Geometry {
public:
    virtual ~Geometry() = default;
    virtual int dim() const = 0;
    virtual double extent() const = 0;             // support inside [-extent, extent]^n
    virtual std::vector<double> breakpoints() const = 0;
    virtual double value_at(double x, double y) const = 0;
    virtual Pieces pieces(const Rect& q) const = 0;
};

class StepGeometry final : public Geometry {
public:
    explicit StepGeometry(const StepField& f) : f_(f) {}
    int dim() const override { return f_.dim(); }
    double extent() const override {
        double e = 0.0;
        for (const auto& b : f_.boxes()) {
            if (!(b.value > 0.0)) continue;
            for (int d = 0; d < dim(); ++d) e = std::max({e, std::abs(b.lo[d]), std::abs(b.hi[d])});
        }
        return e;
    }
    std::vector<double> breakpoints() const override {
        std::vector<double> out;
        for (const auto& b : f_.boxes())
            for (int d = 0; d < dim(); ++d) {
                out.push_back(b.lo[d]);
                out.push_back(b.hi[d]);
            }
        return out;
    }
    double value_at(double x, double y) const override {
        for (const auto& b : f_.boxes()) {
            if (x < b.lo[0] || x > b.hi[0]) continue;
            if (dim() == 2 && (y < b.lo[1] || y > b.hi[1])) continue;
            return b.value;
        }
        return 0.0;
    }
    Pieces pieces(const Rect& q) const override {
        Pieces out;
        for (const auto& b : f_.boxes()) {
            if (!(b.value > 0.0)) continue;
            double m = overlap(q[0], q[1], b.lo[0], b.hi[0]);
            if (dim() == 2) m *= overlap(q[2], q[3], b.lo[1], b.hi[1]);
            if (m > 0.0) out.emplace_back(b.value, m);
        }
        return out;
    }

private:
    const StepField& f_;
};

class RadialGeometry final : public Geometry {
public:
    explicit RadialGeometry(const RadialField& f) : f_(f), g_(*f.profile().grid()) {}
    int dim() const override { return f_.dim(); }
    double extent() const override {
        // last radius with a positive value
        const auto& h = f_.profile();
        for (std::size_t k = h.size(); k-- > 0;)
            if (h[k] > 0.0) return g_.right(k);
        return 0.0;
    }
    std::vector<double> breakpoints() const override {
        std::vector<double> out{0.0};
        const std::size_t n = g_.size();
        // all level circles in R^1; in R^2 only the outer radius
        if (dim() == 1) {
            for (std::size_t k = 1; k <= n; ++k) {
                out.push_back(g_.edge(k));
                out.push_back(-g_.edge(k));
            }
        } else {
            out.push_back(extent());
            out.push_back(-extent());
        }
        return out;
    }
    double value_at(double x, double y) const override {
        const double r = std::hypot(x, dim() == 2 ? y : 0.0);
        if (r > g_.t_max()) return 0.0;
        return f_.profile()[g_.locate(r)];
    }
    Pieces pieces(const Rect& q) const override {
        Pieces out;
        const auto& h = f_.profile();
        // distance from 0 to q
        const double dx = std::max({0.0, q[0], -q[1]});
        const double dy = dim() == 2 ? std::max({0.0, q[2], -q[3]}) : 0.0;
        const double dmin = std::hypot(dx, dy);
        double inner = 0.0;
        for (std::size_t k = 0; k < h.size(); ++k) {
            const double r = g_.right(k);
            if (r <= dmin) continue;
            const double outer = ball_part(r, q);
            const double m = outer - inner;
            inner = outer;
            if (h[k] > 0.0 && m > 0.0) out.emplace_back(h[k], m);
        }
        return out;
    }

private:
    double ball_part(double r, const Rect& q) const {
        if (dim() == 1) return overlap(q[0], q[1], -r, r);
        return disc_rect_area(r, q[0], q[1], q[2], q[3]);
    }
    const RadialField& f_;
    const Grid& g_;
};

// ||f chi_Q||_{Lambda^alpha(b)} / phi(|Q|) from the pieces of f on Q.
class NormRatio {
public:
    explicit NormRatio(const MaximalSpec& s) : s_(s), classical_(s.is_classical()) {
        if (!(s.alpha > 0.0)) throw parameter_error("alpha must be positive");
        if (!s.b.integral_from_zero(1.0)) throw parameter_error("b must be integrable at 0");
    }

    double B(double t) const {
        if (s_.b.pure_power()) {
            const double c = s_.b.exponent + 1.0;
            return s_.b.scale * std::pow(t, c) / c;
        }
        return *s_.b.integral_from_zero(t);
    }

    double operator()(Pieces p, double measure) const {
        if (p.empty() || !(measure > 0.0)) return 0.0;
        if (classical_) {
            double s = 0.0;
            for (const auto& [v, m] : p) s += v * m;
            return s / measure;
        }
        std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        return from_sorted(p, measure);
    }

    // pieces already sorted by decreasing value
    double from_sorted(const Pieces& p, double measure) const {
        double acc = 0.0;
        double M = 0.0;
        double BM = 0.0;
        for (const auto& [v, m] : p) {
            M += m;
            const double BM1 = B(M);
            acc += ext::pow(v, s_.alpha) * (BM1 - BM);
            BM = BM1;
        }
        return ext::pow(acc, 1.0 / s_.alpha) / s_.phi(measure);
    }

private:
    const MaximalSpec& s_;
    bool classical_;
};

std::vector<double> make_lattice(double R, int count, const std::vector<double>& breaks) {
    std::vector<double> c;
    for (int i = 0; i <= count; ++i) c.push_back(-R + 2.0 * R * i / count);
    for (double b : breaks)
        if (b > -R && b < R) c.push_back(b);
    std::sort(c.begin(), c.end());
    std::vector<double> out;
    for (double x : c)
        if (out.empty() || x - out.back() > 1e-12 * R) out.push_back(x);
    out.front() = -R;
    out.back() = R;
    return out;
}

std::vector<double> centred_sizes(double lmin, double lmax, int budget) {
    std::vector<double> out;
    for (int j = 0; j <= budget; ++j) out.push_back(lmin * std::pow(lmax / lmin, static_cast<double>(j) / budget));
    return out;
}

SampledMaximal eval_1d(const Geometry& geo, const MaximalSpec& spec, const SandboxOptions& opt) {
    const NormRatio ratio(spec);
    const double ext_r = geo.extent();
    SampledMaximal out;
    out.dim = 1;
    out.R = opt.margin * (ext_r > 0.0 ? ext_r : 1.0);
    out.coords = make_lattice(out.R, opt.lattice_1d, geo.breakpoints());
    const auto& a = out.coords;
    const std::size_t n = a.size() - 1;
    std::vector<double> fv(n), len(n);
    for (std::size_t s = 0; s < n; ++s) {
        fv[s] = geo.value_at(0.5 * (a[s] + a[s + 1]), 0.0);
        len[s] = a[s + 1] - a[s];
    }

    // rsuf[i][j] = max over lattice intervals [a_i, a_j'] with j' >= j
    const auto rsuf = parallel_map(n, opt.threads, [&](std::size_t i) {
        std::vector<double> row(n + 1, 0.0);
        std::map<double, double, std::greater<>> levels;
        double classical_sum = 0.0;
        for (std::size_t j = i + 1; j <= n; ++j) {
            const double v = fv[j - 1];
            const double m = a[j] - a[i];
            if (spec.is_classical()) {
                classical_sum += v * len[j - 1];
                row[j] = classical_sum / m;
                continue;
            }
            if (v > 0.0) levels[v] += len[j - 1];
            Pieces p(levels.begin(), levels.end());
            row[j] = p.empty() ? 0.0 : ratio.from_sorted(p, m);
        }
        for (std::size_t j = n; j-- > i + 1;) row[j] = std::max(row[j], row[j + 1]);
        return row;
    });

    std::vector<double> cell(n, 0.0), point(n + 1, 0.0);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t i = 0; i <= s; ++i) cell[s] = std::max(cell[s], rsuf[i][s + 1]);
    for (std::size_t s = 0; s <= n; ++s) {
        for (std::size_t i = 0; i < s; ++i) point[s] = std::max(point[s], rsuf[i][s]);
        if (s < n) point[s] = std::max(point[s], rsuf[s][s + 1]);
    }

    // centred intervals at every midpoint and lattice point
    const double lmin = 0.5 * *std::min_element(len.begin(), len.end());
    const auto sizes = centred_sizes(lmin, 4.0 * out.R, opt.cube_budget);
    auto centred = [&](double c) {
        double best = 0.0;
        for (double l : sizes) {
            const Rect q{c - 0.5 * l, c + 0.5 * l, 0.0, 0.0};
            best = std::max(best, ratio(geo.pieces(q), l));
        }
        return best;
    };
    const auto cm = parallel_map(n, opt.threads, [&](std::size_t s) { return centred(0.5 * (a[s] + a[s + 1])); });
    const auto pm = parallel_map(n + 1, opt.threads, [&](std::size_t s) { return centred(a[s]); });
    for (std::size_t s = 0; s < n; ++s) {
        cell[s] = std::max(cell[s], cm[s]);
        out.points.push_back({0.5 * (a[s] + a[s + 1]), 0.0});
        out.values.push_back(cell[s]);
        out.measures.push_back(len[s]);
    }
    for (std::size_t s = 0; s <= n; ++s) point[s] = std::max(point[s], pm[s]);
    out.lattice_values = point;

    // classical case: M f outside the box is max_a (mass beyond a)/(x - a)
    if (spec.is_classical() && opt.tail_cells > 0) {
        std::vector<double> F(n + 1, 0.0);
        for (std::size_t s = 0; s < n; ++s) F[s + 1] = F[s] + fv[s] * len[s];
        const double total = F[n];
        const int K = opt.tail_cells;
        for (int m = 0; m < K; ++m) {
            const double x0 = out.R * std::pow(opt.tail_factor, static_cast<double>(m) / K);
            const double x1 = out.R * std::pow(opt.tail_factor, static_cast<double>(m + 1) / K);
            double right = 0.0;
            double left = 0.0;
            for (std::size_t s = 0; s <= n; ++s) {
                right = std::max(right, (total - F[s]) / (x1 - a[s]));
                left = std::max(left, F[s] / (a[s] + x1));
            }
            out.points.push_back({x1, 0.0});
            out.values.push_back(right);
            out.measures.push_back(x1 - x0);
            out.points.push_back({-x1, 0.0});
            out.values.push_back(left);
            out.measures.push_back(x1 - x0);
        }
        out.tail_appended = true;
    }
    return out;
}

SampledMaximal eval_2d(const Geometry& geo, const MaximalSpec& spec, const SandboxOptions& opt) {
    const NormRatio ratio(spec);
    const double ext_r = geo.extent();
    SampledMaximal out;
    out.dim = 2;
    out.R = opt.margin * (ext_r > 0.0 ? ext_r : 1.0);
    out.coords = make_lattice(out.R, opt.lattice_2d, geo.breakpoints());
    const auto& c = out.coords;
    const std::size_t n = c.size() - 1;
    std::vector<double> mid(n);
    for (std::size_t s = 0; s < n; ++s) mid[s] = 0.5 * (c[s] + c[s + 1]);
    auto cells_in = [&](double lo, double hi) {
        const auto first = static_cast<std::size_t>(std::lower_bound(mid.begin(), mid.end(), lo) - mid.begin());
        const auto last = static_cast<std::size_t>(std::upper_bound(mid.begin(), mid.end(), hi) - mid.begin());
        return std::pair{first, last};
    };

    // squares [c_i, c_j] x [c_k, c_k + (c_j - c_i)]
    const auto partial = parallel_map(n, opt.threads, [&](std::size_t i) {
        std::vector<double> M(n * n, 0.0);
        for (std::size_t j = i + 1; j <= n; ++j) {
            const double side = c[j] - c[i];
            const auto [x0, x1] = cells_in(c[i], c[j]);
            for (std::size_t k = 0; k < n; ++k) {
                const Rect q{c[i], c[j], c[k], c[k] + side};
                const double r = ratio(geo.pieces(q), side * side);
                if (!(r > 0.0)) continue;
                const auto [y0, y1] = cells_in(q[2], q[3]);
                for (std::size_t x = x0; x < x1; ++x)
                    for (std::size_t y = y0; y < y1; ++y) M[x * n + y] = std::max(M[x * n + y], r);
            }
        }
        return M;
    });
    std::vector<double> M(n * n, 0.0);
    for (const auto& P : partial)
        for (std::size_t z = 0; z < M.size(); ++z) M[z] = std::max(M[z], P[z]);

    double lmin = out.R;
    for (std::size_t s = 0; s < n; ++s) lmin = std::min(lmin, c[s + 1] - c[s]);
    const auto sizes = centred_sizes(0.5 * lmin, 4.0 * out.R, opt.cube_budget);
    const auto centred = parallel_map(n * n, opt.threads, [&](std::size_t z) {
        const double x = mid[z / n];
        const double y = mid[z % n];
        double best = 0.0;
        for (double l : sizes) {
            const Rect q{x - 0.5 * l, x + 0.5 * l, y - 0.5 * l, y + 0.5 * l};
            best = std::max(best, ratio(geo.pieces(q), l * l));
        }
        return best;
    });
    for (std::size_t z = 0; z < n * n; ++z) {
        const std::size_t x = z / n;
        const std::size_t y = z % n;
        out.points.push_back({mid[x], mid[y]});
        out.values.push_back(std::max(M[z], centred[z]));
        out.measures.push_back((c[x + 1] - c[x]) * (c[y + 1] - c[y]));
    }
    return out;
}

SampledMaximal eval_any(const Geometry& geo, const MaximalSpec& spec, const SandboxOptions& opt) {
    if (opt.cube_budget < 1) throw parameter_error("cube budget must be at least 1");
    if (geo.dim() == 1) {
        if (opt.lattice_1d < 2) throw parameter_error("lattice needs at least 2 points");
        return eval_1d(geo, spec, opt);
    }
    if (geo.dim() == 2) {
        if (opt.lattice_2d < 2) throw parameter_error("lattice needs at least 2 points");
        return eval_2d(geo, spec, opt);
    }
    throw parameter_error("the sandbox supports R^1 and R^2 only");
}

std::vector<std::string> hypothesis_warnings(const MaximalSpec& spec, const GridPtr& grid) {
    std::vector<std::string> w;
    const auto phi = WeightSpec::from_descriptor(grid, spec.phi);
    const auto b = WeightSpec::from_descriptor(grid, spec.b);
    if (!check_quasi_monotone(phi.samples(), Monotonicity::increasing).finite)
        w.push_back("phi is not quasi-increasing at the cap");
    if (!check_delta2(cumulative(b, HeadPolicy::allow_truncation)).finite)
        w.push_back("B fails the Delta_2 check at the cap");
    return w;
}

void fill_ratios(SandwichResult& out, const Grid& g) {
    const std::size_t n = g.size();
    const std::size_t lo = n / 10;
    const std::size_t hi = n - n / 10;
    out.c_low = ext::inf;
    out.C_high = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
        if (out.lhs[k] == 0.0 && out.rhs[k] == 0.0) continue;
        const double r = ext::div(out.lhs[k], out.rhs[k]);
        out.ratio.push_back(r);
        out.c_low = std::min(out.c_low, r);
        out.C_high = std::max(out.C_high, r);
    }
    if (out.ratio.empty()) out.c_low = 0.0;
}

}  // namespace

SampledMaximal eval_maximal(const StepField& f, const MaximalSpec& spec, const SandboxOptions& opt) {
    return eval_any(StepGeometry(f), spec, opt);
}

SampledMaximal eval_maximal(const RadialField& f, const MaximalSpec& spec, const SandboxOptions& opt) {
    return eval_any(RadialGeometry(f), spec, opt);
}

MonotoneFunction rhs_reduction(const MonotoneFunction& fstar, const WeightSpec& phi, double alpha,
                               const WeightSpec& b) {
    const auto spec = reduce_maximal_to_T(phi, alpha, b, HeadPolicy::allow_truncation);
    std::vector<double> psi(fstar.size());
    for (std::size_t k = 0; k < psi.size(); ++k) psi[k] = ext::pow(fstar[k], alpha);
    const auto T = apply_T(spec, MonotoneFunction(fstar.grid(), std::move(psi)));
    std::vector<double> out(T.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = ext::pow(T[k], 1.0 / alpha);
    return MonotoneFunction(fstar.grid(), std::move(out));
}

GridPtr sandbox_target_grid(const SampledMaximal& m, std::size_t cells) {
    const double box = 2.0 * m.R;
    const double cell = box / static_cast<double>(m.coords.size() - 1);
    return make_log_grid(std::pow(cell, m.dim), std::pow(box, m.dim), cells);
}

SandwichResult sandwich_check(const RadialField& f, const MaximalSpec& spec, const SandboxOptions& opt,
                              GridPtr target) {
    const auto M = eval_maximal(f, spec, opt);
    if (!target) target = sandbox_target_grid(M, 80);
    const auto& g = *target;
    SandwichResult out;
    out.warnings = hypothesis_warnings(spec, target);
    if (!M.tail_appended) out.warnings.push_back("M f outside the box omitted");
    const auto lhs = resample(M.rearranged(), target);
    const auto fstar = rearrange(f, target);
    const auto rhs = rhs_reduction(fstar, WeightSpec::from_descriptor(target, spec.phi), spec.alpha,
                                   WeightSpec::from_descriptor(target, spec.b));
    out.t.assign(g.midpoints().begin(), g.midpoints().end());
    out.lhs.assign(lhs.values().begin(), lhs.values().end());
    out.rhs.assign(rhs.values().begin(), rhs.values().end());
    fill_ratios(out, g);
    return out;
}

SandwichResult herz_stein_check(const StepField& f, const SandboxOptions& opt, GridPtr target) {
    const auto M = eval_maximal(f, MaximalSpec::classical(), opt);
    if (!target) target = sandbox_target_grid(M, 80);
    const auto& g = *target;
    SandwichResult out;
    const auto lhs = resample(M.rearranged(), target);
    const auto rhs = doublestar(rearrange_exact(f), target);
    out.t.assign(g.midpoints().begin(), g.midpoints().end());
    out.lhs.assign(lhs.values().begin(), lhs.values().end());
    out.rhs.assign(rhs.values().begin(), rhs.values().end());
    fill_ratios(out, g);
    return out;
}

}  // namespace lorentz_lab
