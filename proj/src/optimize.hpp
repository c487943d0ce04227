#pragma once

// Derivative-free maximization on a box: coarse grid seed, then Nelder-Mead
// refinement with vertices projected onto the box. Internal to the
// estimators; callers work in transformed (unconstrained-friendly)
// coordinates.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace putraffic::detail {

struct OptResult {
    std::array<double, 2> x{0.0, 0.0};
    double f = 0.0;
    long evaluations = 0;
    bool converged = false;
};

template <typename Fn>
class BoxMaximizer2D {
public:
    BoxMaximizer2D(Fn fn, std::array<double, 2> lo, std::array<double, 2> hi)
        : fn_(std::move(fn)), lo_(lo), hi_(hi) {}

    OptResult run(int grid_per_dim, double ftol, int max_nm_evals) {
        OptResult res;
        // Grid seed; ties keep the earliest (lowest-coordinate) point.
        std::array<double, 2> seed{lo_[0], lo_[1]};
        double best = -HUGE_VAL;
        for (int i = 0; i < grid_per_dim; ++i) {
            double x0 = lerp(lo_[0], hi_[0], i, grid_per_dim);
            for (int j = 0; j < grid_per_dim; ++j) {
                double x1 = lerp(lo_[1], hi_[1], j, grid_per_dim);
                double f = eval(res, {x0, x1});
                if (f > best) {
                    best = f;
                    seed = {x0, x1};
                }
            }
        }
        // Two simplex passes: one from the grid seed, a tight restart at the
        // incumbent.
        Simplex s = nelder_mead(res, seed, 0.05, ftol, max_nm_evals);
        Simplex s2 = nelder_mead(res, s.best_x, 1e-3, ftol, max_nm_evals);
        res.x = s2.best_x;
        res.f = s2.best_f;
        res.converged = s2.converged;
        return res;
    }

private:
    struct Simplex {
        std::array<double, 2> best_x;
        double best_f = -HUGE_VAL;
        bool converged = false;
    };

    static double lerp(double lo, double hi, int i, int n) {
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }

    std::array<double, 2> clamp(std::array<double, 2> p) const {
        p[0] = std::min(std::max(p[0], lo_[0]), hi_[0]);
        p[1] = std::min(std::max(p[1], lo_[1]), hi_[1]);
        return p;
    }

    double eval(OptResult& res, std::array<double, 2> p) {
        ++res.evaluations;
        return fn_(p[0], p[1]);
    }

    Simplex nelder_mead(OptResult& res, std::array<double, 2> start, double step_frac,
                        double ftol, int max_evals) {
        struct Vertex {
            std::array<double, 2> x;
            double f;
        };
        auto make_vertex = [&](std::array<double, 2> p) {
            p = clamp(p);
            return Vertex{p, eval(res, p)};
        };

        std::array<Vertex, 3> v;
        v[0] = make_vertex(start);
        for (int d = 0; d < 2; ++d) {
            std::array<double, 2> p = start;
            double step = step_frac * (hi_[d] - lo_[d]);
            p[d] += (p[d] + step <= hi_[d]) ? step : -step;
            v[d + 1] = make_vertex(p);
        }

        int evals = 0;
        bool converged = false;
        while (evals < max_evals) {
            std::sort(v.begin(), v.end(), [](const Vertex& a, const Vertex& b) { return a.f > b.f; });
            if (v[0].f - v[2].f < ftol) {
                converged = true;
                break;
            }
            std::array<double, 2> centroid{(v[0].x[0] + v[1].x[0]) / 2.0,
                                           (v[0].x[1] + v[1].x[1]) / 2.0};
            auto along = [&](double coef) {
                return clamp({centroid[0] + coef * (centroid[0] - v[2].x[0]),
                              centroid[1] + coef * (centroid[1] - v[2].x[1])});
            };

            Vertex refl = make_vertex(along(1.0));
            ++evals;
            if (refl.f > v[0].f) {
                Vertex expd = make_vertex(along(2.0));
                ++evals;
                v[2] = expd.f > refl.f ? expd : refl;
            } else if (refl.f > v[1].f) {
                v[2] = refl;
            } else {
                Vertex contr = make_vertex(along(refl.f > v[2].f ? 0.5 : -0.5));
                ++evals;
                if (contr.f > std::min(refl.f, v[2].f)) {
                    v[2] = contr;
                } else {
                    // shrink toward the best vertex
                    for (int i = 1; i < 3; ++i) {
                        v[i] = make_vertex({(v[i].x[0] + v[0].x[0]) / 2.0,
                                            (v[i].x[1] + v[0].x[1]) / 2.0});
                        ++evals;
                    }
                }
            }
        }
        std::sort(v.begin(), v.end(), [](const Vertex& a, const Vertex& b) { return a.f > b.f; });
        return {v[0].x, v[0].f, converged};
    }

    Fn fn_;
    std::array<double, 2> lo_;
    std::array<double, 2> hi_;
};

struct OptResult1D {
    double x = 0.0;
    double f = 0.0;
    long evaluations = 0;
    bool converged = false;
};

// Grid seed followed by golden-section refinement of the bracketing cell.
template <typename Fn>
OptResult1D maximize_on_interval(Fn fn, double lo, double hi, int grid_points, double xtol) {
    OptResult1D res;
    auto eval = [&](double x) {
        ++res.evaluations;
        return fn(x);
    };

    int best_i = 0;
    double best_f = -HUGE_VAL;
    std::vector<double> xs(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
        double f = eval(xs[i]);
        if (f > best_f) {
            best_f = f;
            best_i = i;
        }
    }
    double a = xs[std::max(best_i - 1, 0)];
    double b = xs[std::min(best_i + 1, grid_points - 1)];

    const double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = eval(x1);
    double f2 = eval(x2);
    while (b - a > xtol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = eval(x2);
        }
    }
    res.x = f1 >= f2 ? x1 : x2;
    res.f = std::max(f1, f2);
    // keep the grid incumbent if refinement never improved on it
    if (best_f > res.f) {
        res.x = xs[best_i];
        res.f = best_f;
    }
    res.converged = true;
    return res;
}

}  // namespace putraffic::detail
