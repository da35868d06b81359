#include "hawkesn/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace hawkesn::opt {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double inf_norm(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

std::vector<double> Box::clamp(std::vector<double> x) const {
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::clamp(x[k], lo[k], hi[k]);
    return x;
}

MinimizeResult minimize(const ObjectiveGrad& fg, std::vector<double> x0, const Box& box,
                        const MinimizeOptions& opts) {
    const std::size_t dim = x0.size();
    if (box.lo.size() != dim || box.hi.size() != dim)
        throw std::invalid_argument("bounds dimension mismatch");

    std::vector<double> x = box.clamp(std::move(x0));
    std::vector<double> g(dim), g_new(dim);
    double f = fg(x, g);

    std::deque<std::pair<std::vector<double>, std::vector<double>>> mem;  // (s, y)
    MinimizeResult res;

    const auto projected_grad_norm = [&](const std::vector<double>& xx,
                                         const std::vector<double>& gg) {
        double m = 0.0;
        for (std::size_t k = 0; k < dim; ++k)
            m = std::max(m, std::abs(std::clamp(xx[k] - gg[k], box.lo[k], box.hi[k]) - xx[k]));
        return m;
    };

    // Attempts one backtracking line search along d from x; updates x, g, f
    // and returns the achieved decrease, or nan when no acceptable step exists.
    const auto line_search = [&](const std::vector<double>& d) {
        double x_scale = 1.0;
        for (double v : x) x_scale = std::max(x_scale, std::abs(v));
        double step = 1.0;
        for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
            std::vector<double> xt(dim);
            std::vector<double> dx(dim);
            double move = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                xt[j] = std::clamp(x[j] + step * d[j], box.lo[j], box.hi[j]);
                dx[j] = xt[j] - x[j];
                move = std::max(move, std::abs(dx[j]));
            }
            if (move < 1e-14 * x_scale) break;
            const double ft = fg(xt, g_new);
            if (std::isfinite(ft) && ft <= f + 1e-4 * std::min(0.0, dot(g, dx))) {
                std::vector<double> s(dim), y(dim);
                for (std::size_t j = 0; j < dim; ++j) {
                    s[j] = dx[j];
                    y[j] = g_new[j] - g[j];
                }
                const double sy = dot(s, y);
                if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
                    mem.emplace_back(std::move(s), std::move(y));
                    if (mem.size() > static_cast<std::size_t>(opts.history)) mem.pop_front();
                }
                const double df = f - ft;
                x = std::move(xt);
                g = g_new;
                f = ft;
                return df;
            }
        }
        return std::numeric_limits<double>::quiet_NaN();
    };

    int it = 0;
    while (it < opts.max_iterations) {
        if (!std::isfinite(f)) break;
        if (projected_grad_norm(x, g) < opts.g_tol) {
            res.converged = true;
            break;
        }
        ++it;

        // L-BFGS two-loop recursion
        std::vector<double> d = g;
        std::vector<double> alpha(mem.size());
        for (std::size_t k = mem.size(); k-- > 0;) {
            const auto& [s, y] = mem[k];
            const double rho = 1.0 / dot(y, s);
            alpha[k] = rho * dot(s, d);
            for (std::size_t j = 0; j < dim; ++j) d[j] -= alpha[k] * y[j];
        }
        if (!mem.empty()) {
            const auto& [s, y] = mem.back();
            const double scale = dot(s, y) / dot(y, y);
            for (auto& v : d) v *= scale;
        }
        for (std::size_t k = 0; k < mem.size(); ++k) {
            const auto& [s, y] = mem[k];
            const double rho = 1.0 / dot(y, s);
            const double beta = rho * dot(y, d);
            for (std::size_t j = 0; j < dim; ++j) d[j] += (alpha[k] - beta) * s[j];
        }
        for (auto& v : d) v = -v;

        double df = line_search(d);
        if (std::isnan(df)) {
            // quasi-Newton step stalled near an active bound: restart from the
            // projected steepest-descent direction
            mem.clear();
            const double gnorm = inf_norm(g);
            const double scale = gnorm > 0.0 ? 1.0 / gnorm : 1.0;
            for (std::size_t j = 0; j < dim; ++j) d[j] = -g[j] * scale;
            df = line_search(d);
        }
        if (std::isnan(df)) {
            res.converged = true;  // no descent along the gradient either
            break;
        }
        if (df <= opts.f_tol * std::max(1.0, std::abs(f))) {
            res.converged = true;
            break;
        }
    }

    res.x = std::move(x);
    res.f = f;
    res.iterations = it;
    return res;
}

ObjectiveGrad with_numeric_gradient(Objective f, double rel_step) {
    return [f = std::move(f), rel_step](const std::vector<double>& x, std::vector<double>& g) {
        const double fx = f(x);
        std::vector<double> xp = x;
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double h = rel_step * std::max(1.0, std::abs(x[k]));
            xp[k] = x[k] + h;
            const double fp = f(xp);
            xp[k] = x[k] - h;
            const double fm = f(xp);
            xp[k] = x[k];
            g[k] = (fp - fm) / (2.0 * h);
        }
        return fx;
    };
}

}  // namespace hawkesn::opt
