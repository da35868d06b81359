#pragma once

#include <functional>
#include <vector>

namespace hawkesn::opt {

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    [[nodiscard]] std::vector<double> clamp(std::vector<double> x) const;
};

/// Objective callback: returns f(x) and fills grad (same length as x).
using ObjectiveGrad = std::function<double(const std::vector<double>&, std::vector<double>&)>;

/// Value-only objective; gradient obtained by central differences.
using Objective = std::function<double(const std::vector<double>&)>;

struct MinimizeOptions {
    double f_tol = 1e-8;        // relative |df| stop
    double g_tol = 1e-7;        // projected-gradient infinity norm stop
    int max_iterations = 500;
    int history = 10;           // L-BFGS memory
};

struct MinimizeResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Box-constrained minimization: L-BFGS two-loop direction, projection onto
/// the box, Armijo backtracking; falls back to projected steepest descent
/// when the quasi-Newton step stalls near active bounds.
[[nodiscard]] MinimizeResult minimize(const ObjectiveGrad& fg, std::vector<double> x0,
                                      const Box& box, const MinimizeOptions& opts = {});

[[nodiscard]] ObjectiveGrad with_numeric_gradient(Objective f, double rel_step = 1e-6);

}  // namespace hawkesn::opt
