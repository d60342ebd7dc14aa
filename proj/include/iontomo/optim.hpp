#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace iontomo {

struct NelderMeadOptions {
  int max_iter = 4000;
  double xtol = 1e-9;
  double ftol = 1e-12;
  double init_step = 0.2;
  // restart with a fresh simplex at the incumbent until no improvement
  int restarts = 3;
};

struct OptimResult {
  Eigen::VectorXd x;
  double f = 0.0;
  long long evals = 0;
  bool converged = false;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

OptimResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                        const NelderMeadOptions& opt = {});

// Runs nelder_mead from each start, returns the best result; ties broken by
// start index so parallel evaluation stays deterministic.
OptimResult multistart_nelder_mead(const Objective& f, const std::vector<Eigen::VectorXd>& starts,
                                   const NelderMeadOptions& opt = {});

// Wraps f so evaluation points are projected onto [lo, hi] box coordinates.
Objective clip_to_box(const Objective& f, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

}  // namespace iontomo
