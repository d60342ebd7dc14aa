#include "iontomo/optim.hpp"

#include <algorithm>
#include <numeric>

namespace iontomo {

namespace {

// One simplex run; standard coefficients with adaptive shrink for small dims.
OptimResult simplex_once(const Objective& f, const Eigen::VectorXd& x0, double step,
                         const NelderMeadOptions& opt) {
  const int n = static_cast<int>(x0.size());
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  std::vector<Eigen::VectorXd> x(n + 1, x0);
  std::vector<double> fx(n + 1);
  for (int i = 0; i < n; ++i) x[i + 1](i) += step;
  long long evals = 0;
  for (int i = 0; i <= n; ++i) {
    fx[i] = f(x[i]);
    ++evals;
  }

  std::vector<int> idx(n + 1);
  OptimResult res;
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    {
      std::vector<Eigen::VectorXd> xs(n + 1);
      std::vector<double> fs(n + 1);
      for (int i = 0; i <= n; ++i) {
        xs[i] = x[idx[i]];
        fs[i] = fx[idx[i]];
      }
      x.swap(xs);
      fx.swap(fs);
    }

    double spread = 0.0;
    for (int i = 1; i <= n; ++i) spread = std::max(spread, (x[i] - x[0]).cwiseAbs().maxCoeff());
    if (spread < opt.xtol && std::abs(fx[n] - fx[0]) < opt.ftol * (1.0 + std::abs(fx[0]))) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += x[i];
    centroid /= n;

    const Eigen::VectorXd xr = centroid + alpha * (centroid - x[n]);
    const double fr = f(xr);
    ++evals;
    if (fr < fx[0]) {
      const Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        x[n] = xe;
        fx[n] = fe;
      } else {
        x[n] = xr;
        fx[n] = fr;
      }
    } else if (fr < fx[n - 1]) {
      x[n] = xr;
      fx[n] = fr;
    } else {
      const bool outside = fr < fx[n];
      const Eigen::VectorXd base = outside ? xr : x[n];
      const Eigen::VectorXd xc = centroid + rho * (base - centroid);
      const double fc = f(xc);
      ++evals;
      if (fc < std::min(fr, fx[n])) {
        x[n] = xc;
        fx[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          x[i] = x[0] + sigma * (x[i] - x[0]);
          fx[i] = f(x[i]);
          ++evals;
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (fx[i] < fx[best]) best = i;
  res.x = x[best];
  res.f = fx[best];
  res.evals = evals;
  return res;
}

}  // namespace

OptimResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0,
                        const NelderMeadOptions& opt) {
  OptimResult best = simplex_once(f, x0, opt.init_step, opt);
  double step = opt.init_step;
  for (int r = 0; r < opt.restarts; ++r) {
    step *= 0.1;
    OptimResult next = simplex_once(f, best.x, step, opt);
    next.evals += best.evals;
    next.converged = next.converged || best.converged;
    if (next.f < best.f) {
      const double gain = best.f - next.f;
      best = next;
      if (gain < opt.ftol) break;
    } else {
      best.evals = next.evals;
      break;
    }
  }
  return best;
}

OptimResult multistart_nelder_mead(const Objective& f, const std::vector<Eigen::VectorXd>& starts,
                                   const NelderMeadOptions& opt) {
  OptimResult best;
  bool have = false;
  for (const auto& s : starts) {
    OptimResult r = nelder_mead(f, s, opt);
    if (!have || r.f < best.f) {  // strict: ties keep the earlier start
      r.evals += have ? best.evals : 0;
      best = r;
      have = true;
    } else {
      best.evals += r.evals;
    }
  }
  return best;
}

Objective clip_to_box(const Objective& f, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  return [f, lo, hi](const Eigen::VectorXd& x) {
    return f(x.cwiseMax(lo).cwiseMin(hi));
  };
}

}  // namespace iontomo
