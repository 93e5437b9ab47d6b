// Copyright 2026 The qzo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qzo/algorithms.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace qzo {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be nonnegative and finite");
  }
}

}  // namespace

void QgfmParams::validate() const {
  require_positive(eta, "eta");
  require_positive(sigma1_sq, "sigma1_sq");
  if (T < 1) throw std::invalid_argument("T must be >= 1");
}

void QgfmPlusParams::validate() const {
  require_positive(eta, "eta");
  require_positive(sigma1_sq, "sigma1_sq");
  require_nonnegative(kappa, "kappa");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in (0, 1]");
  if (T < 1) throw std::invalid_argument("T must be >= 1");
}

QgfmParams derive_params_qgfm(int d, double L, double delta, double eps, double Delta) {
  if (d <= 0) throw std::invalid_argument("d must be positive");
  require_positive(L, "L");
  require_positive(delta, "delta");
  require_positive(eps, "eps");
  require_nonnegative(Delta, "Delta");
  const double sd = std::sqrt(static_cast<double>(d));
  QgfmParams p;
  p.eta = delta / (2.0 * sd * L);
  p.sigma1_sq = eps * eps / 2.0;
  p.T = stable_ceil(2.0 / (eps * eps) * (4.0 * sd * L * L + 2.0 * sd * L * Delta / delta));
  p.T = std::max<std::int64_t>(p.T, 1);
  return p;
}

QgfmPlusParams derive_params_qgfm_plus(int d, double L, double delta, double eps,
                                       double Delta) {
  if (d <= 0) throw std::invalid_argument("d must be positive");
  require_positive(L, "L");
  require_positive(delta, "delta");
  require_positive(eps, "eps");
  require_nonnegative(Delta, "Delta");
  if (eps > L) throw std::invalid_argument("eps > L would make the coin probability exceed 1");
  const double sd = std::sqrt(static_cast<double>(d));
  const double L_delta = sd * L / delta;
  QgfmPlusParams p;
  p.eta = delta / (2.0 * sd * L);
  p.p = std::min(1.0, std::cbrt((eps / L) * (eps / L)));
  p.sigma1_sq = eps * eps / 2.0;
  p.kappa = std::cbrt(eps * eps) * std::pow(L, 4.0 / 3.0) * d / (delta * delta);
  p.T = stable_ceil(8.0 * L_delta / (eps * eps) * (Delta + 2.0 * delta * L) + 4.0 / p.p);
  p.T = std::max<std::int64_t>(p.T, 1);
  return p;
}

QgfmPlusParams derive_params_qgm_plus(double l, double sigma, double eps, double Delta,
                                      int d) {
  if (d <= 0) throw std::invalid_argument("d must be positive");
  require_positive(l, "l");
  require_nonnegative(sigma, "sigma");
  require_positive(eps, "eps");
  require_nonnegative(Delta, "Delta");
  QgfmPlusParams p;
  p.eta = 1.0 / (2.0 * l);
  p.sigma1_sq = eps * eps / 2.0;
  if (sigma == 0.0) {
    p.p = 1.0;
    p.kappa = 0.0;
    p.T = stable_ceil(8.0 * l * Delta / (eps * eps));
  } else {
    if (eps > sigma) {
      throw std::invalid_argument("eps > sigma would make the coin probability exceed 1");
    }
    const double s23 = std::cbrt(sigma * sigma);
    p.p = std::cbrt(eps * eps) / s23;
    p.kappa = l * l * std::cbrt(eps * eps) / s23;
    p.T = stable_ceil(8.0 * l * Delta / (eps * eps) + 4.0 * s23 / std::pow(eps, 4.0 / 3.0));
  }
  p.T = std::max<std::int64_t>(p.T, 1);
  return p;
}

namespace {

struct Track {
  std::function<GradEstimate(const Vector&, RandomStream&, QueryLedger&)> full;
  std::function<GradEstimate(const Vector&, const Vector&, double, RandomStream&,
                             QueryLedger&)>
      diff;
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  double f_star = 0.0;
};

double potential(const Track& track, const Vector& x, const Vector& g, double eta,
                 double p, double* true_grad_norm) {
  const Vector truth = track.gradient(x);
  *true_grad_norm = truth.norm();
  return track.value(x) - track.f_star + eta / (2.0 * p) * (g - truth).squaredNorm();
}

// Variance-reduced loop. With p = 1 every step draws a full estimate, which
// is plain descent with the same estimator stream.
RunResult run_loop(const Track& track, const VectorRef& x0, const QgfmPlusParams& params,
                   bool flip_coins, std::uint64_t seed, const RunOptions& options) {
  RandomStream root(seed, "run");
  RandomStream estimator = root.split("estimator");
  RandomStream coin_stream = root.split("coin");
  RandomStream out_stream = root.split("x_out");

  RunResult result;
  result.seed = seed;
  result.out_index = static_cast<std::int64_t>(
      out_stream.below(static_cast<std::uint64_t>(params.T)));

  Vector x = x0;
  result.x_out = x;
  result.ledger.set_phase("full");
  Vector g = track.full(x, estimator, result.ledger).value;
  const double sqrt_kappa = std::sqrt(params.kappa);
  std::int64_t charged_before = 0;

  for (std::int64_t t = 0; t < params.T; ++t) {
    if (t == result.out_index) result.x_out = x;
    TraceRecord rec;
    if (options.trace) {
      rec.t = t;
      rec.grad_norm = g.norm();
      rec.phi = potential(track, x, g, params.eta, params.p, &rec.true_grad_norm);
    }
    Vector x_next = x - params.eta * g;
    const double step = (x_next - x).norm();
    int coin = -1;
    if (t + 1 < params.T) {
      const bool heads = !flip_coins || coin_stream.bernoulli(params.p);
      if (flip_coins) coin = heads ? 1 : 0;
      if (heads) {
        result.ledger.set_phase("full");
        g = track.full(x_next, estimator, result.ledger).value;
      } else {
        result.ledger.set_phase("diff");
        g += track.diff(x_next, x, sqrt_kappa * step, estimator, result.ledger).value;
      }
    }
    if (options.trace) {
      rec.step_norm = step;
      rec.coin = coin;
      rec.charge = result.ledger.totals().total() - charged_before;
      result.trace.push_back(rec);
    }
    charged_before = result.ledger.totals().total();
    x = std::move(x_next);
    result.iterations = t + 1;
    if (charged_before > options.budget) {
      result.aborted = true;
      break;
    }
  }
  result.x_last = x;
  return result;
}

void check_start(const ObjectiveSpec& spec, const VectorRef& x0) {
  if (x0.size() != spec.d) throw std::invalid_argument("start point has wrong dimension");
}

Track smoothed_track(const ObjectiveSpec& spec, const SmoothingParams& smoothing,
                     const CostModel& model, double sigma1) {
  Track track;
  track.full = [&spec, &smoothing, &model, sigma1](const Vector& x, RandomStream& rng,
                                                   QueryLedger& ledger) {
    return estimate_grad(spec, x, smoothing, sigma1, model, rng, ledger);
  };
  track.diff = [&spec, &smoothing, &model](const Vector& x, const Vector& y, double s,
                                           RandomStream& rng, QueryLedger& ledger) {
    return estimate_grad_diff(spec, x, y, smoothing, s, model, rng, ledger);
  };
  track.value = [&spec, &smoothing](const Vector& x) {
    if (!spec.has_closed_f_delta) return std::numeric_limits<double>::quiet_NaN();
    RandomStream unused(0, "unused");
    return f_delta(spec, x, smoothing, FDeltaMode::closed(), unused).value;
  };
  track.gradient = [&spec, &smoothing](const Vector& x) {
    if (!spec.has_closed_f_delta) {
      return Vector(Vector::Constant(spec.d, std::numeric_limits<double>::quiet_NaN()));
    }
    return grad_f_delta_exact(spec, x, smoothing);
  };
  track.f_star = spec.f_star;
  return track;
}

void attach_residual(const ObjectiveSpec& spec, const SmoothingParams& smoothing,
                     const RunOptions& options, RunResult& result) {
  if (options.residual_samples <= 0) return;
  RandomStream rng = RandomStream(result.seed, "run").split("residual");
  result.residual = goldstein_residual(spec, result.x_out, smoothing,
                                       options.residual_samples,
                                       options.residual_confidence, rng);
}

}  // namespace

RunResult qgfm(const ObjectiveSpec& spec, const VectorRef& x0, const QgfmParams& params,
               const SmoothingParams& smoothing, const CostModel& model,
               std::uint64_t seed, const RunOptions& options) {
  params.validate();
  smoothing.validate();
  model.validate();
  check_start(spec, x0);
  const Track track = smoothed_track(spec, smoothing, model, std::sqrt(params.sigma1_sq));
  QgfmPlusParams plain;
  plain.eta = params.eta;
  plain.T = params.T;
  plain.p = 1.0;
  plain.sigma1_sq = params.sigma1_sq;
  RunResult result = run_loop(track, x0, plain, /*flip_coins=*/false, seed, options);
  attach_residual(spec, smoothing, options, result);
  return result;
}

RunResult qgfm_plus(const ObjectiveSpec& spec, const VectorRef& x0,
                    const QgfmPlusParams& params, const SmoothingParams& smoothing,
                    const CostModel& model, std::uint64_t seed,
                    const RunOptions& options) {
  params.validate();
  smoothing.validate();
  model.validate();
  check_start(spec, x0);
  const Track track = smoothed_track(spec, smoothing, model, std::sqrt(params.sigma1_sq));
  RunResult result = run_loop(track, x0, params, /*flip_coins=*/true, seed, options);
  attach_residual(spec, smoothing, options, result);
  return result;
}

RunResult qgm_plus(const ObjectiveSpec& spec, const VectorRef& x0,
                   const QgfmPlusParams& params, const CostModel& model,
                   std::uint64_t seed, const RunOptions& options) {
  if (!spec.smooth_params) {
    throw std::invalid_argument("qgm_plus needs a smooth spec: " + spec.name);
  }
  params.validate();
  model.validate();
  check_start(spec, x0);
  const double sigma1 = std::sqrt(params.sigma1_sq);
  Track track;
  track.full = [&spec, &model, sigma1](const Vector& x, RandomStream& rng,
                                       QueryLedger& ledger) {
    return estimate_sgrad(spec, x, sigma1, model, rng, ledger);
  };
  track.diff = [&spec, &model](const Vector& x, const Vector& y, double s,
                               RandomStream& rng, QueryLedger& ledger) {
    return estimate_sgrad_diff(spec, x, y, s, model, rng, ledger);
  };
  track.value = [&spec](const Vector& x) { return eval_f(spec, x); };
  track.gradient = [&spec](const Vector& x) { return grad_f(spec, x); };
  track.f_star = spec.f_star;

  RunResult result = run_loop(track, x0, params, /*flip_coins=*/true, seed, options);
  ResidualReport report;
  report.point = result.x_out;
  report.estimate = grad_f(spec, result.x_out).norm();
  report.half_width = 0.0;
  report.confidence = 1.0;
  report.n = 0;
  report.exact = report.estimate;
  result.residual = report;
  return result;
}

}  // namespace qzo
