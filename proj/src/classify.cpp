#include "swd/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "swd/error.hpp"
#include "swd/normal.hpp"

namespace swd::classify {
namespace {

constexpr double kMaxCondition = 1e12;

struct ClassStats {
  std::size_t n = 0;
  Vec2 mean;
  Sym2 scatter;  // sum of outer products of centered points
};

ClassStats class_stats(const std::vector<FeaturePoint>& data, bool swd) {
  ClassStats s;
  for (const auto& fp : data) {
    if (fp.swd != swd) continue;
    ++s.n;
    s.mean.x += fp.tau;
    s.mean.y += fp.p;
  }
  if (s.n == 0) return s;
  s.mean.x /= static_cast<double>(s.n);
  s.mean.y /= static_cast<double>(s.n);
  for (const auto& fp : data) {
    if (fp.swd != swd) continue;
    const double dx = fp.tau - s.mean.x;
    const double dy = fp.p - s.mean.y;
    s.scatter.a += dx * dx;
    s.scatter.b += dx * dy;
    s.scatter.d += dy * dy;
  }
  return s;
}

double det(const Sym2& m) { return m.a * m.d - m.b * m.b; }

/// Eigenvalue ratio of a symmetric 2x2; infinite when the small eigenvalue
/// is not strictly positive.
double condition(const Sym2& m) {
  const double mid = 0.5 * (m.a + m.d);
  const double off = 0.5 * (m.a - m.d);
  const double disc = std::sqrt(off * off + m.b * m.b);
  const double lo = mid - disc;
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return (mid + disc) / lo;
}

/// Diagonal loading until the matrix is comfortably invertible. The initial
/// bump is 1e-9 of the average variance, with an absolute floor so an
/// all-zero covariance (identical points) still becomes usable.
Sym2 regularize(const Sym2& cov) {
  if (condition(cov) <= kMaxCondition) return cov;
  const double trace = cov.a + cov.d;
  const double base = trace > 0.0 ? 0.5 * trace : 1.0;
  double eps = 1e-9 * base;
  for (int attempt = 0; attempt < 40; ++attempt) {
    Sym2 m = cov;
    m.a += eps;
    m.d += eps;
    if (condition(m) <= kMaxCondition) return m;
    eps *= 10.0;
  }
  raise(errc::degenerate_class,
        "covariance cannot be regularized to a usable conditioning");
}

Sym2 inverse(const Sym2& m) {
  const double dt = det(m);
  return Sym2{m.d / dt, -m.b / dt, m.a / dt};
}

/// (x - mu)^T M (x - mu) for symmetric M.
double quad_form(const Sym2& m, const Vec2& mu, double x, double y) {
  const double dx = x - mu.x;
  const double dy = y - mu.y;
  return m.a * dx * dx + 2.0 * m.b * dx * dy + m.d * dy * dy;
}

ClassifierModel fit_gaussian(Kind kind, const ClassStats& neg,
                             const ClassStats& pos) {
  ClassifierModel model;
  model.kind = kind;
  model.mean_neg = neg.mean;
  model.mean_pos = pos.mean;
  model.log_prior_ratio = std::log(static_cast<double>(pos.n) /
                                   static_cast<double>(neg.n));
  if (kind == Kind::lda) {
    const double denom = static_cast<double>(neg.n + pos.n - 2);
    Sym2 pooled{(neg.scatter.a + pos.scatter.a) / denom,
                (neg.scatter.b + pos.scatter.b) / denom,
                (neg.scatter.d + pos.scatter.d) / denom};
    pooled = regularize(pooled);
    model.cov_neg = pooled;
    model.cov_pos = pooled;
  } else {
    const auto per_class = [](const ClassStats& s) {
      const double denom = static_cast<double>(s.n - 1);
      return regularize(
          Sym2{s.scatter.a / denom, s.scatter.b / denom, s.scatter.d / denom});
    };
    model.cov_neg = per_class(neg);
    model.cov_pos = per_class(pos);
  }
  return model;
}

/// Full-batch subgradient descent on the hinge loss with L2 penalty
/// (lambda/2)|w|^2; eta_t = 1/(lambda t), 10000 iterations, projection onto
/// |w| <= 1/sqrt(lambda). No randomness anywhere, so refits are identical.
ClassifierModel fit_svm(const std::vector<FeaturePoint>& data) {
  constexpr double lambda = 0.01;
  constexpr int iterations = 10000;
  const double n = static_cast<double>(data.size());

  Vec2 w;
  double bias = 0.0;
  for (int t = 1; t <= iterations; ++t) {
    double gx = lambda * w.x, gy = lambda * w.y, gb = 0.0;
    for (const auto& fp : data) {
      const double y = fp.swd ? 1.0 : -1.0;
      const double margin = y * (w.x * fp.tau + w.y * fp.p + bias);
      if (margin < 1.0) {
        gx -= y * fp.tau / n;
        gy -= y * fp.p / n;
        gb -= y / n;
      }
    }
    const double eta = 1.0 / (lambda * static_cast<double>(t));
    w.x -= eta * gx;
    w.y -= eta * gy;
    bias -= eta * gb;
    const double norm = std::sqrt(w.x * w.x + w.y * w.y);
    const double cap = 1.0 / std::sqrt(lambda);
    if (norm > cap) {
      w.x *= cap / norm;
      w.y *= cap / norm;
    }
  }

  ClassifierModel model;
  model.kind = Kind::linear_svm;
  model.w = w;
  model.bias = bias;
  return model;
}

}  // namespace

ClassifierModel fit(Kind kind, const std::vector<FeaturePoint>& data) {
  const ClassStats neg = class_stats(data, false);
  const ClassStats pos = class_stats(data, true);
  if (neg.n < 2 || pos.n < 2)
    raise(errc::degenerate_class,
          "each class needs >= 2 points, got " + std::to_string(neg.n) +
              " non-SWD and " + std::to_string(pos.n) + " SWD");
  if (kind == Kind::linear_svm) return fit_svm(data);
  return fit_gaussian(kind, neg, pos);
}

std::pair<bool, double> predict(const ClassifierModel& model, double tau,
                                double p) {
  double score = 0.0;
  switch (model.kind) {
    case Kind::lda: {
      // Shared covariance: quadratic terms cancel, leaving a linear score.
      const Sym2 si = inverse(model.cov_pos);
      score = model.log_prior_ratio +
              0.5 * (quad_form(si, model.mean_neg, tau, p) -
                     quad_form(si, model.mean_pos, tau, p));
      break;
    }
    case Kind::qda: {
      const Sym2 si_neg = inverse(model.cov_neg);
      const Sym2 si_pos = inverse(model.cov_pos);
      score = model.log_prior_ratio +
              0.5 * (std::log(det(model.cov_neg)) -
                     std::log(det(model.cov_pos))) +
              0.5 * (quad_form(si_neg, model.mean_neg, tau, p) -
                     quad_form(si_pos, model.mean_pos, tau, p));
      break;
    }
    case Kind::linear_svm:
      score = model.w.x * tau + model.w.y * p + model.bias;
      break;
  }
  return {score > 0.0, score};
}

LoocvResult leave_one_out(Kind kind, const std::vector<FeaturePoint>& data) {
  if (data.size() < 4)
    raise(errc::too_short, "leave-one-out needs >= 4 points, got " +
                               std::to_string(data.size()));
  const auto count_swd = static_cast<std::size_t>(
      std::count_if(data.begin(), data.end(),
                    [](const FeaturePoint& fp) { return fp.swd; }));
  if (count_swd == 0 || count_swd == data.size())
    raise(errc::single_class, "leave-one-out needs both classes present");

  LoocvResult result;
  result.scores.resize(data.size(), 0.0);
  result.predictions.resize(data.size(), false);
  std::vector<FeaturePoint> train;
  train.reserve(data.size() - 1);
  for (std::size_t hold = 0; hold < data.size(); ++hold) {
    train.clear();
    for (std::size_t i = 0; i < data.size(); ++i)
      if (i != hold) train.push_back(data[i]);

    bool swd_pred;
    double score;
    try {
      const ClassifierModel model = fit(kind, train);
      std::tie(swd_pred, score) = predict(model, data[hold].tau, data[hold].p);
    } catch (const Error& e) {
      if (e.code() != errc::degenerate_class) throw;
      ++result.abstentions;
      swd_pred = !data[hold].swd;  // abstention scores against the held-out class
      score = 0.0;
    }

    result.scores[hold] = score;
    result.predictions[hold] = swd_pred;
    if (data[hold].swd) {
      if (swd_pred)
        ++result.cm.tp;
      else
        ++result.cm.fn;
    } else {
      if (swd_pred)
        ++result.cm.fp;
      else
        ++result.cm.tn;
    }
  }
  return result;
}

std::pair<double, double> metrics(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fn == 0)
    raise(errc::undefined_metric, "sensitivity undefined: tp + fn = 0");
  if (cm.tn + cm.fp == 0)
    raise(errc::undefined_metric, "specificity undefined: tn + fp = 0");
  const double sens = static_cast<double>(cm.tp) /
                      static_cast<double>(cm.tp + cm.fn);
  const double spec = static_cast<double>(cm.tn) /
                      static_cast<double>(cm.tn + cm.fp);
  return {sens, spec};
}

std::pair<double, double> proportion_ci(double p_hat, std::uint64_t n,
                                        double level, CiMethod method) {
  if (!(p_hat >= 0.0 && p_hat <= 1.0))
    raise(errc::invalid_param, "proportion_ci: p_hat must lie in [0, 1]");
  if (n == 0) raise(errc::invalid_param, "proportion_ci: n must be >= 1");
  if (!(level > 0.0 && level < 1.0))
    raise(errc::invalid_param, "proportion_ci: level must lie in (0, 1)");

  const double z = inv_normal_cdf(1.0 - 0.5 * (1.0 - level));
  const double dn = static_cast<double>(n);
  double lo, hi;
  if (method == CiMethod::normal) {
    const double half = z * std::sqrt(p_hat * (1.0 - p_hat) / dn);
    lo = p_hat - half;
    hi = p_hat + half;
  } else {
    const double z2 = z * z;
    const double center = (p_hat + z2 / (2.0 * dn)) / (1.0 + z2 / dn);
    const double half = z / (1.0 + z2 / dn) *
                        std::sqrt(p_hat * (1.0 - p_hat) / dn +
                                  z2 / (4.0 * dn * dn));
    lo = center - half;
    hi = center + half;
    // At the boundary proportions center == half analytically; pin the
    // cancellation so the interval endpoint is exact.
    if (p_hat == 0.0) lo = 0.0;
    if (p_hat == 1.0) hi = 1.0;
  }
  return {std::clamp(lo, 0.0, 1.0), std::clamp(hi, 0.0, 1.0)};
}

RocCurve roc(const std::vector<std::pair<double, bool>>& scores) {
  std::uint64_t num_pos = 0, num_neg = 0;
  for (const auto& [score, truth] : scores) {
    (void)score;
    if (truth)
      ++num_pos;
    else
      ++num_neg;
  }
  if (num_pos == 0 || num_neg == 0)
    raise(errc::single_class, "roc needs scores from both classes");

  std::vector<std::pair<double, bool>> sorted = scores;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  RocCurve curve;
  curve.points.push_back(
      {std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::uint64_t tp = 0, fp = 0;
  double prev_fpr = 0.0, prev_tpr = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double threshold = sorted[i].first;
    // Consume the whole group of equal scores: the sweep moves between
    // distinct thresholds only.
    while (i < sorted.size() && sorted[i].first == threshold) {
      if (sorted[i].second)
        ++tp;
      else
        ++fp;
      ++i;
    }
    const double tpr = static_cast<double>(tp) / static_cast<double>(num_pos);
    const double fpr = static_cast<double>(fp) / static_cast<double>(num_neg);
    curve.points.push_back({threshold, fpr, tpr});
    curve.auc += (fpr - prev_fpr) * 0.5 * (tpr + prev_tpr);
    prev_fpr = fpr;
    prev_tpr = tpr;
  }
  return curve;
}

}  // namespace swd::classify
