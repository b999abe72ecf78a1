#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "swd/signal_model.hpp"

namespace swd::classify {

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
};

enum class Kind { lda, qda, linear_svm };

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Symmetric 2x2 matrix [[a, b], [b, d]].
struct Sym2 {
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
};

/// Fitted two-class model on the (tau, p) plane. Gaussian fields serve
/// lda/qda (lda stores the pooled covariance in both slots); w/bias serve
/// the linear SVM.
struct ClassifierModel {
  Kind kind = Kind::lda;
  Vec2 mean_neg, mean_pos;
  Sym2 cov_neg, cov_pos;
  double log_prior_ratio = 0.0;  // ln(prior_pos / prior_neg)
  Vec2 w;
  double bias = 0.0;
};

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // threshold descending from +inf
  double auc = 0.0;
};

struct LoocvResult {
  ConfusionMatrix cm;
  std::size_t abstentions = 0;     // folds whose training set degenerated
  std::vector<double> scores;      // held-out score per input point (0 when abstained)
  std::vector<bool> predictions;   // held-out predicted class per input point
};

/// Fit one classifier kind. Requires >= 2 points per class; near-singular
/// covariances are diagonally regularized, escalating by decades until the
/// condition number drops below 1e12. Throws degenerate_class when a class
/// is too small or cannot be regularized.
ClassifierModel fit(Kind kind, const std::vector<FeaturePoint>& data);

/// Class decision plus a real score (Gaussian log-posterior ratio or signed
/// SVM margin); score 0 breaks toward non-SWD.
std::pair<bool, double> predict(const ClassifierModel& model, double tau,
                                double p);

/// n-fold leave-one-out. A fold whose training set loses its second point
/// of some class abstains, and the abstention is counted against the
/// held-out point's class. Throws too_short (n < 4) or single_class.
LoocvResult leave_one_out(Kind kind, const std::vector<FeaturePoint>& data);

/// (sensitivity, specificity) = (tp/(tp+fn), tn/(tn+fp)).
/// Throws undefined_metric when a denominator is zero; the message names
/// the metric.
std::pair<double, double> metrics(const ConfusionMatrix& cm);

enum class CiMethod { normal, wilson };

/// Normal-approximation (default) or Wilson score interval for a binomial
/// proportion, clamped to [0, 1].
std::pair<double, double> proportion_ci(double p_hat, std::uint64_t n,
                                        double level = 0.95,
                                        CiMethod method = CiMethod::normal);

/// Threshold sweep over (score, truth) pairs, descending from +inf; AUC by
/// the trapezoid rule. Throws single_class when one class is absent.
RocCurve roc(const std::vector<std::pair<double, bool>>& scores);

}  // namespace swd::classify
