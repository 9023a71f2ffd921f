#pragma once

#include <span>
#include <string>
#include <vector>

namespace signalcast {

struct ScoredRow {
  double score = 0;
  int label = 0;
  double weight = 1;
};

/// Weighted Mann-Whitney AUC: over all (positive, negative) pairs, the
/// weight product scores 1 when the positive ranks higher and 0.5 on a tie,
/// normalised by the total weight product. Throws Error(kInput) unless both
/// labels are present.
double auc(std::span<const ScoredRow> rows);

enum class SignificanceMethod { kPairedT, kCorrectedResampledT };
SignificanceMethod parse_significance_method(std::string_view text);
const char* significance_method_name(SignificanceMethod m);

struct Comparison {
  double mean_difference = 0;  // mean(a - b)
  double t_statistic = 0;
  double p_value = 1;
  bool significant = false;
};

/// Two-tailed paired t-test on a - b at alpha = 0.05. The corrected variant
/// scales the variance by (1/n + test_train_ratio). With zero variance the
/// result is significant iff the mean difference is non-zero (p = 0),
/// otherwise p = 1.
Comparison compare(std::span<const double> a, std::span<const double> b, SignificanceMethod method,
                   double test_train_ratio = 1.0 / 9.0);

/// Two-tailed Student-t tail probability for |t| with `df` degrees of freedom.
double student_t_two_tailed_p(double t, double df);

}  // namespace signalcast
