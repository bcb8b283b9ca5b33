#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "fieldsim/annotator.hpp"
#include "fieldsim/linalg.hpp"

namespace fieldsim::regression {

inline constexpr std::size_t kRegressors = 15;  // constant + 7 topics + 7 interactions

/// Column order of the design matrix.
const std::array<std::string, kRegressors>& regressor_names();

struct DesignMatrix {
  Matrix x;                  // n x 15
  std::vector<double> y;     // conclusion accuracy, fraction in [0,1]
  int excluded_refused = 0;  // Refused annotations dropped while building
};

/// Builds the design matrix from Labeled annotations and per-conclusion
/// accuracies. Topics enter as fractions (percentage / 100); gender interacts
/// with favorability, the other six topics with sentiment.
DesignMatrix build_design_matrix(
    const std::vector<annotator::AnnotationRecord>& annotations,
    const std::map<std::string, double>& conclusion_accuracy);

struct OlsResult {
  std::array<double, kRegressors> coefficients{};
  std::array<double, kRegressors> standard_errors{};
  std::array<double, kRegressors> t_stats{};
  std::array<double, kRegressors> p_values{};  // two-sided
  std::vector<double> residuals;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  double f_stat = 0.0;
  double f_pvalue = 0.0;
  std::size_t n = 0;
  std::size_t k = kRegressors - 1;  // regressors excluding the constant
  double condition_number = 0.0;
  bool minimum_norm = false;  // fitted through the pseudoinverse route
};

/// Strict OLS fit through pivoted QR. Rank deficiency raises
/// RankDeficiencyError naming the dependent columns and the condition number.
OlsResult ols_fit(const DesignMatrix& design);

/// Minimum-norm OLS through the eigenvalue pseudoinverse of X'X, for designs
/// that are structurally collinear (all topic fractions summing to one with a
/// constant present). The ill-posedness is surfaced through condition_number
/// and minimum_norm; nothing is silently dropped.
OlsResult ols_fit_minimum_norm(const DesignMatrix& design);

/// 1 - (1 - r2) * (n - 1) / (n - k - 1).
double adjusted_r2(double r2, std::size_t n, std::size_t k);

/// (r2 / k) / ((1 - r2) / (n - k - 1)).
double f_from_r2(double r2, std::size_t n, std::size_t k);

/// Significance stars: *** p<0.01, ** p<0.05, * p<0.1, empty otherwise.
std::string significance_stars(double p_value);

}  // namespace fieldsim::regression
