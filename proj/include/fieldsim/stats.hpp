#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "fieldsim/predictor.hpp"

namespace fieldsim::stats {

struct AccuracySummary {
  std::string strategy;
  std::string model_id;
  int repeats = 0;
  double mean_conclusion_accuracy = 0.0;
  double mean_paper_accuracy = 0.0;
  int n_conclusions = 0;
  int n_papers = 0;
};

struct Histogram {
  std::array<double, 11> bin_edges{};  // 0.0, 0.1, ..., 1.0
  std::array<long, 10> counts{};       // last bin closed on the right
};

/// Fraction of correct attempts.
double conclusion_accuracy(const std::vector<predictor::AttemptRecord>& attempts);

/// Unweighted mean of the conclusion accuracies within one paper.
double paper_accuracy(const std::vector<double>& conclusion_accuracies);

/// Aggregate over one (model, strategy, repeats) cell.
/// papers maps paper_id -> its conclusion accuracies.
AccuracySummary summarize_run(const std::map<std::string, std::vector<double>>& papers,
                              const std::string& strategy, const std::string& model_id,
                              int repeats);

/// Fixed-width histogram over [0,1] with 10 bins; lower bins half-open,
/// the final bin closed so 1.0 lands in it. Out-of-range values are errors.
Histogram histogram(const std::vector<double>& values);

/// Adjusted Fisher-Pearson sample skewness: g1 * sqrt(n(n-1)) / (n-2).
double skewness(const std::vector<double>& values);

struct YearRow {
  int year = 0;
  double mean_paper_accuracy = 0.0;
  int n_papers = 0;
};

/// Mean paper accuracy grouped by publication year, ascending.
std::vector<YearRow> accuracy_by_year(const std::vector<std::pair<int, double>>& year_accuracy);

}  // namespace fieldsim::stats
