#include "fieldsim/stats.hpp"

#include <cmath>

#include "fieldsim/errors.hpp"

namespace fieldsim::stats {

double conclusion_accuracy(const std::vector<predictor::AttemptRecord>& attempts) {
  if (attempts.empty()) throw PreconditionError("conclusion_accuracy: no attempts");
  long correct = 0;
  for (const auto& a : attempts) correct += a.correct ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(attempts.size());
}

double paper_accuracy(const std::vector<double>& conclusion_accuracies) {
  if (conclusion_accuracies.empty())
    throw PreconditionError("paper_accuracy: no conclusion accuracies");
  double sum = 0.0;
  for (double a : conclusion_accuracies) sum += a;
  return sum / static_cast<double>(conclusion_accuracies.size());
}

AccuracySummary summarize_run(const std::map<std::string, std::vector<double>>& papers,
                              const std::string& strategy, const std::string& model_id,
                              int repeats) {
  AccuracySummary s;
  s.strategy = strategy;
  s.model_id = model_id;
  s.repeats = repeats;
  double conclusion_sum = 0.0;
  double paper_sum = 0.0;
  for (const auto& [paper_id, accuracies] : papers) {
    (void)paper_id;
    for (double a : accuracies) {
      conclusion_sum += a;
      ++s.n_conclusions;
    }
    paper_sum += paper_accuracy(accuracies);
    ++s.n_papers;
  }
  if (s.n_conclusions > 0)
    s.mean_conclusion_accuracy = conclusion_sum / static_cast<double>(s.n_conclusions);
  if (s.n_papers > 0) s.mean_paper_accuracy = paper_sum / static_cast<double>(s.n_papers);
  return s;
}

Histogram histogram(const std::vector<double>& values) {
  Histogram h;
  for (int i = 0; i <= 10; ++i) h.bin_edges[static_cast<std::size_t>(i)] = i / 10.0;
  for (double v : values) {
    if (v < 0.0 || v > 1.0)
      throw PreconditionError("histogram: value out of [0,1]: " + std::to_string(v));
    // Compare against the stored edges so k/20-style ratios land in the bin
    // their decimal value suggests; 1.0 falls through to the closed top bin.
    std::size_t bin = 9;
    for (std::size_t b = 0; b < 9; ++b) {
      if (v < h.bin_edges[b + 1]) {
        bin = b;
        break;
      }
    }
    ++h.counts[bin];
  }
  return h;
}

double skewness(const std::vector<double>& values) {
  const auto n = static_cast<double>(values.size());
  if (values.size() < 3) throw PreconditionError("skewness: need at least 3 values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (m2 <= 0.0) throw PreconditionError("skewness: zero variance");
  const double g1 = m3 / std::pow(m2, 1.5);
  return g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
}

std::vector<YearRow> accuracy_by_year(const std::vector<std::pair<int, double>>& year_accuracy) {
  std::map<int, std::pair<double, int>> grouped;
  for (const auto& [year, accuracy] : year_accuracy) {
    auto& [sum, count] = grouped[year];
    sum += accuracy;
    ++count;
  }
  std::vector<YearRow> out;
  out.reserve(grouped.size());
  for (const auto& [year, agg] : grouped) {
    YearRow row;
    row.year = year;
    row.n_papers = agg.second;
    row.mean_paper_accuracy = agg.first / agg.second;
    out.push_back(row);
  }
  return out;
}

}  // namespace fieldsim::stats
