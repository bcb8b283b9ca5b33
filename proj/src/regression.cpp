#include "fieldsim/regression.hpp"

#include <cmath>

#include "fieldsim/errors.hpp"
#include "fieldsim/special_functions.hpp"

namespace fieldsim::regression {

const std::array<std::string, kRegressors>& regressor_names() {
  static const std::array<std::string, kRegressors> kNames = {
      "Constant",
      "Gender",
      "Ethnicity",
      "Social Norms",
      "Ethical Dilemmas",
      "Age",
      "Socioeconomic Status",
      "Other Topics",
      "Gender x Favorability",
      "Ethnicity x Sentiment",
      "Social Norms x Sentiment",
      "Ethical Dilemmas x Sentiment",
      "Age x Sentiment",
      "Socioeconomic Status x Sentiment",
      "Other Topics x Sentiment"};
  return kNames;
}

DesignMatrix build_design_matrix(
    const std::vector<annotator::AnnotationRecord>& annotations,
    const std::map<std::string, double>& conclusion_accuracy) {
  std::vector<const annotator::AnnotationRecord*> labeled;
  int refused = 0;
  for (const auto& a : annotations) {
    if (a.status == annotator::AnnotationStatus::Refused) {
      ++refused;
      continue;
    }
    labeled.push_back(&a);
  }

  DesignMatrix design;
  design.excluded_refused = refused;
  design.x = Matrix(labeled.size(), kRegressors);
  design.y.resize(labeled.size());

  for (std::size_t row = 0; row < labeled.size(); ++row) {
    const annotator::AnnotationRecord& a = *labeled[row];
    auto it = conclusion_accuracy.find(a.conclusion_id);
    if (it == conclusion_accuracy.end())
      throw PreconditionError("build_design_matrix: no accuracy for conclusion " +
                              a.conclusion_id);
    const double accuracy = it->second;
    if (accuracy < 0.0 || accuracy > 1.0)
      throw PreconditionError("build_design_matrix: accuracy out of [0,1] for conclusion " +
                              a.conclusion_id);

    design.x(row, 0) = 1.0;
    for (std::size_t t = 0; t < 7; ++t)
      design.x(row, 1 + t) = a.topics.components[t] / 100.0;
    // Gender pairs with the favorability label, the rest with sentiment.
    design.x(row, 8) = design.x(row, 1) * a.gender_favorability;
    for (std::size_t t = 1; t < 7; ++t)
      design.x(row, 8 + t) = design.x(row, 1 + t) * a.sentiment;
    design.y[row] = accuracy;
  }
  return design;
}

namespace {

void fill_inference(OlsResult& result, const DesignMatrix& design, const Matrix& xtx_inv) {
  const std::size_t n = design.y.size();
  const std::size_t p = kRegressors;
  const std::size_t df = n - p;

  std::vector<double> beta(result.coefficients.begin(), result.coefficients.end());
  const std::vector<double> fitted = design.x.multiply_vec(beta);
  result.residuals.resize(n);
  double rss = 0.0;
  double y_mean = 0.0;
  for (double v : design.y) y_mean += v;
  y_mean /= static_cast<double>(n);
  double tss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    result.residuals[i] = design.y[i] - fitted[i];
    rss += result.residuals[i] * result.residuals[i];
    tss += (design.y[i] - y_mean) * (design.y[i] - y_mean);
  }

  const double sigma2 = rss / static_cast<double>(df);
  for (std::size_t j = 0; j < p; ++j) {
    result.standard_errors[j] = std::sqrt(sigma2 * xtx_inv(j, j));
    if (result.standard_errors[j] > 0.0) {
      result.t_stats[j] = result.coefficients[j] / result.standard_errors[j];
      result.p_values[j] =
          2.0 * student_t_sf(std::fabs(result.t_stats[j]), static_cast<int>(df));
    } else {
      result.t_stats[j] = 0.0;
      result.p_values[j] = 1.0;
    }
  }

  result.n = n;
  result.r2 = tss > 0.0 ? 1.0 - rss / tss : 0.0;
  result.adj_r2 = adjusted_r2(result.r2, n, result.k);
  result.f_stat = f_from_r2(result.r2, n, result.k);
  result.f_pvalue =
      f_sf(result.f_stat, static_cast<int>(result.k), static_cast<int>(n - result.k - 1));
}

}  // namespace

OlsResult ols_fit(const DesignMatrix& design) {
  const std::size_t n = design.y.size();
  if (n <= kRegressors)
    throw PreconditionError("ols_fit: need more than " + std::to_string(kRegressors) +
                            " observations, got " + std::to_string(n));

  const PivotedQr qr(design.x);
  if (!qr.full_rank()) {
    std::vector<std::string> names;
    for (std::size_t col : qr.deficient_columns()) names.push_back(regressor_names()[col]);
    std::string joined;
    for (const std::string& name : names) {
      if (!joined.empty()) joined += ", ";
      joined += name;
    }
    throw RankDeficiencyError(
        "ols_fit: design matrix is rank deficient; dependent columns: " + joined +
            " (condition estimate " + std::to_string(qr.condition_estimate()) + ")",
        std::move(names), qr.condition_estimate());
  }

  OlsResult result;
  const std::vector<double> beta = qr.solve(design.y);
  for (std::size_t j = 0; j < kRegressors; ++j) result.coefficients[j] = beta[j];
  result.condition_number = qr.condition_estimate();
  fill_inference(result, design, qr.xtx_inverse());
  return result;
}

OlsResult ols_fit_minimum_norm(const DesignMatrix& design) {
  const std::size_t n = design.y.size();
  if (n <= kRegressors)
    throw PreconditionError("ols_fit_minimum_norm: need more than " +
                            std::to_string(kRegressors) + " observations");

  const Matrix xt = design.x.transposed();
  const Matrix xtx = Matrix::multiply(xt, design.x);
  double condition = 0.0;
  const Matrix pinv = symmetric_pinv(xtx, 1e-12, nullptr, &condition);

  const std::vector<double> xty = xt.multiply_vec(design.y);
  const std::vector<double> beta = pinv.multiply_vec(xty);

  OlsResult result;
  for (std::size_t j = 0; j < kRegressors; ++j) result.coefficients[j] = beta[j];
  result.condition_number = condition;
  result.minimum_norm = true;
  fill_inference(result, design, pinv);
  return result;
}

double adjusted_r2(double r2, std::size_t n, std::size_t k) {
  return 1.0 - (1.0 - r2) * (static_cast<double>(n) - 1.0) /
                   (static_cast<double>(n) - static_cast<double>(k) - 1.0);
}

double f_from_r2(double r2, std::size_t n, std::size_t k) {
  const double denom_df = static_cast<double>(n) - static_cast<double>(k) - 1.0;
  return (r2 / static_cast<double>(k)) / ((1.0 - r2) / denom_df);
}

std::string significance_stars(double p_value) {
  if (p_value < 0.01) return "***";
  if (p_value < 0.05) return "**";
  if (p_value < 0.1) return "*";
  return "";
}

}  // namespace fieldsim::regression
