#include "vibrodiag/ocsvm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace vibrodiag::ocsvm {

namespace {

constexpr double kStdFloor = 1e-12;
constexpr double kBoundEps = 1e-12;

double squared_distance(const double* a, const double* b, std::size_t d) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

double kernel_from_d2(double d2, double gamma, KernelForm form) {
  return form == KernelForm::gaussian_squared
             ? std::exp(-gamma * d2)
             : std::exp(-gamma * std::sqrt(d2));
}

void check_finite(const Mat<double>& m, const char* what) {
  for (double v : m.data)
    if (!std::isfinite(v))
      throw DataError(std::string(what) + ": non-finite feature value");
}

struct DualSolution {
  std::vector<double> alpha;
  std::vector<double> g;  // K alpha
};

// SMO with maximal-violating-pair selection on the cached kernel matrix.
DualSolution solve_dual(const Mat<double>& kernel, double nu,
                        const TrainOptions& opts) {
  const std::size_t n = kernel.rows;
  const double c = 1.0 / (nu * static_cast<double>(n));

  DualSolution sol;
  sol.alpha.assign(n, 1.0 / static_cast<double>(n));
  sol.g.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const double* row = kernel.row(i);
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * sol.alpha[j];
    sol.g[i] = acc;
  }

  for (std::size_t it = 0; it < opts.max_pair_updates; ++it) {
    // i: decrease candidate with largest gradient, j: increase candidate
    // with smallest gradient
    std::size_t i = n, j = n;
    double gi = -std::numeric_limits<double>::infinity();
    double gj = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (sol.alpha[k] > kBoundEps && sol.g[k] > gi) {
        gi = sol.g[k];
        i = k;
      }
      if (sol.alpha[k] < c - kBoundEps && sol.g[k] < gj) {
        gj = sol.g[k];
        j = k;
      }
    }
    if (i == n || j == n || gi - gj < opts.tolerance) return sol;

    const double eta = std::max(
        kernel.at(i, i) + kernel.at(j, j) - 2.0 * kernel.at(i, j), 1e-12);
    double t = (gi - gj) / eta;
    t = std::min(t, sol.alpha[i]);
    t = std::min(t, c - sol.alpha[j]);
    sol.alpha[i] -= t;
    sol.alpha[j] += t;
    const double* ki = kernel.row(i);
    const double* kj = kernel.row(j);
    for (std::size_t k = 0; k < n; ++k) sol.g[k] += t * (kj[k] - ki[k]);
  }
  throw SolverError("ocsvm: SMO did not converge within the update cap");
}

double offset_from(const DualSolution& sol, double c) {
  const std::size_t n = sol.alpha.size();
  double margin_sum = 0.0;
  std::size_t margin_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sol.alpha[i] > kBoundEps && sol.alpha[i] < c - kBoundEps) {
      margin_sum += sol.g[i];
      ++margin_count;
    }
  }
  if (margin_count > 0) return margin_sum / static_cast<double>(margin_count);

  // all alphas at the box bounds: bracket rho between the two groups
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (sol.alpha[i] >= c - kBoundEps) lo = std::max(lo, sol.g[i]);
    if (sol.alpha[i] <= kBoundEps) hi = std::min(hi, sol.g[i]);
  }
  if (!std::isfinite(lo)) return hi;
  if (!std::isfinite(hi)) return lo;
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> Scaler::apply(std::span<const double> x) const {
  if (x.size() != mean.size())
    throw DataError("scaler: dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = std[i] <= kStdFloor ? 0.0 : (x[i] - mean[i]) / std[i];
  return out;
}

Scaler fit_scaler(const Mat<double>& train_set) {
  if (train_set.rows < 2)
    throw DataError("scaler: need at least 2 training rows");
  check_finite(train_set, "scaler");
  const std::size_t n = train_set.rows, d = train_set.cols;
  Scaler s;
  s.mean.assign(d, 0.0);
  s.std.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += train_set.at(i, j);
  for (double& m : s.mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double dv = train_set.at(i, j) - s.mean[j];
      s.std[j] += dv * dv;
    }
  for (double& v : s.std) v = std::sqrt(v / static_cast<double>(n));
  for (double& v : s.std) v = std::max(v, kStdFloor);
  return s;
}

double gaussian_kernel(std::span<const double> x, std::span<const double> y,
                       double gamma, KernelForm form) {
  if (x.size() != y.size()) throw DataError("kernel: dimension mismatch");
  if (!(gamma > 0.0)) throw DataError("kernel: gamma must be positive");
  return kernel_from_d2(squared_distance(x.data(), y.data(), x.size()), gamma,
                        form);
}

Model train(const Mat<double>& features, const HyperParams& params,
            const TrainOptions& opts) {
  if (features.rows < 2) throw DataError("ocsvm: need at least 2 rows");
  if (!(params.nu > 0.0 && params.nu <= 1.0))
    throw DataError("ocsvm: nu must lie in (0, 1]");
  if (!(params.gamma > 0.0)) throw DataError("ocsvm: gamma must be positive");
  check_finite(features, "ocsvm");

  const std::size_t n = features.rows, d = features.cols;
  Model model;
  model.gamma = params.gamma;
  model.kernel = opts.kernel;
  model.scaler = fit_scaler(features);

  Mat<double> z(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> row =
        model.scaler.apply(std::span(features.row(i), d));
    std::copy(row.begin(), row.end(), z.row(i));
  }

  Mat<double> kernel(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    kernel.at(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = kernel_from_d2(squared_distance(z.row(i), z.row(j), d),
                                      params.gamma, opts.kernel);
      kernel.at(i, j) = k;
      kernel.at(j, i) = k;
    }
  }

  const DualSolution sol = solve_dual(kernel, params.nu, opts);
  const double c = 1.0 / (params.nu * static_cast<double>(n));
  model.rho = offset_from(sol, c);

  std::size_t n_sv = 0;
  for (double a : sol.alpha)
    if (a > kBoundEps) ++n_sv;
  model.support_vectors = Mat<double>(n_sv, d);
  model.dual_coeffs.reserve(n_sv);
  std::size_t r = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sol.alpha[i] <= kBoundEps) continue;
    std::copy(z.row(i), z.row(i) + d, model.support_vectors.row(r));
    model.dual_coeffs.push_back(sol.alpha[i]);
    ++r;
  }
  return model;
}

Score score(const Model& model, std::span<const double> feature) {
  const std::size_t d = model.support_vectors.cols;
  if (feature.size() != d) throw DataError("score: dimension mismatch");
  const std::vector<double> z = model.scaler.apply(feature);
  double acc = 0.0;
  for (std::size_t i = 0; i < model.support_vectors.rows; ++i) {
    const double d2 = squared_distance(model.support_vectors.row(i), z.data(), d);
    acc += model.dual_coeffs[i] * kernel_from_d2(d2, model.gamma, model.kernel);
  }
  Score s;
  s.value = acc - model.rho;
  s.is_inlier = s.value >= 0.0;
  return s;
}

GridSearchResult grid_search(const Mat<double>& train_set,
                             const Mat<double>& eval_set,
                             std::span<const double> nu_grid,
                             std::span<const double> gamma_grid,
                             const TrainOptions& opts) {
  if (nu_grid.empty() || gamma_grid.empty())
    throw DataError("grid search: empty grid");
  if (eval_set.cols != train_set.cols)
    throw DataError("grid search: eval/train dimension mismatch");

  GridSearchResult result;
  result.best_inlier_rate = -1.0;
  double best_nu = -1.0;
  double best_gamma = std::numeric_limits<double>::infinity();

  for (double nu : nu_grid) {
    for (double gamma : gamma_grid) {
      const Model model = train(train_set, {nu, gamma}, opts);
      std::size_t inliers = 0;
      for (std::size_t i = 0; i < eval_set.rows; ++i) {
        if (score(model, std::span(eval_set.row(i), eval_set.cols)).is_inlier)
          ++inliers;
      }
      const double rate =
          static_cast<double>(inliers) / static_cast<double>(eval_set.rows);
      const bool better =
          rate > result.best_inlier_rate ||
          (rate == result.best_inlier_rate &&
           (nu > best_nu || (nu == best_nu && gamma < best_gamma)));
      if (better) {
        result.best_inlier_rate = rate;
        result.best = {nu, gamma};
        best_nu = nu;
        best_gamma = gamma;
      }
    }
  }
  return result;
}

std::vector<double> default_nu_grid() { return {0.01, 0.02, 0.05, 0.1, 0.2}; }

std::vector<double> default_gamma_grid() {
  std::vector<double> g;
  for (int e = -10; e <= 4; ++e) g.push_back(std::ldexp(1.0, e));
  return g;
}

std::string to_json(const Model& model) {
  nlohmann::json j;
  j["format"] = "vibrodiag-ocsvm";
  j["version"] = 1;
  j["feature_set_id"] = model.feature_set_id;
  j["kernel"] = model.kernel == KernelForm::gaussian_squared
                    ? "gaussian_squared"
                    : "gaussian_unsquared";
  j["gamma"] = model.gamma;
  j["rho"] = model.rho;
  j["dual_coeffs"] = model.dual_coeffs;
  j["scaler_mean"] = model.scaler.mean;
  j["scaler_std"] = model.scaler.std;
  j["n_features"] = model.support_vectors.cols;
  nlohmann::json sv = nlohmann::json::array();
  for (std::size_t i = 0; i < model.support_vectors.rows; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < model.support_vectors.cols; ++c)
      row.push_back(model.support_vectors.at(i, c));
    sv.push_back(std::move(row));
  }
  j["support_vectors"] = std::move(sv);
  return j.dump(2);
}

Model from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model: invalid JSON: ") + e.what());
  }
  if (j.value("format", "") != "vibrodiag-ocsvm")
    throw DataError("model: unrecognized document format");
  if (j.value("version", 0) != 1)
    throw DataError("model: unsupported document version");

  Model m;
  m.feature_set_id = j.value("feature_set_id", "");
  m.kernel = j.at("kernel").get<std::string>() == "gaussian_unsquared"
                 ? KernelForm::gaussian_unsquared
                 : KernelForm::gaussian_squared;
  m.gamma = j.at("gamma").get<double>();
  m.rho = j.at("rho").get<double>();
  m.dual_coeffs = j.at("dual_coeffs").get<std::vector<double>>();
  m.scaler.mean = j.at("scaler_mean").get<std::vector<double>>();
  m.scaler.std = j.at("scaler_std").get<std::vector<double>>();

  const auto& sv = j.at("support_vectors");
  const std::size_t d = j.at("n_features").get<std::size_t>();
  m.support_vectors = Mat<double>(sv.size(), d);
  for (std::size_t i = 0; i < sv.size(); ++i) {
    if (sv[i].size() != d) throw DataError("model: ragged support vectors");
    for (std::size_t c = 0; c < d; ++c)
      m.support_vectors.at(i, c) = sv[i][c].get<double>();
  }
  if (m.dual_coeffs.size() != m.support_vectors.rows)
    throw DataError("model: dual coefficient count mismatch");
  return m;
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("model: cannot open " + path + " for writing");
  out << to_json(model) << '\n';
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("model: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace vibrodiag::ocsvm
