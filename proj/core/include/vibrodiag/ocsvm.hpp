#ifndef VIBRODIAG_OCSVM_HPP
#define VIBRODIAG_OCSVM_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vibrodiag/types.hpp"

namespace vibrodiag::ocsvm {

enum class KernelForm {
  gaussian_squared,    // exp(-gamma ||x-y||^2), the standard form
  gaussian_unsquared,  // exp(-gamma ||x-y||), the literal printed form
};

struct HyperParams {
  double nu = 0.1;     // in (0, 1]
  double gamma = 0.5;  // > 0
};

struct TrainOptions {
  KernelForm kernel = KernelForm::gaussian_squared;
  double tolerance = 1e-6;        // max KKT violation at convergence
  std::size_t max_pair_updates = 10'000'000;
};

/// Per-dimension standardization fitted on training data only.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> std;  // floored at 1e-12; see apply()

  /// (x - mean) / std per dimension; dimensions whose raw std fell below
  /// the floor map to exactly zero.
  std::vector<double> apply(std::span<const double> x) const;
};

Scaler fit_scaler(const Mat<double>& train_set);

struct Model {
  Mat<double> support_vectors;      // standardized rows with alpha > 0
  std::vector<double> dual_coeffs;  // matching alphas
  double rho = 0.0;
  double gamma = 0.0;
  KernelForm kernel = KernelForm::gaussian_squared;
  Scaler scaler;
  std::string feature_set_id;       // carried through persistence
};

struct Score {
  double value = 0.0;
  bool is_inlier = false;  // value >= 0
};

double gaussian_kernel(std::span<const double> x, std::span<const double> y,
                       double gamma,
                       KernelForm form = KernelForm::gaussian_squared);

/// Solves the nu-form one-class dual
///   min 1/2 sum_ij alpha_i alpha_j K_ij
///   s.t. 0 <= alpha_i <= 1/(nu N), sum alpha = 1
/// by SMO on the maximal violating pair. Features are raw; the scaler is
/// fitted internally and stored in the model. Throws SolverError if the
/// KKT violation does not fall below tolerance within the update cap.
Model train(const Mat<double>& features, const HyperParams& params,
            const TrainOptions& opts = {});

Score score(const Model& model, std::span<const double> feature);

struct GridSearchResult {
  HyperParams best;
  double best_inlier_rate = 0.0;
};

/// Exhaustive search maximizing the eval-set inlier rate; ties prefer
/// larger nu, then smaller gamma.
GridSearchResult grid_search(const Mat<double>& train_set,
                             const Mat<double>& eval_set,
                             std::span<const double> nu_grid,
                             std::span<const double> gamma_grid,
                             const TrainOptions& opts = {});

std::vector<double> default_nu_grid();
std::vector<double> default_gamma_grid();

/// Versioned JSON document; load(save(m)) reproduces scores to 1e-12.
std::string to_json(const Model& model);
Model from_json(const std::string& text);
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace vibrodiag::ocsvm

#endif
