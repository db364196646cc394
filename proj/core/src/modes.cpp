#include "plrf/modes.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

#include "plrf/errors.hpp"

namespace plrf {

double SpectralModes::total_risk() const {
  double s = irreducible;
  for (double w : weights) s += w;
  return s;
}

SpectralModes empirical_modes(const ProblemInstance& instance) {
  return empirical_modes(compute_gram(instance));
}

SpectralModes empirical_modes(const GramFactors& gram) {
  const int64_t d = gram.spec.d;
  Eigen::MatrixXd evecs = gram.gram;  // overwritten by dsyevd
  Eigen::VectorXd evals(d);
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<int>(d),
                                  evecs.data(), static_cast<int>(d), evals.data());
  if (info != 0) throw numeric_error("dsyevd failed with info " + std::to_string(info));

  SpectralModes modes;
  modes.d = d;
  modes.lambdas.reserve(d);
  modes.weights.reserve(d);
  // Rank cutoff: the nominal sigma < 1e-12 sigma_max rule means
  // lambda < 1e-24 lambda_max, which is below eigensolver noise
  // (~eps * lambda_max); the effective floor is 1e-15 lambda_max.
  const double lam_max = std::max(evals[d - 1], 0.0);
  const double cutoff = lam_max * 1e-15;
  double weight_sum = 0.0;
  for (int64_t k = d - 1; k >= 0; --k) {  // descending
    const double lam = evals[k];
    if (!(lam > cutoff)) {
      modes.rank_deficient = true;
      continue;
    }
    const double proj = evecs.col(k).dot(gram.cross);
    const double w = proj * proj / lam;
    modes.lambdas.push_back(lam);
    modes.weights.push_back(w);
    weight_sum += w;
  }
  modes.irreducible = std::max(gram.total_risk - weight_sum, 0.0);
  return modes;
}

}  // namespace plrf
