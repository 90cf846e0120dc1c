#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pseudochaos/ensembles.hpp"
#include "pseudochaos/parallel.hpp"
#include "pseudochaos/random.hpp"
#include "pseudochaos/stats.hpp"

namespace pchaos {

class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kGibbsAttemptBudget = 1'000'000;

// C = max((2 beta)^{3/2} / 2, 12).
double gibbs_envelope(double beta);

struct GibbsDraw {
  std::uint64_t x = 0;
  std::uint64_t attempts = 0;
};

// Rejection loop: x uniform, alpha uniform on [0, e^{2 beta}], accept when
// e^{-beta lambda_x} / C >= alpha. Throws BudgetExceeded after `budget`
// rejected attempts.
GibbsDraw gibbs_sample(const Spectrum& spectrum, double beta, SeededRng& rng,
                       std::uint64_t budget = kGibbsAttemptBudget);

struct GibbsSampleBatch {
  double beta = 0.0;
  std::vector<std::uint64_t> accepted;
  std::vector<std::uint64_t> attempts;
  SpectrumProvenance provenance;
};

// Sample i uses rng.split(i).
GibbsSampleBatch gibbs_sample_batch(const Spectrum& spectrum, double beta, std::size_t n,
                                    const SeededRng& rng, Exec exec = {});

// e^{-beta lambda_i} / tr e^{-beta Lambda}, shifted by the smallest lambda.
Eigen::VectorXd exact_gibbs_weights(const Spectrum& spectrum, double beta);

struct PartitionStats {
  double beta = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  double predicted = 0.0;
};

// d I1(2 beta) / beta, with the beta -> 0 limit d.
double partition_prediction(double d, double beta);

PartitionStats partition_moments(const EnsembleSpec& spec, double beta, std::size_t n_samples,
                                 const SeededRng& rng, Exec exec = {});

// Ensemble-averaged sorted (descending) Gibbs weights.
Eigen::VectorXd gibbs_profile(const std::vector<Spectrum>& spectra, double beta);

struct ProfileDistance {
  double tv = 0.0;
  double bootstrap_se = 0.0;
};

// TV between the averaged profiles of two spectrum batches, with a
// bootstrap standard error over resampled draws.
ProfileDistance profile_distance(const std::vector<Spectrum>& a, const std::vector<Spectrum>& b,
                                 double beta, std::size_t bootstrap, const SeededRng& rng);

// GUE eigenvalues against the degenerate semicircle ensemble with dtilde
// classes, n_draws each.
ProfileDistance gibbs_ensemble_distance(double beta, std::uint64_t d, std::uint64_t dtilde,
                                        std::size_t n_draws, const SeededRng& rng,
                                        Exec exec = {}, std::size_t bootstrap = 200);

enum class SignConvention { UpperTriangle, AllOffDiagonal };

struct SignEstimate {
  Estimate estimate;
  std::vector<double> samples;
};

// d^{-1} sum of the positive parts of Re H_ij over the off-diagonal entries
// selected by the convention, averaged over GUE draws.
SignEstimate average_sign(std::uint64_t d, std::size_t n_samples, const SeededRng& rng,
                          Exec exec = {}, SignConvention conv = SignConvention::UpperTriangle);
double sign_of_matrix(const HermitianMatrix& h, SignConvention conv);

}  // namespace pchaos
