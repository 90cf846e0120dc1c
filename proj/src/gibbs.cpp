#include "pseudochaos/gibbs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace pchaos {

namespace {

std::vector<Spectrum> draw_spectra(const EnsembleSpec& spec, std::size_t n, const SeededRng& rng,
                                   Exec exec) {
  return parallel_map(n, exec, [&](std::size_t i) {
    auto r = rng.split(i);
    return sample_spectrum(spec, r);
  });
}

unsigned log2_exact(std::uint64_t d) {
  if (d < 2 || !std::has_single_bit(d)) throw std::invalid_argument("dimension must be a power of two >= 2");
  return static_cast<unsigned>(std::countr_zero(d));
}

double tv(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  return 0.5 * (p - q).cwiseAbs().sum();
}

}  // namespace

double gibbs_envelope(double beta) { return std::max(std::pow(2.0 * beta, 1.5) / 2.0, 12.0); }

GibbsDraw gibbs_sample(const Spectrum& spectrum, double beta, SeededRng& rng,
                       std::uint64_t budget) {
  if (!(beta >= 0.0)) throw std::invalid_argument("gibbs_sample: beta must be >= 0");
  const auto d = static_cast<std::uint64_t>(spectrum.dim());
  if (d == 0) throw std::invalid_argument("gibbs_sample: empty spectrum");
  const double c = gibbs_envelope(beta);
  const double alpha_max = std::exp(2.0 * beta);
  for (std::uint64_t attempt = 1; attempt <= budget; ++attempt) {
    const std::uint64_t x = rng.below(d);
    const double alpha = rng.uniform(0.0, alpha_max);
    if (std::exp(-beta * spectrum.eigenvalues[static_cast<Eigen::Index>(x)]) / c >= alpha)
      return {x, attempt};
  }
  throw BudgetExceeded("gibbs_sample: attempt budget exceeded");
}

GibbsSampleBatch gibbs_sample_batch(const Spectrum& spectrum, double beta, std::size_t n,
                                    const SeededRng& rng, Exec exec) {
  auto draws = parallel_map(n, exec, [&](std::size_t i) {
    auto r = rng.split(i);
    return gibbs_sample(spectrum, beta, r);
  });
  GibbsSampleBatch batch;
  batch.beta = beta;
  batch.provenance = spectrum.provenance;
  batch.accepted.reserve(n);
  batch.attempts.reserve(n);
  for (const auto& g : draws) {
    batch.accepted.push_back(g.x);
    batch.attempts.push_back(g.attempts);
  }
  return batch;
}

Eigen::VectorXd exact_gibbs_weights(const Spectrum& spectrum, double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("exact_gibbs_weights: beta must be >= 0");
  const auto& l = spectrum.eigenvalues;
  if (l.size() == 0) throw std::invalid_argument("exact_gibbs_weights: empty spectrum");
  const double shift = l.minCoeff();
  Eigen::VectorXd w = (-beta * (l.array() - shift)).exp().matrix();
  std::vector<double> terms(w.data(), w.data() + w.size());
  return w / pairwise_sum(terms);
}

double partition_prediction(double d, double beta) {
  if (beta < 1e-8) return d * (1.0 + beta * beta / 2.0);
  return d * bessel_i1(2.0 * beta) / beta;
}

PartitionStats partition_moments(const EnsembleSpec& spec, double beta, std::size_t n_samples,
                                 const SeededRng& rng, Exec exec) {
  if (!(beta > 0.0 && beta <= 16.0))
    throw std::invalid_argument("partition_moments: beta must be in (0, 16]");
  if (n_samples < 100) throw std::invalid_argument("partition_moments: need >= 100 samples");
  const auto traces = parallel_map(n_samples, exec, [&](std::size_t i) {
    auto r = rng.split(i);
    const auto s = sample_spectrum(spec, r);
    std::vector<double> terms(static_cast<std::size_t>(s.dim()));
    for (Eigen::Index j = 0; j < s.dim(); ++j) terms[j] = std::exp(-beta * s.eigenvalues[j]);
    return pairwise_sum(terms);
  });
  const auto est = mean_and_error(traces);
  PartitionStats out;
  out.beta = beta;
  out.mean = est.mean;
  out.std_error = est.std_error;
  out.variance = sample_variance(traces);
  out.n_samples = n_samples;
  out.predicted = partition_prediction(static_cast<double>(spec.dim()), beta);
  return out;
}

Eigen::VectorXd gibbs_profile(const std::vector<Spectrum>& spectra, double beta) {
  if (spectra.empty()) throw std::invalid_argument("gibbs_profile: no spectra");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(spectra.front().dim());
  for (const auto& s : spectra) {
    if (s.dim() != acc.size()) throw std::invalid_argument("gibbs_profile: mixed dimensions");
    Eigen::VectorXd w = exact_gibbs_weights(s, beta);
    std::sort(w.data(), w.data() + w.size(), std::greater<>());
    acc += w;
  }
  return acc / static_cast<double>(spectra.size());
}

ProfileDistance profile_distance(const std::vector<Spectrum>& a, const std::vector<Spectrum>& b,
                                 double beta, std::size_t bootstrap, const SeededRng& rng) {
  ProfileDistance out;
  out.tv = tv(gibbs_profile(a, beta), gibbs_profile(b, beta));
  if (bootstrap < 2) return out;
  std::vector<double> reps(bootstrap);
  for (std::size_t i = 0; i < bootstrap; ++i) {
    auto r = rng.split(i);
    auto resample = [&](const std::vector<Spectrum>& src) {
      std::vector<Spectrum> o;
      o.reserve(src.size());
      for (std::size_t j = 0; j < src.size(); ++j) o.push_back(src[r.below(src.size())]);
      return o;
    };
    const auto ra = resample(a);
    const auto rb = resample(b);
    reps[i] = tv(gibbs_profile(ra, beta), gibbs_profile(rb, beta));
  }
  out.bootstrap_se = std::sqrt(sample_variance(reps));
  return out;
}

ProfileDistance gibbs_ensemble_distance(double beta, std::uint64_t d, std::uint64_t dtilde,
                                        std::size_t n_draws, const SeededRng& rng, Exec exec,
                                        std::size_t bootstrap) {
  if (!(beta >= 0.0 && beta <= 8.0))
    throw std::invalid_argument("gibbs_ensemble_distance: beta must be in [0, 8]");
  if (d > 256) throw std::invalid_argument("gibbs_ensemble_distance: d must be <= 256");
  const unsigned n = log2_exact(d);
  EnsembleSpec gue{n, GueKind{}, BasisMode::Identity};
  EnsembleSpec pseudo{n, PseudoGueKind{dtilde, std::nullopt, 32}, BasisMode::Identity};
  const auto a = draw_spectra(gue, n_draws, rng.split(0), exec);
  const auto b = draw_spectra(pseudo, n_draws, rng.split(1), exec);
  return profile_distance(a, b, beta, bootstrap, rng.split(2));
}

double sign_of_matrix(const HermitianMatrix& h, SignConvention conv) {
  const auto d = h.rows();
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(d * d));
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) {
      if (i == j) continue;
      if (conv == SignConvention::UpperTriangle && i > j) continue;
      terms.push_back(std::max(0.0, h(i, j).real()));
    }
  return pairwise_sum(terms) / static_cast<double>(d);
}

SignEstimate average_sign(std::uint64_t d, std::size_t n_samples, const SeededRng& rng, Exec exec,
                          SignConvention conv) {
  if (d < 2) throw std::invalid_argument("average_sign: d must be >= 2");
  if (n_samples == 0) throw std::invalid_argument("average_sign: need at least one sample");
  SignEstimate out;
  out.samples = parallel_map(n_samples, exec, [&](std::size_t i) {
    auto r = rng.split(i);
    return sign_of_matrix(sample_gue(static_cast<Eigen::Index>(d), r), conv);
  });
  out.estimate = mean_and_error(out.samples);
  return out;
}

}  // namespace pchaos
