#pragma once

#include <span>
#include <vector>

namespace discoreward::rl {

// Hyperparameters of the clipped-surrogate policy update. The parameter step
// itself, theta_new = theta_old + learning_rate * grad L, is performed by the
// external trainer; only its inputs are computed here.
struct PpoConfig {
  double epsilon = 0.2;          // clip range, > 0
  double gamma = 1.0;            // discount, in [0, 1]
  double learning_rate = 1e-5;   // > 0
  double kl_coefficient = 0.03;  // >= 0

  // Throws kInvalidArgument when a field is outside its range.
  void validate() const;
};

// exp(logp_new - logp_old). Throws kNonFinite for non-finite inputs or an
// overflowing ratio.
double prob_ratio(double logp_new, double logp_old);

// min(ratio * A, clip(ratio, 1 - epsilon, 1 + epsilon) * A).
// Throws kInvalidArgument unless ratio > 0 and epsilon > 0.
double clipped_surrogate(double ratio, double advantage, double epsilon);

// d/d(ratio) of clipped_surrogate: A where the unclipped term is active,
// 0 where the clipped term wins. At the clip boundary the one-sided value
// facing the unclipped region is returned.
double clipped_surrogate_gradient(double ratio, double advantage, double epsilon);

// reward + gamma * v_next - v_curr
double one_step_advantage(double reward, double gamma, double v_next, double v_curr) noexcept;

// rewards[i] - beta * kl[i]. Throws kLengthMismatch.
std::vector<double> kl_penalized_rewards(std::span<const double> rewards,
                                         std::span<const double> kl_per_token, double beta);

}  // namespace discoreward::rl
