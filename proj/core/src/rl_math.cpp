#include "discoreward/rl_math.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "discoreward/error.hpp"

namespace discoreward::rl {

void PpoConfig::validate() const {
  if (!(epsilon > 0)) throw Error(ErrorCode::kInvalidArgument, "epsilon must be > 0");
  if (!(gamma >= 0 && gamma <= 1)) throw Error(ErrorCode::kInvalidArgument, "gamma must be in [0, 1]");
  if (!(learning_rate > 0)) throw Error(ErrorCode::kInvalidArgument, "learning_rate must be > 0");
  if (!(kl_coefficient >= 0)) throw Error(ErrorCode::kInvalidArgument, "kl_coefficient must be >= 0");
}

double prob_ratio(double logp_new, double logp_old) {
  if (!std::isfinite(logp_new) || !std::isfinite(logp_old)) {
    throw Error(ErrorCode::kNonFinite, "log-probabilities must be finite");
  }
  const double ratio = std::exp(logp_new - logp_old);
  if (!std::isfinite(ratio)) throw Error(ErrorCode::kNonFinite, "probability ratio overflows");
  return ratio;
}

double clipped_surrogate(double ratio, double advantage, double epsilon) {
  if (!(ratio > 0) || !(epsilon > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "clipped_surrogate needs ratio > 0 and epsilon > 0");
  }
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

double clipped_surrogate_gradient(double ratio, double advantage, double epsilon) {
  if (!(ratio > 0) || !(epsilon > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "clipped_surrogate needs ratio > 0 and epsilon > 0");
  }
  if (advantage > 0 && ratio > 1.0 + epsilon) return 0.0;
  if (advantage < 0 && ratio < 1.0 - epsilon) return 0.0;
  return advantage;
}

double one_step_advantage(double reward, double gamma, double v_next, double v_curr) noexcept {
  return reward + gamma * v_next - v_curr;
}

std::vector<double> kl_penalized_rewards(std::span<const double> rewards,
                                         std::span<const double> kl_per_token, double beta) {
  if (rewards.size() != kl_per_token.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "rewards has " + std::to_string(rewards.size()) + " entries, kl has " +
                    std::to_string(kl_per_token.size()));
  }
  std::vector<double> out(rewards.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) out[i] = rewards[i] - beta * kl_per_token[i];
  return out;
}

}  // namespace discoreward::rl
