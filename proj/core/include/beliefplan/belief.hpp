#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace beliefplan {

using StateId = std::size_t;
/// Index into a perception action's observation list.
using ObservationId = std::size_t;

/// Probability mass at or below this threshold counts as zero. Branches with
/// zero mass are pruned, never normalized.
inline constexpr double kZeroMassEpsilon = 1e-12;
/// Quantization step used when hashing beliefs for duplicate detection.
inline constexpr double kBeliefQuantum = 1e-9;
/// A stored belief must sum to 1 within this L1 tolerance.
inline constexpr double kBeliefSumTolerance = 1e-9;

class ZeroMassError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ActuationAction;
struct PerceptionAction;

/// Immutable probability distribution over the world's physical states.
/// Every filtering operation returns a fresh value; nothing mutates in place.
class BeliefState {
 public:
  /// Validates: entries non-negative, sum within kBeliefSumTolerance of 1.
  explicit BeliefState(std::vector<double> probs);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const noexcept { return probs_[i]; }
  const std::vector<double>& probs() const noexcept { return probs_; }

  /// Internal fast path for values we have just normalized ourselves.
  struct trusted_t {
    explicit trusted_t() = default;
  };
  BeliefState(trusted_t, std::vector<double> probs)
      : probs_(std::move(probs)) {}

 private:
  std::vector<double> probs_;
};

/// Scale non-negative weights to sum to one. Throws ZeroMassError when the
/// total mass is <= kZeroMassEpsilon and std::invalid_argument on negative
/// entries.
BeliefState normalize(std::vector<double> weights);

/// Shannon entropy in nats; 0 * ln 0 contributes 0.
double entropy(const BeliefState& b);

/// (argmax index, max value); ties resolve to the lowest index.
std::pair<StateId, double> max_belief(const BeliefState& b);

/// 128-bit digest of the quantized belief. Two beliefs equal within the
/// quantum map to the same key; the search uses it for duplicate detection
/// and for the executor's divergence test.
struct BeliefKey {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  friend bool operator==(const BeliefKey&, const BeliefKey&) = default;
};

struct BeliefKeyHash {
  std::size_t operator()(const BeliefKey& k) const noexcept {
    return static_cast<std::size_t>(k.lo ^ (k.hi * 0x9e3779b97f4a7c15ull));
  }
};

BeliefKey belief_key(const BeliefState& b, double quantum = kBeliefQuantum);

/// Prediction step: b'_j = sum_i b_i T[i][j], renormalized defensively.
/// Throws DimensionMismatch if the matrix size differs from the belief's.
BeliefState predict(const BeliefState& b, const ActuationAction& a);

/// Measurement step: posterior_i proportional to b_i * P(o | s_i, a).
/// Throws ZeroMassError when the observation has (near) zero probability
/// under b, DimensionMismatch on size mismatch.
BeliefState update(const BeliefState& b, const PerceptionAction& a,
                   ObservationId o);

/// P(o | a, b) = sum_i b_i * P(o | s_i, a). Always in [0, 1].
double observation_probability(const BeliefState& b, const PerceptionAction& a,
                               ObservationId o);

}  // namespace beliefplan
