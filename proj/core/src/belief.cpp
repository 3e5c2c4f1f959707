#include "beliefplan/belief.hpp"

#include <cmath>
#include <cstdio>

#include "beliefplan/world.hpp"

namespace beliefplan {

namespace {

std::string bad_sum_message(double sum) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "belief mass sums to %.17g, expected 1", sum);
  return buf;
}

// Scale by 1/sum without revalidating; inputs are products of non-negative
// terms by construction.
BeliefState scaled(std::vector<double> w, double sum) {
  const double inv = 1.0 / sum;
  for (double& x : w) x *= inv;
  return BeliefState(BeliefState::trusted_t{}, std::move(w));
}

}  // namespace

BeliefState::BeliefState(std::vector<double> probs) : probs_(std::move(probs)) {
  double sum = 0.0;
  for (double p : probs_) {
    if (p < 0.0 || !std::isfinite(p))
      throw std::invalid_argument("belief entries must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kBeliefSumTolerance)
    throw std::invalid_argument(bad_sum_message(sum));
}

BeliefState normalize(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w))
      throw std::invalid_argument("weights must be finite and >= 0");
    sum += w;
  }
  if (sum <= kZeroMassEpsilon)
    throw ZeroMassError("cannot normalize: total mass is zero");
  return scaled(std::move(weights), sum);
}

double entropy(const BeliefState& b) {
  double h = 0.0;
  for (double p : b.probs())
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

std::pair<StateId, double> max_belief(const BeliefState& b) {
  StateId arg = 0;
  double best = -1.0;
  const auto& p = b.probs();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > best) {
      best = p[i];
      arg = i;
    }
  }
  return {arg, best};
}

BeliefKey belief_key(const BeliefState& b, double quantum) {
  // Two independently seeded splitmix-style lanes over the quantized
  // entries. 128 bits keeps collisions out of reach for any search we run.
  const double inv_q = 1.0 / quantum;
  std::uint64_t lo = 0x243f6a8885a308d3ull;  // arbitrary distinct constants
  std::uint64_t hi = 0x13198a2e03707344ull;
  for (double p : b.probs()) {
    const auto q = static_cast<std::uint64_t>(
        static_cast<std::int64_t>(std::llround(p * inv_q)));
    std::uint64_t z = lo + 0x9e3779b97f4a7c15ull + q;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    lo = z ^ (z >> 27);
    std::uint64_t y = hi ^ (q + 0xc2b2ae3d27d4eb4full + (hi << 6) + (hi >> 2));
    y = (y ^ (y >> 33)) * 0xff51afd7ed558ccdull;
    hi = y ^ (y >> 29);
  }
  return BeliefKey{lo, hi};
}

BeliefState predict(const BeliefState& b, const ActuationAction& a) {
  const TransitionMatrix& t = a.transition;
  if (t.size != b.size())
    throw DimensionMismatch("predict: matrix size " + std::to_string(t.size) +
                            " vs belief size " + std::to_string(b.size()));
  std::vector<double> out(b.size(), 0.0);
  const auto& p = b.probs();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double bi = p[i];
    if (bi == 0.0) continue;
    for (std::uint32_t k = t.row_begin[i]; k < t.row_begin[i + 1]; ++k)
      out[t.col[k]] += bi * t.value[k];
  }
  double sum = 0.0;
  for (double x : out) sum += x;
  // Row-stochastic rows keep the mass at 1; the division only absorbs
  // floating-point dust (and is exact when sum == 1.0).
  if (sum <= kZeroMassEpsilon)
    throw ZeroMassError("predict produced zero mass (matrix not stochastic?)");
  return scaled(std::move(out), sum);
}

BeliefState update(const BeliefState& b, const PerceptionAction& a,
                   ObservationId o) {
  if (o >= a.likelihood.size())
    throw DimensionMismatch("update: observation index out of range");
  const std::vector<double>& like = a.likelihood[o];
  if (like.size() != b.size())
    throw DimensionMismatch("update: likelihood size " +
                            std::to_string(like.size()) + " vs belief size " +
                            std::to_string(b.size()));
  std::vector<double> out(b.size());
  const auto& p = b.probs();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i] = p[i] * like[i];
    sum += out[i];
  }
  if (sum <= kZeroMassEpsilon)
    throw ZeroMassError("update: observation '" +
                        (o < a.observations.size() ? a.observations[o]
                                                   : std::to_string(o)) +
                        "' has zero probability under the current belief");
  return scaled(std::move(out), sum);
}

double observation_probability(const BeliefState& b, const PerceptionAction& a,
                               ObservationId o) {
  if (o >= a.likelihood.size())
    throw DimensionMismatch("observation_probability: index out of range");
  const std::vector<double>& like = a.likelihood[o];
  if (like.size() != b.size())
    throw DimensionMismatch("observation_probability: size mismatch");
  const auto& p = b.probs();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += p[i] * like[i];
  if (sum < 0.0) return 0.0;
  return sum > 1.0 ? 1.0 : sum;
}

}  // namespace beliefplan
