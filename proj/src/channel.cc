#include "cachecap/channel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cachecap {

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> Eigenvalues(const Eigen::MatrixXcd& h) {
  const Eigen::MatrixXcd gram =
      h.rows() <= h.cols() ? Eigen::MatrixXcd(h * h.adjoint()) : Eigen::MatrixXcd(h.adjoint() * h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
  std::vector<double> values;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    values.push_back(std::max(0.0, solver.eigenvalues()[i]));
  }
  return values;
}

double WaterFill(std::vector<double> gains, double power) {
  gains.erase(std::remove_if(gains.begin(), gains.end(), [](double g) { return g <= 1e-300; }),
              gains.end());
  if (gains.empty()) return 0.0;
  std::sort(gains.begin(), gains.end(), std::greater<>());
  // Try the k strongest modes; keep the largest k with a positive last power.
  double level = 0.0;
  double inverse_sum = 0.0;
  std::size_t active = 0;
  for (std::size_t k = 1; k <= gains.size(); ++k) {
    inverse_sum += 1.0 / gains[k - 1];
    const double candidate = (power + inverse_sum) / static_cast<double>(k);
    if (candidate - 1.0 / gains[k - 1] <= 0.0) break;
    level = candidate;
    active = k;
  }
  double total = 0.0;
  for (std::size_t k = 0; k < active; ++k) total += std::log2(level * gains[k]);
  return total;
}

void CheckSets(int n, const std::vector<int>& s1, const std::vector<int>& s2) {
  if (s1.empty() || s2.empty()) throw std::invalid_argument("cut sides must be nonempty");
  std::vector<char> seen(n, 0);
  for (int u : s1) {
    if (u < 0 || u >= n) throw std::invalid_argument("node id out of range");
    seen[u] = 1;
  }
  for (int v : s2) {
    if (v < 0 || v >= n) throw std::invalid_argument("node id out of range");
    if (seen[v]) throw std::invalid_argument("cut sides overlap");
  }
}

}  // namespace

ChannelRealization ChannelRealization::Draw(const NodePlacement& placement, double alpha,
                                            std::uint64_t seed, FadingMode mode) {
  if (!(alpha > 2.0)) throw std::invalid_argument("path-loss exponent must exceed 2");
  ChannelRealization channels;
  channels.placement_ = placement;
  channels.alpha_ = alpha;
  channels.seed_ = seed;
  channels.mode_ = mode;
  return channels;
}

double ChannelRealization::Magnitude(int u, int v) const {
  if (u == v) throw std::invalid_argument("no channel from a node to itself");
  return std::pow(placement_.distance(u, v), -alpha_ / 2.0);
}

double ChannelRealization::Phase(int u, int v, std::uint64_t use) const {
  if (mode_ == FadingMode::kSlow) use = 0;
  std::uint64_t h = SplitMix64(seed_);
  h = SplitMix64(h ^ static_cast<std::uint64_t>(u));
  h = SplitMix64(h ^ static_cast<std::uint64_t>(v));
  h = SplitMix64(h ^ use);
  const double unit = static_cast<double>(h >> 11) * 0x1.0p-53;
  return 2.0 * std::numbers::pi * unit;
}

std::complex<double> ChannelRealization::Gain(int u, int v, std::uint64_t use) const {
  return std::polar(Magnitude(u, v), Phase(u, v, use));
}

bool ChannelRealization::TooClose(int u, int v) const {
  return placement_.distance(u, v) < 1.0 / placement_.n;
}

CutCapacityEstimate MimoBracket(const Eigen::MatrixXcd& h) {
  CutCapacityEstimate estimate;
  const std::vector<double> values = Eigenvalues(h);
  for (double mu : values) estimate.lower += std::log2(1.0 + mu);
  estimate.upper = WaterFill(values, static_cast<double>(h.rows()));
  return estimate;
}

Eigen::MatrixXcd ChannelMatrix(const ChannelRealization& channels,
                               const std::vector<int>& s1, const std::vector<int>& s2,
                               std::uint64_t use) {
  Eigen::MatrixXcd h(s1.size(), s2.size());
  for (std::size_t i = 0; i < s1.size(); ++i) {
    for (std::size_t j = 0; j < s2.size(); ++j) h(i, j) = channels.Gain(s1[i], s2[j], use);
  }
  return h;
}

CutCapacityEstimate MimoCutCapacity(const ChannelRealization& channels,
                                    const std::vector<int>& s1,
                                    const std::vector<int>& s2, std::uint64_t use) {
  CheckSets(channels.n(), s1, s2);
  return MimoBracket(ChannelMatrix(channels, s1, s2, use));
}

double FastFadingLowerMean(const ChannelRealization& channels, const std::vector<int>& s1,
                           const std::vector<int>& s2, int uses) {
  if (uses <= 0) throw std::invalid_argument("need at least one channel use");
  CheckSets(channels.n(), s1, s2);
  double total = 0.0;
  for (int t = 0; t < uses; ++t) {
    total += MimoBracket(ChannelMatrix(channels, s1, s2, static_cast<std::uint64_t>(t))).lower;
  }
  return total / uses;
}

double SetDistance(const NodePlacement& placement, const std::vector<int>& s, int v) {
  double best = std::numeric_limits<double>::infinity();
  for (int u : s) best = std::min(best, placement.distance(u, v));
  return best;
}

HadamardSplit HadamardSplitCheck(const ChannelRealization& channels,
                                 const std::vector<int>& s, std::uint64_t use,
                                 double tolerance) {
  const int n = channels.n();
  std::vector<char> inside(n, 0);
  for (int u : s) {
    if (u < 0 || u >= n) throw std::invalid_argument("node id out of range");
    inside[u] = 1;
  }
  std::vector<int> complement;
  for (int v = 0; v < n; ++v) {
    if (!inside[v]) complement.push_back(v);
  }
  if (s.empty() || complement.empty()) throw std::invalid_argument("S must be a proper nonempty subset");
  HadamardSplit split;
  const double radius = std::log2(static_cast<double>(n)) + 1.0;
  for (int v : complement) {
    (SetDistance(channels.placement(), s, v) < radius ? split.near : split.far).push_back(v);
  }
  split.boundary_count = static_cast<int>(split.near.size());
  split.lower_whole = MimoCutCapacity(channels, s, complement, use).lower;
  if (!split.near.empty()) split.upper_near = MimoCutCapacity(channels, s, split.near, use).upper;
  if (!split.far.empty()) split.upper_far = MimoCutCapacity(channels, s, split.far, use).upper;
  const double bound = split.upper_near + split.upper_far;
  split.holds = split.lower_whole <= bound + tolerance * std::max(1.0, bound);
  return split;
}

double DefaultKappa(int n) {
  const double lg = std::log2(static_cast<double>(n));
  return 1.0 / (lg * lg);
}

UnicastTraffic NearCutTraffic(const NodePlacement& placement, double kappa) {
  if (placement.n < 2) throw std::invalid_argument("near-cut traffic needs n >= 2");
  if (kappa <= 0.0) kappa = DefaultKappa(placement.n);
  const double radius = std::log2(static_cast<double>(placement.n)) + 1.0;
  UnicastTraffic traffic;
  for (int u = 0; u < placement.n; ++u) {
    for (int w = 0; w < placement.n; ++w) {
      if (u != w && placement.distance(u, w) < radius) traffic.Add(u, w, kappa);
    }
  }
  return traffic;
}

}  // namespace cachecap
