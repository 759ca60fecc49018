// Line-of-sight fading channels between placed nodes and log-det brackets on
// the MIMO capacity across a cut.

#ifndef CACHECAP_CHANNEL_H_
#define CACHECAP_CHANNEL_H_

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cachecap/placement.h"
#include "cachecap/traffic.h"

namespace cachecap {

enum class FadingMode { kSlow, kFast };

// h_{u,v}[t] = r_{u,v}^(-alpha/2) exp(i theta_{u,v}[t]). Phases are uniform on
// [0, 2 pi), independent per ordered pair, and derived from a counter-based
// hash so nothing of size n^2 is stored. In slow mode the use index t is
// ignored.
class ChannelRealization {
 public:
  // Throws std::invalid_argument unless alpha > 2.
  static ChannelRealization Draw(const NodePlacement& placement, double alpha,
                                 std::uint64_t seed, FadingMode mode = FadingMode::kSlow);

  int n() const { return placement_.n; }
  double alpha() const { return alpha_; }
  std::uint64_t seed() const { return seed_; }
  FadingMode mode() const { return mode_; }
  const NodePlacement& placement() const { return placement_; }

  double Magnitude(int u, int v) const;
  double Phase(int u, int v, std::uint64_t use = 0) const;
  std::complex<double> Gain(int u, int v, std::uint64_t use = 0) const;
  // Pairs closer than 1/n leave the regular placement set; gains blow up.
  bool TooClose(int u, int v) const;

 private:
  NodePlacement placement_;
  double alpha_ = 4.0;
  std::uint64_t seed_ = 0;
  FadingMode mode_ = FadingMode::kSlow;
};

// lower: log2 det(I + H^H H) with identity input covariance, which meets the
// per-antenna unit power constraint. upper: water-filling under total power
// |S1|, a relaxation of that constraint. The capacity lies in between.
struct CutCapacityEstimate {
  double lower = 0.0;
  double upper = 0.0;
};

// Rows of `h` are transmitters, columns receivers.
CutCapacityEstimate MimoBracket(const Eigen::MatrixXcd& h);

Eigen::MatrixXcd ChannelMatrix(const ChannelRealization& channels,
                               const std::vector<int>& s1, const std::vector<int>& s2,
                               std::uint64_t use = 0);

// Throws std::invalid_argument on empty or overlapping sets.
CutCapacityEstimate MimoCutCapacity(const ChannelRealization& channels,
                                    const std::vector<int>& s1,
                                    const std::vector<int>& s2, std::uint64_t use = 0);

// Fast-fading lower bound: Monte-Carlo mean of the identity-covariance value
// over `uses` independent phase draws.
double FastFadingLowerMean(const ChannelRealization& channels, const std::vector<int>& s1,
                           const std::vector<int>& s2, int uses);

// Splits S^c into receivers near S (r_{S,v} < log2 n + 1) and far ones and
// checks lower(S, S^c) <= upper(S, near) + upper(S, far).
struct HadamardSplit {
  std::vector<int> near;
  std::vector<int> far;
  int boundary_count = 0;
  double lower_whole = 0.0;
  double upper_near = 0.0;
  double upper_far = 0.0;
  bool holds = false;
};

HadamardSplit HadamardSplitCheck(const ChannelRealization& channels,
                                 const std::vector<int>& s, std::uint64_t use = 0,
                                 double tolerance = 1e-8);

// r_{S,v} = min over u in S of r_{u,v}.
double SetDistance(const NodePlacement& placement, const std::vector<int>& s, int v);

// (log2 n)^-2.
double DefaultKappa(int n);

// Rate kappa on every ordered pair closer than log2 n + 1. A nonpositive
// kappa selects DefaultKappa.
UnicastTraffic NearCutTraffic(const NodePlacement& placement, double kappa = 0.0);

}  // namespace cachecap

#endif  // CACHECAP_CHANNEL_H_
