#pragma once
// Sobolev and wave-Sobolev norms on sampled fields, mixed Lebesgue norms,
// empirical estimate ratios, and the scaling check.
//
// Space-time norms are taken of a windowed extension: frames are multiplied
// by a Hann window in time before the time transform. This stands in for the
// restriction norm, so ratios built from it are indicative only.

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "monopole/ame.hpp"
#include "monopole/spectral.hpp"

namespace monopole {

// ||Lambda^s w|| or, with homogeneous set, ||D^s w||. Throws Error{nonzero_mean}
// for homogeneous s < 0 when w has a nonzero mean.
double sobolev_norm(const LieField& w, double s, bool homogeneous = false);

enum class Window { hann, none };

// M frames at t_m = m * T / (M - 1), each already multiplied by the window.
class SpaceTimeSample {
 public:
  SpaceTimeSample(TorusGrid grid, int rank, double duration, int frames, Window window = Window::hann);

  // Samples fn(t) at the frame times and applies the window.
  static SpaceTimeSample from_function(TorusGrid grid, int rank, double duration, int frames,
                                       const std::function<LieField(double)>& fn,
                                       Window window = Window::hann);

  // Framewise image of one or two samples; the result carries no further
  // window (products of windowed factors keep the product of the windows).
  SpaceTimeSample map(const std::function<LieField(const LieField&)>& fn) const;
  SpaceTimeSample map(const SpaceTimeSample& other,
                      const std::function<LieField(const LieField&, const LieField&)>& fn) const;

  const TorusGrid& grid() const noexcept { return grid_; }
  int rank() const noexcept { return rank_; }
  int frames() const noexcept { return static_cast<int>(frames_.size()); }
  double duration() const noexcept { return duration_; }
  double dt() const noexcept { return duration_ / (frames() - 1); }
  double time(int m) const noexcept { return m * dt(); }
  Window window() const noexcept { return window_; }
  double window_weight(int m) const;

  const LieField& frame(int m) const { return frames_[static_cast<std::size_t>(m)]; }
  LieField& frame(int m) { return frames_[static_cast<std::size_t>(m)]; }

 private:
  TorusGrid grid_;
  int rank_;
  double duration_;
  Window window_;
  std::vector<LieField> frames_;
};

enum class WaveNorm { H, calH };

// ||Lambda^s Lambda_-^theta u||_{L^2} with the comparable symbol
// (1+|xi|^2)^{s/2} (1 + ||tau|-|xi||)^theta; calH adds ||d_t u||_{H^{s-1,theta}}.
double wave_sobolev_norm(const SpaceTimeSample& ws, double s, double theta, WaveNorm variant = WaveNorm::H);

// Applies Lambda_+^{plus} Lambda_-^{minus} on the space-time frequency side.
SpaceTimeSample space_time_multiplier(const SpaceTimeSample& ws, double plus, double minus);

// ||w||_{L^p_t L^q_x}; p or q may be infinity. Pointwise Frobenius norm.
double mixed_norm(const SpaceTimeSample& ws, double p, double q);

enum class EstimateKind { A, C, D, E, M1, M2, M3, M4, ell, bound };
std::string_view estimate_kind_name(EstimateKind kind);

struct EstimateParams {
  double s = 0.3, theta = 0.8, epsilon = 0.0;
  // bilinear estimate with D^-sigma, and the two embeddings: exponents p, q
  double sigma = 0.65, p = 4.0, q = 4.0, s1 = 0.3, s2 = 0.3;
  // L^2 product estimate
  double a = 0.6, b = 0.6, alpha = 0.3, beta = 0.3;
  // norm of A_0: ||A_0||_{L^pt L^inf} + ||D^s A_0||_{L^pa L^qa}
  double inv_p_tilde = 0.45, inv_q_a = 0.175;
  int j = 1;
  EllipticOptions elliptic;
};

// Defaults inside each kind's hypotheses at s = 0.3 (the bilinear estimate
// and the first embedding use p = q = 4, the second p = q = 8).
EstimateParams default_params(EstimateKind kind);

// u, v meaning by kind:
//   A, E: u, v          C, D: u          M1: f = u          M3: f = u, phi = v
//   M2, M4, ell: f = u, phi = v, A_0 solved framewise
//   bound: u, v are the wave variables with their time derivatives ut, vt
struct EstimateInputs {
  const SpaceTimeSample* u = nullptr;
  const SpaceTimeSample* v = nullptr;
  const SpaceTimeSample* ut = nullptr;
  const SpaceTimeSample* vt = nullptr;
};

struct EstimateValue {
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};

// Throws Error{inadmissible_params} when the parameters fall outside the
// estimate's hypotheses, Error{degenerate_input} for a zero right side.
EstimateValue estimate_ratio(EstimateKind kind, const EstimateInputs& in, const EstimateParams& params);

struct RatioStats {
  std::vector<double> ratios;
  double max = 0.0, mean = 0.0;
};

RatioStats summarize(std::vector<double> ratios);

// Ensemble generators. Fields are free waves (solutions of box u = 0) sampled
// over [0, T]; rank 2 values in span{i sigma_k / 2}.
struct EnsembleSpec {
  TorusGrid grid{32, 6.283185307179586};
  double duration = 1.0;
  int frames = 16;
  double amplitude = 0.05;
  double bandwidth = 3.0;  // Gaussian spectral width, in modes
};

// Band-limited Gaussian random free wave; deterministic in seed.
SpaceTimeSample random_free_wave(const EnsembleSpec& spec, std::uint64_t seed);

// Random u, v pairs with time derivatives, suitable for every kind.
RatioStats sample_estimate(EstimateKind kind, const EnsembleSpec& spec, const EstimateParams& params,
                           int count, std::uint64_t seed);

// Null form versus plain product on near-parallel high-frequency packets.
struct NullGainRow {
  double lambda;
  double null_ratio;     // mean of ||Q_12(f, g)|| / (||grad f|| ||grad g||)
  double generic_ratio;  // mean of ||d_1 f d_2 g|| / (||grad f|| ||grad g||)
  double gap;            // generic_ratio / null_ratio
};

NullGainRow null_form_gain(double lambda, int points, const EstimateParams& params, int count,
                           std::uint64_t seed);

// Residuals of the lambda-rescaled solution lambda X(lambda t, lambda x) on
// the grid (N, L/lambda) with spacing dt/lambda. Throws Error{grid_mismatch}
// for an empty or inconsistent trajectory, Error{invalid_argument} for
// lambda <= 0.
PhysState rescale(const PhysState& s, double lambda);
ConsistencyReport scaling_residual(const std::vector<PhysState>& states, double dt, double lambda);

}  // namespace monopole
