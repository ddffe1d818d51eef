#pragma once
// The auxiliary wave system: data construction, reconstruction of the
// physical fields, the nonlinearities, the elliptic equation for A_0, time
// stepping and the Picard scheme.
//
// Riesz phase. riesz() has symbol i*xi_j/|xi|. The data, reconstruction and
// source formulas are only mutually consistent when the transform appearing
// in them is -i times that operator, so every place the wave system couples
// through a Riesz transform carries the factor kRieszPhase below. The
// physical h = R_1 a_2 - R_2 a_1 uses riesz() as is.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "monopole/gaugeforms.hpp"
#include "monopole/spectral.hpp"

namespace monopole {

inline constexpr cplx kRieszPhase{0.0, -1.0};

struct AuxState {
  LieField u, ut, v, vt;
  double t = 0.0;

  static AuxState zero(TorusGrid grid, int rank);
};

struct PhysState {
  LieField phi;
  LieField f;  // zero mode pinned to 0
  LieField d1f, d2f;
  LieField a0;
  double t = 0.0;
  // Largest relative norm removed by the su(n) projection in reconstruct().
  double discarded = 0.0;

  // A = *df, i.e. A_1 = -d_2 f, A_2 = d_1 f.
  Connection connection() const;
};

struct InitialData {
  AuxState aux;
  LieField f0;
  LieField h;
};

// Throws Error{coulomb_violated} if ||div a|| > tol_c * (||a_1|| + ||a_2||),
// Error{nonzero_mean} if a has a nonzero spatial mean.
InitialData build_initial_data(const LieField& a1, const LieField& a2, const LieField& phi0,
                               double tol_c = 1e-9);

// Throws Error{unphysical_component} when the projection onto su(n) removes
// more than 1e-6 of a field's norm. a0 is returned as zero.
PhysState reconstruct(const AuxState& s);

// How B_2 is evaluated: from (df, phi) directly or from the wave variables
// through the null-form grouping.
enum class B2Path { fields, waves };

// kind in 1..4. The waves path for kind 2 needs aux.
LieField nonlinearity_B(int kind, const PhysState& state, const AuxState* aux = nullptr,
                        B2Path path = B2Path::fields);

struct BPair {
  LieField plus, minus;
};
BPair assemble_Bpm(const LieField& b1, const LieField& b2, const LieField& b3, const LieField& b4);

struct EllipticOptions {
  // Bound on 2 (L/2pi) sup|grad f|, an upper bound for the contraction factor.
  double smallness = 0.8;
  double tolerance = 1e-11;  // relative residual
  int max_iterations = 200;
};

struct EllipticResult {
  LieField a0;
  int iterations = 0;
  double contraction = 0.0;  // largest observed ratio of successive updates
  double residual = 0.0;     // relative residual of the elliptic equation
  double smallness = 0.0;    // the measure compared against the threshold
};

double elliptic_smallness(const LieField& d1f, const LieField& d2f);

// Fixed point of A_0 = Lap^-1( -d_1[A_0, d_2 f] + d_2[A_0, d_1 f] + d_j[d_j f, phi] ).
// Throws Error{smallness_violated} above the threshold or when the observed
// contraction is >= 1, Error{not_converged} when the budget runs out.
EllipticResult elliptic_solve_A0(const LieField& d1f, const LieField& d2f, const LieField& phi,
                                 const LieField* guess = nullptr, const EllipticOptions& opt = {});

// Relative residual of the elliptic equation for a given A_0.
double elliptic_residual(const LieField& a0, const LieField& d1f, const LieField& d2f, const LieField& phi);

struct SourceEval {
  BPair b;
  PhysState phys;
  EllipticResult elliptic;
};

struct EvolveOptions {
  EllipticOptions elliptic;
  double cfl = 4.0;           // bound on dt * max|xi|
  double blow_up = 1e6;       // bound on any field's L^2 norm
  int snapshot_stride = 1;
  B2Path b2_path = B2Path::fields;
};

// Sources (B_+, B_-) of box u = B_+, box v = B_- at the given state; A_0 is
// solved afresh, warm-started from a0_guess when supplied.
SourceEval evaluate_sources(const AuxState& s, const LieField* a0_guess, const EvolveOptions& opt);

struct StepRecord {
  int step;
  const AuxState& aux;
  const PhysState& phys;
  const EllipticResult& elliptic;
};
using StepObserver = std::function<void(const StepRecord&)>;

struct SnapshotDiagnostics {
  double t;
  double constraint;  // ||div A|| / ||A||
  double energy;      // wave energy of u plus that of v
  int elliptic_iterations;
  double contraction;
  double discarded;
};

struct Trajectory {
  std::vector<AuxState> snapshots;
  std::vector<SnapshotDiagnostics> diagnostics;
  int steps = 0;
};

int step_count(double T, double dt);

// Exponential midpoint rule: the source at the half step (from a half-step
// predictor) drives the exact Duhamel update over the full step. The
// observer, if any, sees every step including t = 0 and t = T.
Trajectory evolve(const AuxState& s0, double T, double dt, const EvolveOptions& opt = {},
                  const StepObserver& observer = {});

struct PicardResult {
  // differences[j-1] = sup_t (||u_j - u_{j-1}||_{H^1} + ||d_t(u_j - u_{j-1})||)
  //                  + the same for v, for j = 1..J.
  std::vector<double> differences;
  std::vector<AuxState> final_iterate;  // states at every step of iterate J
};

// Iterate 0 is the free evolution; iterate j solves the linear wave equations
// with sources from iterate j-1, sampled where the midpoint rule needs them,
// so the fixed point is exactly the evolve() trajectory.
PicardResult picard_solve(const AuxState& s0, double T, double dt, int iterations,
                          const EvolveOptions& opt = {});

struct PhysRates {
  LieField phi_t;
  LieField f_t;
};

// Named relative residual norms of the identities a solution satisfies.
using ConsistencyReport = std::map<std::string, double>;

ConsistencyReport consistency_report(const PhysState& s, const PhysRates& rates);

// Time derivatives by second-order central differences.
PhysRates central_rates(const PhysState& before, const PhysState& after, double dt);

// Streams consecutive equally spaced states and reports every identity at
// each interior state; keeps the running maximum of each residual.
class ResidualMonitor {
 public:
  explicit ResidualMonitor(double dt, int stride = 1) : dt_(dt), stride_(stride) {}

  // Returns the report for the previous state once its successor arrives.
  std::optional<ConsistencyReport> push(PhysState s);
  const ConsistencyReport& worst() const noexcept { return worst_; }
  int reports() const noexcept { return reports_; }

 private:
  double dt_;
  int stride_;
  int count_ = 0;
  int reports_ = 0;
  std::optional<PhysState> older_, middle_;
  ConsistencyReport worst_;
};

// Residuals of a stored run sampled at spacing dt.
ConsistencyReport trajectory_residuals(const std::vector<PhysState>& states, double dt);

}  // namespace monopole
