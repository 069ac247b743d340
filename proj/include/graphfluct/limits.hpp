#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graphfluct/dynamics.hpp"
#include "graphfluct/kernel.hpp"
#include "graphfluct/measures.hpp"
#include "graphfluct/rng.hpp"

namespace gf {

// Density coefficients μ_t at t = k·dt, k = 0..steps.
struct MuTrajectory {
  double dt = 0.0;
  int A = 0;
  std::vector<SpectralField> mu;

  size_t steps() const { return mu.empty() ? 0 : mu.size() - 1; }
  double t_final() const { return dt * static_cast<double>(steps()); }
  // Snapshot at the step nearest to t.
  const SpectralField& at_time(double t) const;
};

// ∂_t μ = ½∂²μ − ∂[μ(F + Γ*μ)] in Fourier space. Diffusion is integrated exactly
// (integrating factor), transport by classical RK4; mode 0 is never touched.
MuTrajectory solve_fokker_planck(const SpectralField& mu0, const KernelSpec& k, double T, double dt, int A);

// Two-block version: block 1 feels Γ*(αμ¹ + (1−α)μ²), block 2 feels Γ*((1−α)μ¹ + αμ²).
std::pair<MuTrajectory, MuTrajectory> solve_fokker_planck_sbm(const SpectralField& mu0_first,
                                                              const SpectralField& mu0_second, double alpha,
                                                              const KernelSpec& k, double T, double dt, int A);

// Multiply coefficient a by e^{−a²t/2}.
SpectralField heat_smooth(const SpectralField& f, double t);
// (r, ψ) of the first moment √(2π)·coeff(−1) of a density.
OrderParameter limit_order_parameter(const SpectralField& mu);

enum class OperatorKind { L1, L2, Theta, U, V };

// Galerkin matrix G_ab = ∫ ē_a (L e_b) over modes −A..A, built at the density μ. The
// coefficient vector d_a = ⟨η, ē_a⟩ of a distribution evolves under L* as d' = Gᴴ d.
// L2 acts on T², indexed (a, b) → (a + A)(2A + 1) + (b + A); Theta maps T into T².
Eigen::MatrixXcd assemble_operator(OperatorKind which, const SpectralField& mu, const KernelSpec& k, int A);

// Matrix-free Gᴴ·c for the transport part of U (diffusion excluded) and for V.
Eigen::VectorXcd apply_transport_adjoint(const SpectralField& mu, const KernelSpec& k, const Eigen::VectorXcd& c);
Eigen::VectorXcd apply_v_adjoint(const SpectralField& mu, const KernelSpec& k, const Eigen::VectorXcd& c);

// (Θ*η̂)_a = ⟨η̂, Θ ē_a⟩ and (Γ*η̂)_a = ⟨η̂, Γ(θ₁, θ₂) ē_a(θ₁)⟩ for a 2D coefficient matrix D.
Eigen::VectorXcd theta_adjoint(const Eigen::MatrixXcd& D, const KernelSpec& k);
Eigen::VectorXcd gamma_star(const Eigen::MatrixXcd& D, const KernelSpec& k);

// Mode index helpers for vectors over −A..A.
inline Eigen::Index mode_index(int a, int A) { return static_cast<Eigen::Index>(a + A); }
Eigen::VectorXcd to_vector(const SpectralField& f);
Eigen::MatrixXcd to_matrix(const SpectralField& f);
SpectralField from_vector(const Eigen::VectorXcd& v);
SpectralField from_matrix(const Eigen::MatrixXcd& m);

// Complex vector over −A..A with z₀ ~ N(0,1), z_a = (g₁ + i g₂)/√2 and z_{−a} = conj(z_a).
Eigen::VectorXcd hermitian_normal(int A, Rng& rng);

// Covariance of the martingale noise: C(u)_ab = a·b·(2π)^{−1/2}·μ̂_u(a − b), with square
// roots cached per step. Steps whose density did not change reuse the previous root.
class NoiseModel {
 public:
  NoiseModel(const MuTrajectory& mu, int A, double dt, size_t steps);

  int A() const { return A_; }
  double dt() const { return dt_; }
  size_t steps() const { return index_.size(); }
  const Eigen::MatrixXcd& cov(size_t step) const { return cov_[index_[step]]; }
  const Eigen::MatrixXcd& root(size_t step) const { return root_[index_[step]]; }
  double min_eigenvalue(size_t step) const { return min_eig_[index_[step]]; }

  // √dt·C^{1/2}z.
  Eigen::VectorXcd increment(size_t step, Rng& rng) const;
  // (W¹, W², W) increments with block covariance R ⊗ C, R = [[1, p, √p], [p, 1, √p], [√p, √p, 1]].
  void increment_local(size_t step, double p, Rng& rng, Eigen::VectorXcd& w1, Eigen::VectorXcd& w2,
                       Eigen::VectorXcd& w) const;

  static Eigen::MatrixXcd covariance(const SpectralField& mu, int A);

 private:
  int A_;
  double dt_;
  std::vector<size_t> index_;
  std::vector<Eigen::MatrixXcd> cov_, root_;
  std::vector<double> min_eig_;
};

struct SpdeOptions {
  double dt = 1e-3;
  double T = 1.0;
  size_t record_every = 0;  // 0 keeps only the initial and final states
  bool theta_coupling = true;
};

using NoisePath = std::vector<Eigen::VectorXcd>;

struct LimitPath {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> eta;
  std::vector<Eigen::MatrixXcd> hat_eta;  // coupled system only
};

struct LocalPath {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> zeta1, zeta2, eta;
};

// Increments from the (seed, Spde, replica) stream.
NoisePath draw_noise_path(const NoiseModel& noise, uint64_t seed, uint64_t replica);

// η' = L1*η + Ẇ by the exponential Euler scheme
// c ← e^{−a²dt/2}(c + dt·B c) + s_a ΔW, with s_a² = (1 − e^{−a²dt})/(a²dt).
LimitPath solve_limit_eta(const Eigen::VectorXcd& eta0, const MuTrajectory& mu, const KernelSpec& k,
                          const NoisePath& dW, const SpdeOptions& opt);
// η as above plus Θ*η̂; η̂' = L2*η̂ deterministic.
LimitPath solve_coupled(const Eigen::VectorXcd& eta0, const Eigen::MatrixXcd& hat_eta0, const MuTrajectory& mu,
                        const KernelSpec& k, const NoisePath& dW, const SpdeOptions& opt);
// ζˡ' = U*ζˡ + √p V*η + Ẇˡ, η' = L1*η + Ẇ with the three-block noise.
LocalPath solve_local_system(const Eigen::VectorXcd& zeta1_0, const Eigen::VectorXcd& zeta2_0,
                             const Eigen::VectorXcd& eta0, double p, const MuTrajectory& mu, const KernelSpec& k,
                             const NoiseModel& noise, uint64_t seed, uint64_t replica, const SpdeOptions& opt);

enum class InitialLaw { Zero, GaussianCLT, LocalJoint, ExplicitAtoms };

enum class HatEtaPreset {
  Stated,     // (1/(6√π))(−δ(0,0) + 2δ(π/2,0) − δ(π/2,π/2))
  Recursion,  // (2/(3√π))(−δ(0,0) + δ(0,π/2) + δ(π/2,0) − δ(π/2,π/2))
};

struct InitialSample {
  Eigen::VectorXcd zeta1, zeta2, eta;
  Eigen::MatrixXcd hat_eta;
};

// Σ_ab = (2π)^{−1/2} μ̂(a − b) − μ̂(a) conj(μ̂(b)): covariance of η₀ coefficients for i.i.d. data.
Eigen::MatrixXcd initial_covariance(const SpectralField& mu0, int A);

// Zero: all zero. GaussianCLT: η₀ ~ N(0, Σ). LocalJoint: (ζ¹₀, ζ²₀, η₀) with blocks R ⊗ Σ plus
// (1−p)vvᴴ on the ζ blocks, v = μ̂₀. ExplicitAtoms: η₀ = Z₁δ₀ + Z₂δ_{π/2} with Var Z = 1/4,
// Cov(Z₁, Z₂) = −1/4, and η̂₀ from the preset.
InitialSample sample_initial(InitialLaw law, const SpectralField& mu0, double p, int A, uint64_t seed,
                             uint64_t replica, HatEtaPreset preset = HatEtaPreset::Stated);

Eigen::MatrixXcd hat_eta_preset(HatEtaPreset preset, int A);

}  // namespace gf
