#pragma once

#include <functional>
#include <string>
#include <vector>

#include "graphfluct/dynamics.hpp"
#include "graphfluct/graph.hpp"
#include "graphfluct/kernel.hpp"
#include "graphfluct/state.hpp"

namespace gf {

// Truncated Fourier coefficients in the orthonormal basis e_a(θ) = (2π)^{-1/2} e^{iaθ}.
// coeff(a) = ⟨field, ē_a⟩, so a density is Σ coeff(a) e_a. In 2D the basis is e_a ⊗ e_b.
struct SpectralField {
  int dim = 1;
  int A = 0;
  double r = 0.0;  // smoothness index attached for reporting
  std::vector<cplx> c;

  SpectralField() = default;
  SpectralField(int dimension, int a_max);

  int side() const { return 2 * A + 1; }
  bool contains(int a) const { return a >= -A && a <= A; }
  cplx& at(int a) { return c[static_cast<size_t>(a + A)]; }
  cplx at(int a) const { return contains(a) ? c[static_cast<size_t>(a + A)] : cplx{}; }
  cplx& at(int a, int b) { return c[static_cast<size_t>((a + A) * side() + (b + A))]; }
  cplx at(int a, int b) const {
    return contains(a) && contains(b) ? c[static_cast<size_t>((a + A) * side() + (b + A))] : cplx{};
  }

  // √(2π)·coeff(0): total mass of a density on the circle.
  double mass() const;
  // Σ coeff(a) e_a(x), real part.
  double value_at(double x) const;
  // ∫_0^x of the density (dim 1).
  double cdf_at(double x) const;
  SpectralField truncated(int a_max) const;

  static SpectralField uniform_density(int a_max);
};

SpectralField operator-(const SpectralField& u, const SpectralField& v);
SpectralField operator*(double s, const SpectralField& u);

// Real trigonometric polynomial on T² given by terms c·e^{i(aθ₁ + bθ₂)}; the term list
// must be closed under (a, b, c) → (−a, −b, conj c). Used as smooth test function.
struct TrigPoly2 {
  std::vector<KernelMode> terms;
  double operator()(double x, double y) const;
  double d1(double x, double y) const;
  double d2(double x, double y) const;
  // Sobolev H^r norm in the e_a ⊗ e_b basis (coefficient 2π·c).
  double sobolev_norm(double r) const;
};

// Empirical measures. The local measures put weight ξ_li/D on θ_i.
AtomicMeasure empirical_global(const ParticleState& s);
AtomicMeasure empirical_local(const ParticleState& s, const Graph& g, size_t l, Renorm renorm,
                              bool* empty = nullptr);
AtomicMeasure empirical_pair(const ParticleState& s, const Graph& g, size_t l1 = 0, size_t l2 = 1);

double pair(const AtomicMeasure& m, const std::function<double(double)>& f);
cplx pair_complex(const AtomicMeasure& m, const std::function<cplx(double)>& f);
// ∫ f dμ for a density by trapezoidal quadrature on a grid of `grid` points.
double pair(const SpectralField& density, const std::function<double(double)>& f, int grid = 4096);

SpectralField fourier_coeffs(const AtomicMeasure& m, int a_max);

// scale·(measure − reference) as a pairing object.
class FluctuationField {
 public:
  FluctuationField(AtomicMeasure m, AtomicMeasure reference, double scale);
  FluctuationField(AtomicMeasure m, SpectralField reference, double scale);

  double pair(const std::function<double(double)>& f) const;
  // Pairing with e_b.
  cplx pair_mode(int b) const;
  SpectralField coeffs(int a_max) const;
  double scale() const { return scale_; }

 private:
  AtomicMeasure m_;
  bool atomic_ref_;
  AtomicMeasure ref_atoms_;
  SpectralField ref_field_;
  double scale_;
};

// (scale/n²) Σ_{i,j} u_i ξ̂_ij δ_{(θ_i, θ_j)}, never materialized. u ≡ 1 by default;
// the rows weights u_i = ξ̂_li give the triple-indexed field of the local system.
class PairGraphMeasure {
 public:
  PairGraphMeasure(const Graph& g, std::vector<double> phases, double scale, std::vector<double> row_weights = {});

  double pair(const std::function<double(double, double)>& f) const;
  SpectralField coeffs(int a_max) const;

 private:
  const Graph& g_;
  std::vector<double> x_;
  double scale_;
  std::vector<double> u_;
};

double sobolev_norm(const SpectralField& f, double r);

// Circular Wasserstein-1 of two probability measures.
double w1_circle(const AtomicMeasure& mu, const AtomicMeasure& nu);
double w1_circle(const AtomicMeasure& mu, const SpectralField& nu, int grid = 4096);

// Band-limited dual lower bound: sup ⟨μ − ν, f⟩ over trigonometric f of degree ≤ A with
// ‖f‖∞ ≤ 1 and ‖f′‖∞ ≤ 1, by projected ascent. Input: coefficients of μ − ν.
double fourier_dual(const SpectralField& diff, int iterations = 200);

struct BLInterval {
  double lower = 0.0;  // band-limited dual
  double upper = 0.0;  // W1
};
BLInterval bl_distance(const AtomicMeasure& mu, const AtomicMeasure& nu, int a_max = 32);
BLInterval bl_distance(const AtomicMeasure& mu, const SpectralField& nu, int a_max = 32);

// Integrand of the graph remainder C^n at one snapshot:
// (1/n³) Σ ξ̂_ij ξ̂_ik ∂₁g(θ_i,θ_j) Γ(θ_i,θ_k) + (1/n³) Σ ξ̂_ij ξ̂_jk ∂₂g(θ_i,θ_j) Γ(θ_j,θ_k).
double cn_integrand(const std::vector<double>& phases, const Graph& g, const TrigPoly2& test, const KernelSpec& k);
// Trapezoidal time integral of the integrand over snapshots with time ≤ t.
double cn_remainder(const std::vector<double>& times, const std::vector<std::vector<double>>& snapshots,
                    const Graph& g, const TrigPoly2& test, const KernelSpec& k, double t);

}  // namespace gf
