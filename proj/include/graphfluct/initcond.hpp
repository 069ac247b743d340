#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "graphfluct/graph.hpp"
#include "graphfluct/kernel.hpp"
#include "graphfluct/measures.hpp"
#include "graphfluct/state.hpp"

namespace gf {

enum class InitKind { IID, MixingChain, GraphAdapted };
enum class IidLaw { Uniform, TwoPoint, Custom };

struct InitSpec {
  InitKind kind = InitKind::IID;
  IidLaw law = IidLaw::Uniform;  // IID only
  SpectralField custom;          // density for IidLaw::Custom
  // Mixing chain on the grid 2πk/states: with probability `locality` a ±1 cyclic step,
  // otherwise a uniform jump. start < 0 draws the first state from the stationary law.
  int chain_states = 16;
  double locality = 0.9;
  int chain_start = -1;
  // Graph-adapted sampling outside the symmetric p = 1/2 setting.
  bool allow_extension = false;
  uint64_t seed = 0;

  std::string label() const;
};

// Initial phases for replica `replica`. IID and chain draws use (seed, Init, replica) and never
// read the graph. GraphAdapted assigns vertex k from the signed edge sums to the earlier
// vertices at 0 and at π/2 and breaks ties with (seed, TieBreak, replica).
ParticleState sample_init(const InitSpec& spec, const Graph* g, size_t n, uint64_t replica = 0);

// Reference law μ₀ as atoms where it has atoms (two-point), otherwise as a density.
bool reference_is_atomic(const InitSpec& spec);
AtomicMeasure reference_atoms(const InitSpec& spec);
SpectralField reference_density(const InitSpec& spec, int a_max);

// √n(μ₀ⁿ − μ₀).
FluctuationField eta0(const ParticleState& s, const InitSpec& spec, int a_max = 64);
// n^{−3/2} Σ ξ̂_ij δ_(θᵢ, θⱼ).
PairGraphMeasure hat_eta0(const ParticleState& s, const Graph& g);
// Truncated H^{−r}(T²) norm of the field above.
double hat_eta0_norm(const ParticleState& s, const Graph& g, double r, int a_max = 16);
// (√(np)/n²) Σ ξ̂_li ξ̂_ij δ_(θᵢ, θⱼ).
PairGraphMeasure varpi0(const ParticleState& s, const Graph& g, size_t l);
// ⟨Γ*η̂₀ⁿ, f⟩ = ⟨η̂₀ⁿ, Γ(θ₁, θ₂) f(θ₁)⟩.
double gamma_hat_eta0(const ParticleState& s, const Graph& g, const KernelSpec& k,
                      const std::function<double(double)>& f);

}  // namespace gf
