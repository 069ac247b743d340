#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace gf {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383279;

// Wrap an angle into [0, 2π).
double wrap_angle(double x);
// Wrap an angle difference into (−π, π].
double wrap_diff(double x);

// One term c·exp(i(a·θ + b·θ')) of an interaction kernel.
struct KernelMode {
  int a = 0;
  int b = 0;
  cplx c{0.0, 0.0};
};

// One term c·exp(i·k·θ) of an intrinsic drift.
struct DriftMode {
  int k = 0;
  cplx c{0.0, 0.0};
};

// Interaction Γ(θ, θ') and intrinsic drift F(θ). The Fourier lists are optional;
// when present they must describe the same real-valued functions as the evaluators.
struct KernelSpec {
  std::function<double(double, double)> gamma;
  std::function<double(double)> intrinsic;  // empty means F ≡ 0
  std::vector<KernelMode> modes;
  std::vector<DriftMode> intrinsic_modes;
  std::string label;
  double gamma_sup = 0.0;  // bound on |Γ|
  double intrinsic_sup = 0.0;
  bool zero = false;

  bool spectral() const { return !modes.empty() || is_zero(); }
  bool is_zero() const { return zero; }
  bool has_intrinsic() const { return static_cast<bool>(intrinsic); }
  double gamma_at(double x, double y) const { return gamma ? gamma(x, y) : 0.0; }
  double intrinsic_at(double x) const { return intrinsic ? intrinsic(x) : 0.0; }
  // Evaluate Γ from the Fourier list.
  double gamma_from_modes(double x, double y) const;
  // Σ |c| over the Fourier list: a bound on sup|Γ| for spectral kernels.
  double mode_l1() const;
};

// Γ(θ, θ') = −K sin(θ − θ').
KernelSpec kuramoto_kernel(double K);
// Γ ≡ 0.
KernelSpec zero_kernel();
// Kernel given only by its Fourier list.
KernelSpec kernel_from_modes(std::vector<KernelMode> modes, std::string label);
// Attach F(θ) = Σ c_k e^{ikθ}; the list must satisfy c_{−k} = conj(c_k).
void set_intrinsic_modes(KernelSpec& spec, std::vector<DriftMode> modes);

}  // namespace gf
