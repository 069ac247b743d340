#include "graphfluct/kernel.hpp"

#include <cmath>

namespace gf {

double wrap_angle(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  if (y >= kTwoPi) y -= kTwoPi;
  return y;
}

double wrap_diff(double x) {
  double y = std::fmod(x + kPi, kTwoPi);
  if (y <= 0.0) y += kTwoPi;
  return y - kPi;
}

double KernelSpec::gamma_from_modes(double x, double y) const {
  cplx acc{0.0, 0.0};
  for (const auto& m : modes) acc += m.c * std::polar(1.0, m.a * x + m.b * y);
  return acc.real();
}

double KernelSpec::mode_l1() const {
  double s = 0.0;
  for (const auto& m : modes) s += std::abs(m.c);
  return s;
}

KernelSpec kuramoto_kernel(double K) {
  KernelSpec k;
  k.gamma = [K](double x, double y) { return -K * std::sin(x - y); };
  // −K sin(x − y) = (iK/2) e^{i(x−y)} − (iK/2) e^{−i(x−y)}
  k.modes = {{1, -1, cplx(0.0, K / 2)}, {-1, 1, cplx(0.0, -K / 2)}};
  k.label = "kuramoto";
  k.gamma_sup = std::abs(K);
  return k;
}

KernelSpec zero_kernel() {
  KernelSpec k;
  k.gamma = [](double, double) { return 0.0; };
  k.label = "zero";
  k.zero = true;
  return k;
}

KernelSpec kernel_from_modes(std::vector<KernelMode> modes, std::string label) {
  KernelSpec k;
  k.modes = std::move(modes);
  k.label = std::move(label);
  auto m = k.modes;
  k.gamma = [m](double x, double y) {
    cplx acc{0.0, 0.0};
    for (const auto& t : m) acc += t.c * std::polar(1.0, t.a * x + t.b * y);
    return acc.real();
  };
  k.gamma_sup = k.mode_l1();
  return k;
}

void set_intrinsic_modes(KernelSpec& spec, std::vector<DriftMode> modes) {
  spec.intrinsic_modes = std::move(modes);
  auto m = spec.intrinsic_modes;
  spec.intrinsic = [m](double x) {
    cplx acc{0.0, 0.0};
    for (const auto& t : m) acc += t.c * std::polar(1.0, t.k * x);
    return acc.real();
  };
  double s = 0.0;
  for (const auto& t : spec.intrinsic_modes) s += std::abs(t.c);
  spec.intrinsic_sup = s;
}

}  // namespace gf
