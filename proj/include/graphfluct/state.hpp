#pragma once

#include <string>
#include <vector>

namespace gf {

// Phases of the n particles at time t.
struct ParticleState {
  std::vector<double> phases;
  double t = 0.0;
  size_t n() const { return phases.size(); }
};

// Weighted Dirac sum on the circle (dim 1) or on the 2-torus (dim 2).
// Weights may be negative.
struct AtomicMeasure {
  int dim = 1;
  std::vector<double> x;
  std::vector<double> y;  // second coordinate, dim 2 only
  std::vector<double> w;
  std::string label;

  size_t size() const { return w.size(); }
  double mass() const;
  void add(double at, double weight);
  void add(double at_x, double at_y, double weight);
};

}  // namespace gf
