#include "graphfluct/limits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace gf {

namespace {

const double kSqrt2Pi = std::sqrt(kTwoPi);
const double kInvSqrt2Pi = 1.0 / std::sqrt(kTwoPi);

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// h(θ) = F(θ) + (Γ*ν)(θ) as plain exponentials Σ_c h_c e^{icθ}; returns (c, h_c) pairs.
std::vector<std::pair<int, cplx>> transport_field(const KernelSpec& k, const Vec& nu, int A) {
  std::vector<std::pair<int, cplx>> h;
  auto coeff = [&](int a) { return (a >= -A && a <= A) ? nu(mode_index(a, A)) : cplx{}; };
  for (const auto& m : k.modes) h.emplace_back(m.a, kSqrt2Pi * m.c * coeff(-m.b));
  for (const auto& f : k.intrinsic_modes) h.emplace_back(f.k, f.c);
  return h;
}

// −∂(μh) restricted to modes −A..A.
Vec transport_term(const Vec& m, const std::vector<std::pair<int, cplx>>& h, int A) {
  Vec out = Vec::Zero(2 * A + 1);
  for (const auto& [c, hc] : h) {
    for (int k = -A; k <= A; ++k) {
      const int a = k - c;
      if (a < -A || a > A) continue;
      out(mode_index(k, A)) += cplx(0.0, -k) * hc * m(mode_index(a, A));
    }
  }
  return out;
}

void symmetrize(Vec& m, int A) {
  for (int a = 1; a <= A; ++a) {
    const cplx v = 0.5 * (m(mode_index(a, A)) + std::conj(m(mode_index(-a, A))));
    m(mode_index(a, A)) = v;
    m(mode_index(-a, A)) = std::conj(v);
  }
  m(mode_index(0, A)) = m(mode_index(0, A)).real();
}

Vec heat_factor(int A, double t) {
  Vec e(2 * A + 1);
  for (int a = -A; a <= A; ++a) e(mode_index(a, A)) = std::exp(-0.5 * a * a * t);
  return e;
}

void check_density(const SpectralField& mu0) {
  if (mu0.dim != 1) throw std::invalid_argument("density must live on the circle");
  if (std::abs(mu0.mass() - 1.0) > 1e-9) throw std::invalid_argument("initial density must have unit mass");
}

void check_finite(const Vec& m, double t) {
  if (!m.allFinite()) throw std::runtime_error("Fokker-Planck coefficients overflowed at t = " + std::to_string(t));
}

size_t step_count(double T, double dt) {
  if (!(dt > 0.0) || T < 0.0) throw std::invalid_argument("need dt > 0 and T >= 0");
  return static_cast<size_t>(std::llround(T / dt));
}

cplx field_at(const SpectralField& f, int a) { return f.at(a); }

}  // namespace

const SpectralField& MuTrajectory::at_time(double t) const {
  if (mu.empty()) throw std::logic_error("empty trajectory");
  const auto k = static_cast<long long>(std::llround(t / dt));
  return mu[static_cast<size_t>(std::clamp<long long>(k, 0, static_cast<long long>(steps())))];
}

Vec to_vector(const SpectralField& f) {
  Vec v(f.side());
  for (int a = -f.A; a <= f.A; ++a) v(mode_index(a, f.A)) = f.at(a);
  return v;
}

Mat to_matrix(const SpectralField& f) {
  Mat m(f.side(), f.side());
  for (int a = -f.A; a <= f.A; ++a)
    for (int b = -f.A; b <= f.A; ++b) m(mode_index(a, f.A), mode_index(b, f.A)) = f.at(a, b);
  return m;
}

SpectralField from_vector(const Vec& v) {
  const int A = static_cast<int>((v.size() - 1) / 2);
  SpectralField f(1, A);
  for (int a = -A; a <= A; ++a) f.at(a) = v(mode_index(a, A));
  return f;
}

SpectralField from_matrix(const Mat& m) {
  const int A = static_cast<int>((m.rows() - 1) / 2);
  SpectralField f(2, A);
  for (int a = -A; a <= A; ++a)
    for (int b = -A; b <= A; ++b) f.at(a, b) = m(mode_index(a, A), mode_index(b, A));
  return f;
}

MuTrajectory solve_fokker_planck(const SpectralField& mu0, const KernelSpec& k, double T, double dt, int A) {
  check_density(mu0);
  const size_t K = step_count(T, dt);
  MuTrajectory traj;
  traj.dt = dt;
  traj.A = A;
  traj.mu.reserve(K + 1);
  Vec m = to_vector(mu0.truncated(A));
  traj.mu.push_back(from_vector(m));
  const Vec E = heat_factor(A, dt), Eh = heat_factor(A, 0.5 * dt);
  auto N = [&](const Vec& v) { return transport_term(v, transport_field(k, v, A), A); };
  const bool linear = k.is_zero() && k.intrinsic_modes.empty();
  for (size_t s = 1; s <= K; ++s) {
    if (linear) {
      m = E.cwiseProduct(m);
    } else {
      const Vec k1 = N(m);
      const Vec k2 = N(Eh.cwiseProduct(m + 0.5 * dt * k1));
      const Vec k3 = N(Eh.cwiseProduct(m) + 0.5 * dt * k2);
      const Vec k4 = N(E.cwiseProduct(m) + dt * Eh.cwiseProduct(k3));
      m = E.cwiseProduct(m) + (dt / 6.0) * (E.cwiseProduct(k1) + 2.0 * Eh.cwiseProduct(k2 + k3) + k4);
      symmetrize(m, A);
      check_finite(m, static_cast<double>(s) * dt);
    }
    traj.mu.push_back(from_vector(m));
  }
  return traj;
}

std::pair<MuTrajectory, MuTrajectory> solve_fokker_planck_sbm(const SpectralField& mu0_first,
                                                              const SpectralField& mu0_second, double alpha,
                                                              const KernelSpec& k, double T, double dt, int A) {
  check_density(mu0_first);
  check_density(mu0_second);
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must lie in [0, 1]");
  const size_t K = step_count(T, dt);
  MuTrajectory t1, t2;
  t1.dt = t2.dt = dt;
  t1.A = t2.A = A;
  Vec m1 = to_vector(mu0_first.truncated(A)), m2 = to_vector(mu0_second.truncated(A));
  t1.mu.push_back(from_vector(m1));
  t2.mu.push_back(from_vector(m2));
  const Vec E = heat_factor(A, dt), Eh = heat_factor(A, 0.5 * dt);
  auto N = [&](const Vec& a, const Vec& b, Vec& na, Vec& nb) {
    na = transport_term(a, transport_field(k, alpha * a + (1.0 - alpha) * b, A), A);
    nb = transport_term(b, transport_field(k, (1.0 - alpha) * a + alpha * b, A), A);
  };
  Vec a1, b1, a2, b2, a3, b3, a4, b4;
  for (size_t s = 1; s <= K; ++s) {
    N(m1, m2, a1, b1);
    N(Eh.cwiseProduct(m1 + 0.5 * dt * a1), Eh.cwiseProduct(m2 + 0.5 * dt * b1), a2, b2);
    N(Eh.cwiseProduct(m1) + 0.5 * dt * a2, Eh.cwiseProduct(m2) + 0.5 * dt * b2, a3, b3);
    N(E.cwiseProduct(m1) + dt * Eh.cwiseProduct(a3), E.cwiseProduct(m2) + dt * Eh.cwiseProduct(b3), a4, b4);
    m1 = E.cwiseProduct(m1) + (dt / 6.0) * (E.cwiseProduct(a1) + 2.0 * Eh.cwiseProduct(a2 + a3) + a4);
    m2 = E.cwiseProduct(m2) + (dt / 6.0) * (E.cwiseProduct(b1) + 2.0 * Eh.cwiseProduct(b2 + b3) + b4);
    symmetrize(m1, A);
    symmetrize(m2, A);
    check_finite(m1, static_cast<double>(s) * dt);
    check_finite(m2, static_cast<double>(s) * dt);
    t1.mu.push_back(from_vector(m1));
    t2.mu.push_back(from_vector(m2));
  }
  return {std::move(t1), std::move(t2)};
}

SpectralField heat_smooth(const SpectralField& f, double t) {
  SpectralField out = f;
  for (int a = -f.A; a <= f.A; ++a) out.at(a) *= std::exp(-0.5 * a * a * t);
  return out;
}

OrderParameter limit_order_parameter(const SpectralField& mu) {
  const cplx z = kSqrt2Pi * mu.at(-1) / mu.mass();
  OrderParameter op;
  op.r = std::abs(z);
  op.psi = wrap_angle(std::arg(z));
  return op;
}

Mat assemble_operator(OperatorKind which, const SpectralField& mu, const KernelSpec& k, int A) {
  const int side = 2 * A + 1;
  auto nu = [&](int a) { return field_at(mu, a); };
  Mat diff = Mat::Zero(side, side), transport = Mat::Zero(side, side), integral = Mat::Zero(side, side);
  for (int b = -A; b <= A; ++b) {
    diff(mode_index(b, A), mode_index(b, A)) = -0.5 * b * b;
    const cplx ib(0.0, b);
    for (const auto& m : k.modes) {
      const int a = m.a + b;
      if (a >= -A && a <= A) transport(mode_index(a, A), mode_index(b, A)) += ib * m.c * kSqrt2Pi * nu(-m.b);
      if (m.b >= -A && m.b <= A) integral(mode_index(m.b, A), mode_index(b, A)) += ib * m.c * kSqrt2Pi * nu(-m.a - b);
    }
    for (const auto& f : k.intrinsic_modes) {
      const int a = f.k + b;
      if (a >= -A && a <= A) transport(mode_index(a, A), mode_index(b, A)) += ib * f.c;
    }
  }
  switch (which) {
    case OperatorKind::U:
      return diff + transport;
    case OperatorKind::V:
      return integral;
    case OperatorKind::L1:
      return diff + transport + integral;
    case OperatorKind::L2: {
      const Mat U = diff + transport;
      const Mat I = Mat::Identity(side, side);
      Mat out = Mat::Zero(side * side, side * side);
      for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
          out.block(r * side, c * side, side, side) += U(r, c) * I;
          if (r == c) out.block(r * side, c * side, side, side) += U;
        }
      return out;
    }
    case OperatorKind::Theta: {
      Mat out = Mat::Zero(side * side, side);
      for (int c = -A; c <= A; ++c)
        for (const auto& m : k.modes) {
          const int r = m.a + c, s = m.b;
          if (r < -A || r > A || s < -A || s > A) continue;
          out(mode_index(r, A) * side + mode_index(s, A), mode_index(c, A)) += cplx(0.0, c) * m.c * kSqrt2Pi;
        }
      return out;
    }
  }
  throw std::logic_error("unknown operator");
}

Vec apply_transport_adjoint(const SpectralField& mu, const KernelSpec& k, const Vec& c) {
  const int A = static_cast<int>((c.size() - 1) / 2);
  Vec out = Vec::Zero(c.size());
  std::vector<std::pair<int, cplx>> terms;  // (shift, conj coefficient without the −ia factor)
  for (const auto& m : k.modes) terms.emplace_back(m.a, std::conj(m.c * kSqrt2Pi * mu.at(-m.b)));
  for (const auto& f : k.intrinsic_modes) terms.emplace_back(f.k, std::conj(f.c));
  for (int a = -A; a <= A; ++a) {
    cplx acc{};
    for (const auto& [shift, w] : terms) {
      const int b = shift + a;
      if (b >= -A && b <= A) acc += w * c(mode_index(b, A));
    }
    out(mode_index(a, A)) = cplx(0.0, -a) * acc;
  }
  return out;
}

Vec apply_v_adjoint(const SpectralField& mu, const KernelSpec& k, const Vec& c) {
  const int A = static_cast<int>((c.size() - 1) / 2);
  Vec out = Vec::Zero(c.size());
  for (int a = -A; a <= A; ++a) {
    cplx acc{};
    for (const auto& m : k.modes) {
      if (m.b < -A || m.b > A) continue;
      acc += std::conj(m.c * kSqrt2Pi * mu.at(-m.a - a)) * c(mode_index(m.b, A));
    }
    out(mode_index(a, A)) = cplx(0.0, -a) * acc;
  }
  return out;
}

namespace {
Vec contract_modes(const Mat& D, const KernelSpec& k, bool derivative) {
  const int A = static_cast<int>((D.rows() - 1) / 2);
  Vec out = Vec::Zero(D.rows());
  for (int a = -A; a <= A; ++a) {
    cplx acc{};
    for (const auto& m : k.modes) {
      const int r = a - m.a, s = -m.b;
      if (r < -A || r > A || s < -A || s > A) continue;
      acc += m.c * kSqrt2Pi * D(mode_index(r, A), mode_index(s, A));
    }
    out(mode_index(a, A)) = derivative ? cplx(0.0, -a) * acc : acc;
  }
  return out;
}
}  // namespace

Vec theta_adjoint(const Mat& D, const KernelSpec& k) { return contract_modes(D, k, true); }
Vec gamma_star(const Mat& D, const KernelSpec& k) { return contract_modes(D, k, false); }

Vec hermitian_normal(int A, Rng& rng) {
  Vec z(2 * A + 1);
  z(mode_index(0, A)) = rng.normal();
  const double s = 1.0 / std::sqrt(2.0);
  for (int a = 1; a <= A; ++a) {
    const double g1 = rng.normal(), g2 = rng.normal();
    z(mode_index(a, A)) = cplx(s * g1, s * g2);
    z(mode_index(-a, A)) = cplx(s * g1, -s * g2);
  }
  return z;
}

namespace {
struct Root {
  Mat root;
  double min_eig;
};

Root psd_root(const Mat& C) {
  Eigen::SelfAdjointEigenSolver<Mat> es(C);
  const Eigen::VectorXd lam = es.eigenvalues();
  Eigen::VectorXd s(lam.size());
  // Eigenvalues at roundoff level are zero modes (e.g. mode 0); their square roots would leak noise.
  const double floor = 1e-13 * (lam.size() ? lam.cwiseAbs().maxCoeff() : 0.0);
  for (Eigen::Index i = 0; i < lam.size(); ++i) s(i) = lam(i) > floor ? std::sqrt(lam(i)) : 0.0;
  return {es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint(), lam.size() ? lam.minCoeff() : 0.0};
}

Eigen::Matrix3d local_block_root(double p) {
  Eigen::Matrix3d R;
  const double sp = std::sqrt(p);
  R << 1.0, p, sp, p, 1.0, sp, sp, sp, 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(R);
  const Eigen::Vector3d lam = es.eigenvalues();
  const double floor = 1e-13 * lam.cwiseAbs().maxCoeff();
  Eigen::Vector3d s;
  for (int i = 0; i < 3; ++i) s(i) = lam(i) > floor ? std::sqrt(lam(i)) : 0.0;
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
}

void make_hermitian_symmetric(Vec& v) {
  const int A = static_cast<int>((v.size() - 1) / 2);
  symmetrize(v, A);
}
}  // namespace

Mat NoiseModel::covariance(const SpectralField& mu, int A) {
  const int side = 2 * A + 1;
  Mat C(side, side);
  for (int a = -A; a <= A; ++a)
    for (int b = -A; b <= A; ++b) C(mode_index(a, A), mode_index(b, A)) = double(a) * b * kInvSqrt2Pi * mu.at(a - b);
  return 0.5 * (C + C.adjoint());
}

NoiseModel::NoiseModel(const MuTrajectory& mu, int A, double dt, size_t steps) : A_(A), dt_(dt) {
  index_.resize(steps);
  const SpectralField* last = nullptr;
  for (size_t s = 0; s < steps; ++s) {
    const SpectralField& cur = mu.at_time(static_cast<double>(s) * dt);
    bool same = last != nullptr;
    if (same) {
      for (int a = -2 * A; a <= 2 * A && same; ++a) same = std::abs(cur.at(a) - last->at(a)) <= 1e-14;
    }
    if (!same) {
      cov_.push_back(covariance(cur, A));
      Root r = psd_root(cov_.back());
      root_.push_back(std::move(r.root));
      min_eig_.push_back(r.min_eig);
      last = &cur;
    }
    index_[s] = cov_.size() - 1;
  }
}

Vec NoiseModel::increment(size_t step, Rng& rng) const {
  Vec w = std::sqrt(dt_) * (root(step) * hermitian_normal(A_, rng));
  make_hermitian_symmetric(w);
  return w;
}

void NoiseModel::increment_local(size_t step, double p, Rng& rng, Vec& w1, Vec& w2, Vec& w) const {
  const Eigen::Matrix3d R = local_block_root(p);
  Vec x[3];
  for (auto& xi : x) xi = std::sqrt(dt_) * (root(step) * hermitian_normal(A_, rng));
  w1 = R(0, 0) * x[0] + R(0, 1) * x[1] + R(0, 2) * x[2];
  w2 = R(1, 0) * x[0] + R(1, 1) * x[1] + R(1, 2) * x[2];
  w = R(2, 0) * x[0] + R(2, 1) * x[1] + R(2, 2) * x[2];
  make_hermitian_symmetric(w1);
  make_hermitian_symmetric(w2);
  make_hermitian_symmetric(w);
}

NoisePath draw_noise_path(const NoiseModel& noise, uint64_t seed, uint64_t replica) {
  Rng rng(seed, Stream::Spde, replica, 0);
  NoisePath path;
  path.reserve(noise.steps());
  for (size_t s = 0; s < noise.steps(); ++s) path.push_back(noise.increment(s, rng));
  return path;
}

namespace {
struct ExpFactors {
  Vec E, S;
};

ExpFactors exp_factors(int A, double dt) {
  ExpFactors f{Vec(2 * A + 1), Vec(2 * A + 1)};
  for (int a = -A; a <= A; ++a) {
    const double q = a * a * dt;
    f.E(mode_index(a, A)) = std::exp(-0.5 * q);
    f.S(mode_index(a, A)) = a == 0 ? 1.0 : std::sqrt(-std::expm1(-q) / q);
  }
  return f;
}

bool should_record(size_t s, size_t K, size_t every) { return s == K || (every > 0 && s % every == 0); }
}  // namespace

LimitPath solve_limit_eta(const Vec& eta0, const MuTrajectory& mu, const KernelSpec& k, const NoisePath& dW,
                          const SpdeOptions& opt) {
  return solve_coupled(eta0, Mat(), mu, k, dW, opt);
}

LimitPath solve_coupled(const Vec& eta0, const Mat& hat_eta0, const MuTrajectory& mu, const KernelSpec& k,
                        const NoisePath& dW, const SpdeOptions& opt) {
  const int A = static_cast<int>((eta0.size() - 1) / 2);
  const size_t K = step_count(opt.T, opt.dt);
  if (dW.size() < K) throw std::invalid_argument("noise path shorter than the horizon");
  const bool coupled = hat_eta0.size() > 0;
  if (coupled && (hat_eta0.rows() != eta0.size() || hat_eta0.cols() != eta0.size()))
    throw std::invalid_argument("η̂ must use the same mode range as η");
  const ExpFactors f = exp_factors(A, opt.dt);
  Mat E2;
  if (coupled) E2 = f.E * f.E.transpose();
  LimitPath path;
  Vec c = eta0;
  Mat D = hat_eta0;
  path.times.push_back(0.0);
  path.eta.push_back(c);
  if (coupled) path.hat_eta.push_back(D);
  for (size_t s = 0; s < K; ++s) {
    const SpectralField& m = mu.at_time(static_cast<double>(s) * opt.dt);
    Vec drift = apply_transport_adjoint(m, k, c) + apply_v_adjoint(m, k, c);
    if (coupled && opt.theta_coupling) drift += theta_adjoint(D, k);
    Mat Dn;
    if (coupled) {
      Mat TD(D.rows(), D.cols());
      for (Eigen::Index j = 0; j < D.cols(); ++j) TD.col(j) = apply_transport_adjoint(m, k, D.col(j));
      for (Eigen::Index i = 0; i < D.rows(); ++i) TD.row(i) += apply_transport_adjoint(m, k, D.row(i).transpose()).transpose();
      Dn = E2.cwiseProduct(D + opt.dt * TD);
    }
    c = f.E.cwiseProduct(c + opt.dt * drift) + f.S.cwiseProduct(dW[s]);
    if (coupled) D = std::move(Dn);
    if (should_record(s + 1, K, opt.record_every)) {
      path.times.push_back(static_cast<double>(s + 1) * opt.dt);
      path.eta.push_back(c);
      if (coupled) path.hat_eta.push_back(D);
    }
  }
  return path;
}

LocalPath solve_local_system(const Vec& zeta1_0, const Vec& zeta2_0, const Vec& eta0, double p, const MuTrajectory& mu,
                             const KernelSpec& k, const NoiseModel& noise, uint64_t seed, uint64_t replica,
                             const SpdeOptions& opt) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must lie in [0, 1]");
  const int A = static_cast<int>((eta0.size() - 1) / 2);
  const size_t K = step_count(opt.T, opt.dt);
  if (noise.steps() < K || noise.A() != A) throw std::invalid_argument("noise model does not match the system");
  const ExpFactors f = exp_factors(A, opt.dt);
  const double sp = std::sqrt(p);
  Rng rng(seed, Stream::Spde, replica, 0);
  LocalPath path;
  Vec z1 = zeta1_0, z2 = zeta2_0, e = eta0, w1, w2, w;
  path.times.push_back(0.0);
  path.zeta1.push_back(z1);
  path.zeta2.push_back(z2);
  path.eta.push_back(e);
  for (size_t s = 0; s < K; ++s) {
    const SpectralField& m = mu.at_time(static_cast<double>(s) * opt.dt);
    noise.increment_local(s, p, rng, w1, w2, w);
    const Vec ve = apply_v_adjoint(m, k, e);
    const Vec d1 = apply_transport_adjoint(m, k, z1) + sp * ve;
    const Vec d2 = apply_transport_adjoint(m, k, z2) + sp * ve;
    const Vec de = apply_transport_adjoint(m, k, e) + ve;
    z1 = f.E.cwiseProduct(z1 + opt.dt * d1) + f.S.cwiseProduct(w1);
    z2 = f.E.cwiseProduct(z2 + opt.dt * d2) + f.S.cwiseProduct(w2);
    e = f.E.cwiseProduct(e + opt.dt * de) + f.S.cwiseProduct(w);
    if (should_record(s + 1, K, opt.record_every)) {
      path.times.push_back(static_cast<double>(s + 1) * opt.dt);
      path.zeta1.push_back(z1);
      path.zeta2.push_back(z2);
      path.eta.push_back(e);
    }
  }
  return path;
}

Mat initial_covariance(const SpectralField& mu0, int A) {
  const int side = 2 * A + 1;
  Mat S(side, side);
  for (int a = -A; a <= A; ++a)
    for (int b = -A; b <= A; ++b)
      S(mode_index(a, A), mode_index(b, A)) = kInvSqrt2Pi * mu0.at(a - b) - mu0.at(a) * std::conj(mu0.at(b));
  return 0.5 * (S + S.adjoint());
}

Mat hat_eta_preset(HatEtaPreset preset, int A) {
  AtomicMeasure m;
  m.dim = 2;
  const double h = 0.5 * kPi;
  if (preset == HatEtaPreset::Stated) {
    const double c = 1.0 / (6.0 * std::sqrt(kPi));
    m.add(0.0, 0.0, -c);
    m.add(h, 0.0, 2.0 * c);
    m.add(h, h, -c);
  } else {
    const double c = 2.0 / (3.0 * std::sqrt(kPi));
    m.add(0.0, 0.0, -c);
    m.add(0.0, h, c);
    m.add(h, 0.0, c);
    m.add(h, h, -c);
  }
  return to_matrix(fourier_coeffs(m, A));
}

InitialSample sample_initial(InitialLaw law, const SpectralField& mu0, double p, int A, uint64_t seed, uint64_t replica,
                             HatEtaPreset preset) {
  const int side = 2 * A + 1;
  InitialSample out;
  out.zeta1 = out.zeta2 = out.eta = Vec::Zero(side);
  out.hat_eta = Mat::Zero(side, side);
  Rng rng(seed, Stream::Spde, replica, 1);
  switch (law) {
    case InitialLaw::Zero:
      break;
    case InitialLaw::GaussianCLT: {
      const Root r = psd_root(initial_covariance(mu0, A));
      out.eta = r.root * hermitian_normal(A, rng);
      make_hermitian_symmetric(out.eta);
      break;
    }
    case InitialLaw::LocalJoint: {
      if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must lie in [0, 1]");
      const Root r = psd_root(initial_covariance(mu0, A));
      const Eigen::Matrix3d R = local_block_root(p);
      Vec x[3];
      for (auto& xi : x) xi = r.root * hermitian_normal(A, rng);
      const Vec v = to_vector(mu0.truncated(A));
      const double s1 = std::sqrt(1.0 - p);
      const double g1 = rng.normal(), g2 = rng.normal();
      out.zeta1 = R(0, 0) * x[0] + R(0, 1) * x[1] + R(0, 2) * x[2] + s1 * g1 * v;
      out.zeta2 = R(1, 0) * x[0] + R(1, 1) * x[1] + R(1, 2) * x[2] + s1 * g2 * v;
      out.eta = R(2, 0) * x[0] + R(2, 1) * x[1] + R(2, 2) * x[2];
      make_hermitian_symmetric(out.zeta1);
      make_hermitian_symmetric(out.zeta2);
      make_hermitian_symmetric(out.eta);
      break;
    }
    case InitialLaw::ExplicitAtoms: {
      // C = [[1/4, −1/4], [−1/4, 1/4]] has rank one: (Z₁, Z₂) = (g/2, −g/2).
      const double g = rng.normal();
      const double z1 = 0.5 * g, z2 = -0.5 * g;
      for (int a = -A; a <= A; ++a)
        out.eta(mode_index(a, A)) = kInvSqrt2Pi * (z1 + z2 * std::polar(1.0, -a * 0.5 * kPi));
      out.hat_eta = hat_eta_preset(preset, A);
      break;
    }
  }
  return out;
}

}  // namespace gf
