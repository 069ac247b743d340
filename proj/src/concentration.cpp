#include "graphfluct/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "graphfluct/rng.hpp"
#include "graphfluct/stats.hpp"

namespace gf {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string PatternId::name() const {
  switch (kind) {
    case Pattern::Pair: return "pair";
    case Pattern::Ulr: return "ulr";
    case Pattern::UDD: return "uDD";
    case Pattern::VZT: return "vZT";
    case Pattern::Umr: return "umr";
    case Pattern::UDlr: return "uDlr:" + std::to_string(l);
    case Pattern::UDDD: return "uDDD:" + std::to_string(l);
  }
  return "?";
}

PatternId PatternId::parse(const std::string& s) {
  std::string head = s;
  size_t l = 0;
  if (const auto colon = s.find(':'); colon != std::string::npos) {
    head = s.substr(0, colon);
    l = std::stoul(s.substr(colon + 1));
  }
  std::string low = head;
  std::transform(low.begin(), low.end(), low.begin(), [](unsigned char c) { return std::tolower(c); });
  PatternId id;
  id.l = l;
  if (low == "pair" || low == "ij") id.kind = Pattern::Pair;
  else if (low == "ulr") id.kind = Pattern::Ulr;
  else if (low == "udd") id.kind = Pattern::UDD;
  else if (low == "vzt") id.kind = Pattern::VZT;
  else if (low == "umr") id.kind = Pattern::Umr;
  else if (low == "udlr") id.kind = Pattern::UDlr;
  else if (low == "uddd") id.kind = Pattern::UDDD;
  else throw std::invalid_argument("unknown pattern '" + s + "'");
  return id;
}

std::vector<PatternId> all_patterns(size_t l) {
  return {{Pattern::Pair, 0}, {Pattern::Ulr, 0}, {Pattern::UDD, 0}, {Pattern::VZT, 0},
          {Pattern::Umr, 0},  {Pattern::UDlr, l}, {Pattern::UDDD, l}};
}

std::string method_name(SnMethod m) {
  switch (m) {
    case SnMethod::Exact: return "exact";
    case SnMethod::Naive: return "naive";
    case SnMethod::Upper: return "upper";
    case SnMethod::Lower: return "lower";
  }
  return "?";
}

double CenteredInput::spectral(double tol) const {
  if (norm_cache < 0.0) norm_cache = spectral_norm(op, tol).value * (1.0 + 10.0 * tol);
  return norm_cache;
}

CenteredInput centered_input(const Graph& g) {
  CenteredInput in;
  in.op = centered_operator(g);
  const size_t n = g.n();
  if (!g.info().sbm) {
    const double e = static_cast<double>(g.edge_count());
    in.abs_sum = e * (1.0 / g.p() - 1.0) + (static_cast<double>(n) * n - e);
  } else {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) s += std::abs(g.centered(i, j));
    in.abs_sum = s;
  }
  const Graph* gp = &g;
  in.row = [gp](size_t l) {
    std::vector<double> w(gp->n());
    for (size_t j = 0; j < w.size(); ++j) w[j] = gp->centered(l, j);
    return w;
  };
  return in;
}

CenteredInput centered_input(const MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("centered adjacency must be square");
  CenteredInput in;
  in.op = dense_operator(a);
  in.abs_sum = a.cwiseAbs().sum();
  in.row = [a](size_t l) {
    std::vector<double> w(static_cast<size_t>(a.cols()));
    for (Eigen::Index j = 0; j < a.cols(); ++j) w[static_cast<size_t>(j)] = a(static_cast<Eigen::Index>(l), j);
    return w;
  };
  return in;
}

double pattern_normalization(PatternId pat, size_t n, double p) {
  const double np = static_cast<double>(n) * p;
  if (!pat.triple()) return std::sqrt(np);
  return pat.anchored() ? np * p * p : np * p;
}

namespace {

void check_anchor(PatternId pat, size_t n) {
  if (pat.anchored() && pat.l >= n) throw std::invalid_argument("anchor vertex out of range");
}

// Coefficient vectors of the multilinear form: value = r·coef(0) = s·coef(1) = t·coef(2).
struct FormEval {
  const CenteredInput& in;
  PatternId pat;
  VectorXd w;

  FormEval(const CenteredInput& input, PatternId p) : in(input), pat(p) {
    check_anchor(p, input.n());
    if (p.anchored()) {
      const auto row = input.row(p.l);
      w = Eigen::Map<const VectorXd>(row.data(), static_cast<Eigen::Index>(row.size()));
    }
  }

  VectorXd A(const VectorXd& x) const {
    VectorXd y(x.size());
    in.op.apply(x.data(), y.data());
    return y;
  }
  VectorXd At(const VectorXd& x) const {
    VectorXd y(x.size());
    in.op.apply_t(x.data(), y.data());
    return y;
  }

  VectorXd coef(int role, const VectorXd& r, const VectorXd& s, const VectorXd& t) const {
    switch (pat.kind) {
      case Pattern::Pair:
        return role == 1 ? A(t) : At(s);
      case Pattern::Ulr:
        if (role == 0) return A(s).cwiseProduct(A(t));
        if (role == 1) return At(r.cwiseProduct(A(t)));
        return At(r.cwiseProduct(A(s)));
      case Pattern::UDD:
        if (role == 0) return A(s.cwiseProduct(A(t)));
        if (role == 1) return At(r).cwiseProduct(A(t));
        return At(s.cwiseProduct(At(r)));
      case Pattern::VZT:
        if (role == 0) return A(t.cwiseProduct(At(s)));
        if (role == 1) return A(t.cwiseProduct(At(r)));
        return At(r).cwiseProduct(At(s));
      case Pattern::Umr:
        if (role == 0) return A(s).cwiseProduct(At(t));
        if (role == 1) return At(r.cwiseProduct(At(t)));
        return A(r.cwiseProduct(A(s)));
      case Pattern::UDlr:
        if (role == 0) return w.cwiseProduct(A(s)).cwiseProduct(A(t));
        if (role == 1) return At(w.cwiseProduct(r).cwiseProduct(A(t)));
        return At(w.cwiseProduct(r).cwiseProduct(A(s)));
      case Pattern::UDDD:
        if (role == 0) return w.cwiseProduct(A(s.cwiseProduct(A(t))));
        if (role == 1) return At(w.cwiseProduct(r)).cwiseProduct(A(t));
        return At(s.cwiseProduct(At(w.cwiseProduct(r))));
    }
    throw std::logic_error("unknown pattern");
  }

  double scale() const {
    const double n = static_cast<double>(in.n());
    return pat.triple() ? 1.0 / (n * n * n) : 1.0 / (n * n);
  }

  double value(const VectorXd& r, const VectorXd& s, const VectorXd& t) const {
    return pat.triple() ? r.dot(coef(0, r, s, t)) * scale() : s.dot(coef(1, r, s, t)) * scale();
  }
};

VectorXd to_vec(const std::vector<int>& v, size_t n) {
  VectorXd x = VectorXd::Ones(static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < v.size() && i < n; ++i) x(static_cast<Eigen::Index>(i)) = v[i];
  return x;
}

std::vector<int> to_signs(const VectorXd& x) {
  std::vector<int> s(static_cast<size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) s[static_cast<size_t>(i)] = x(i) < 0.0 ? -1 : 1;
  return s;
}

VectorXd sign_of(const VectorXd& x) {
  return x.unaryExpr([](double v) { return v < 0.0 ? -1.0 : 1.0; });
}

// Elimination layout: value = Σ_x |c_x P_x Q_x| with P = M1·u and Q = M2·v for the two
// enumerated sign vectors u, v; the third vector takes sign(c∘P∘Q).
struct Elimination {
  MatrixXd M1, M2;
  VectorXd c;
  int u_role, v_role, elim_role;
};

Elimination elimination(const MatrixXd& a, PatternId pat) {
  const Eigen::Index n = a.rows();
  VectorXd ones = VectorXd::Ones(n);
  VectorXd w = pat.anchored() ? VectorXd(a.row(static_cast<Eigen::Index>(pat.l)).transpose()) : ones;
  const MatrixXd at = a.transpose();
  switch (pat.kind) {
    case Pattern::Ulr: return {a, a, ones, 1, 2, 0};
    case Pattern::Umr: return {a, at, ones, 1, 2, 0};
    case Pattern::UDD: return {at, a, ones, 0, 2, 1};
    case Pattern::VZT: return {at, at, ones, 0, 1, 2};
    case Pattern::UDlr: return {a, a, w, 1, 2, 0};
    case Pattern::UDDD: return {at * w.asDiagonal(), a, ones, 0, 2, 1};
    case Pattern::Pair: break;
  }
  throw std::logic_error("pair has no triple elimination");
}

// Visits all sign vectors with u_0 = +1 in Gray order; f(u, flipped index or −1).
template <class F>
void gray_walk(size_t n, VectorXd& u, F&& f) {
  u.setOnes(static_cast<Eigen::Index>(n));
  f(-1);
  if (n <= 1) return;
  const uint64_t count = uint64_t{1} << (n - 1);
  for (uint64_t k = 1; k < count; ++k) {
    const int bit = __builtin_ctzll(k) + 1;
    u(bit) = -u(bit);
    f(bit);
  }
}

SnResult exact_pair(const MatrixXd& a, PatternId pat) {
  const size_t n = static_cast<size_t>(a.rows());
  SnResult res{pat, n, 0.0, SnMethod::Exact, {}, {}, {}};
  VectorXd s, col = a.colwise().sum().transpose();  // Aᵀs for s = 1
  double best = -1.0;
  VectorXd best_s;
  gray_walk(n, s, [&](int flipped) {
    if (flipped >= 0) col += 2.0 * s(flipped) * a.row(flipped).transpose();
    const double v = col.cwiseAbs().sum();
    if (v > best) {
      best = v;
      best_s = s;
    }
  });
  const VectorXd t = sign_of(a.transpose() * best_s);
  res.value = best / (static_cast<double>(n) * n);
  res.s = to_signs(best_s);
  res.t = to_signs(t);
  return res;
}

SnResult exact_triple(const MatrixXd& a, PatternId pat) {
  const size_t n = static_cast<size_t>(a.rows());
  const Elimination e = elimination(a, pat);
  VectorXd u, v;
  VectorXd P = e.M1.rowwise().sum(), Q, cP;
  double best = -1.0;
  VectorXd best_u, best_v;
  gray_walk(n, u, [&](int fu) {
    if (fu >= 0) P += 2.0 * u(fu) * e.M1.col(fu);
    cP = e.c.cwiseProduct(P).cwiseAbs();
    Q = e.M2.rowwise().sum();
    gray_walk(n, v, [&](int fv) {
      if (fv >= 0) Q += 2.0 * v(fv) * e.M2.col(fv);
      const double val = cP.dot(Q.cwiseAbs());
      if (val > best) {
        best = val;
        best_u = u;
        best_v = v;
      }
    });
  });
  const VectorXd third = sign_of(e.c.cwiseProduct(e.M1 * best_u).cwiseProduct(e.M2 * best_v));
  VectorXd roles[3];
  roles[e.u_role] = best_u;
  roles[e.v_role] = best_v;
  roles[e.elim_role] = third;
  SnResult res{pat, n, best / std::pow(static_cast<double>(n), 3), SnMethod::Exact, {}, {}, {}};
  res.r = to_signs(roles[0]);
  res.s = to_signs(roles[1]);
  res.t = to_signs(roles[2]);
  return res;
}

double tensor_weight(const MatrixXd& a, PatternId pat, Eigen::Index i, Eigen::Index j, Eigen::Index k) {
  const auto l = static_cast<Eigen::Index>(pat.l);
  switch (pat.kind) {
    case Pattern::Ulr: return a(i, j) * a(i, k);
    case Pattern::UDD: return a(i, j) * a(j, k);
    case Pattern::VZT: return a(i, k) * a(j, k);
    case Pattern::Umr: return a(i, j) * a(k, i);
    case Pattern::UDlr: return a(l, i) * a(i, j) * a(i, k);
    case Pattern::UDDD: return a(l, i) * a(i, j) * a(j, k);
    case Pattern::Pair: break;
  }
  return 0.0;
}

void check_exact_budget(const MatrixXd& a, PatternId pat) {
  if (a.rows() != a.cols() || a.rows() == 0) throw std::invalid_argument("centered adjacency must be square");
  const size_t n = static_cast<size_t>(a.rows());
  const size_t cap = pat.triple() ? kExactMaxTriple : kExactMaxPair;
  if (n > cap)
    throw std::invalid_argument("n = " + std::to_string(n) + " exceeds the enumeration budget (" +
                                std::to_string(cap) + "); use sn_lower / sn_upper");
  check_anchor(pat, n);
}

}  // namespace

double pattern_value(const MatrixXd& a, PatternId pat, const std::vector<int>& r, const std::vector<int>& s,
                     const std::vector<int>& t) {
  const CenteredInput in = centered_input(a);
  const FormEval f(in, pat);
  const size_t n = in.n();
  return f.value(to_vec(r, n), to_vec(s, n), to_vec(t, n));
}

SnResult sn_exact(const MatrixXd& a, PatternId pat) {
  check_exact_budget(a, pat);
  return pat.triple() ? exact_triple(a, pat) : exact_pair(a, pat);
}

SnResult sn_naive(const MatrixXd& a, PatternId pat) {
  check_exact_budget(a, pat);
  const auto n = a.rows();
  const uint64_t half = uint64_t{1} << (n - 1);
  auto signs = [n](uint64_t code) {
    VectorXd v(n);
    v(0) = 1.0;
    for (Eigen::Index i = 1; i < n; ++i) v(i) = (code >> (i - 1)) & 1u ? -1.0 : 1.0;
    return v;
  };
  SnResult res{pat, static_cast<size_t>(n), -1.0, SnMethod::Naive, {}, {}, {}};
  if (!pat.triple()) {
    for (uint64_t cs = 0; cs < half; ++cs) {
      const VectorXd s = signs(cs);
      for (uint64_t ct = 0; ct < half; ++ct) {
        const VectorXd t = signs(ct);
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
          for (Eigen::Index j = 0; j < n; ++j) acc += a(i, j) * s(i) * t(j);
        if (std::abs(acc) > res.value) {
          res.value = std::abs(acc);
          res.s = to_signs(acc < 0 ? VectorXd(-s) : s);
          res.t = to_signs(t);
        }
      }
    }
    res.value /= static_cast<double>(n * n);
    return res;
  }
  std::vector<double> W(static_cast<size_t>(n * n * n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) W[static_cast<size_t>((i * n + j) * n + k)] = tensor_weight(a, pat, i, j, k);
  VectorXd acc(n);
  for (uint64_t cr = 0; cr < half; ++cr) {
    const VectorXd r = signs(cr);
    for (uint64_t cs = 0; cs < half; ++cs) {
      const VectorXd s = signs(cs);
      acc.setZero();
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
          const double rs = r(i) * s(j);
          for (Eigen::Index k = 0; k < n; ++k) acc(k) += W[static_cast<size_t>((i * n + j) * n + k)] * rs;
        }
      for (uint64_t ct = 0; ct < half; ++ct) {
        const VectorXd t = signs(ct);
        const double v = acc.dot(t);
        if (std::abs(v) > res.value) {
          res.value = std::abs(v);
          res.r = to_signs(v < 0 ? VectorXd(-r) : r);
          res.s = to_signs(s);
          res.t = to_signs(t);
        }
      }
    }
  }
  res.value /= std::pow(static_cast<double>(n), 3);
  return res;
}

SnResult sn_upper(const CenteredInput& in, PatternId pat, double tol) {
  check_anchor(pat, in.n());
  const double n = static_cast<double>(in.n());
  SnResult res{pat, in.n(), 0.0, SnMethod::Upper, {}, {}, {}};
  if (in.n() == 0) return res;
  const double norm = in.spectral(tol);
  if (!pat.triple()) {
    res.value = std::min(norm / n, in.abs_sum / (n * n));
  } else {
    double w = 1.0;
    if (pat.anchored()) {
      w = 0.0;
      for (double x : in.row(pat.l)) w = std::max(w, std::abs(x));
    }
    res.value = w * norm * norm / (n * n);
  }
  return res;
}

SnResult sn_lower(const CenteredInput& in, PatternId pat, int restarts, uint64_t seed) {
  const FormEval f(in, pat);
  const size_t n = in.n();
  const auto N = static_cast<Eigen::Index>(n);
  SnResult res{pat, n, 0.0, SnMethod::Lower, {}, {}, {}};
  VectorXd best[3];
  double best_val = -1.0;
  const int first_role = pat.triple() ? 0 : 1;
  // Block coordinate ascent: each vector in turn becomes the sign of its coefficient.
  auto ascend = [&](VectorXd* v) {
    double val = f.value(v[0], v[1], v[2]);
    for (int sweep = 0; sweep < 500; ++sweep) {
      const double before = val;
      for (int role = first_role; role < 3; ++role) v[role] = sign_of(f.coef(role, v[0], v[1], v[2]));
      val = f.value(v[0], v[1], v[2]);
      if (!(val > before * (1.0 + 1e-13) + 1e-300)) break;
    }
    return val;
  };
  for (int k = 0; k < std::max(restarts, 1); ++k) {
    Rng rng(seed, Stream::Search, static_cast<uint64_t>(k));
    VectorXd v[3];
    for (auto& x : v) {
      x.resize(N);
      for (Eigen::Index i = 0; i < N; ++i) x(i) = rng.bernoulli(0.5) ? 1.0 : -1.0;
    }
    if (!pat.triple()) v[0].setOnes();
    double val = ascend(v);
    // Single flips followed by best responses of the other vectors, while that improves.
    if (n <= kKickMax)
      for (bool improved = true; improved;) {
        improved = false;
        for (int role = first_role; role < 3 && !improved; ++role)
          for (Eigen::Index i = 0; i < N && !improved; ++i) {
            VectorXd w[3] = {v[0], v[1], v[2]};
            w[role](i) = -w[role](i);
            const double cand = ascend(w);
            if (cand > val * (1.0 + 1e-13) + 1e-300) {
              for (int j = 0; j < 3; ++j) v[j] = w[j];
              val = cand;
              improved = true;
            }
          }
      }
    if (val > best_val) {
      best_val = val;
      for (int i = 0; i < 3; ++i) best[i] = v[i];
    }
  }
  res.value = std::max(best_val, 0.0);
  if (pat.triple()) res.r = to_signs(best[0]);
  res.s = to_signs(best[1]);
  res.t = to_signs(best[2]);
  return res;
}

TailOptions tail_options(const std::string& method, int restarts, double tol) {
  TailOptions opt;
  opt.restarts = restarts;
  opt.tol = tol;
  if (method == "bounds") opt.exact = false;
  else if (method == "upper") opt.exact = opt.lower = false;
  else if (method == "exact") opt.lower = opt.upper = false;
  else if (method != "auto") throw std::invalid_argument("method must be auto, exact, bounds or upper");
  return opt;
}

std::vector<TrialValue> tail_trial(const Graph& g, const std::vector<PatternId>& pats, const TailOptions& opt,
                                   uint64_t search_seed) {
  const size_t n = g.n();
  const double p = g.p();
  const CenteredInput in = centered_input(g);
  MatrixXd dense;
  std::vector<TrialValue> out;
  for (const PatternId& pat : pats) {
    const double scale = pattern_normalization(pat, n, p);
    if (opt.exact && n <= (pat.triple() ? kExactMaxTriple : kExactMaxPair)) {
      if (dense.size() == 0) dense = g.centered_dense();
      out.push_back({pat, SnMethod::Exact, scale * sn_exact(dense, pat).value});
      continue;
    }
    if (opt.lower && (opt.lower_triples || !pat.triple()))
      out.push_back({pat, SnMethod::Lower, scale * sn_lower(in, pat, opt.restarts, search_seed).value});
    if (opt.upper) out.push_back({pat, SnMethod::Upper, scale * sn_upper(in, pat, opt.tol).value});
  }
  return out;
}

std::vector<TailRow> tail_study(const std::vector<PatternId>& pats, const std::vector<size_t>& n_grid,
                                const std::function<double(size_t)>& p_rule, size_t trials, uint64_t seed,
                                const TailOptions& opt) {
  std::vector<TailRow> rows;
  if (trials == 0 || pats.empty()) return rows;
  for (size_t n : n_grid) {
    const double p = p_rule(n);
    std::vector<std::vector<TrialValue>> per_trial(trials);
#pragma omp parallel for schedule(dynamic)
    for (long long tt = 0; tt < static_cast<long long>(trials); ++tt) {
      const auto t = static_cast<size_t>(tt);
      const Graph g = gen_erdos_renyi(n, p, seed, opt.symmetric, true, t);
      per_trial[t] = tail_trial(g, pats, opt, mix64(seed ^ (t + 1)));
    }
    const size_t first = rows.size();
    for (const TrialValue& v : per_trial[0]) {
      TailRow row;
      row.n = n;
      row.p = p;
      row.pattern = v.pattern;
      row.method = v.method;
      rows.push_back(std::move(row));
    }
    for (const auto& values : per_trial)
      for (size_t k = 0; k < values.size(); ++k) rows[first + k].normalized.push_back(values[k].value);
    for (size_t k = first; k < rows.size(); ++k) {
      TailRow& row = rows[k];
      row.q50 = quantile(row.normalized, 0.5);
      row.q90 = quantile(row.normalized, 0.9);
      row.q99 = quantile(row.normalized, 0.99);
      row.max = *std::max_element(row.normalized.begin(), row.normalized.end());
    }
  }
  return rows;
}

double bernstein_stat(const Graph& g, BernsteinStat which, const std::vector<double>& u, const std::vector<double>& v,
                      size_t l) {
  const size_t n = g.n();
  const double dn = static_cast<double>(n);
  auto need = [n](const std::vector<double>& x, const char* what) {
    if (x.size() != n) throw std::invalid_argument(std::string(what) + " must have one weight per vertex");
  };
  switch (which) {
    case BernsteinStat::U1ij: {
      need(v, "v");
      if (l >= n) throw std::invalid_argument("vertex out of range");
      double s = 0.0;
      for (size_t j = 0; j < n; ++j) s += g.centered(l, j) * v[j];
      return s / dn;
    }
    case BernsteinStat::U1vZT: {
      need(v, "v");
      if (n < 2) throw std::invalid_argument("needs two vertices");
      double s = 0.0;
      for (size_t j = 0; j < n; ++j) s += g.centered(0, j) * g.centered(1, j) * v[j];
      return s / dn;
    }
    case BernsteinStat::U2ij:
    case BernsteinStat::V2uDD: {
      need(u, "u");
      need(v, "v");
      if (which == BernsteinStat::V2uDD && l >= n) throw std::invalid_argument("vertex out of range");
      double s = 0.0;
      for (size_t i = 0; i < n; ++i) {
        const double wi = which == BernsteinStat::V2uDD ? g.centered(l, i) : 1.0;
        if (wi == 0.0) continue;
        double row = 0.0;
        for (size_t j = 0; j < n; ++j) row += g.centered(i, j) * v[j];
        s += wi * u[i] * row;
      }
      return s / (dn * dn);
    }
  }
  throw std::logic_error("unknown statistic");
}

}  // namespace gf
