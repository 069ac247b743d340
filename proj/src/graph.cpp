#include "graphfluct/graph.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "graphfluct/rng.hpp"
#include "graphfluct/rowsum.hpp"

namespace gf {

namespace {

constexpr char kMagic[8] = {'G', 'F', 'G', 'R', 'A', 'P', 'H', '1'};

void check_prob(double p, const char* what) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in (0, 1]");
}

// Threshold matrix of the two-block model, or the homogeneous p.
struct EdgeLaw {
  double p_same, p_cross;
  size_t half;
  bool sbm;
  double at(size_t i, size_t j) const {
    if (!sbm) return p_same;
    return ((i >= half) == (j >= half)) ? p_same : p_cross;
  }
};

void fill_rows(Graph& g, const EdgeLaw& law) {
  const size_t n = g.n();
  const GraphInfo& info = g.info();
  for (size_t i = 0; i < n; ++i) {
    Rng rng(info.seed, Stream::Graph, info.replica, i);
    const size_t j0 = info.symmetric ? i : 0;
    for (size_t j = j0; j < n; ++j) {
      const double u = rng.uniform();
      if (u < law.at(i, j) && (j != i || info.self_loops)) {
        g.set_edge(i, j, true);
        if (info.symmetric) g.set_edge(j, i, true);
      }
    }
  }
}

}  // namespace

Graph::Graph(const GraphInfo& info) : info_(info) {
  words_ = (info.n + 63) / 64;
  bits_.assign(info.n * words_, 0);
}

Graph Graph::from_matrix(const std::vector<std::vector<int>>& xi, double p, bool self_loops) {
  GraphInfo info;
  info.n = xi.size();
  info.p = p;
  info.self_loops = self_loops;
  Graph g(info);
  bool sym = true;
  for (size_t i = 0; i < info.n; ++i) {
    if (xi[i].size() != info.n) throw std::invalid_argument("adjacency must be square");
    for (size_t j = 0; j < info.n; ++j) {
      if (xi[i][j] != 0 && xi[i][j] != 1) throw std::invalid_argument("adjacency entries must be 0 or 1");
      g.set_edge(i, j, xi[i][j] == 1);
      if (xi[i][j] != xi[j][i]) sym = false;
    }
  }
  g.info_.symmetric = sym;
  g.finalize();
  return g;
}

void Graph::set_edge(size_t i, size_t j, bool v) {
  uint64_t& w = bits_[i * words_ + (j >> 6)];
  const uint64_t m = uint64_t{1} << (j & 63);
  w = v ? (w | m) : (w & ~m);
}

double Graph::p_ij(size_t i, size_t j) const {
  if (!info_.sbm) return info_.p;
  return community(i) == community(j) ? info_.p_intra : info_.q_inter;
}

size_t Graph::degree(size_t i) const {
  size_t d = 0;
  const uint64_t* r = row(i);
  for (size_t w = 0; w < words_; ++w) d += static_cast<size_t>(std::popcount(r[w]));
  return d;
}

DegreeVector Graph::degrees() const {
  DegreeVector d(info_.n);
  for (size_t i = 0; i < info_.n; ++i) d[i] = static_cast<uint32_t>(degree(i));
  return d;
}

size_t Graph::edge_count() const {
  size_t e = 0;
  for (uint64_t w : bits_) e += static_cast<size_t>(std::popcount(w));
  return e;
}

void Graph::finalize() {
  complete_ = info_.n > 0 && edge_count() == info_.n * info_.n;
  nbr_.clear();
  nbr_offset_.clear();
}

void Graph::build_sparse() {
  nbr_offset_.assign(info_.n + 1, 0);
  nbr_.clear();
  nbr_.reserve(edge_count());
  for (size_t i = 0; i < info_.n; ++i) {
    const uint64_t* r = row(i);
    for (size_t w = 0; w < words_; ++w) {
      uint64_t b = r[w];
      while (b) {
        nbr_.push_back(static_cast<uint32_t>(w * 64 + std::countr_zero(b)));
        b &= b - 1;
      }
    }
    nbr_offset_[i + 1] = nbr_.size();
  }
}

Eigen::MatrixXd Graph::centered_dense() const {
  Eigen::MatrixXd a(info_.n, info_.n);
  for (size_t i = 0; i < info_.n; ++i)
    for (size_t j = 0; j < info_.n; ++j) a(i, j) = centered(i, j);
  return a;
}

Graph Graph::transposed() const {
  Graph t(info_);
  for (size_t i = 0; i < info_.n; ++i)
    for (size_t j = 0; j < info_.n; ++j)
      if (edge(i, j)) t.set_edge(j, i, true);
  t.finalize();
  return t;
}

std::string Graph::sidecar_json() const {
  nlohmann::json j;
  j["format"] = "graphfluct-bits-v1";
  j["n"] = info_.n;
  j["p"] = info_.p;
  j["symmetric"] = info_.symmetric;
  j["self_loops"] = info_.self_loops;
  j["seed"] = info_.seed;
  j["replica"] = info_.replica;
  j["words_per_row"] = words_;
  j["edge_count"] = edge_count();
  if (info_.sbm) j["sbm"] = {{"p_intra", info_.p_intra}, {"q_inter", info_.q_inter}, {"split", info_.n / 2}};
  return j.dump(2);
}

void Graph::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  const uint64_t n = info_.n;
  const uint32_t flags = (info_.symmetric ? 1u : 0u) | (info_.self_loops ? 2u : 0u) | (info_.sbm ? 4u : 0u);
  out.write(kMagic, 8);
  out.write(reinterpret_cast<const char*>(&n), 8);
  out.write(reinterpret_cast<const char*>(&info_.p), 8);
  out.write(reinterpret_cast<const char*>(&info_.p_intra), 8);
  out.write(reinterpret_cast<const char*>(&info_.q_inter), 8);
  out.write(reinterpret_cast<const char*>(&flags), 4);
  out.write(reinterpret_cast<const char*>(&info_.seed), 8);
  out.write(reinterpret_cast<const char*>(&info_.replica), 8);
  out.write(reinterpret_cast<const char*>(bits_.data()), static_cast<std::streamsize>(bits_.size() * 8));
  std::ofstream side(path + ".json");
  side << sidecar_json() << "\n";
}

Graph Graph::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error(path + ": not a graph file");
  GraphInfo info;
  uint64_t n = 0;
  uint32_t flags = 0;
  in.read(reinterpret_cast<char*>(&n), 8);
  in.read(reinterpret_cast<char*>(&info.p), 8);
  in.read(reinterpret_cast<char*>(&info.p_intra), 8);
  in.read(reinterpret_cast<char*>(&info.q_inter), 8);
  in.read(reinterpret_cast<char*>(&flags), 4);
  in.read(reinterpret_cast<char*>(&info.seed), 8);
  in.read(reinterpret_cast<char*>(&info.replica), 8);
  info.n = n;
  info.symmetric = flags & 1u;
  info.self_loops = flags & 2u;
  info.sbm = flags & 4u;
  Graph g(info);
  in.read(reinterpret_cast<char*>(g.bits_.data()), static_cast<std::streamsize>(g.bits_.size() * 8));
  if (!in) throw std::runtime_error(path + ": truncated");
  g.finalize();
  return g;
}

Graph gen_erdos_renyi(size_t n, double p, uint64_t seed, bool symmetric, bool self_loops, uint64_t replica) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  check_prob(p, "p");
  GraphInfo info;
  info.n = n;
  info.p = p;
  info.symmetric = symmetric;
  info.self_loops = self_loops;
  info.seed = seed;
  info.replica = replica;
  Graph g(info);
  fill_rows(g, EdgeLaw{p, p, n, false});
  g.finalize();
  return g;
}

Graph gen_sbm(size_t n, double p_intra, double q_inter, uint64_t seed, bool symmetric, bool self_loops,
              uint64_t replica) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("block model needs an even n >= 2");
  if (!(p_intra >= 0.0 && p_intra <= 1.0) || !(q_inter >= 0.0 && q_inter <= 1.0))
    throw std::invalid_argument("block probabilities must lie in [0, 1]");
  if (p_intra + q_inter <= 0.0) throw std::invalid_argument("block probabilities cannot both vanish");
  GraphInfo info;
  info.n = n;
  info.p = 0.5 * (p_intra + q_inter);
  info.sbm = true;
  info.p_intra = p_intra;
  info.q_inter = q_inter;
  info.symmetric = symmetric;
  info.self_loops = self_loops;
  info.seed = seed;
  info.replica = replica;
  Graph g(info);
  fill_rows(g, EdgeLaw{p_intra, q_inter, n / 2, true});
  g.finalize();
  return g;
}

std::vector<uint64_t> gen_erdos_renyi_row(size_t n, double p, uint64_t seed, uint64_t replica, size_t i,
                                          bool self_loops) {
  check_prob(p, "p");
  std::vector<uint64_t> bits((n + 63) / 64, 0);
  Rng rng(seed, Stream::Graph, replica, i);
  for (size_t j = 0; j < n; ++j) {
    const double u = rng.uniform();
    if (u < p && (j != i || self_loops)) bits[j >> 6] |= uint64_t{1} << (j & 63);
  }
  return bits;
}

LinearOperator dense_operator(const Eigen::MatrixXd& m) {
  LinearOperator op;
  op.n = static_cast<size_t>(m.rows());
  op.apply = [m](const double* x, double* y) {
    Eigen::Map<const Eigen::VectorXd> xv(x, m.cols());
    Eigen::Map<Eigen::VectorXd>(y, m.rows()) = m * xv;
  };
  op.apply_t = [m](const double* x, double* y) {
    Eigen::Map<const Eigen::VectorXd> xv(x, m.rows());
    Eigen::Map<Eigen::VectorXd>(y, m.cols()) = m.transpose() * xv;
  };
  return op;
}

LinearOperator centered_operator(const Graph& g) {
  // (Ax)_i = Σ_j ξ_ij x_j / p_ij − Σ_j x_j. For the block model the columns are split by
  // block so each masked sum sees a single p_ij.
  LinearOperator op;
  op.n = g.n();
  const Graph* gp = &g;
  auto mult = [gp](const double* x, double* y, bool transpose) {
    const Graph& gr = *gp;
    const size_t n = gr.n(), len = padded_len(gr);
    double total = 0.0;
    for (size_t j = 0; j < n; ++j) total += x[j];
    if (!gr.info().sbm) {
      std::vector<double> xp(len, 0.0), out(len, 0.0);
      std::copy(x, x + n, xp.begin());
      if (transpose) col_sums(gr, xp.data(), out.data());
      else row_sums_omp(gr, xp.data(), len, 1, out.data(), len);
      const double inv = 1.0 / gr.p();
      for (size_t i = 0; i < n; ++i) y[i] = out[i] * inv - total;
      return;
    }
    const size_t half = n / 2;
    std::vector<double> xp(2 * len, 0.0), out(2 * len, 0.0);
    for (size_t j = 0; j < n; ++j) xp[(j < half ? 0 : len) + j] = x[j];
    if (transpose) {
      col_sums(gr, xp.data(), out.data());
      col_sums(gr, xp.data() + len, out.data() + len);
    } else {
      row_sums_omp(gr, xp.data(), len, 2, out.data(), len);
    }
    const double pi = gr.info().p_intra, qi = gr.info().q_inter;
    auto inv = [](double q) { return q > 0.0 ? 1.0 / q : 0.0; };
    for (size_t i = 0; i < n; ++i) {
      const bool first = i < half;
      y[i] = out[i] * inv(first ? pi : qi) + out[len + i] * inv(first ? qi : pi) - total;
    }
  };
  op.apply = [mult](const double* x, double* y) { mult(x, y, false); };
  op.apply_t = [mult](const double* x, double* y) { mult(x, y, true); };
  return op;
}

SpectralNormResult spectral_norm(const LinearOperator& A, double tol, int max_iter) {
  SpectralNormResult res;
  const size_t n = A.n;
  if (n == 0) {
    res.converged = true;
    return res;
  }
  std::vector<double> x(n), y(n), z(n);
  for (size_t j = 0; j < n; ++j) x[j] = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(j) + 0.3);
  auto normalize = [](std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    s = std::sqrt(s);
    if (s > 0.0)
      for (double& e : v) e /= s;
    return s;
  };
  normalize(x);
  double lam_prev = 0.0, delta_prev = 0.0;
  for (int k = 1; k <= max_iter; ++k) {
    A.apply(x.data(), y.data());
    double lam = 0.0;
    for (double e : y) lam += e * e;  // xᵀAᵀAx with ‖x‖ = 1
    res.iterations = k;
    if (lam == 0.0) {
      res.value = 0.0;
      res.converged = true;
      return res;
    }
    A.apply_t(y.data(), z.data());
    x.swap(z);
    normalize(x);
    const double delta = lam - lam_prev;
    double tail = 0.0;
    bool done = false;
    if (k >= 3 && delta >= 0.0) {
      if (delta <= 1e-15 * lam) {
        done = true;
      } else if (delta_prev > 0.0) {
        const double q = delta / delta_prev;
        if (q < 1.0) {
          tail = delta * q / (1.0 - q);
          done = tail <= 2.0 * tol * lam;  // σ = √λ halves the relative error
        }
      }
    }
    res.value = std::sqrt(lam + tail);
    if (done) {
      res.converged = true;
      return res;
    }
    delta_prev = delta;
    lam_prev = lam;
  }
  return res;
}

}  // namespace gf
