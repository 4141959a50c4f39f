#include "vq/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vq {

void ModelParams::validate() const {
  if (j_hop <= 0) throw std::invalid_argument("model: j_hop must be > 0");
  if (n_sites < 4 || n_sites % 2 != 0)
    throw std::invalid_argument("model: n_sites must be even and >= 4");
  if (omega - 2 * j_hop <= 0)
    throw std::invalid_argument("model: band bottom omega - 2J must be > 0");
  if (g < 0) throw std::invalid_argument("model: g must be >= 0");
  if (delta < 0) throw std::invalid_argument("model: delta must be >= 0");
  int q = qubit();
  if (q < 0 || q >= n_sites)
    throw std::invalid_argument("model: qubit_site out of range");
}

BandInfo band_info(const ModelParams& p) {
  p.validate();
  BandInfo b;
  b.gap_bottom = p.omega - 2 * p.j_hop;
  b.band_top = p.omega + 2 * p.j_hop;
  b.v_max = 2 * p.j_hop;
  b.momenta.resize(p.n_sites);
  for (int j = 0; j < p.n_sites; ++j)
    b.momenta(j) = -std::numbers::pi + 2.0 * std::numbers::pi * j / p.n_sites;
  return b;
}

double dispersion(const ModelParams& p, double k) {
  return p.omega - 2.0 * p.j_hop * std::cos(k);
}

RVec coupling_gk(const ModelParams& p) {
  p.validate();
  return RVec::Constant(p.n_sites, p.g / std::sqrt(double(p.n_sites)));
}

std::optional<double> decay_time_tau(const ModelParams& p) {
  p.validate();
  if (p.g == 0) throw std::domain_error("decay_time_tau: g = 0, infinite lifetime");
  double c = (p.omega - p.delta) / (2 * p.j_hop);
  if (c <= -1.0 || c >= 1.0) return std::nullopt;  // Delta outside the band
  double k0 = std::acos(c);
  return p.j_hop * std::sin(k0) / (p.g * p.g);
}

Mat boson_annihilator(int n_max) {
  Mat a = Mat::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

Mat boson_number(int n_max) {
  Mat n = Mat::Zero(n_max + 1, n_max + 1);
  for (int i = 0; i <= n_max; ++i) n(i, i) = i;
  return n;
}

Mat fused_op(const Mat& qubit_op, const Mat& photon_op) {
  return kron(qubit_op, photon_op);
}

Mat qubit_sigma_minus() {
  Mat s = Mat::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

Mat qubit_sigma_x() {
  Mat s = Mat::Zero(2, 2);
  s(0, 1) = s(1, 0) = 1.0;
  return s;
}

LocalTerms local_terms(const ModelParams& p, int n_max) {
  p.validate();
  if (n_max < 1) throw std::invalid_argument("local_terms: n_max must be >= 1");
  const int n = p.n_sites;
  const int q = p.qubit();
  const int d = n_max + 1;

  LocalTerms t;
  t.dims.assign(n, d);
  t.dims[q] = 2 * d;

  Mat a = boson_annihilator(n_max);
  Mat num = boson_number(n_max);
  Mat id_q = Mat::Identity(2, 2);
  Mat sp_sm = qubit_sigma_minus().adjoint() * qubit_sigma_minus();

  t.site_ops.resize(n);
  for (int x = 0; x < n; ++x) {
    if (x == q) {
      Mat h = p.omega * fused_op(id_q, num);
      h += p.delta * fused_op(sp_sm, Mat::Identity(d, d));
      h += p.g * fused_op(qubit_sigma_x(), a + Mat(a.adjoint()));
      t.site_ops[x] = h;
    } else {
      t.site_ops[x] = p.omega * num;
    }
  }

  t.bond_ops.resize(n - 1);
  for (int x = 0; x + 1 < n; ++x) {
    Mat al = (x == q) ? fused_op(id_q, a) : a;
    Mat ar = (x + 1 == q) ? fused_op(id_q, a) : a;
    Mat hop = kron(Mat(al.adjoint()), ar);
    t.bond_ops[x] = -p.j_hop * (hop + Mat(hop.adjoint()));
  }
  return t;
}

Mat dense_hamiltonian(const ModelParams& p, int n_max, long max_dim) {
  LocalTerms t = local_terms(p, n_max);
  long dim = 1;
  for (int d : t.dims) {
    dim *= d;
    if (dim > max_dim)
      throw std::length_error("dense_hamiltonian: dimension exceeds cap of " +
                              std::to_string(max_dim));
  }

  auto embed_site = [&](int site, const Mat& op) {
    Mat m = Mat::Identity(1, 1);
    for (int x = 0; x < p.n_sites; ++x) {
      if (x == site)
        m = kron(m, op);
      else
        m = kron(m, Mat::Identity(t.dims[x], t.dims[x]));
    }
    return m;
  };
  Mat h = Mat::Zero(dim, dim);
  for (int x = 0; x < p.n_sites; ++x) h += embed_site(x, t.site_ops[x]);
  for (int x = 0; x + 1 < p.n_sites; ++x) {
    Mat m = Mat::Identity(1, 1);
    for (int y = 0; y < p.n_sites; ++y) {
      if (y == x) {
        m = kron(m, t.bond_ops[x]);
      } else if (y == x + 1) {
        continue;
      } else {
        m = kron(m, Mat::Identity(t.dims[y], t.dims[y]));
      }
    }
    h += m;
  }
  return h;
}

RVec dense_parity_diagonal(const ModelParams& p, int n_max) {
  LocalTerms t = local_terms(p, n_max);
  const int q = p.qubit();
  long dim = 1;
  for (int d : t.dims) dim *= d;
  RVec par = RVec::Ones(dim);
  // product-basis index: site 0 is the most significant digit
  for (long idx = 0; idx < dim; ++idx) {
    long rest = idx;
    long stride = dim;
    int exc = 0;
    for (int x = 0; x < p.n_sites; ++x) {
      stride /= t.dims[x];
      int s = static_cast<int>(rest / stride);
      rest %= stride;
      if (x == q) {
        exc += s / (n_max + 1);  // qubit digit
        exc += s % (n_max + 1);  // photons
      } else {
        exc += s;
      }
    }
    par(idx) = (exc % 2 == 0) ? 1.0 : -1.0;
  }
  return par;
}

}  // namespace vq
