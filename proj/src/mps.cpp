#include "vq/mps.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

namespace vq {

namespace {

Mat transfer(const Mat& env, const std::vector<Mat>& bra,
             const std::vector<Mat>& ket, const Mat* op) {
  const int d = static_cast<int>(ket.size());
  Mat out = Mat::Zero(bra[0].cols(), ket[0].cols());
  if (op == nullptr) {
    for (int s = 0; s < d; ++s) out += bra[s].adjoint() * env * ket[s];
    return out;
  }
  for (int sb = 0; sb < static_cast<int>(bra.size()); ++sb)
    for (int sk = 0; sk < d; ++sk) {
      cxd c = (*op)(sb, sk);
      if (c != 0.0) out += c * (bra[sb].adjoint() * env * ket[sk]);
    }
  return out;
}

}  // namespace

Mps Mps::product_state(const std::vector<int>& local_dims,
                       const std::vector<int>& basis_index) {
  if (local_dims.size() != basis_index.size() || local_dims.empty())
    throw std::invalid_argument("product_state: dims/spec length mismatch");
  Mps st;
  st.dims_ = local_dims;
  st.tensors_.resize(local_dims.size());
  for (size_t i = 0; i < local_dims.size(); ++i) {
    if (basis_index[i] < 0 || basis_index[i] >= local_dims[i])
      throw std::out_of_range("product_state: basis index out of range");
    st.tensors_[i].resize(local_dims[i]);
    for (int s = 0; s < local_dims[i]; ++s)
      st.tensors_[i][s] =
          (s == basis_index[i]) ? Mat::Ones(1, 1) : Mat::Zero(1, 1);
  }
  st.center_ = 0;
  return st;
}

Mps Mps::random_state(const std::vector<int>& local_dims, int bond_dim,
                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = static_cast<int>(local_dims.size());
  Mps st;
  st.dims_ = local_dims;
  st.tensors_.resize(n);
  for (int i = 0; i < n; ++i) {
    int dl = (i == 0) ? 1 : bond_dim;
    int dr = (i == n - 1) ? 1 : bond_dim;
    st.tensors_[i].resize(local_dims[i]);
    for (int s = 0; s < local_dims[i]; ++s) {
      Mat m(dl, dr);
      for (int a = 0; a < dl; ++a)
        for (int b = 0; b < dr; ++b) m(a, b) = cxd(gauss(rng), gauss(rng));
      st.tensors_[i][s] = m;
    }
  }
  st.center_ = -1;
  st.normalize();
  return st;
}

int Mps::bond_dim(int bond) const {
  return static_cast<int>(tensors_[bond][0].cols());
}

int Mps::max_bond_dim() const {
  int d = 1;
  for (int i = 0; i + 1 < size(); ++i) d = std::max(d, bond_dim(i));
  return d;
}

void Mps::shift_center_right() {
  const int c = center_;
  const int d = dims_[c];
  const int dl = static_cast<int>(tensors_[c][0].rows());
  const int dr = static_cast<int>(tensors_[c][0].cols());
  Mat m(dl * d, dr);
  for (int s = 0; s < d; ++s) m.block(s * dl, 0, dl, dr) = tensors_[c][s];

  const int k = std::min(dl * d, dr);
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ() * Mat::Identity(dl * d, k);
  Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

  for (int s = 0; s < d; ++s) tensors_[c][s] = q.block(s * dl, 0, dl, k);
  for (auto& t : tensors_[c + 1]) t = r * t;
  center_ = c + 1;
}

void Mps::shift_center_left() {
  const int c = center_;
  const int d = dims_[c];
  const int dl = static_cast<int>(tensors_[c][0].rows());
  const int dr = static_cast<int>(tensors_[c][0].cols());
  Mat m(dl, d * dr);
  for (int s = 0; s < d; ++s) m.block(0, s * dr, dl, dr) = tensors_[c][s];

  const int k = std::min(dl, d * dr);
  Eigen::HouseholderQR<Mat> qr(m.adjoint());
  Mat q = qr.householderQ() * Mat::Identity(d * dr, k);
  Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

  Mat qd = q.adjoint();  // k x d*dr, orthonormal rows
  for (int s = 0; s < d; ++s) tensors_[c][s] = qd.block(0, s * dr, k, dr);
  for (auto& t : tensors_[c - 1]) t = t * r.adjoint();
  center_ = c - 1;
}

void Mps::canonicalize(int new_center) {
  if (new_center < 0 || new_center >= size())
    throw std::out_of_range("canonicalize: center out of range");
  if (center_ < 0) {
    // unknown gauge: right-orthogonalize everything down to site 0
    center_ = size() - 1;
    while (center_ > 0) shift_center_left();
  }
  while (center_ < new_center) shift_center_right();
  while (center_ > new_center) shift_center_left();
}

double Mps::apply_two_site_gate(const Mat& gate, int site, int d_max,
                                double svd_tol, bool center_right) {
  if (site < 0 || site + 1 >= size())
    throw std::out_of_range("apply_two_site_gate: sites must be adjacent and in range");
  const int dl = dims_[site], dr = dims_[site + 1];
  if (gate.rows() != dl * dr || gate.cols() != dl * dr)
    throw std::invalid_argument("apply_two_site_gate: gate dimension mismatch");
  if (center_ != site && center_ != site + 1) canonicalize(site);

  const int bl = static_cast<int>(tensors_[site][0].rows());
  const int br = static_cast<int>(tensors_[site + 1][0].cols());

  // theta(s, a*br+b), s = sl*dr + sr
  Mat theta(dl * dr, bl * br);
  for (int sl = 0; sl < dl; ++sl)
    for (int sr = 0; sr < dr; ++sr) {
      Mat blk = tensors_[site][sl] * tensors_[site + 1][sr];
      for (int a = 0; a < bl; ++a)
        theta.block(sl * dr + sr, a * br, 1, br) = blk.row(a);
    }
  theta = gate * theta;

  // m((sl,a),(sr,b))
  Mat m(dl * bl, dr * br);
  for (int sl = 0; sl < dl; ++sl)
    for (int sr = 0; sr < dr; ++sr)
      for (int a = 0; a < bl; ++a)
        m.block(sl * bl + a, sr * br, 1, br) =
            theta.block(sl * dr + sr, a * br, 1, br);

  SvdResult svd = svd_truncate(m, d_max, svd_tol);
  const int chi = svd.rank;
  truncation_log_ += svd.discarded;

  Mat left = svd.u;                        // (dl*bl) x chi
  Mat right = svd.vt;                      // chi x (dr*br)
  if (center_right)
    right = svd.s.cast<cxd>().asDiagonal() * right;
  else
    left = left * svd.s.cast<cxd>().asDiagonal();

  for (int sl = 0; sl < dl; ++sl) {
    Mat t(bl, chi);
    for (int a = 0; a < bl; ++a) t.row(a) = left.row(sl * bl + a);
    tensors_[site][sl] = t;
  }
  for (int sr = 0; sr < dr; ++sr)
    tensors_[site + 1][sr] = right.block(0, sr * br, chi, br);

  center_ = center_right ? site + 1 : site;
  return svd.discarded;
}

cxd Mps::expect_local(int site, const Mat& op) const {
  if (op.rows() != dims_[site] || op.cols() != dims_[site])
    throw std::invalid_argument("expect_local: operator dimension mismatch");
  if (center_ == site) {
    cxd val = 0.0;
    for (int sb = 0; sb < dims_[site]; ++sb)
      for (int sk = 0; sk < dims_[site]; ++sk) {
        cxd c = op(sb, sk);
        if (c != 0.0)
          val += c * (tensors_[site][sb].adjoint() * tensors_[site][sk]).trace();
      }
    return val;
  }
  std::pair<int, Mat> ins{site, op};
  return overlap_with_insertion(*this, *this, std::span(&ins, 1));
}

Vec Mps::local_expectations(const std::vector<Mat>& ops) const {
  const int n = size();
  std::vector<Mat> right(n + 1);
  right[n] = Mat::Ones(1, 1);
  for (int i = n - 1; i >= 0; --i) {
    Mat e = Mat::Zero(tensors_[i][0].rows(), tensors_[i][0].rows());
    for (int s = 0; s < dims_[i]; ++s)
      e += tensors_[i][s] * right[i + 1] * tensors_[i][s].adjoint();
    right[i] = e;
  }
  Vec out = Vec::Zero(n);
  Mat left = Mat::Ones(1, 1);
  for (int i = 0; i < n; ++i) {
    if (ops[i].size() != 0) {
      cxd val = 0.0;
      for (int sb = 0; sb < dims_[i]; ++sb)
        for (int sk = 0; sk < dims_[i]; ++sk) {
          cxd c = ops[i](sb, sk);
          if (c != 0.0)
            val += c * (tensors_[i][sb].adjoint() * left * tensors_[i][sk] *
                        right[i + 1])
                       .trace();
        }
      out(i) = val;
    }
    left = transfer(left, tensors_[i], tensors_[i], nullptr);
  }
  return out;
}

cxd Mps::expect_two_site(int site, const Mat& op) const {
  const int dl = dims_[site], dr = dims_[site + 1];
  if (op.rows() != dl * dr)
    throw std::invalid_argument("expect_two_site: operator dimension mismatch");
  const int n = size();
  Mat left = Mat::Ones(1, 1);
  for (int i = 0; i < site; ++i)
    left = transfer(left, tensors_[i], tensors_[i], nullptr);
  Mat right = Mat::Ones(1, 1);
  for (int i = n - 1; i > site + 1; --i) {
    Mat e = Mat::Zero(tensors_[i][0].rows(), tensors_[i][0].rows());
    for (int s = 0; s < dims_[i]; ++s)
      e += tensors_[i][s] * right * tensors_[i][s].adjoint();
    right = e;
  }
  cxd val = 0.0;
  for (int slb = 0; slb < dl; ++slb)
    for (int srb = 0; srb < dr; ++srb)
      for (int slk = 0; slk < dl; ++slk)
        for (int srk = 0; srk < dr; ++srk) {
          cxd c = op(slb * dr + srb, slk * dr + srk);
          if (c == 0.0) continue;
          val += c * ((tensors_[site][slb] * tensors_[site + 1][srb]).adjoint() *
                      left * tensors_[site][slk] * tensors_[site + 1][srk] *
                      right)
                     .trace();
        }
  return val;
}

cxd Mps::overlap(const Mps& bra, const Mps& ket) {
  if (bra.dims_ != ket.dims_)
    throw std::invalid_argument("overlap: site structure mismatch");
  Mat env = Mat::Ones(1, 1);
  for (int i = 0; i < ket.size(); ++i)
    env = transfer(env, bra.tensors_[i], ket.tensors_[i], nullptr);
  return env(0, 0);
}

cxd Mps::overlap_with_insertion(
    const Mps& bra, const Mps& ket,
    std::span<const std::pair<int, Mat>> insertions) {
  if (bra.dims_ != ket.dims_)
    throw std::invalid_argument("overlap_with_insertion: structure mismatch");
  if (insertions.size() > 2)
    throw std::invalid_argument("overlap_with_insertion: at most 2 insertions");
  std::vector<Mat> ops(ket.size());
  for (const auto& [site, op] : insertions) {
    if (site < 0 || site >= ket.size())
      throw std::out_of_range("overlap_with_insertion: site out of range");
    if (op.rows() != ket.dims_[site] || op.cols() != ket.dims_[site])
      throw std::invalid_argument("overlap_with_insertion: operator dimension");
    ops[site] = (ops[site].size() == 0) ? op : Mat(ops[site] * op);
  }
  Mat env = Mat::Ones(1, 1);
  for (int i = 0; i < ket.size(); ++i) {
    const Mat* op = ops[i].size() != 0 ? &ops[i] : nullptr;
    env = transfer(env, bra.tensors_[i], ket.tensors_[i], op);
  }
  return env(0, 0);
}

Mat Mps::transfer_left(const Mat& env, const Mps& bra, const Mps& ket,
                       int site, const Mat* op) {
  return transfer(env, bra.tensors_[site], ket.tensors_[site], op);
}

Mat Mps::transfer_right(const Mat& env, const Mps& bra, const Mps& ket,
                        int site, const Mat* op) {
  const auto& tb = bra.tensors_[site];
  const auto& tk = ket.tensors_[site];
  Mat out = Mat::Zero(tk[0].rows(), tb[0].rows());
  if (op == nullptr) {
    for (size_t s = 0; s < tk.size(); ++s)
      out += tk[s] * env * tb[s].adjoint();
    return out;
  }
  for (int sb = 0; sb < static_cast<int>(tb.size()); ++sb)
    for (int sk = 0; sk < static_cast<int>(tk.size()); ++sk) {
      cxd c = (*op)(sb, sk);
      if (c != 0.0) out += c * (tk[sk] * env * tb[sb].adjoint());
    }
  return out;
}

void Mps::apply_product_operator(const ProductOperator& op) {
  if (static_cast<int>(op.ops.size()) != size())
    throw std::invalid_argument("apply_product_operator: length mismatch");
  for (int i = 0; i < size(); ++i) {
    const Mat& o = op.ops[i];
    if (o.size() == 0) continue;
    if (o.rows() != dims_[i] || o.cols() != dims_[i])
      throw std::invalid_argument("apply_product_operator: dimension mismatch");
    std::vector<Mat> updated(dims_[i]);
    for (int s = 0; s < dims_[i]; ++s) {
      Mat t = Mat::Zero(tensors_[i][0].rows(), tensors_[i][0].cols());
      for (int sk = 0; sk < dims_[i]; ++sk)
        if (o(s, sk) != 0.0) t += o(s, sk) * tensors_[i][sk];
      updated[s] = std::move(t);
    }
    tensors_[i] = std::move(updated);
  }
  // a non-unitary string may break isometries
  center_ = -1;
}

cxd Mps::expect_product_operator(const ProductOperator& op) const {
  if (static_cast<int>(op.ops.size()) != size())
    throw std::invalid_argument("expect_product_operator: length mismatch");
  Mat env = Mat::Ones(1, 1);
  for (int i = 0; i < size(); ++i) {
    const Mat* o = op.ops[i].size() != 0 ? &op.ops[i] : nullptr;
    env = transfer(env, tensors_[i], tensors_[i], o);
  }
  return env(0, 0);
}

double Mps::norm() const {
  if (center_ >= 0) {
    double n2 = 0.0;
    for (const auto& t : tensors_[center_]) n2 += t.squaredNorm();
    return std::sqrt(n2);
  }
  return std::sqrt(std::abs(overlap(*this, *this)));
}

void Mps::normalize() {
  double n = norm();
  if (n <= 0.0 || !std::isfinite(n))
    throw std::runtime_error("normalize: state has zero or invalid norm");
  scale(1.0 / n);
}

void Mps::scale(cxd factor) {
  int target = center_ >= 0 ? center_ : 0;
  for (auto& t : tensors_[target]) t *= factor;
}

Mps Mps::add(const Mps& a, const Mps& b) {
  if (a.dims_ != b.dims_)
    throw std::invalid_argument("add: site structure mismatch");
  const int n = a.size();
  Mps out;
  out.dims_ = a.dims_;
  out.tensors_.resize(n);
  out.truncation_log_ = std::max(a.truncation_log_, b.truncation_log_);
  for (int i = 0; i < n; ++i) {
    out.tensors_[i].resize(a.dims_[i]);
    for (int s = 0; s < a.dims_[i]; ++s) {
      const Mat& ta = a.tensors_[i][s];
      const Mat& tb = b.tensors_[i][s];
      if (n == 1) {
        out.tensors_[i][s] = ta + tb;
      } else if (i == 0) {
        Mat t(1, ta.cols() + tb.cols());
        t << ta, tb;
        out.tensors_[i][s] = t;
      } else if (i == n - 1) {
        Mat t(ta.rows() + tb.rows(), 1);
        t << ta, tb;
        out.tensors_[i][s] = t;
      } else {
        Mat t = Mat::Zero(ta.rows() + tb.rows(), ta.cols() + tb.cols());
        t.topLeftCorner(ta.rows(), ta.cols()) = ta;
        t.bottomRightCorner(tb.rows(), tb.cols()) = tb;
        out.tensors_[i][s] = t;
      }
    }
  }
  out.center_ = -1;
  return out;
}

double Mps::compress(int d_max, double svd_tol) {
  const int n = size();
  canonicalize(n - 1);
  double discarded = 0.0;
  for (int c = n - 1; c > 0; --c) {
    const int d = dims_[c];
    const int dl = static_cast<int>(tensors_[c][0].rows());
    const int dr = static_cast<int>(tensors_[c][0].cols());
    Mat m(dl, d * dr);
    for (int s = 0; s < d; ++s) m.block(0, s * dr, dl, dr) = tensors_[c][s];
    SvdResult svd = svd_truncate(m, d_max, svd_tol);
    discarded += svd.discarded;
    for (int s = 0; s < d; ++s)
      tensors_[c][s] = svd.vt.block(0, s * dr, svd.rank, dr);
    Mat carry = svd.u * svd.s.cast<cxd>().asDiagonal();
    for (auto& t : tensors_[c - 1]) t = t * carry;
  }
  center_ = 0;
  truncation_log_ += discarded;
  return discarded;
}

double Mps::canonical_error() const {
  if (center_ < 0) return 0.0;
  double err = 0.0;
  for (int i = 0; i < size(); ++i) {
    if (i == center_) continue;
    if (i < center_) {
      Mat e = Mat::Zero(tensors_[i][0].cols(), tensors_[i][0].cols());
      for (const auto& t : tensors_[i]) e += t.adjoint() * t;
      err = std::max(err, (e - Mat::Identity(e.rows(), e.cols())).cwiseAbs().maxCoeff());
    } else {
      Mat e = Mat::Zero(tensors_[i][0].rows(), tensors_[i][0].rows());
      for (const auto& t : tensors_[i]) e += t * t.adjoint();
      err = std::max(err, (e - Mat::Identity(e.rows(), e.cols())).cwiseAbs().maxCoeff());
    }
  }
  return err;
}

namespace {
constexpr char kMagic[9] = "VQMPS001";

template <typename T>
void write_pod(std::ofstream& f, const T& v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
void read_pod(std::ifstream& f, T& v) {
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
}
}  // namespace

void Mps::save(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("Mps::save: cannot open " + path.string());
  f.write(kMagic, 8);
  write_pod<std::int64_t>(f, size());
  for (int d : dims_) write_pod<std::int64_t>(f, d);
  write_pod<std::int64_t>(f, max_bond_dim());
  write_pod<std::int64_t>(f, center_);
  write_pod<double>(f, truncation_log_);
  for (int i = 0; i < size(); ++i) {
    write_pod<std::int64_t>(f, tensors_[i][0].rows());
    write_pod<std::int64_t>(f, tensors_[i][0].cols());
    for (const auto& t : tensors_[i])
      f.write(reinterpret_cast<const char*>(t.data()),
              sizeof(cxd) * t.size());
  }
  if (!f) throw std::runtime_error("Mps::save: write failed");
}

Mps Mps::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("Mps::load: cannot open " + path.string());
  char magic[8];
  f.read(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("Mps::load: bad magic");
  std::int64_t n;
  read_pod(f, n);
  Mps st;
  st.dims_.resize(n);
  for (auto& d : st.dims_) {
    std::int64_t v;
    read_pod(f, v);
    d = static_cast<int>(v);
  }
  std::int64_t dmax, center;
  read_pod(f, dmax);
  read_pod(f, center);
  read_pod(f, st.truncation_log_);
  st.center_ = static_cast<int>(center);
  st.tensors_.resize(n);
  for (int i = 0; i < n; ++i) {
    std::int64_t dl, dr;
    read_pod(f, dl);
    read_pod(f, dr);
    st.tensors_[i].resize(st.dims_[i]);
    for (auto& t : st.tensors_[i]) {
      t.resize(dl, dr);
      f.read(reinterpret_cast<char*>(t.data()), sizeof(cxd) * t.size());
    }
  }
  if (!f) throw std::runtime_error("Mps::load: truncated file");
  return st;
}

}  // namespace vq
