#pragma once

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "vq/linalg.hpp"

namespace vq {

/// Single-site operator string; identity where no matrix is set.
struct ProductOperator {
  std::vector<Mat> ops;  // one per site, zero-size = identity
};

/// Open-chain matrix product state. tensors[i][s] is (Dl x Dr) for
/// physical index s; boundary bonds have dimension 1.
class Mps {
 public:
  Mps() = default;
  static Mps product_state(const std::vector<int>& local_dims,
                           const std::vector<int>& basis_index);
  static Mps random_state(const std::vector<int>& local_dims, int bond_dim,
                          std::uint64_t seed);

  int size() const { return static_cast<int>(tensors_.size()); }
  int local_dim(int site) const { return static_cast<int>(tensors_[site].size()); }
  const std::vector<int>& local_dims() const { return dims_; }
  int bond_dim(int bond) const;  // bond to the right of site `bond`
  int max_bond_dim() const;
  int center() const { return center_; }
  double truncation_log() const { return truncation_log_; }

  const Mat& tensor(int site, int s) const { return tensors_[site][s]; }
  Mat& tensor(int site, int s) { return tensors_[site][s]; }

  /// Moves the orthogonality center, establishing canonical form on the way.
  void canonicalize(int new_center);

  /// Applies a two-site unitary/gate at (site, site+1). The center must be at
  /// one of the two sites; it ends at site+1 (center_right) or site.
  /// Returns the relative discarded singular-value weight.
  double apply_two_site_gate(const Mat& gate, int site, int d_max,
                             double svd_tol, bool center_right = true);

  cxd expect_local(int site, const Mat& op) const;
  /// All-site single-operator expectations in one O(N) pass. An empty matrix
  /// in `ops` means identity (skipped, value 0).
  Vec local_expectations(const std::vector<Mat>& ops) const;
  cxd expect_two_site(int site, const Mat& op) const;  // op on (site, site+1)

  static cxd overlap(const Mps& bra, const Mps& ket);
  static cxd overlap_with_insertion(
      const Mps& bra, const Mps& ket,
      std::span<const std::pair<int, Mat>> insertions);

  void apply_product_operator(const ProductOperator& op);
  cxd expect_product_operator(const ProductOperator& op) const;

  double norm() const;
  void normalize();
  void scale(cxd factor);

  /// Direct sum; bond dimensions add. Neither input needs a center.
  static Mps add(const Mps& a, const Mps& b);
  /// Two-sweep SVD recompression; returns total relative discarded weight.
  double compress(int d_max, double svd_tol);

  /// Transfer-matrix building blocks for custom contractions.
  /// Left-to-right: env' = sum_{sb,sk} op(sb,sk) bra[sb]^+ env ket[sk],
  /// env indexed (bra_bond, ket_bond).
  static Mat transfer_left(const Mat& env, const Mps& bra, const Mps& ket,
                           int site, const Mat* op = nullptr);
  /// Right-to-left: env' = sum_{sb,sk} op(sb,sk) ket[sk] env bra[sb]^+,
  /// env indexed (ket_bond, bra_bond). tr(left * right) closes a contraction.
  static Mat transfer_right(const Mat& env, const Mps& bra, const Mps& ket,
                            int site, const Mat* op = nullptr);

  void save(const std::filesystem::path& path) const;
  static Mps load(const std::filesystem::path& path);

  /// Max deviation from isometry among tensors left/right of the center.
  double canonical_error() const;

 private:
  std::vector<std::vector<Mat>> tensors_;
  std::vector<int> dims_;
  int center_ = -1;
  double truncation_log_ = 0.0;

  void shift_center_right();
  void shift_center_left();
};

}  // namespace vq
