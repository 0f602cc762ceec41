// Copyright 2026 The AQSS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AQSS_QUDIT_HPP_
#define AQSS_QUDIT_HPP_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace aqss {

using Amplitude = std::complex<double>;
using BasisIndex = std::uint64_t;

// Numeric contract for normalization, fidelity and trace-distance checks.
inline constexpr double kTolerance = 1e-9;

bool is_prime(int n);
// Smallest prime >= n (n >= 2).
int next_prime(int n);

// Qudit dimension and field order.
class FieldSpec {
 public:
  explicit FieldSpec(int p);  // throws InputError unless p is prime
  int p() const noexcept { return p_; }
  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  int p_;
};

struct Limits {
  // Cap on stored (nonzero) amplitudes of any register.
  std::uint64_t max_amplitudes = std::uint64_t{1} << 24;
  // Cap on the side of any dense matrix.
  std::size_t max_dense_dimension = 2048;
};

struct Term {
  BasisIndex index;
  Amplitude amplitude;
};

// Pure state of labeled qudits stored as its nonzero amplitudes. A basis index
// packs the digits base p with the first label most significant, so terms
// sorted by index are sorted lexicographically by digit string.
class QuditRegister {
 public:
  // Sorts terms, merges duplicates and drops exact zeros. Throws InputError on
  // duplicate labels, out-of-range indices or a norm away from 1, and
  // ResourceLimit when p^labels does not fit in 63 bits.
  QuditRegister(FieldSpec field, std::vector<std::string> labels, std::vector<Term> terms);

  static QuditRegister basis_state(FieldSpec field, std::vector<std::string> labels, const std::vector<int>& digits);
  static QuditRegister from_dense(FieldSpec field, std::vector<std::string> labels,
                                  const std::vector<Amplitude>& amplitudes);

  const FieldSpec& field() const noexcept { return field_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t qudit_count() const noexcept { return labels_.size(); }
  BasisIndex dimension() const noexcept { return dimension_; }

  bool has(const std::string& label) const;
  std::size_t position(const std::string& label) const;  // throws InputError
  int digit(BasisIndex index, std::size_t position) const {
    return static_cast<int>((index / place_[position]) % static_cast<BasisIndex>(field_.p()));
  }
  std::vector<int> digits(BasisIndex index) const;
  BasisIndex index_of(const std::vector<int>& digits) const;

  double norm() const;
  std::vector<Amplitude> dense(const Limits& limits = {}) const;
  // Same state with subsystems listed in `labels` order (a permutation).
  QuditRegister reordered(const std::vector<std::string>& labels) const;

 private:
  FieldSpec field_;
  std::vector<std::string> labels_;
  std::vector<BasisIndex> place_;
  BasisIndex dimension_ = 1;
  std::vector<Term> terms_;
};

// <a|b>, after bringing b into a's label order.
Amplitude inner(const QuditRegister& a, const QuditRegister& b);
QuditRegister tensor(const QuditRegister& a, const QuditRegister& b, const Limits& limits = {});

// Superposition over digit strings for one basis input.
using Image = std::vector<std::pair<std::vector<int>, Amplitude>>;
// images[s] is the image of basis state |s>.
using Codebook = std::vector<Image>;

// Replaces subsystem `label` by `outputs` (in place), mapping |s> to
// codebook[s] and extending linearly. Throws ResourceLimit when the result
// would exceed the amplitude cap.
QuditRegister apply_isometry(const QuditRegister& state, const std::string& label,
                             const std::vector<std::string>& outputs, const Codebook& codebook,
                             const Limits& limits = {});

// Applies a basis permutation to the digits of `labels`. `map` must be a
// bijection on digit strings of that length.
QuditRegister apply_permutation(const QuditRegister& state, const std::vector<std::string>& labels,
                                const std::function<std::vector<int>(const std::vector<int>&)>& map);

// ((k,2k-1)) code: |s> -> p^{-(k-1)/2} sum_c |f(0)>...|f(n-1)>, with
// f(x) = c_0 + ... + c_{k-2} x^{k-2} + s x^{k-1} over GF(p).
Codebook polynomial_codebook(int k, const FieldSpec& field);
// ((m,m)) code: |s> -> p^{-(m-1)/2} sum_c |c_1>...|c_{m-1}>|s - sum c>.
Codebook additive_codebook(int m, const FieldSpec& field);

QuditRegister encode_polynomial(const QuditRegister& state, const std::string& label, int k,
                                const std::vector<std::string>& outputs, const Limits& limits = {});
QuditRegister encode_additive(const QuditRegister& state, const std::string& label,
                              const std::vector<std::string>& outputs, const Limits& limits = {});

// Decodes k shares of a ((k,2k-1)) polynomial code held at evaluation points
// `points`. Afterwards held[0] carries the secret and every held subsystem is
// decoupled from the unseen shares' secret dependence.
QuditRegister decode_threshold(const QuditRegister& state, const std::vector<std::string>& held,
                               const std::vector<int>& points, int k);
// Decodes all m shares of the additive code; the secret ends up in shares.back().
QuditRegister decode_additive(const QuditRegister& state, const std::vector<std::string>& shares);

// p^{-1/2} sum_s |s>_secret |s>_ref.
QuditRegister entangle_with_reference(const FieldSpec& field, const std::string& secret = "secret",
                                      const std::string& reference = "ref");

class DensityOperator {
 public:
  // Throws InputError if the matrix side is not p^labels, it is not
  // Hermitian, or its trace is not 1 (tolerance kTolerance).
  DensityOperator(FieldSpec field, std::vector<std::string> labels, Eigen::MatrixXcd matrix);

  const FieldSpec& field() const noexcept { return field_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  Eigen::VectorXd eigenvalues() const;

 private:
  FieldSpec field_;
  std::vector<std::string> labels_;
  Eigen::MatrixXcd matrix_;
};

// Reduced state on `keep`, ordered as given. Throws InputError on unknown
// labels and ResourceLimit past the dense cap.
DensityOperator partial_trace(const QuditRegister& state, const std::vector<std::string>& keep,
                              const Limits& limits = {});
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& keep);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

// Half the trace norm of rho - sigma. Labels must match.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

// Trace distance between rho_{kept,ref} and rho_kept (x) rho_ref, computed on
// supp(rho_kept) (x) ref so it stays small when the kept side is large.
double decoupling_distance(const QuditRegister& state, const std::vector<std::string>& kept,
                           const std::string& reference, const Limits& limits = {});

// <Phi| rho_{output,ref} |Phi> with Phi the maximally entangled pair.
double entanglement_fidelity(const QuditRegister& state, const std::string& output, const std::string& reference);

}  // namespace aqss

#endif  // AQSS_QUDIT_HPP_
