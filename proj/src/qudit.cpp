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

#include "aqss/qudit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aqss/error.hpp"

namespace aqss {

namespace {

constexpr BasisIndex kMaxIndexSpace = BasisIndex{1} << 63;

int mod(long long a, int p) {
  long long r = a % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

int power_mod(long long base, int exp, int p) {
  long long result = 1;
  base = mod(base, p);
  for (; exp > 0; exp >>= 1) {
    if (exp & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<int>(result);
}

int inverse_mod(int a, int p) {
  if (mod(a, p) == 0) throw InputError("division by zero in GF(" + std::to_string(p) + ")");
  return power_mod(a, p - 2, p);
}

using ModMatrix = std::vector<std::vector<int>>;

// Gauss-Jordan inverse over GF(p). The matrix must be invertible.
ModMatrix invert_mod(ModMatrix m, int p) {
  const std::size_t n = m.size();
  ModMatrix inv(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) throw InputError("singular matrix over GF(" + std::to_string(p) + ")");
    std::swap(m[pivot], m[col]);
    std::swap(inv[pivot], inv[col]);
    const long long scale = inverse_mod(m[col][col], p);
    for (std::size_t j = 0; j < n; ++j) {
      m[col][j] = static_cast<int>(m[col][j] * scale % p);
      inv[col][j] = static_cast<int>(inv[col][j] * scale % p);
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || m[row][col] == 0) continue;
      const long long f = m[row][col];
      for (std::size_t j = 0; j < n; ++j) {
        m[row][j] = mod(m[row][j] - f * m[col][j], p);
        inv[row][j] = mod(inv[row][j] - f * inv[col][j], p);
      }
    }
  }
  return inv;
}

BasisIndex checked_power(int p, std::size_t count) {
  BasisIndex value = 1;
  for (std::size_t i = 0; i < count; ++i) {
    if (value > kMaxIndexSpace / static_cast<BasisIndex>(p)) {
      throw ResourceLimit(std::to_string(count) + " qudits of dimension " + std::to_string(p) +
                          " exceed the 63-bit basis index space");
    }
    value *= static_cast<BasisIndex>(p);
  }
  return value;
}

std::vector<std::size_t> positions_of(const QuditRegister& state, const std::vector<std::string>& labels) {
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(state.position(l));
  std::vector<std::size_t> sorted = out;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("subsystem listed twice");
  }
  return out;
}

// Packs the digits at `positions` of `index`, first position most significant.
BasisIndex pack(const QuditRegister& state, BasisIndex index, const std::vector<std::size_t>& positions) {
  BasisIndex out = 0;
  const auto p = static_cast<BasisIndex>(state.field().p());
  for (std::size_t pos : positions) out = out * p + static_cast<BasisIndex>(state.digit(index, pos));
  return out;
}

std::vector<std::size_t> complement_positions(std::size_t count, const std::vector<std::size_t>& taken) {
  std::vector<char> used(count, 0);
  for (std::size_t t : taken) used[t] = 1;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < count; ++i) {
    if (!used[i]) out.push_back(i);
  }
  return out;
}

std::size_t checked_dense_side(int p, std::size_t count, const Limits& limits) {
  BasisIndex side = checked_power(p, count);
  if (side > limits.max_dense_dimension) {
    throw ResourceLimit("dense operator of side " + std::to_string(side) + " exceeds the cap of " +
                        std::to_string(limits.max_dense_dimension));
  }
  return static_cast<std::size_t>(side);
}

// Distinct values of `keys`, sorted; ids[i] indexes keys[i] within them.
std::vector<BasisIndex> compress(const std::vector<BasisIndex>& keys, std::vector<std::size_t>& ids) {
  std::vector<BasisIndex> values = keys;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  ids.resize(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    ids[i] = static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), keys[i]) - values.begin());
  }
  return values;
}

double half_trace_norm(const Eigen::MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// rho_{AB} - rho_A (x) rho_B for a matrix indexed (a * db + b).
Eigen::MatrixXcd correlation(const Eigen::MatrixXcd& rho, Eigen::Index da, Eigen::Index db) {
  Eigen::MatrixXcd ra = Eigen::MatrixXcd::Zero(da, da);
  Eigen::MatrixXcd rb = Eigen::MatrixXcd::Zero(db, db);
  for (Eigen::Index a = 0; a < da; ++a) {
    for (Eigen::Index a2 = 0; a2 < da; ++a2) {
      for (Eigen::Index b = 0; b < db; ++b) ra(a, a2) += rho(a * db + b, a2 * db + b);
    }
  }
  for (Eigen::Index b = 0; b < db; ++b) {
    for (Eigen::Index b2 = 0; b2 < db; ++b2) {
      for (Eigen::Index a = 0; a < da; ++a) rb(b, b2) += rho(a * db + b, a * db + b2);
    }
  }
  return rho - kron(ra, rb);
}

}  // namespace

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

int next_prime(int n) {
  int p = std::max(n, 2);
  while (!is_prime(p)) ++p;
  return p;
}

FieldSpec::FieldSpec(int p) : p_(p) {
  if (!is_prime(p)) throw InputError("field order " + std::to_string(p) + " is not prime");
}

QuditRegister::QuditRegister(FieldSpec field, std::vector<std::string> labels, std::vector<Term> terms)
    : field_(field), labels_(std::move(labels)), terms_(std::move(terms)) {
  std::vector<std::string> sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("duplicate subsystem label");
  }
  dimension_ = checked_power(field_.p(), labels_.size());
  place_.assign(labels_.size(), 1);
  for (std::size_t i = labels_.size(); i-- > 1;) place_[i - 1] = place_[i] * static_cast<BasisIndex>(field_.p());

  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.index < b.index; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].index >= dimension_) throw InputError("basis index out of range");
    if (out > 0 && terms_[out - 1].index == terms_[i].index) {
      terms_[out - 1].amplitude += terms_[i].amplitude;
    } else {
      terms_[out++] = terms_[i];
    }
  }
  terms_.resize(out);
  std::erase_if(terms_, [](const Term& t) { return t.amplitude == Amplitude(0.0, 0.0); });
  if (std::abs(norm() - 1.0) > kTolerance) {
    throw InputError("state norm " + std::to_string(norm()) + " differs from 1");
  }
}

QuditRegister QuditRegister::basis_state(FieldSpec field, std::vector<std::string> labels,
                                         const std::vector<int>& digits) {
  if (digits.size() != labels.size()) throw InputError("basis state needs one digit per subsystem");
  BasisIndex index = 0;
  for (int d : digits) {
    if (d < 0 || d >= field.p()) throw InputError("digit out of range");
    index = index * static_cast<BasisIndex>(field.p()) + static_cast<BasisIndex>(d);
  }
  return QuditRegister(field, std::move(labels), {{index, 1.0}});
}

QuditRegister QuditRegister::from_dense(FieldSpec field, std::vector<std::string> labels,
                                        const std::vector<Amplitude>& amplitudes) {
  if (amplitudes.size() != checked_power(field.p(), labels.size())) {
    throw InputError("dense amplitude vector has the wrong length");
  }
  std::vector<Term> terms;
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    if (amplitudes[i] != Amplitude(0.0, 0.0)) terms.push_back({i, amplitudes[i]});
  }
  return QuditRegister(field, std::move(labels), std::move(terms));
}

bool QuditRegister::has(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t QuditRegister::position(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw InputError("unknown subsystem '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

std::vector<int> QuditRegister::digits(BasisIndex index) const {
  std::vector<int> out(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) out[i] = digit(index, i);
  return out;
}

BasisIndex QuditRegister::index_of(const std::vector<int>& digits) const {
  if (digits.size() != labels_.size()) throw InputError("digit string has the wrong length");
  BasisIndex index = 0;
  for (int d : digits) index = index * static_cast<BasisIndex>(field_.p()) + static_cast<BasisIndex>(d);
  return index;
}

double QuditRegister::norm() const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += std::norm(t.amplitude);
  return std::sqrt(sum);
}

std::vector<Amplitude> QuditRegister::dense(const Limits& limits) const {
  if (dimension_ > limits.max_amplitudes) {
    throw ResourceLimit("dense vector of " + std::to_string(dimension_) + " amplitudes exceeds the cap of " +
                        std::to_string(limits.max_amplitudes));
  }
  std::vector<Amplitude> out(dimension_);
  for (const auto& t : terms_) out[t.index] = t.amplitude;
  return out;
}

QuditRegister QuditRegister::reordered(const std::vector<std::string>& labels) const {
  if (labels.size() != labels_.size()) throw InputError("reordering must list every subsystem");
  auto positions = positions_of(*this, labels);
  std::vector<Term> terms;
  terms.reserve(terms_.size());
  for (const auto& t : terms_) terms.push_back({pack(*this, t.index, positions), t.amplitude});
  return QuditRegister(field_, labels, std::move(terms));
}

Amplitude inner(const QuditRegister& a, const QuditRegister& b) {
  if (!(a.field() == b.field())) throw InputError("inner product across different fields");
  QuditRegister bb = b.reordered(a.labels());
  Amplitude sum = 0.0;
  auto it = bb.terms().begin();
  for (const auto& t : a.terms()) {
    while (it != bb.terms().end() && it->index < t.index) ++it;
    if (it != bb.terms().end() && it->index == t.index) sum += std::conj(t.amplitude) * it->amplitude;
  }
  return sum;
}

QuditRegister tensor(const QuditRegister& a, const QuditRegister& b, const Limits& limits) {
  if (!(a.field() == b.field())) throw InputError("tensor product across different fields");
  if (a.terms().size() * b.terms().size() > limits.max_amplitudes) {
    throw ResourceLimit("tensor product exceeds the amplitude cap");
  }
  std::vector<std::string> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  std::vector<Term> terms;
  for (const auto& x : a.terms()) {
    for (const auto& y : b.terms()) terms.push_back({x.index * b.dimension() + y.index, x.amplitude * y.amplitude});
  }
  return QuditRegister(a.field(), std::move(labels), std::move(terms));
}

QuditRegister apply_isometry(const QuditRegister& state, const std::string& label,
                             const std::vector<std::string>& outputs, const Codebook& codebook,
                             const Limits& limits) {
  const int p = state.field().p();
  if (codebook.size() != static_cast<std::size_t>(p)) throw InputError("codebook needs one image per basis state");
  const std::size_t pos = state.position(label);
  std::size_t widest = 0;
  for (const auto& image : codebook) {
    widest = std::max(widest, image.size());
    for (const auto& [digits, amp] : image) {
      if (digits.size() != outputs.size()) throw InputError("codeword length does not match the outputs");
    }
  }
  if (widest > 0 && state.terms().size() > limits.max_amplitudes / widest) {
    throw ResourceLimit("encoding would store more than " + std::to_string(limits.max_amplitudes) + " amplitudes");
  }

  std::vector<std::string> labels;
  for (std::size_t i = 0; i < state.qudit_count(); ++i) {
    if (i == pos) {
      labels.insert(labels.end(), outputs.begin(), outputs.end());
    } else {
      labels.push_back(state.labels()[i]);
    }
  }
  checked_power(p, labels.size());

  const auto bp = static_cast<BasisIndex>(p);
  const BasisIndex low_place = checked_power(p, state.qudit_count() - 1 - pos);
  const BasisIndex word_space = checked_power(p, outputs.size());
  std::vector<std::vector<std::pair<BasisIndex, Amplitude>>> packed(codebook.size());
  for (std::size_t s = 0; s < codebook.size(); ++s) {
    for (const auto& [digits, amp] : codebook[s]) {
      BasisIndex word = 0;
      for (int d : digits) word = word * bp + static_cast<BasisIndex>(d);
      packed[s].push_back({word, amp});
    }
  }

  std::vector<Term> terms;
  terms.reserve(state.terms().size() * widest);
  for (const auto& t : state.terms()) {
    const BasisIndex low = t.index % low_place;
    const BasisIndex rest = t.index / low_place;
    const auto s = static_cast<std::size_t>(rest % bp);
    const BasisIndex high = rest / bp;
    for (const auto& [word, amp] : packed[s]) {
      terms.push_back({(high * word_space + word) * low_place + low, t.amplitude * amp});
    }
  }
  return QuditRegister(state.field(), std::move(labels), std::move(terms));
}

QuditRegister apply_permutation(const QuditRegister& state, const std::vector<std::string>& labels,
                                const std::function<std::vector<int>(const std::vector<int>&)>& map) {
  auto positions = positions_of(state, labels);
  std::vector<Term> terms;
  terms.reserve(state.terms().size());
  std::vector<int> digits(positions.size());
  for (const auto& t : state.terms()) {
    std::vector<int> all = state.digits(t.index);
    for (std::size_t i = 0; i < positions.size(); ++i) digits[i] = all[positions[i]];
    std::vector<int> mapped = map(digits);
    for (std::size_t i = 0; i < positions.size(); ++i) all[positions[i]] = mapped[i];
    terms.push_back({state.index_of(all), t.amplitude});
  }
  if (terms.size() != state.terms().size()) throw InputError("basis map is not a permutation");
  QuditRegister out(state.field(), state.labels(), std::move(terms));
  if (out.terms().size() != state.terms().size()) throw InputError("basis map is not a permutation");
  return out;
}

Codebook polynomial_codebook(int k, const FieldSpec& field) {
  const int p = field.p();
  const int n = 2 * k - 1;
  if (k < 1) throw InputError("polynomial code needs k >= 1");
  if (p < n) {
    throw InputError("((" + std::to_string(k) + "," + std::to_string(n) + ")) code needs p >= " + std::to_string(n) +
                     ", got " + std::to_string(p));
  }
  const double scale = std::pow(static_cast<double>(p), -(k - 1) / 2.0);
  Codebook book(static_cast<std::size_t>(p));
  std::vector<int> coeffs(static_cast<std::size_t>(k - 1), 0);
  for (int s = 0; s < p; ++s) {
    std::fill(coeffs.begin(), coeffs.end(), 0);
    while (true) {
      std::vector<int> word(static_cast<std::size_t>(n));
      for (int x = 0; x < n; ++x) {
        long long f = static_cast<long long>(s) * power_mod(x, k - 1, p);
        for (int j = 0; j < k - 1; ++j) f += static_cast<long long>(coeffs[j]) * power_mod(x, j, p);
        word[x] = mod(f, p);
      }
      book[s].push_back({std::move(word), scale});
      std::size_t j = 0;
      while (j < coeffs.size() && ++coeffs[j] == p) coeffs[j++] = 0;
      if (j == coeffs.size()) break;
    }
  }
  return book;
}

Codebook additive_codebook(int m, const FieldSpec& field) {
  const int p = field.p();
  if (m < 1) throw InputError("additive code needs m >= 1");
  const double scale = std::pow(static_cast<double>(p), -(m - 1) / 2.0);
  Codebook book(static_cast<std::size_t>(p));
  std::vector<int> c(static_cast<std::size_t>(m - 1), 0);
  for (int s = 0; s < p; ++s) {
    std::fill(c.begin(), c.end(), 0);
    while (true) {
      std::vector<int> word(c.begin(), c.end());
      word.push_back(mod(s - std::accumulate(c.begin(), c.end(), 0LL), p));
      book[s].push_back({std::move(word), scale});
      std::size_t j = 0;
      while (j < c.size() && ++c[j] == p) c[j++] = 0;
      if (j == c.size()) break;
    }
  }
  return book;
}

namespace {

// Rejects an encoding before its codebook (p^branching words per input) is
// built when the result could not fit the cap anyway.
void check_expansion(const QuditRegister& state, int branching, const Limits& limits) {
  const auto p = static_cast<std::uint64_t>(state.field().p());
  std::uint64_t total = std::max<std::uint64_t>(state.terms().size(), p);
  for (int i = 0; i < branching && total <= limits.max_amplitudes; ++i) total *= p;
  if (total > limits.max_amplitudes) {
    throw ResourceLimit("encoding would need more than " + std::to_string(limits.max_amplitudes) +
                        " stored amplitudes");
  }
}

}  // namespace

QuditRegister encode_polynomial(const QuditRegister& state, const std::string& label, int k,
                                const std::vector<std::string>& outputs, const Limits& limits) {
  if (outputs.size() != static_cast<std::size_t>(2 * k - 1)) {
    throw InputError("((k,2k-1)) encoding needs 2k-1 output labels");
  }
  check_expansion(state, k - 1, limits);
  return apply_isometry(state, label, outputs, polynomial_codebook(k, state.field()), limits);
}

QuditRegister encode_additive(const QuditRegister& state, const std::string& label,
                              const std::vector<std::string>& outputs, const Limits& limits) {
  check_expansion(state, static_cast<int>(outputs.size()) - 1, limits);
  return apply_isometry(state, label, outputs, additive_codebook(static_cast<int>(outputs.size()), state.field()),
                        limits);
}

QuditRegister decode_threshold(const QuditRegister& state, const std::vector<std::string>& held,
                               const std::vector<int>& points, int k) {
  const int p = state.field().p();
  const int n = 2 * k - 1;
  if (held.size() != static_cast<std::size_t>(k) || points.size() != held.size()) {
    throw InputError("decoding a ((" + std::to_string(k) + "," + std::to_string(n) + ")) code needs exactly " +
                     std::to_string(k) + " shares");
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int x : points) {
    if (x < 0 || x >= n || seen[x]) throw InputError("evaluation points must be distinct share positions");
    seen[x] = 1;
  }
  if (p < n) throw InputError("field too small for the code");

  // y = V (c, s); unseen u = A c + b s.
  ModMatrix vandermonde(k, std::vector<int>(k));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) vandermonde[i][j] = power_mod(points[i], j, p);
  }
  const ModMatrix v_inv = invert_mod(vandermonde, p);
  std::vector<int> correction(static_cast<std::size_t>(k - 1), 0);
  if (k > 1) {
    std::vector<int> unseen;
    for (int x = 0; x < n; ++x) {
      if (!seen[x]) unseen.push_back(x);
    }
    ModMatrix a(k - 1, std::vector<int>(k - 1));
    std::vector<int> b(static_cast<std::size_t>(k - 1));
    for (int l = 0; l < k - 1; ++l) {
      for (int j = 0; j < k - 1; ++j) a[l][j] = power_mod(unseen[l], j, p);
      b[l] = power_mod(unseen[l], k - 1, p);
    }
    const ModMatrix a_inv = invert_mod(a, p);
    for (int i = 0; i < k - 1; ++i) {
      long long w = 0;
      for (int l = 0; l < k - 1; ++l) w += static_cast<long long>(a_inv[i][l]) * b[l];
      correction[i] = mod(w, p);
    }
  }
  auto map = [&](const std::vector<int>& y) {
    std::vector<int> coeffs(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      long long sum = 0;
      for (int j = 0; j < k; ++j) sum += static_cast<long long>(v_inv[i][j]) * y[j];
      coeffs[i] = mod(sum, p);
    }
    const int s = coeffs[k - 1];
    std::vector<int> out(static_cast<std::size_t>(k));
    out[0] = s;
    for (int i = 0; i < k - 1; ++i) out[i + 1] = mod(coeffs[i] + static_cast<long long>(correction[i]) * s, p);
    return out;
  };
  return apply_permutation(state, held, map);
}

QuditRegister decode_additive(const QuditRegister& state, const std::vector<std::string>& shares) {
  const int p = state.field().p();
  if (shares.empty()) throw InputError("additive decoding needs at least one share");
  auto map = [p](const std::vector<int>& y) {
    std::vector<int> out = y;
    out.back() = mod(std::accumulate(y.begin(), y.end(), 0LL), p);
    return out;
  };
  return apply_permutation(state, shares, map);
}

QuditRegister entangle_with_reference(const FieldSpec& field, const std::string& secret,
                                      const std::string& reference) {
  const int p = field.p();
  std::vector<Term> terms;
  for (int s = 0; s < p; ++s) {
    terms.push_back({static_cast<BasisIndex>(s) * static_cast<BasisIndex>(p) + static_cast<BasisIndex>(s),
                     1.0 / std::sqrt(static_cast<double>(p))});
  }
  return QuditRegister(field, {secret, reference}, std::move(terms));
}

DensityOperator::DensityOperator(FieldSpec field, std::vector<std::string> labels, Eigen::MatrixXcd matrix)
    : field_(field), labels_(std::move(labels)), matrix_(std::move(matrix)) {
  const BasisIndex side = checked_power(field_.p(), labels_.size());
  if (static_cast<BasisIndex>(matrix_.rows()) != side || matrix_.rows() != matrix_.cols()) {
    throw InputError("density matrix side does not match its subsystems");
  }
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kTolerance) {
    throw InputError("density matrix is not Hermitian");
  }
  if (std::abs(matrix_.trace() - Amplitude(1.0, 0.0)) > kTolerance) {
    throw InputError("density matrix trace differs from 1");
  }
}

Eigen::VectorXd DensityOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

DensityOperator partial_trace(const QuditRegister& state, const std::vector<std::string>& keep,
                              const Limits& limits) {
  const auto kept = positions_of(state, keep);
  const auto rest = complement_positions(state.qudit_count(), kept);
  const std::size_t side = checked_dense_side(state.field().p(), kept.size(), limits);

  struct Entry {
    BasisIndex rest;
    BasisIndex kept;
    Amplitude amplitude;
  };
  std::vector<Entry> entries;
  entries.reserve(state.terms().size());
  for (const auto& t : state.terms()) {
    entries.push_back({pack(state, t.index, rest), pack(state, t.index, kept), t.amplitude});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.rest < b.rest; });
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
  for (std::size_t lo = 0; lo < entries.size();) {
    std::size_t hi = lo;
    while (hi < entries.size() && entries[hi].rest == entries[lo].rest) ++hi;
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = lo; j < hi; ++j) {
        rho(static_cast<Eigen::Index>(entries[i].kept), static_cast<Eigen::Index>(entries[j].kept)) +=
            entries[i].amplitude * std::conj(entries[j].amplitude);
      }
    }
    lo = hi;
  }
  return DensityOperator(state.field(), keep, std::move(rho));
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& keep) {
  const auto& labels = rho.labels();
  const int p = rho.field().p();
  std::vector<std::size_t> kept;
  for (const auto& l : keep) {
    auto it = std::find(labels.begin(), labels.end(), l);
    if (it == labels.end()) throw InputError("unknown subsystem '" + l + "'");
    kept.push_back(static_cast<std::size_t>(it - labels.begin()));
  }
  const auto rest = complement_positions(labels.size(), kept);
  const auto side = static_cast<Eigen::Index>(checked_power(p, kept.size()));
  const auto full = rho.matrix().rows();

  auto digits_of = [&](Eigen::Index index) {
    std::vector<int> d(labels.size());
    for (std::size_t i = labels.size(); i-- > 0;) {
      d[i] = static_cast<int>(index % p);
      index /= p;
    }
    return d;
  };
  auto pack_digits = [&](const std::vector<int>& d, const std::vector<std::size_t>& positions) {
    Eigen::Index out = 0;
    for (std::size_t pos : positions) out = out * p + d[pos];
    return out;
  };
  std::vector<Eigen::Index> kept_index(static_cast<std::size_t>(full));
  std::vector<Eigen::Index> rest_index(static_cast<std::size_t>(full));
  for (Eigen::Index i = 0; i < full; ++i) {
    auto d = digits_of(i);
    kept_index[static_cast<std::size_t>(i)] = pack_digits(d, kept);
    rest_index[static_cast<std::size_t>(i)] = pack_digits(d, rest);
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(side, side);
  for (Eigen::Index i = 0; i < full; ++i) {
    for (Eigen::Index j = 0; j < full; ++j) {
      if (rest_index[static_cast<std::size_t>(i)] == rest_index[static_cast<std::size_t>(j)]) {
        out(kept_index[static_cast<std::size_t>(i)], kept_index[static_cast<std::size_t>(j)]) += rho.matrix()(i, j);
      }
    }
  }
  return DensityOperator(rho.field(), keep, std::move(out));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  if (!(a.field() == b.field())) throw InputError("tensor product across different fields");
  std::vector<std::string> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  return DensityOperator(a.field(), std::move(labels), kron(a.matrix(), b.matrix()));
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.labels() != sigma.labels() || !(rho.field() == sigma.field())) {
    throw InputError("trace distance needs operators on the same subsystems");
  }
  return half_trace_norm(rho.matrix() - sigma.matrix());
}

double decoupling_distance(const QuditRegister& state, const std::vector<std::string>& kept,
                           const std::string& reference, const Limits& limits) {
  if (std::find(kept.begin(), kept.end(), reference) != kept.end()) {
    throw InputError("the reference cannot be part of the kept subsystems");
  }
  if (kept.empty()) return 0.0;
  const auto k_pos = positions_of(state, kept);
  const std::size_t r_pos = state.position(reference);
  std::vector<std::size_t> taken = k_pos;
  taken.push_back(r_pos);
  const auto c_pos = complement_positions(state.qudit_count(), taken);
  const auto p = static_cast<std::size_t>(state.field().p());
  const std::size_t cap = limits.max_dense_dimension;

  const auto& terms = state.terms();
  std::vector<BasisIndex> k_key(terms.size());
  std::vector<BasisIndex> c_key(terms.size());
  std::vector<std::size_t> r_val(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    k_key[i] = pack(state, terms[i].index, k_pos);
    c_key[i] = pack(state, terms[i].index, c_pos);
    r_val[i] = static_cast<std::size_t>(state.digit(terms[i].index, r_pos));
  }
  std::vector<std::size_t> k_id;
  std::vector<std::size_t> c_id;
  const std::size_t nk = compress(k_key, k_id).size();
  const std::size_t nc = compress(c_key, c_id).size();

  // Group term indices by a key.
  auto group_by = [&](const std::vector<std::size_t>& ids, std::size_t count) {
    std::vector<std::vector<std::size_t>> groups(count);
    for (std::size_t i = 0; i < ids.size(); ++i) groups[ids[i]].push_back(i);
    return groups;
  };

  if (nk * p <= cap) {
    const auto side = static_cast<Eigen::Index>(nk * p);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(side, side);
    for (const auto& g : group_by(c_id, nc)) {
      for (std::size_t i : g) {
        for (std::size_t j : g) {
          rho(static_cast<Eigen::Index>(k_id[i] * p + r_val[i]), static_cast<Eigen::Index>(k_id[j] * p + r_val[j])) +=
              terms[i].amplitude * std::conj(terms[j].amplitude);
        }
      }
    }
    return half_trace_norm(correlation(rho, static_cast<Eigen::Index>(nk), static_cast<Eigen::Index>(p)));
  }
  if (nc * p > cap) {
    throw ResourceLimit("decoupling distance needs a dense operator of side " + std::to_string(std::min(nk, nc) * p) +
                        ", above the cap of " + std::to_string(cap));
  }
  // Reduce the kept side to supp(rho_K) through the spectrum of B^dagger B,
  // where B has rows k and columns (r, c).
  const auto cols = static_cast<Eigen::Index>(nc * p);
  auto col_of = [&](std::size_t i) { return static_cast<Eigen::Index>(r_val[i] * nc + c_id[i]); };
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(cols, cols);
  for (const auto& g : group_by(k_id, nk)) {
    for (std::size_t i : g) {
      for (std::size_t j : g) gram(col_of(i), col_of(j)) += std::conj(terms[i].amplitude) * terms[j].amplitude;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram);
  const double top = std::max(solver.eigenvalues().maxCoeff(), 0.0);
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < cols; ++i) {
    if (solver.eigenvalues()(i) > 1e-14 * std::max(top, 1.0)) support.push_back(i);
  }
  const auto rank = static_cast<Eigen::Index>(support.size());
  if (static_cast<std::size_t>(rank) * p > cap) {
    throw ResourceLimit("reduced decoupling operator of side " + std::to_string(rank * static_cast<Eigen::Index>(p)) +
                        " exceeds the cap of " + std::to_string(cap));
  }
  // Coordinates of the state on |u_i>|r>|c>: sqrt(lambda_i) conj(V(j, i)).
  const auto ip = static_cast<Eigen::Index>(p);
  const auto inc = static_cast<Eigen::Index>(nc);
  Eigen::MatrixXcd coords(rank * ip, inc);
  for (Eigen::Index a = 0; a < rank; ++a) {
    const double sigma = std::sqrt(solver.eigenvalues()(support[static_cast<std::size_t>(a)]));
    for (Eigen::Index r = 0; r < ip; ++r) {
      for (Eigen::Index c = 0; c < inc; ++c) {
        coords(a * ip + r, c) = sigma * std::conj(solver.eigenvectors()(r * inc + c, support[static_cast<std::size_t>(a)]));
      }
    }
  }
  Eigen::MatrixXcd rho = coords * coords.adjoint();
  return half_trace_norm(correlation(rho, rank, ip));
}

double entanglement_fidelity(const QuditRegister& state, const std::string& output, const std::string& reference) {
  DensityOperator rho = partial_trace(state, {output, reference});
  const int p = state.field().p();
  Amplitude sum = 0.0;
  for (int s = 0; s < p; ++s) {
    for (int t = 0; t < p; ++t) sum += rho.matrix()(s * p + s, t * p + t);
  }
  return sum.real() / p;
}

}  // namespace aqss
