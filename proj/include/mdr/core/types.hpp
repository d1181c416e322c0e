#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mdr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Validation tolerances shared by every constructor in the library.
namespace tol {
inline constexpr double herm = 1e-10;
inline constexpr double trace = 1e-10;
/// Relative to the largest eigenvalue magnitude.
inline constexpr double psd = 1e-10;
}  // namespace tol

/// Raised for any violated precondition: malformed layouts, non-PSD input,
/// unknown subsystem labels, dimension mismatches.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered subsystem names and dimensions. The leftmost label is the
/// slowest-varying tensor index.
class SystemLayout {
 public:
  SystemLayout() = default;

  SystemLayout(std::vector<std::string> labels, std::vector<std::size_t> dims)
      : labels_(std::move(labels)), dims_(std::move(dims)) {
    if (labels_.size() != dims_.size())
      throw Error("SystemLayout: labels and dims differ in length");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (dims_[i] == 0) throw Error("SystemLayout: zero dimension for '" + labels_[i] + "'");
      if (labels_[i].empty()) throw Error("SystemLayout: empty label");
      for (std::size_t j = 0; j < i; ++j)
        if (labels_[i] == labels_[j]) throw Error("SystemLayout: duplicate label '" + labels_[i] + "'");
    }
  }

  /// Single-system layout.
  SystemLayout(std::string label, std::size_t dim)
      : SystemLayout(std::vector<std::string>{std::move(label)}, std::vector<std::size_t>{dim}) {}

  [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
  [[nodiscard]] const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
  [[nodiscard]] bool empty() const noexcept { return labels_.empty(); }

  [[nodiscard]] std::size_t total_dim() const noexcept {
    return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
  }

  [[nodiscard]] bool contains(const std::string& label) const noexcept {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
  }

  [[nodiscard]] std::size_t index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw Error("unknown subsystem label '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
  }

  [[nodiscard]] std::size_t dim_of(const std::string& label) const { return dims_[index_of(label)]; }

  /// Layout restricted to `keep`, in this layout's order.
  [[nodiscard]] SystemLayout select(const std::vector<std::string>& keep) const {
    for (const auto& k : keep) (void)index_of(k);
    std::vector<std::string> l;
    std::vector<std::size_t> d;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (std::find(keep.begin(), keep.end(), labels_[i]) != keep.end()) {
        l.push_back(labels_[i]);
        d.push_back(dims_[i]);
      }
    }
    return {std::move(l), std::move(d)};
  }

  /// Concatenation; labels must stay unique.
  [[nodiscard]] SystemLayout concat(const SystemLayout& other) const {
    auto l = labels_;
    auto d = dims_;
    l.insert(l.end(), other.labels_.begin(), other.labels_.end());
    d.insert(d.end(), other.dims_.begin(), other.dims_.end());
    return {std::move(l), std::move(d)};
  }

  friend bool operator==(const SystemLayout&, const SystemLayout&) = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::size_t> dims_;
};

namespace detail {

inline double max_abs_eigenvalue(const Eigen::VectorXd& ev) {
  return ev.size() == 0 ? 0.0 : ev.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double tolerance = tol::herm) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance * std::max(1.0, m.cwiseAbs().maxCoeff());
}

/// Throws unless `m` is Hermitian and PSD within the shared tolerances.
inline void require_psd(const Matrix& m, const std::string& what) {
  if (!is_hermitian(m)) throw Error(what + ": matrix is not Hermitian");
  if (m.rows() == 0) return;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double scale = std::max(max_abs_eigenvalue(ev), 1e-300);
  if (ev.minCoeff() < -tol::psd * std::max(scale, 1.0))
    throw Error(what + ": matrix has a negative eigenvalue " + std::to_string(ev.minCoeff()));
}

}  // namespace detail

/// Trace-one PSD operator over a labelled tensor-product layout.
class DensityOperator {
 public:
  DensityOperator() = default;

  DensityOperator(SystemLayout layout, Matrix matrix) : layout_(std::move(layout)), matrix_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(layout_.total_dim());
    if (matrix_.rows() != d || matrix_.cols() != d)
      throw Error("DensityOperator: matrix is " + std::to_string(matrix_.rows()) + "x" +
                  std::to_string(matrix_.cols()) + " but layout dimension is " + std::to_string(d));
    detail::require_psd(matrix_, "DensityOperator");
    const double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > tol::trace) throw Error("DensityOperator: trace is " + std::to_string(tr));
    // symmetrize away round-off so downstream eigen-solvers see exact Hermitian input
    matrix_ = (matrix_ + matrix_.adjoint()) * 0.5;
  }

  [[nodiscard]] const SystemLayout& layout() const noexcept { return layout_; }
  [[nodiscard]] const Matrix& matrix() const noexcept { return matrix_; }
  [[nodiscard]] std::size_t dim() const noexcept { return layout_.total_dim(); }

 private:
  SystemLayout layout_;
  Matrix matrix_;
};

/// Indexed family of PSD operators summing to the identity.
class Povm {
 public:
  Povm() = default;

  Povm(SystemLayout layout, std::vector<Matrix> elements)
      : layout_(std::move(layout)), elements_(std::move(elements)) {
    if (elements_.empty()) throw Error("Povm: no elements");
    const auto d = static_cast<Eigen::Index>(layout_.total_dim());
    Matrix sum = Matrix::Zero(d, d);
    for (auto& e : elements_) {
      if (e.rows() != d || e.cols() != d) throw Error("Povm: element dimension mismatch");
      detail::require_psd(e, "Povm element");
      e = (e + e.adjoint()) * 0.5;
      sum += e;
    }
    if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol::trace)
      throw Error("Povm: elements do not sum to identity");
  }

  [[nodiscard]] const SystemLayout& layout() const noexcept { return layout_; }
  [[nodiscard]] const std::vector<Matrix>& elements() const noexcept { return elements_; }
  [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return layout_.total_dim(); }

  [[nodiscard]] bool is_projective() const {
    return std::all_of(elements_.begin(), elements_.end(), [](const Matrix& e) {
      return (e * e - e).cwiseAbs().maxCoeff() <= tol::psd;
    });
  }

  /// Rank-one projectors onto the columns of a unitary.
  static Povm from_basis(SystemLayout layout, const Matrix& basis) {
    std::vector<Matrix> el;
    el.reserve(static_cast<std::size_t>(basis.cols()));
    for (Eigen::Index k = 0; k < basis.cols(); ++k) el.emplace_back(basis.col(k) * basis.col(k).adjoint());
    return {std::move(layout), std::move(el)};
  }

 private:
  SystemLayout layout_;
  std::vector<Matrix> elements_;
};

/// Trace-preserving map in Kraus form.
class QuantumChannel {
 public:
  QuantumChannel() = default;

  QuantumChannel(SystemLayout input, SystemLayout output, std::vector<Matrix> kraus)
      : input_(std::move(input)), output_(std::move(output)), kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw Error("QuantumChannel: no Kraus operators");
    const auto din = static_cast<Eigen::Index>(input_.total_dim());
    const auto dout = static_cast<Eigen::Index>(output_.total_dim());
    Matrix sum = Matrix::Zero(din, din);
    for (const auto& k : kraus_) {
      if (k.rows() != dout || k.cols() != din)
        throw Error("QuantumChannel: Kraus operator is " + std::to_string(k.rows()) + "x" +
                    std::to_string(k.cols()) + ", expected " + std::to_string(dout) + "x" + std::to_string(din));
      sum += k.adjoint() * k;
    }
    if ((sum - Matrix::Identity(din, din)).cwiseAbs().maxCoeff() > tol::trace)
      throw Error("QuantumChannel: Kraus operators are not trace preserving");
  }

  [[nodiscard]] const SystemLayout& input_layout() const noexcept { return input_; }
  [[nodiscard]] const SystemLayout& output_layout() const noexcept { return output_; }
  [[nodiscard]] const std::vector<Matrix>& kraus() const noexcept { return kraus_; }

  static QuantumChannel identity(const SystemLayout& layout) {
    const auto d = static_cast<Eigen::Index>(layout.total_dim());
    return {layout, layout, {Matrix::Identity(d, d)}};
  }

 private:
  SystemLayout input_;
  SystemLayout output_;
  std::vector<Matrix> kraus_;
};

/// Block-diagonal state sum_k |k><k| (x) branch_k. With an empty quantum
/// layout every branch is 1x1 and the object is a probability distribution.
class ClassicalQuantumState {
 public:
  ClassicalQuantumState() = default;

  ClassicalQuantumState(std::vector<std::string> classical_labels, SystemLayout quantum_layout,
                        std::vector<Matrix> branches)
      : classical_labels_(std::move(classical_labels)),
        quantum_(std::move(quantum_layout)),
        branches_(std::move(branches)) {
    if (classical_labels_.size() != branches_.size())
      throw Error("ClassicalQuantumState: label/branch count mismatch");
    if (branches_.empty()) throw Error("ClassicalQuantumState: no branches");
    const auto d = static_cast<Eigen::Index>(quantum_.total_dim());
    double total = 0.0;
    for (auto& b : branches_) {
      if (b.rows() != d || b.cols() != d) throw Error("ClassicalQuantumState: branch dimension mismatch");
      detail::require_psd(b, "ClassicalQuantumState branch");
      b = (b + b.adjoint()) * 0.5;
      total += b.trace().real();
    }
    if (std::abs(total - 1.0) > tol::trace)
      throw Error("ClassicalQuantumState: total weight is " + std::to_string(total));
  }

  /// Fully classical state from a probability vector.
  static ClassicalQuantumState from_distribution(const std::vector<double>& p) {
    std::vector<std::string> labels;
    std::vector<Matrix> branches;
    for (std::size_t k = 0; k < p.size(); ++k) {
      labels.push_back(std::to_string(k));
      Matrix b(1, 1);
      b(0, 0) = p[k];
      branches.push_back(std::move(b));
    }
    return {std::move(labels), SystemLayout{}, std::move(branches)};
  }

  [[nodiscard]] const std::vector<std::string>& classical_labels() const noexcept { return classical_labels_; }
  [[nodiscard]] const SystemLayout& quantum_layout() const noexcept { return quantum_; }
  [[nodiscard]] const std::vector<Matrix>& branches() const noexcept { return branches_; }
  [[nodiscard]] std::size_t outcomes() const noexcept { return branches_.size(); }
  [[nodiscard]] bool is_classical() const noexcept { return quantum_.total_dim() == 1; }

  /// Outcome distribution, i.e. branch traces.
  [[nodiscard]] std::vector<double> distribution() const {
    std::vector<double> p;
    p.reserve(branches_.size());
    for (const auto& b : branches_) p.push_back(std::max(0.0, b.trace().real()));
    return p;
  }

  /// Block-diagonal embedding on layout (register, quantum...).
  [[nodiscard]] DensityOperator embed(const std::string& register_label) const {
    const auto d = static_cast<Eigen::Index>(quantum_.total_dim());
    const auto n = static_cast<Eigen::Index>(branches_.size());
    Matrix m = Matrix::Zero(n * d, n * d);
    for (Eigen::Index k = 0; k < n; ++k) m.block(k * d, k * d, d, d) = branches_[static_cast<std::size_t>(k)];
    SystemLayout reg(register_label, static_cast<std::size_t>(n));
    return {reg.concat(quantum_), std::move(m)};
  }

  /// Quantum part summed over outcomes.
  [[nodiscard]] Matrix marginal() const {
    Matrix m = Matrix::Zero(branches_.front().rows(), branches_.front().cols());
    for (const auto& b : branches_) m += b;
    return m;
  }

 private:
  std::vector<std::string> classical_labels_;
  SystemLayout quantum_;
  std::vector<Matrix> branches_;
};

}  // namespace mdr
