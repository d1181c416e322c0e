#pragma once

#include <string>
#include <vector>

#include "mdr/core/linalg.hpp"
#include "mdr/core/types.hpp"

namespace mdr {

namespace detail {

/// Flattened-index map for reordering tensor factors: entry i of the result
/// is the old flat index of new flat index i.
inline std::vector<Eigen::Index> permutation_map(const SystemLayout& layout, const std::vector<std::size_t>& order) {
  const auto& dims = layout.dims();
  const std::size_t n = dims.size();
  std::vector<std::size_t> old_stride(n, 1);
  for (std::size_t k = n; k-- > 1;) old_stride[k - 1] = old_stride[k] * dims[k];
  std::vector<std::size_t> new_dims(n);
  for (std::size_t k = 0; k < n; ++k) new_dims[k] = dims[order[k]];

  const std::size_t total = layout.total_dim();
  std::vector<Eigen::Index> map(total);
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t old_flat = 0;
    for (std::size_t k = 0; k < n; ++k) old_flat += digits[k] * old_stride[order[k]];
    map[flat] = static_cast<Eigen::Index>(old_flat);
    for (std::size_t k = n; k-- > 0;) {
      if (++digits[k] < new_dims[k]) break;
      digits[k] = 0;
    }
  }
  return map;
}

inline Matrix permute_matrix(const Matrix& m, const std::vector<Eigen::Index>& map) {
  const auto d = static_cast<Eigen::Index>(map.size());
  Matrix out(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out(i, j) = m(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]);
  return out;
}

/// Sum over the fast factor of dimension `inner` of a (outer*inner)-square matrix.
inline Matrix trace_out_inner(const Matrix& m, Eigen::Index inner) {
  const Eigen::Index outer = m.rows() / inner;
  Matrix out = Matrix::Zero(outer, outer);
  for (Eigen::Index a = 0; a < outer; ++a)
    for (Eigen::Index b = 0; b < outer; ++b)
      for (Eigen::Index r = 0; r < inner; ++r) out(a, b) += m(a * inner + r, b * inner + r);
  return out;
}

/// Sum over the slow factor of dimension `outer`.
inline Matrix trace_out_outer(const Matrix& m, Eigen::Index outer) {
  const Eigen::Index inner = m.rows() / outer;
  Matrix out = Matrix::Zero(inner, inner);
  for (Eigen::Index a = 0; a < outer; ++a) out += m.block(a * inner, a * inner, inner, inner);
  return out;
}

inline std::vector<std::string> complement(const SystemLayout& layout, const std::vector<std::string>& labels) {
  std::vector<std::string> rest;
  for (const auto& l : layout.labels())
    if (std::find(labels.begin(), labels.end(), l) == labels.end()) rest.push_back(l);
  return rest;
}

}  // namespace detail

/// Reorders tensor factors of a matrix living on `layout`.
inline Matrix permute_systems(const Matrix& m, const SystemLayout& layout, const std::vector<std::string>& order) {
  if (order.size() != layout.size()) throw Error("permute_systems: order must name every subsystem");
  std::vector<std::size_t> idx;
  idx.reserve(order.size());
  for (const auto& l : order) idx.push_back(layout.index_of(l));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (idx[i] == idx[j]) throw Error("permute_systems: repeated label");
  return detail::permute_matrix(m, detail::permutation_map(layout, idx));
}

inline DensityOperator permute_systems(const DensityOperator& rho, const std::vector<std::string>& order) {
  auto m = permute_systems(rho.matrix(), rho.layout(), order);
  std::vector<std::size_t> dims;
  for (const auto& l : order) dims.push_back(rho.layout().dim_of(l));
  return {SystemLayout(order, dims), std::move(m)};
}

/// Reduced matrix on `keep` (in layout order) of a matrix on `layout`.
inline Matrix partial_trace(const Matrix& m, const SystemLayout& layout, const std::vector<std::string>& keep) {
  const auto kept = layout.select(keep);
  auto order = kept.labels();
  const auto rest = detail::complement(layout, order);
  order.insert(order.end(), rest.begin(), rest.end());
  const Matrix p = permute_systems(m, layout, order);
  return detail::trace_out_inner(p, static_cast<Eigen::Index>(layout.total_dim() / kept.total_dim()));
}

inline DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& keep) {
  return {rho.layout().select(keep), partial_trace(rho.matrix(), rho.layout(), keep)};
}

/// (E (x) id)(rho). The channel input labels must appear in rho's layout
/// with matching dimensions; the output layout is the channel output
/// followed by the untouched subsystems in their original order.
inline DensityOperator apply_channel(const QuantumChannel& channel, const DensityOperator& rho) {
  const auto& in = channel.input_layout();
  for (std::size_t k = 0; k < in.size(); ++k) {
    if (!rho.layout().contains(in.labels()[k]))
      throw Error("apply_channel: state has no subsystem '" + in.labels()[k] + "'");
    if (rho.layout().dim_of(in.labels()[k]) != in.dims()[k])
      throw Error("apply_channel: dimension mismatch on '" + in.labels()[k] + "'");
  }
  auto order = in.labels();
  const auto rest = detail::complement(rho.layout(), order);
  order.insert(order.end(), rest.begin(), rest.end());
  const Matrix p = permute_systems(rho.matrix(), rho.layout(), order);
  const auto rest_layout = rho.layout().select(rest);
  const auto dr = static_cast<Eigen::Index>(rest_layout.total_dim());
  const Matrix id = Matrix::Identity(dr, dr);

  const auto dout = static_cast<Eigen::Index>(channel.output_layout().total_dim());
  Matrix out = Matrix::Zero(dout * dr, dout * dr);
  for (const auto& k : channel.kraus()) {
    const Matrix kk = dr == 1 ? k : tensor(k, id);
    out.noalias() += kk * p * kk.adjoint();
  }
  return {channel.output_layout().concat(rest_layout), std::move(out)};
}

/// Square-root instrument for `povm` on subsystem `measured`. Branch z is
/// tr_measured[(sqrt(P_z) (x) I) rho (sqrt(P_z) (x) I)]; the quantum part
/// is the remaining layout.
inline ClassicalQuantumState measure(const DensityOperator& rho, const Povm& povm, const std::string& measured) {
  const auto idx = rho.layout().index_of(measured);
  if (rho.layout().dims()[idx] != povm.dim())
    throw Error("measure: POVM dimension " + std::to_string(povm.dim()) + " does not match subsystem '" + measured + "'");
  std::vector<std::string> order{measured};
  const auto rest = detail::complement(rho.layout(), order);
  order.insert(order.end(), rest.begin(), rest.end());
  const Matrix p = permute_systems(rho.matrix(), rho.layout(), order);
  const auto rest_layout = rho.layout().select(rest);
  const auto dr = static_cast<Eigen::Index>(rest_layout.total_dim());
  const auto dm = static_cast<Eigen::Index>(povm.dim());
  const Matrix id = Matrix::Identity(dr, dr);

  std::vector<std::string> labels;
  std::vector<Matrix> branches;
  const bool projective = povm.is_projective();
  for (std::size_t z = 0; z < povm.size(); ++z) {
    const Matrix root = projective ? povm.elements()[z] : sqrtm_psd(povm.elements()[z]);
    const Matrix k = dr == 1 ? root : tensor(root, id);
    Matrix b = detail::trace_out_outer(k * p * k.adjoint(), dm);
    labels.push_back(std::to_string(z));
    branches.push_back(std::move(b));
  }
  return {std::move(labels), rest_layout, std::move(branches)};
}

/// Outcome distribution tr(P_z rho) on a single-system state.
inline std::vector<double> outcome_distribution(const DensityOperator& rho, const Povm& povm) {
  if (rho.dim() != povm.dim()) throw Error("outcome_distribution: dimension mismatch");
  std::vector<double> p;
  for (const auto& e : povm.elements()) p.push_back(std::max(0.0, (e * rho.matrix()).trace().real()));
  return p;
}

/// Pure state on layout (x) reference whose reduction is rho. The reference
/// dimension equals the rank of rho.
inline DensityOperator purify(const DensityOperator& rho, std::string reference_label = "ref") {
  while (rho.layout().contains(reference_label)) reference_label += "'";
  const auto s = psd_spectrum(rho.matrix());
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < s.values.size(); ++i)
    if (s.values(i) > 0.0) support.push_back(i);
  const auto rank = static_cast<Eigen::Index>(support.size());
  const auto d = static_cast<Eigen::Index>(rho.dim());
  Vector psi = Vector::Zero(d * rank);
  double norm2 = 0.0;
  for (Eigen::Index k = 0; k < rank; ++k) norm2 += s.values(support[static_cast<std::size_t>(k)]);
  for (Eigen::Index k = 0; k < rank; ++k) {
    const auto i = support[static_cast<std::size_t>(k)];
    const double w = std::sqrt(s.values(i) / norm2);
    for (Eigen::Index a = 0; a < d; ++a) psi(a * rank + k) += w * s.vectors(a, i);
  }
  SystemLayout ref(reference_label, static_cast<std::size_t>(rank));
  return {rho.layout().concat(ref), projector(psi)};
}

/// Pure state from an (unnormalized) vector.
inline DensityOperator pure_state(SystemLayout layout, const Vector& v) {
  const Vector u = v / v.norm();
  return {std::move(layout), projector(u)};
}

}  // namespace mdr
