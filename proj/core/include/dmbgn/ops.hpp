#pragma once

#include <vector>

#include "dmbgn/tensor.hpp"

namespace dmbgn::ops {

// Elementwise (same shape unless noted). Shape mismatches throw
// std::invalid_argument naming the op and both operand shapes.
TensorPtr add(const TensorPtr& a, const TensorPtr& b);
TensorPtr sub(const TensorPtr& a, const TensorPtr& b);
TensorPtr mul(const TensorPtr& a, const TensorPtr& b);
TensorPtr scale(const TensorPtr& a, double c);

// [m,n] + [n], the bias broadcast along rows.
TensorPtr add_rowvec(const TensorPtr& mat, const TensorPtr& v);

// Matrix / vector products.
TensorPtr matmul(const TensorPtr& a, const TensorPtr& b);   // [m,k]x[k,n]
TensorPtr vecmat(const TensorPtr& v, const TensorPtr& w);   // [k]x[k,n] -> [n]
TensorPtr matvec(const TensorPtr& m, const TensorPtr& v);   // [m,n]x[n] -> [m]
TensorPtr dot(const TensorPtr& a, const TensorPtr& b);      // [n].[n] -> scalar
TensorPtr outer_flat(const TensorPtr& a, const TensorPtr& b);  // [m],[n] -> [m*n]

// Activations.
TensorPtr sigmoid(const TensorPtr& x);
TensorPtr tanh(const TensorPtr& x);
TensorPtr prelu(const TensorPtr& x, const TensorPtr& slope);  // slope: scalar param

// Structure.
TensorPtr concat(const std::vector<TensorPtr>& parts);          // rank-1 parts
TensorPtr stack_rows(const std::vector<TensorPtr>& rows);       // n x [d] -> [n,d]
TensorPtr stack_scalars(const std::vector<TensorPtr>& scalars); // -> [n]
TensorPtr take_row(const TensorPtr& mat, std::size_t row);      // [n,d] -> [d]
TensorPtr gather_rows(const TensorPtr& mat, std::vector<std::size_t> idx);
TensorPtr prepend_row(const TensorPtr& v, const TensorPtr& mat);  // [d],[m,d] -> [m+1,d]
TensorPtr gather_elems(const TensorPtr& v, std::vector<std::size_t> idx);
TensorPtr elem(const TensorPtr& v, std::size_t i);              // [n] -> scalar

// Reductions and row arithmetic.
TensorPtr mean_rows(const TensorPtr& mat);  // [n,d] -> [d]
TensorPtr max_rows(const TensorPtr& mat);   // [n,d] -> [d], ties -> lowest row
TensorPtr mean_all(const TensorPtr& x);     // -> scalar
TensorPtr max_all(const TensorPtr& x);      // -> scalar, ties -> lowest index
TensorPtr add_n(const std::vector<TensorPtr>& xs);
TensorPtr rows_scale(const TensorPtr& mat, const TensorPtr& gates);  // [n,d]*[n]

// Scalar-tensor broadcasts.
TensorPtr scale_t(const TensorPtr& x, const TensorPtr& s);   // x * s, s scalar
TensorPtr divide_t(const TensorPtr& x, const TensorPtr& s);  // x / s, s scalar

// out[i] = sum of x rows listed in adj[i]; adj is a constant structure.
TensorPtr neighbor_sum(const TensorPtr& x, const std::vector<std::vector<int>>& adj);

// Embedding lookup: one row of a [V,d] table; gradient scatters back.
TensorPtr embed_row(const TensorPtr& table, std::size_t row);

// out[i,:] = scale * sum of the picked rows; one graph node for a whole
// block of lookups (used for item features, which average four tables).
struct RowPick {
  int table = 0;
  std::size_t row = 0;
};
TensorPtr gather_sum_rows(const std::vector<TensorPtr>& tables,
                          const std::vector<std::vector<RowPick>>& picks,
                          double scale);

// L2 norm with a tiny smoothing epsilon so the gradient exists at zero.
TensorPtr l2norm(const TensorPtr& v);

TensorPtr softmax_vec(const TensorPtr& v);

// -log(max(x, eps)) elementwise; eps matches the probability clamp.
TensorPtr neg_log(const TensorPtr& x);

/// Binary cross-entropy against a fixed 0/1 label, prediction clamped to
/// [kProbEps, 1-kProbEps] before the logs.
TensorPtr bce(const TensorPtr& prediction, double label);

/// Inverted dropout: kept entries scaled by 1/(1-rate) at training time,
/// identity at inference.
TensorPtr dropout(const TensorPtr& x, double rate, bool training, Rng& rng);

}  // namespace dmbgn::ops
