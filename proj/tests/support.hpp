#pragma once

// Test-only oracles. These build full operators explicitly and never call the
// index-juggling paths they are used to check.

#include <vector>

#include "rio/qcore.hpp"

namespace rio::testing {

/// I (x) ... (x) op (x) ... (x) I for a contiguous, ordered run of targets.
inline ComplexMatrix embed(const ComplexMatrix& op, const std::vector<int>& dims, int first_target, int count) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int f = 0; f < static_cast<int>(dims.size());) {
    if (f == first_target) {
      out = tensor(out, op);
      f += count;
    } else {
      out = tensor(out, identity(dims[f]));
      ++f;
    }
  }
  return out;
}

inline ComplexVector ket(int n, int k) {
  ComplexVector v = ComplexVector::Zero(n);
  v(k) = 1.0;
  return v;
}

inline ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
  return out;
}

}  // namespace rio::testing
