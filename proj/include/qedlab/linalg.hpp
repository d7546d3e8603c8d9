#pragma once

#include <vector>

#include "qedlab/types.hpp"

namespace qedlab::linalg {

// nodes and weights on [-1, 1], nodes mirrored exactly
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

struct HermEig {
  rvec values;
  cmat vectors;
};

HermEig herm_eig(const cmat& a, bool want_vectors = true);
rvec herm_eigvals(const cmat& a);

double max_abs(const cmat& a);
double max_abs(const spmat& a);
// max |A - A^*| entry
double hermiticity_defect(const spmat& a);
double hermiticity_defect(const cmat& a);

spmat identity(Index n);
spmat diag(const rvec& d);

// Multi-shift conjugate gradient for (Q + s_k) x_k = b with Q Hermitian positive definite.
// Returns sum_k c_k x_k. Throws not_converged when the seed residual stalls.
struct MultiShiftStats {
  int iterations = 0;
  double residual = 0;
};
cvec multishift_cg(const std::function<void(const cvec&, cvec&)>& q, const cvec& b,
                   const std::vector<double>& shifts, const std::vector<double>& weights, double tol,
                   int max_iter, MultiShiftStats* stats = nullptr);

}  // namespace qedlab::linalg
