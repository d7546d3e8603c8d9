#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qedlab/types.hpp"

namespace qedlab::spectral {

struct SpectralResult {
  rvec eigenvalues;   // ascending
  cmat eigenvectors;  // orthonormal columns, phase fixed
  rvec residuals;     // ||H v - lambda v||
  std::vector<std::vector<Index>> groups;
  int iterations = 0;  // operator applications (columns) for iterative runs
  bool dense = false;
  std::string to_json() const;
};

struct EigOptions {
  int count = 1;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  int block = 4;
  int max_basis = 0;  // 0 picks a size from count and block
  int max_restarts = 400;
  double degeneracy_tol = 1e-7;
  Index dense_below = 2000;
};

// lowest eigenpairs; dense LAPACK below dense_below, otherwise thick-restart block Lanczos
// with full reorthogonalization
SpectralResult lowest_eigenpairs(const LinOp& h, const EigOptions& opt = {});

// greedy clustering: consecutive eigenvalues closer than tol share a group
std::vector<std::vector<Index>> degeneracy_groups(const rvec& eigs, double tol);
std::vector<int> multiplicities(const std::vector<std::vector<Index>>& groups);

struct QuadForm {
  double value = 0;
  double imag = 0;
};
QuadForm quadratic_form(const LinOp& h, const cvec& state);

// largest-modulus component made real positive
void fix_phase(cvec& v);
cmat random_block(Index rows, Index cols, std::uint64_t seed);

}  // namespace qedlab::spectral
