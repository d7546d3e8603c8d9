#pragma once

#include <map>
#include <string>
#include <vector>

#include "qedlab/types.hpp"

namespace qedlab::fock {

class FockBasis {
 public:
  FockBasis() = default;
  FockBasis(int num_modes, int n_max);

  int num_modes() const { return M_; }
  int n_max() const { return n_max_; }
  Index dim() const { return Index(states_.size()); }
  const std::vector<int>& state(Index i) const { return states_.at(i); }
  const std::vector<std::vector<int>>& states() const { return states_; }
  int total(Index i) const { return totals_.at(i); }
  // -1 when absent (outside the truncation)
  Index index_of(const std::vector<int>& occ) const;
  // index of the state with n_j raised / lowered by one, -1 when outside
  Index raised(Index i, int j) const { return raise_[std::size_t(i) * M_ + j]; }
  Index lowered(Index i, int j) const { return lower_[std::size_t(i) * M_ + j]; }

 private:
  int M_ = 0;
  int n_max_ = 0;
  std::vector<std::vector<int>> states_;
  std::vector<int> totals_;
  std::map<std::vector<int>, Index> index_;
  std::vector<Index> raise_, lower_;
};

double binomial(int n, int k);

enum class Kind { annihilate, create, number, dgamma, field };
enum class Direction { annihilate, create };

struct FockOperator {
  spmat matrix;
  Kind kind;
};

FockBasis build_fock_basis(int M, int n_max);
FockOperator ladder(const FockBasis& fb, int j, Direction dir);
FockOperator dgamma(const FockBasis& fb, const rvec& weights);
rvec dgamma_diagonal(const FockBasis& fb, const rvec& weights);
FockOperator number_operator(const FockBasis& fb);
// a^*(c) + a(c), a^*(c) = sum_j c_j a_j^*
FockOperator field_operator(const FockBasis& fb, const cvec& coeffs);
double mode_occupancy(const FockBasis& fb, const cvec& state, int j);
// occupancy of every mode for a state on (outer index) x Fock, outer index slowest
rvec mode_occupancies(const FockBasis& fb, const cvec& state);

// row col re im, one entry per line
std::string coordinate_text(const spmat& m);
spmat from_coordinate_text(const std::string& s, Index rows, Index cols);

}  // namespace qedlab::fock
