#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

namespace qedlab {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;
using rvec = Eigen::VectorXd;
using rmat = Eigen::MatrixXd;
using spmat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Triplet = Eigen::Triplet<cplx>;

inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode : int {
  ok = 0,
  invalid_argument = 1,
  precondition = 2,
  not_converged = 3,
  io = 4,
  internal = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg) { throw Error(c, msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(ErrorCode::invalid_argument, msg);
}

// Hermitian operator given by its action on blocks of column vectors.
// Dense or sparse backing is kept when available so small problems can be
// diagonalized directly.
struct LinOp {
  Index dim = 0;
  std::function<void(const cmat&, cmat&)> apply;
  std::shared_ptr<const cmat> dense;
  std::shared_ptr<const spmat> sparse;

  cmat to_dense() const;
  cvec operator*(const cvec& v) const;
};

LinOp make_op(cmat m);
LinOp make_op(spmat m);
LinOp make_diag_op(rvec d);

}  // namespace qedlab
