#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <numeric>
#include <vector>

#include "ergolab/bigreal.hpp"
#include "ergolab/error.hpp"

namespace ergolab {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <class Derived>
auto symmetrized(const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  return Mat<S>((a + a.transpose()) / S(2));
}

template <class S>
struct SymEig {
  Vec<S> values;   // descending
  Mat<S> vectors;  // columns match values
};

template <class Derived>
SymEig<typename Derived::Scalar> sym_eig(const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  require(a.rows() == a.cols(), "sym_eig: matrix not square");
  Eigen::SelfAdjointEigenSolver<Mat<S>> es(symmetrized(a));
  require(es.info() == Eigen::Success, "sym_eig: eigensolver failed");
  const auto n = a.rows();
  SymEig<S> out{Vec<S>(n), Mat<S>(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {  // ascending -> descending
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

// log and exp of symmetric matrices through the eigendecomposition of the
// symmetrized argument.
template <class Derived>
Mat<typename Derived::Scalar> sym_log(const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  using std::log;
  auto e = sym_eig(a);
  Vec<S> l(e.values.size());
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    require(e.values(i) > log_floor<S>(), "sym_log: matrix is not positive definite");
    l(i) = log(e.values(i));
  }
  return e.vectors * l.asDiagonal() * e.vectors.transpose();
}

template <class Derived>
Mat<typename Derived::Scalar> sym_exp(const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  using std::exp;
  auto e = sym_eig(a);
  Vec<S> x(e.values.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = exp(e.values(i));
  return e.vectors * x.asDiagonal() * e.vectors.transpose();
}

// ln of the eigenvalues of a positive-definite matrix, descending.
template <class Derived>
Vec<typename Derived::Scalar> log_eigenvalues(const Eigen::MatrixBase<Derived>& p) {
  using S = typename Derived::Scalar;
  Vec<S> values;
  if (p.rows() == 2 && p.cols() == 2) {
    // Closed form; the small root comes from the determinant, not a difference.
    using std::sqrt;
    const S a = p(0, 0), c = p(1, 1), b = (p(0, 1) + p(1, 0)) / S(2);
    const S half = (a - c) / S(2);
    const S big = (a + c) / S(2) + sqrt(half * half + b * b);
    values.resize(2);
    values << big, (big > S(0) ? (a * c - b * b) / big : S(0));
  } else {
    values = sym_eig(p).values;
  }
  Vec<S> l(values.size());
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    require(values(i) > log_floor<S>(), "log_eigenvalues: matrix is not positive definite");
    l(i) = fast_log(values(i));
  }
  return l;
}

// True when p is symmetric to relative tolerance tol and admits a Cholesky factor.
template <class Derived>
bool is_spd(const Eigen::MatrixBase<Derived>& p, double tol = 1e-9) {
  using S = typename Derived::Scalar;
  if (p.rows() != p.cols() || p.rows() == 0) return false;
  const S scale = p.cwiseAbs().maxCoeff();
  if (!(scale > S(0))) return false;
  if ((p - p.transpose()).cwiseAbs().maxCoeff() > S(tol) * scale) return false;
  Eigen::LLT<Mat<S>> llt(symmetrized(p));
  return llt.info() == Eigen::Success;
}

// A = L * diag(delta) * K with L, K orthogonal and delta nonincreasing.
template <class S>
struct CartanTriple {
  Mat<S> L;
  Vec<S> delta;
  Mat<S> K;
};

template <class Derived>
CartanTriple<typename Derived::Scalar> cartan(const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  require(a.rows() == a.cols() && a.rows() > 0, "cartan: matrix not square");
  Eigen::JacobiSVD<Mat<S>> svd(Mat<S>(a), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec<S>& s = svd.singularValues();
  const S top = s(0);
  const S bottom = s(s.size() - 1);
  // double: relative cut at 1e-14; BigReal: only exact zero is singular.
  const S cut = std::is_same_v<S, double> ? S(1e-14) * top : S(0);
  require(top > S(0) && bottom > cut, "cartan: matrix is numerically singular");
  return {svd.matrixU(), s, svd.matrixV().transpose()};
}

// For positive-definite p, the factorization p = N D N^T with N unit upper
// triangular.  Returns ln D_i.  Obtained from the Cholesky factor of the
// index-reversed matrix.
template <class Derived>
Vec<typename Derived::Scalar> udu_log_diagonal(const Eigen::MatrixBase<Derived>& p) {
  using S = typename Derived::Scalar;
  using std::log;
  const auto n = p.rows();
  Mat<S> r = symmetrized(p).reverse();
  Eigen::LLT<Mat<S>> llt(r);
  require(llt.info() == Eigen::Success, "udu_log_diagonal: matrix is not positive definite");
  Mat<S> l = llt.matrixL();
  Vec<S> out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const S lii = l(n - 1 - i, n - 1 - i);
    out(i) = S(2) * log(lii);
  }
  return out;
}

template <class To, class From>
Mat<To> cast_matrix(const Mat<From>& m) {
  Mat<To> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = To(m(i, j));
  return out;
}

template <class To, class From>
Vec<To> cast_vector(const Vec<From>& v) {
  Vec<To> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = To(v(i));
  return out;
}

template <class Derived>
Mat<double> to_double_matrix(const Eigen::MatrixBase<Derived>& m) {
  Mat<double> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

}  // namespace ergolab
