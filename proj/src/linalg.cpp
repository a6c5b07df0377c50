#include "sepscan/linalg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <stdexcept>

namespace sepscan {

IndexSet complement(int n, const IndexSet& s) {
  IndexSet out;
  out.reserve(n - static_cast<int>(s.size()));
  std::size_t p = 0;
  for (int i = 0; i < n; ++i) {
    if (p < s.size() && s[p] == i) {
      ++p;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<int> positions_in(const IndexSet& universe, const IndexSet& subset) {
  std::vector<int> pos;
  pos.reserve(subset.size());
  std::size_t u = 0;
  for (int v : subset) {
    while (u < universe.size() && universe[u] < v) ++u;
    if (u == universe.size() || universe[u] != v)
      throw std::invalid_argument("positions_in: element not in universe");
    pos.push_back(static_cast<int>(u));
  }
  return pos;
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  out.reserve(a.size());
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool contains(const IndexSet& s, int v) {
  return std::binary_search(s.begin(), s.end(), v);
}

Matrix submatrix(const Matrix& m, const IndexSet& rows, const IndexSet& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= m.rows())
      throw std::out_of_range("submatrix: row index");
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j] < 0 || cols[j] >= m.cols())
        throw std::out_of_range("submatrix: col index");
      out(i, j) = m(rows[i], cols[j]);
    }
  }
  return out;
}

int numerical_rank(const Matrix& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Vector sv;
  if (std::max(m.rows(), m.cols()) <= 32) {
    Eigen::JacobiSVD<Matrix> svd(m);
    sv = svd.singularValues();
  } else {
    Eigen::BDCSVD<Matrix> svd(m);
    sv = svd.singularValues();
  }
  double top = sv.size() > 0 ? sv(0) : 0.0;
  if (top <= 0.0) return 0;
  double thr = rel_tol * top;
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++r;
  return r;
}

Matrix spd_inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("spd_inverse: not square");
  if (m.rows() == 0) return Matrix(0, 0);
  if (!m.isApprox(m.transpose(), 1e-12))
    throw std::invalid_argument("spd_inverse: not symmetric");
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("spd_inverse: not positive definite");
  return llt.solve(Matrix::Identity(m.rows(), m.cols()));
}

Matrix schur_complement(const Matrix& sigma, const IndexSet& s) {
  if (sigma.rows() != sigma.cols())
    throw std::invalid_argument("schur_complement: not square");
  const int n = static_cast<int>(sigma.rows());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= n) throw std::out_of_range("schur_complement: index");
    if (i + 1 < s.size() && s[i] >= s[i + 1])
      throw std::invalid_argument("schur_complement: s not sorted unique");
  }
  IndexSet t = complement(n, s);
  if (s.empty()) return submatrix(sigma, t, t);
  Matrix stt = submatrix(sigma, t, t);
  Matrix sts = submatrix(sigma, t, s);
  Matrix sss = submatrix(sigma, s, s);
  Eigen::LLT<Matrix> llt(sss);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("schur_complement: conditioning block not PD");
  return stt - sts * llt.solve(sts.transpose());
}

}  // namespace sepscan
