#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sepscan {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Sorted list of distinct vertex / index ids. All public interfaces keep
// global ids; nothing below renumbers.
using IndexSet = std::vector<int>;

// Sorted ids in [0, n) not present in s. s must be sorted.
IndexSet complement(int n, const IndexSet& s);

// Positions of each element of subset within universe (both sorted,
// subset must be contained in universe).
std::vector<int> positions_in(const IndexSet& universe, const IndexSet& subset);

IndexSet set_union(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);
bool contains(const IndexSet& s, int v);

Matrix submatrix(const Matrix& m, const IndexSet& rows, const IndexSet& cols);

// Rank by SVD: number of singular values above rel_tol * sigma_max.
// Zero matrix has rank 0.
int numerical_rank(const Matrix& m, double rel_tol = 1e-8);

// Inverse via Cholesky. Throws std::invalid_argument when the matrix is
// not symmetric positive definite.
Matrix spd_inverse(const Matrix& m);

// Conditional covariance sigma_{T,T} - sigma_{T,S} sigma_{S,S}^-1 sigma_{S,T}
// where T is the complement of s. Rows/cols of the result follow the sorted
// order of the complement. Empty s returns a copy.
Matrix schur_complement(const Matrix& sigma, const IndexSet& s);

}  // namespace sepscan
