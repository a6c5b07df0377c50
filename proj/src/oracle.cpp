#include "sepscan/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace sepscan {

namespace {
constexpr int kDenseLimit = 16384;
}

QueryLedger::QueryLedger(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("QueryLedger: negative n");
  if (n <= kDenseLimit) {
    std::uint64_t pairs = static_cast<std::uint64_t>(n) * (n + 1) / 2;
    bits_.assign((pairs + 63) / 64, 0);
  }
}

std::uint64_t QueryLedger::key(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_)
    throw std::out_of_range("QueryLedger: index out of range");
  std::uint64_t hi = static_cast<std::uint64_t>(std::max(i, j));
  std::uint64_t lo = static_cast<std::uint64_t>(std::min(i, j));
  return hi * (hi + 1) / 2 + lo;
}

bool QueryLedger::record(int i, int j) {
  std::uint64_t k = key(i, j);
  if (!bits_.empty()) {
    std::uint64_t word = k >> 6, bit = 1ULL << (k & 63);
    if (bits_[word] & bit) return false;
    bits_[word] |= bit;
    ++count_;
    return true;
  }
  if (sparse_.insert(k).second) {
    ++count_;
    return true;
  }
  return false;
}

bool QueryLedger::seen(int i, int j) const {
  std::uint64_t k = key(i, j);
  if (!bits_.empty()) return (bits_[k >> 6] >> (k & 63)) & 1;
  return sparse_.count(k) > 0;
}

double CovarianceOracle::query(int i, int j) {
  int lo = std::min(i, j), hi = std::max(i, j);
  ledger_.record(lo, hi);
  return fetch(lo, hi);
}

MatrixOracle::MatrixOracle(Matrix sigma)
    : CovarianceOracle(static_cast<int>(sigma.rows())), sigma_(std::move(sigma)) {
  if (sigma_.rows() != sigma_.cols())
    throw std::invalid_argument("MatrixOracle: not square");
}

FileOracle::FileOracle(const std::string& bin_path, int n)
    : CovarianceOracle(n), file_(bin_path, std::ios::binary) {
  if (!file_) throw std::runtime_error("FileOracle: cannot open " + bin_path);
  file_.seekg(0, std::ios::end);
  if (file_.tellg() != static_cast<std::streamoff>(8LL * n * n))
    throw std::runtime_error("FileOracle: size mismatch for " + bin_path);
}

double FileOracle::fetch(int i, int j) {
  std::uint64_t k = static_cast<std::uint64_t>(i) * n() + j;
  auto it = cache_.find(k);
  if (it != cache_.end()) return it->second;
  file_.seekg(static_cast<std::streamoff>(8ULL * k));
  double v;
  file_.read(reinterpret_cast<char*>(&v), sizeof(double));
  if (!file_) throw std::runtime_error("FileOracle: read failed");
  cache_.emplace(k, v);
  return v;
}

CondCovView::CondCovView(CovarianceOracle& base, IndexSet sbar)
    : base_(base), sbar_(std::move(sbar)) {
  for (std::size_t i = 0; i + 1 < sbar_.size(); ++i)
    if (sbar_[i] >= sbar_[i + 1])
      throw std::invalid_argument("CondCovView: conditioning set not sorted unique");
  if (sbar_.empty()) return;
  const int s = static_cast<int>(sbar_.size());
  Matrix block(s, s);
  for (int a = 0; a < s; ++a)
    for (int b = a; b < s; ++b) {
      double v = base_.query(sbar_[a], sbar_[b]);
      block(a, b) = v;
      block(b, a) = v;
    }
  llt_.compute(block);
  if (llt_.info() != Eigen::Success)
    throw std::runtime_error("CondCovView: conditioning block not PD");
}

const Vector& CondCovView::column(int i) {
  auto it = cols_.find(i);
  if (it != cols_.end()) return it->second;
  const int s = static_cast<int>(sbar_.size());
  Vector c(s);
  for (int a = 0; a < s; ++a) c(a) = base_.query(sbar_[a], i);
  return cols_.emplace(i, std::move(c)).first->second;
}

const Vector& CondCovView::solved(int i) {
  auto it = solved_.find(i);
  if (it != solved_.end()) return it->second;
  Vector y = llt_.solve(column(i));
  return solved_.emplace(i, std::move(y)).first->second;
}

double CondCovView::entry(int i, int j) {
  if (contains(sbar_, i) || contains(sbar_, j))
    throw std::invalid_argument("CondCovView: index inside conditioning set");
  double raw = base_.query(i, j);
  if (sbar_.empty()) return raw;
  return raw - column(i).dot(solved(j));
}

bool CIOracle::ci(int i, int j) { return ci(i, j, -1); }

bool CIOracle::ci(int i, int j, int k) {
  const int nn = n();
  if (i < 0 || j < 0 || i >= nn || j >= nn || i == j || k >= nn || k < -1 ||
      k == i || k == j)
    throw std::invalid_argument("CIOracle: bad query");
  std::uint64_t lo = static_cast<std::uint64_t>(std::min(i, j));
  std::uint64_t hi = static_cast<std::uint64_t>(std::max(i, j));
  std::uint64_t key = (lo * nn + hi) * (nn + 1) + static_cast<std::uint64_t>(k + 1);
  if (seen_.insert(key).second) ++count_;
  return decide(i, j, k);
}

CovCIOracle::CovCIOracle(CovarianceOracle& base, double eps_rel)
    : base_(base), eps_rel_(eps_rel) {}

bool CovCIOracle::decide(int i, int j, int k) {
  if (k < 0) {
    double sij = base_.query(i, j);
    double sii = base_.query(i, i);
    double sjj = base_.query(j, j);
    return std::abs(sij) <= eps_rel_ * std::sqrt(sii * sjj);
  }
  double sij = base_.query(i, j);
  double skk = base_.query(k, k);
  double sik = base_.query(i, k);
  double skj = base_.query(k, j);
  double left = sij * skk, right = sik * skj;
  return std::abs(left - right) <= eps_rel_ * (std::abs(left) + std::abs(right));
}

EmpiricalCIOracle::EmpiricalCIOracle(Matrix corr, double threshold)
    : corr_(std::move(corr)), thr_(threshold) {
  if (corr_.rows() != corr_.cols())
    throw std::invalid_argument("EmpiricalCIOracle: not square");
}

bool EmpiricalCIOracle::decide(int i, int j, int k) {
  if (k < 0) return std::abs(corr_(i, j)) <= thr_;
  return std::abs(corr_(i, j) - corr_(i, k) * corr_(k, j)) <= thr_;
}

}  // namespace sepscan
