#include "formkit/smallfield.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace formkit {

SmallField::SmallField(const FieldPtr& K) : tower_(K), p_(K->characteristic()) {
  auto ord = K->finite_order();
  if (!ord) throw FieldError("small-field tables need a finite tower");
  if (*ord > 256) throw FieldError("small-field tables are limited to order 256");
  q_ = static_cast<unsigned>(*ord);

  elems_ = K->enumerate_elements();
  if (elems_.size() != q_) throw std::logic_error("enumeration size mismatch");
  // pin zero and one to slots 0 and 1
  auto put = [&](std::size_t slot, const FieldElem& v) {
    auto it = std::find(elems_.begin() + static_cast<long>(slot), elems_.end(), v);
    if (it == elems_.end()) throw std::logic_error("missing constant in enumeration");
    std::iter_swap(elems_.begin() + static_cast<long>(slot), it);
  };
  put(0, K->zero());
  put(1, K->one());

  std::map<FieldElem, uint8_t> index;
  for (std::size_t i = 0; i < elems_.size(); ++i)
    index.emplace(elems_[i], static_cast<uint8_t>(i));

  add_.resize(static_cast<std::size_t>(q_) * q_);
  mul_.resize(static_cast<std::size_t>(q_) * q_);
  neg_.resize(q_);
  inv_.resize(q_);
  for (unsigned a = 0; a < q_; ++a) {
    neg_[a] = index.at(-elems_[a]);
    inv_[a] = a == 0 ? 0 : index.at(elems_[a].inverse());
    for (unsigned b = 0; b < q_; ++b) {
      add_[a * q_ + b] = index.at(elems_[a] + elems_[b]);
      mul_[a * q_ + b] = index.at(elems_[a] * elems_[b]);
    }
  }
}

uint8_t SmallField::index_of(const FieldElem& x) const {
  for (std::size_t i = 0; i < elems_.size(); ++i)
    if (elems_[i] == x) return static_cast<uint8_t>(i);
  throw std::logic_error("element not in this small field");
}

std::optional<std::vector<uint8_t>> small_solve(const SmallField& F, std::vector<uint8_t> A,
                                                std::size_t rows, std::size_t cols,
                                                std::vector<uint8_t> b) {
  if (A.size() != rows * cols || b.size() != rows)
    throw std::logic_error("small_solve shape mismatch");
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pr = r;
    while (pr < rows && A[pr * cols + c] == 0) ++pr;
    if (pr == rows) continue;
    if (pr != r) {
      for (std::size_t j = c; j < cols; ++j) std::swap(A[r * cols + j], A[pr * cols + j]);
      std::swap(b[r], b[pr]);
    }
    uint8_t pinv = F.inv(A[r * cols + c]);
    for (std::size_t j = c; j < cols; ++j) A[r * cols + j] = F.mul(A[r * cols + j], pinv);
    b[r] = F.mul(b[r], pinv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      uint8_t f = A[i * cols + c];
      if (f == 0) continue;
      for (std::size_t j = c; j < cols; ++j)
        A[i * cols + j] = F.sub(A[i * cols + j], F.mul(f, A[r * cols + j]));
      b[i] = F.sub(b[i], F.mul(f, b[r]));
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<uint8_t> x(cols, 0);
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

}  // namespace formkit
