#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "formkit/fields.hpp"

namespace formkit {

/// Table-backed arithmetic for a finite tower of order <= 256. Element indices are
/// positions in a fixed enumeration with 0 -> zero and 1 -> one; all tables are
/// generated from the exact tower arithmetic, so they cannot drift from it.
class SmallField {
 public:
  explicit SmallField(const FieldPtr& K);

  const FieldPtr& tower() const { return tower_; }
  unsigned order() const { return q_; }
  long characteristic() const { return p_; }

  const std::vector<FieldElem>& elements() const { return elems_; }
  const FieldElem& element(uint8_t i) const { return elems_[i]; }
  uint8_t index_of(const FieldElem& x) const;

  uint8_t add(uint8_t a, uint8_t b) const { return add_[a * q_ + b]; }
  uint8_t sub(uint8_t a, uint8_t b) const { return add_[a * q_ + neg_[b]]; }
  uint8_t mul(uint8_t a, uint8_t b) const { return mul_[a * q_ + b]; }
  uint8_t neg(uint8_t a) const { return neg_[a]; }
  /// Multiplicative inverse; inv(0) is 0 by convention (callers must guard).
  uint8_t inv(uint8_t a) const { return inv_[a]; }

 private:
  FieldPtr tower_;
  unsigned q_ = 0;
  long p_ = 0;
  std::vector<FieldElem> elems_;
  std::vector<uint8_t> add_, mul_, neg_, inv_;
};

/// Solve A x = b over the table field (A row-major, rows x cols). Returns one
/// solution or nullopt when the system is inconsistent.
std::optional<std::vector<uint8_t>> small_solve(const SmallField& F, std::vector<uint8_t> A,
                                                std::size_t rows, std::size_t cols,
                                                std::vector<uint8_t> b);

}  // namespace formkit
