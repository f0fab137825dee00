#pragma once

#include <doctest.h>

#include "qcoh/error.hpp"
#include "qcoh/numerics.hpp"

#define CHECK_CODE(expr, expected)                                  \
  do {                                                              \
    bool thrown_ = false;                                           \
    try {                                                           \
      (void)(expr);                                                 \
    } catch (const qcoh::Error& e_) {                               \
      thrown_ = true;                                               \
      CHECK_MESSAGE(e_.code() == (expected), qcoh::to_string(e_.code())); \
    }                                                               \
    CHECK_MESSAGE(thrown_, "expected " #expected);                  \
  } while (0)

namespace qtest {

inline qcoh::ComplexMatrix mat(int rows, int cols, std::initializer_list<qcoh::Complex> entries) {
  qcoh::ComplexMatrix m(rows, cols);
  auto it = entries.begin();
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = *it++;
  }
  return m;
}

inline double dist(const qcoh::ComplexMatrix& a, const qcoh::ComplexMatrix& b) { return (a - b).norm(); }

}  // namespace qtest
