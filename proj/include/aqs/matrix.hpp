// Copyright 2026 The aqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal dense complex matrix, just enough for encryption-set checks
// (products, adjoints, Hilbert-Schmidt inner products).

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "aqs/statevector.hpp"

namespace aqs {

class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  explicit ComplexMatrix(std::size_t dim) : dim_(dim), m_(dim * dim) {}

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix r(dim);
    for (std::size_t i = 0; i < dim; ++i) r.at(i, i) = 1.0;
    return r;
  }

  static ComplexMatrix from_gate(const Gate& g) {
    ComplexMatrix r(2);
    r.m_ = {g.m[0], g.m[1], g.m[2], g.m[3]};
    return r;
  }

  std::size_t dim() const { return dim_; }

  Complex& at(std::size_t r, std::size_t c) { return m_[r * dim_ + c]; }
  const Complex& at(std::size_t r, std::size_t c) const {
    return m_[r * dim_ + c];
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        r.at(i, j) = std::conj(at(j, i));
      }
    }
    return r;
  }

  Complex trace() const {
    Complex t(0.0);
    for (std::size_t i = 0; i < dim_; ++i) t += at(i, i);
    return t;
  }

  bool is_unitary(double tol) const {
    const ComplexMatrix p = adjoint() * (*this);
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        const Complex expect = (i == j) ? Complex(1.0) : Complex(0.0);
        if (std::abs(p.at(i, j) - expect) > tol) return false;
      }
    }
    return true;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& a,
                                 const ComplexMatrix& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("matrix dim mismatch");
    ComplexMatrix r(a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i) {
      for (std::size_t k = 0; k < a.dim_; ++k) {
        const Complex aik = a.at(i, k);
        if (aik == Complex(0.0)) continue;
        for (std::size_t j = 0; j < a.dim_; ++j) {
          r.at(i, j) += aik * b.at(k, j);
        }
      }
    }
    return r;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> m_;
};

/// Tr(a† b).
inline Complex hilbert_schmidt_inner(const ComplexMatrix& a,
                                     const ComplexMatrix& b) {
  return (a.adjoint() * b).trace();
}

}  // namespace aqs
