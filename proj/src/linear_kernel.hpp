#pragma once

// Fast evaluation of local norms of integer combinations Σ_q c_q G_{iq} at a
// fixed place. Archimedean places use long double; finite places work with
// residues modulo p^M < 2^62 and fall back to exact arithmetic when every
// residue vanishes.

#include "slab/sadic.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace slab::detail {

/// Precision to which finite places are lifted for the residue kernel.
unsigned kernel_precision(std::int64_t p);

/// Finite places of S re-lifted to kernel precision; others unchanged.
std::vector<Place> kernel_places(const FieldPtr& field, const std::vector<Place>& S);

class ArchKernel {
 public:
  /// coeff[i][q]: approximate value of G_{iq} at the place.
  ArchKernel(const Place& v, const std::vector<std::vector<LocalScalar>>& coeff);
  /// Euclidean norm (real place) or its square (complex place) of the image.
  long double norm(const std::int64_t* c) const;
  bool is_complex() const { return complex_; }

 private:
  bool complex_;
  std::size_t rows_, cols_;
  std::vector<long double> re_, im_;
};

class FiniteKernel {
 public:
  FiniteKernel(const Place& v, const std::vector<std::vector<LocalScalar>>& coeff);
  /// e with ‖image‖_v = p^(-e); nullopt for the zero image.
  std::optional<int> exponent(const std::int64_t* c) const;
  const Place& place() const { return place_; }

 private:
  Place place_;
  std::size_t rows_, cols_;
  int f_;
  int shift_;
  unsigned digits_;
  std::int64_t p_;
  std::int64_t modulus_;
  std::vector<std::int64_t> residues_;  // [i][q][t]
  std::vector<std::vector<FieldElement>> exact_;
};

}  // namespace slab::detail
