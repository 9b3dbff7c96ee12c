#include "linear_kernel.hpp"

#include "slab/error.hpp"

#include <cmath>

namespace slab::detail {

unsigned kernel_precision(std::int64_t p) {
  unsigned m = 0;
  long double pm = 1;
  while (pm * static_cast<long double>(p) < 4.6e18L) {
    pm *= static_cast<long double>(p);
    ++m;
  }
  return m;
}

std::vector<Place> kernel_places(const FieldPtr& field, const std::vector<Place>& S) {
  std::vector<Place> out;
  out.reserve(S.size());
  for (const auto& v : S) {
    if (v.archimedean()) {
      out.push_back(v);
      continue;
    }
    const unsigned want = kernel_precision(v.p.convert_to<std::int64_t>()) + 8;
    out.push_back(v.precision >= want ? v : refine_place(field, v, want));
  }
  return out;
}

ArchKernel::ArchKernel(const Place& v, const std::vector<std::vector<LocalScalar>>& coeff)
    : complex_(v.kind == PlaceKind::Complex), rows_(coeff.size()), cols_(coeff.empty() ? 0 : coeff[0].size()) {
  re_.reserve(rows_ * cols_);
  im_.reserve(rows_ * cols_);
  for (const auto& row : coeff) {
    for (const auto& s : row) {
      re_.push_back(s.approx.re.convert_to<long double>());
      im_.push_back(s.approx.im.convert_to<long double>());
    }
  }
}

long double ArchKernel::norm(const std::int64_t* c) const {
  long double sum = 0;
  for (std::size_t i = 0; i < rows_; ++i) {
    long double re = 0, im = 0;
    const long double* br = &re_[i * cols_];
    const long double* bi = &im_[i * cols_];
    for (std::size_t q = 0; q < cols_; ++q) {
      const auto x = static_cast<long double>(c[q]);
      re += x * br[q];
      im += x * bi[q];
    }
    sum += re * re + im * im;
  }
  return complex_ ? sum : std::sqrt(sum);
}

FiniteKernel::FiniteKernel(const Place& v, const std::vector<std::vector<LocalScalar>>& coeff)
    : place_(v),
      rows_(coeff.size()),
      cols_(coeff.empty() ? 0 : coeff[0].size()),
      f_(v.residue_degree),
      p_(v.p.convert_to<std::int64_t>()) {
  digits_ = std::min(kernel_precision(p_), v.precision);
  const BigInt big_p(p_);
  const BigInt lift_mod = v.modulus();
  const BigInt out_mod = ipow(big_p, digits_);
  modulus_ = out_mod.convert_to<std::int64_t>();

  struct Reduced {
    int delta = 0;
    std::vector<BigInt> q;
  };
  std::vector<Reduced> red;
  red.reserve(rows_ * cols_);
  shift_ = 0;
  exact_.assign(rows_, {});
  for (const auto& row : coeff) {
    for (const auto& s : row) {
      if (!s.exact) throw Error(ErrorCode::NonExactRepresentative, "finite-place entry without exact value");
    }
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t q = 0; q < cols_; ++q) {
      const FieldElement& x = *coeff[i][q].exact;
      exact_[i].push_back(x);
      Reduced r;
      r.q.assign(static_cast<std::size_t>(f_), BigInt(0));
      if (!x.is_zero()) {
        auto [a, d] = poly::clear_denominators(x.as_poly());
        auto rem = poly::zmod_divmod(a, v.factor, lift_mod).second;
        r.delta = valuation(d, big_p);
        BigInt inv = inverse_mod(d / ipow(big_p, static_cast<unsigned>(r.delta)), lift_mod);
        for (std::size_t t = 0; t < rem.size() && t < r.q.size(); ++t) r.q[t] = mod(rem[t] * inv, lift_mod);
        shift_ = std::max(shift_, r.delta);
      }
      red.push_back(std::move(r));
    }
  }
  residues_.reserve(rows_ * cols_ * static_cast<std::size_t>(f_));
  for (const auto& r : red) {
    const BigInt scale = ipow(big_p, static_cast<unsigned>(shift_ - r.delta));
    for (const auto& t : r.q) residues_.push_back(mod(t * scale, out_mod).convert_to<std::int64_t>());
  }
}

std::optional<int> FiniteKernel::exponent(const std::int64_t* c) const {
  int best = -1;
  const std::size_t f = static_cast<std::size_t>(f_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t t = 0; t < f; ++t) {
      __int128 acc = 0;
      for (std::size_t q = 0; q < cols_; ++q) {
        acc += static_cast<__int128>(c[q]) * residues_[(i * cols_ + q) * f + t];
      }
      auto r = static_cast<std::int64_t>(acc % modulus_);
      if (r == 0) continue;
      if (r < 0) r = -r;
      int val = 0;
      if (p_ == 2) {
        val = __builtin_ctzll(static_cast<unsigned long long>(r));
      } else {
        while (r % p_ == 0) {
          r /= p_;
          ++val;
        }
      }
      if (best < 0 || val < best) best = val;
    }
  }
  if (best >= 0) return f_ * (best - shift_);

  std::optional<int> exact_best;
  for (std::size_t i = 0; i < rows_; ++i) {
    FieldElement acc = FieldElement::from_rational(exact_[i][0].field(), Rational(0));
    for (std::size_t q = 0; q < cols_; ++q) {
      if (c[q] != 0) acc += FieldElement::from_rational(acc.field(), Rational(c[q])) * exact_[i][q];
    }
    auto a = local_abs(acc, place_);
    if (a.exponent && (!exact_best || *a.exponent < *exact_best)) exact_best = a.exponent;
  }
  return exact_best;
}

}  // namespace slab::detail
