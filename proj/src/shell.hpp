#pragma once

#include <cstdint>
#include <vector>

namespace slab::detail {

/// Calls f(c) for every c ∈ Z^dim with max|c_i| = h whose last nonzero entry
/// is positive. The first coordinate varies fastest.
template <class F>
void for_each_in_shell(int dim, std::int64_t h, F&& f) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(dim), 0);
  auto rec = [&](auto&& self, int i, bool all_zero, bool has_max) -> void {
    auto& ci = c[static_cast<std::size_t>(i)];
    if (i == 0) {
      if (!has_max) {
        if (!all_zero) {
          ci = -h;
          f(c);
        }
        ci = h;
        f(c);
        return;
      }
      for (std::int64_t x = all_zero ? 1 : -h; x <= h; ++x) {
        ci = x;
        f(c);
      }
      return;
    }
    for (std::int64_t x = all_zero ? 0 : -h; x <= h; ++x) {
      ci = x;
      self(self, i - 1, all_zero && x == 0, has_max || x == h || x == -h);
    }
  };
  rec(rec, dim - 1, true, false);
}

}  // namespace slab::detail
