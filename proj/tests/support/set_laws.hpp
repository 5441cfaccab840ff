#pragma once

#include <string>
#include <vector>

#include "polarfk/domain.hpp"
#include "polarfk/geometry.hpp"
#include "support/oracles.hpp"

namespace laws {

using namespace polarfk;

/// Checks every cellwise identity of the polarization algebra for A, C inside
/// the sH-closed universe U. Returns the names of the identities that fail.
inline std::vector<std::string> check_set_laws(const Polarizer& h, const RasterSet& a,
                                               const RasterSet& c, const RasterSet& u) {
  std::vector<std::string> bad;
  const auto expect = [&](bool ok, const char* name) {
    if (!ok) bad.emplace_back(name);
  };
  const RasterSet pa = polarize_set(h, a), da = dual_polarize_set(h, a);
  const RasterSet sa = reflect_set(h, a);

  expect(pa == oracle::polarize(h, a, false), "P_H matches the per-cell oracle");
  expect(da == oracle::polarize(h, a, true), "P^H matches the per-cell oracle");
  expect(pa.count() == a.count() && da.count() == a.count(), "measure preservation");

  const RasterSet ac = a | c;
  expect(pa.subset_of(polarize_set(h, ac)), "monotonicity");
  const RasterSet pc = polarize_set(h, c);
  expect(polarize_set(h, a & c).subset_of(pa & pc), "intersection sub-distributivity");
  expect((pa | pc).subset_of(polarize_set(h, ac)), "union sub-distributivity");

  expect(polarize_set(h, sa) == pa, "P_H(sA) = P_H(A)");
  expect(reflect_set(h, pa) == da, "s(P_H A) = P^H A");
  expect(reflect_set(h, da) == pa, "s(P^H A) = P_H A");
  expect(polarize_set(h, u - a) == u - da, "complement duality");

  RasterSet h_side(a.grid()), hc_side(a.grid());
  const GridReflection refl(h, a.grid());
  for (int k = 0; k < a.grid().cell_count(); ++k) {
    h_side.set(k, refl.cell_side(k) == Side::Inside);
    hc_side.set(k, u[k] && refl.cell_side(k) == Side::Outside);
  }
  const bool inv = (sa & h_side).subset_of(a);
  expect(inv == (pa == a), "P_H A = A iff sA n H in A");
  expect(inv == is_polarization_invariant(h, a), "is_polarization_invariant agrees");
  const bool dinv = (sa & hc_side).subset_of(a);
  expect(dinv == (da == a), "P^H A = A iff sA n H^c in A");
  expect(dinv == is_dual_polarization_invariant(h, a), "is_dual_polarization_invariant agrees");
  expect((pa == da) == (sa == a), "P_H A = P^H A iff sA = A");

  expect(polarize_set(h, pa) == pa, "idempotence");
  expect(dual_polarize_set(h, da) == da, "dual idempotence");
  return bad;
}

/// Free cells of P_H(D) against P_H(outer) minus P^H(obstacles).
inline bool punctured_identity(const Polarizer& h, const PuncturedDomain& d) {
  const PuncturedDomain pd = polarize_punctured(h, d);
  return pd.free_cells() == polarize_set(h, d.outer()) - dual_polarize_set(h, d.obstacle_union());
}

}  // namespace laws
