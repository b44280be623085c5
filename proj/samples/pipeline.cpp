// Walks the library end to end at desk scale: a union of two cosets of the
// nodal cubic over F_31, its coverage, a small arc lifted to a cap in AG(4,7),
// and the parity-check matrix of that cap.

#include <cstdio>

#include "capforge/cubic.hpp"
#include "capforge/io.hpp"
#include "capforge/lift.hpp"
#include "capforge/verify.hpp"

using namespace capforge;

int main() {
  const Field f31 = Field::build(31);
  const NodalCubic cubic(f31);
  const auto gate = check_hypotheses(31, 5);
  std::printf("q=31 m=5: exact gate %s, quartic gate needs q >= %llu\n", gate.exact ? "passes" : "fails",
              static_cast<unsigned long long>(gate.quartic_threshold));

  const auto arc = cubic.union_arc(5, std::vector<u64>{2, 3}, true);
  const auto rep = verify_bicovering_full(f31, arc.points);
  std::printf("union of cosets {2,3}: %zu points, %llu of %llu off-arc points bicovered\n", arc.points.size(),
              static_cast<unsigned long long>(rep.both), static_cast<unsigned long long>(rep.points_checked));

  const Field f7 = Field::build(7);
  const auto small = random_complete_arc(f7, 1);
  const auto cap = lift_arc(f7, small, 4);
  const auto complete = verify_complete_cap(f7, cap.points);
  std::printf("complete %zu-arc in AG(2,7) lifts to a %zu-cap in AG(4,7); %llu of %llu points on a secant\n",
              small.size(), cap.points.size(), static_cast<unsigned long long>(complete.covered),
              static_cast<unsigned long long>(complete.points_checked));

  const auto H = export_parity_check(cap);
  const auto par = H.parameters();
  std::printf("parity-check matrix %zux%zu, code [%llu, %llu, %llu], distance check %s\n", H.rows, H.cols,
              static_cast<unsigned long long>(par.length), static_cast<unsigned long long>(par.dimension),
              static_cast<unsigned long long>(par.distance), check_distance_ge4(f7, H).ok ? "ok" : "failed");
  std::printf("%s\n", io::to_json(H, 4, arc_hash(f7, small))["metadata"].dump().c_str());
}
