"""Which central extensions of Z3 by Z3xZ3 admit a gyro-homomorphic section."""
from gyrogroups import catalog
from gyrogroups.cohomology import cocycle_spaces, gext_isotype_census, trivial_kernel
from gyrogroups.groups import central_extension
from gyrogroups.morphisms import find_gyro_splitting

kern = trivial_kernel(catalog.get_group("Z3xZ3"), catalog.get_group("Z3"))
S = cocycle_spaces(kern)
print("H2 invariant factors: ", list(S.H2.factors))
print("GH2 invariant factors:", list(S.GH2.factors))
for t in gext_isotype_census(kern, S).types:
    print(f"  {t['label']:<40} classes {t['classes']:>2}  gyro-split classes {t['gyro_split_classes']}")

for name in ("E27", "M27", "U3Z5"):
    r = find_gyro_splitting(central_extension(catalog.get_group(name)), method="search")
    print(f"Z(G) -> {name} -> G/Z(G): gyro-splitting {'found' if r.found else 'none'}"
          f" ({r.certificate['nodes']} search nodes)")
