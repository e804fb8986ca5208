"""Outer actions Z2 -> Out(A6): all realizable, one without a gyro-homomorphic lifting."""
import numpy as np

from gyrogroups import catalog
from gyrogroups.cohomology import obstruction_realizable
from gyrogroups.groups import quotient_with_map

H = catalog.get_group("A6")
aut = catalog.aut_data_for(H)
Out, pi = quotient_with_map(aut.aut, aut.inner)
print("|Aut(A6)| =", aut.aut.order, " |Out(A6)| =", Out.order)
for c in range(1, Out.order):
    coset = np.flatnonzero(pi.values == c)
    a = int(coset[0])
    r = obstruction_realizable(H, catalog.get_group("Z2"), [int(aut.inner_of[0]), a], gyro=True, aut=aut)
    invols = int(np.sum(aut.aut.element_orders[coset] == 2))
    print(f"outer class {c}: involutions in coset {invols:>2}  realizable {r.realizable}"
          f"  gyro lifting {'yes' if r.gyro_lifting is not None else 'no'}")
