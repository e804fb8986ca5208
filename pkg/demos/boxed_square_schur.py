"""K box K, the universal gyro-split extension U and the gyro-Schur multiplier."""
from gyrogroups import catalog
from gyrogroups.boxed import boxed_square, gyro_schur_multiplier, u_group
from gyrogroups.groups import isomorphism_search

for name in ("Z4", "Z2xZ2", "S3", "Q8", "Z3xZ3"):
    K = catalog.get_group(name)
    BS = boxed_square(K)
    U = u_group(BS)
    r = gyro_schur_multiplier(K)
    print(f"{name:<7} K box K = {BS.factors or 'trivial'}  |U| = {U.G.order:<3}"
          f" gyro-Schur order {r.order}  GH2(K, Z{r.modulus}) order {r.gh2_order}")

U = u_group(boxed_square(catalog.get_group("Z3xZ3")))
print("U(Z3xZ3) is isomorphic to E27:", isomorphism_search(U.G, catalog.get_group("E27")) is not None)
