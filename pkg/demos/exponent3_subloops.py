"""Sub right loops versus subgroups of order 9 in the exponent-3 group of order 27."""
import numpy as np

from gyrogroups import catalog
from gyrogroups.loops import circ_n, group_loop, is_right_gyrogroup, sub_right_loops


def main():
    E = catalog.get_group("E27")
    S = circ_n(E, 1)
    print("(E27, o1) is a right gyrogroup:", is_right_gyrogroup(S).verdict)
    print("o1 is commutative:", bool(np.array_equal(S.op, S.op.T)))
    print("sub right loops of order 9:", len(sub_right_loops(S, 9)))
    print("subgroups of order 9:      ", len(sub_right_loops(group_loop(E), 9)))


if __name__ == "__main__":
    main()
