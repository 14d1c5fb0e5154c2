"""Tour of the registered deformed algebras.

For each algebra we print the first few values of E(n), the levels that the
annihilator kills, and the diagonal of the commutator [a, a^dagger]. The
SUSY-like algebras kill both the vacuum and the one-photon level, so their
coherent states live on levels n >= 1.
"""
import numpy as np

from nlcoherent.algebra import REGISTERED, annihilated_levels, base_level, commutator_diagonal, e_values


def main():
    n = np.arange(8)
    for name, spec in REGISTERED.items():
        print(f"{name:>13}  E(0..7) = {np.array2string(e_values(spec, n), precision=3)}")
        print(f"{'':>13}  killed levels {sorted(annihilated_levels(spec))}, base level {base_level(spec)}")
        comm = [commutator_diagonal(spec, k) for k in range(5)]
        print(f"{'':>13}  [a, a+] on |0..4> = {np.round(comm, 4).tolist()}\n")


if __name__ == "__main__":
    main()
