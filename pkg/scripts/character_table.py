"""Print the fermionic character by charge and compare it with a basis count.

    python scripts/character_table.py --order 20 --emax 12
"""

import argparse

from chiralnet import fock, series
from chiralnet.series import half


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--order", type=int, default=20, help="doubled truncation order")
    ap.add_argument("--emax", type=int, default=12, help="doubled cutoff for the basis count")
    args = ap.parse_args()

    ch = series.fermionic_character(args.order)
    charges = ch.charges()
    print("t".rjust(6) + "".join(f"z^{q}".rjust(7) for q in charges) + "   p(t)")
    p = series.partition_gf(args.order)
    for t2 in range(args.order + 1):
        row = [ch[(t2, q)] for q in charges]
        if not any(row):
            continue
        tail = f"{p[t2]:7d}" if t2 % 2 == 0 else ""
        print(str(half(t2)).rjust(6) + "".join(f"{v:7d}" for v in row) + tail)

    trace = fock.character_trace(fock.Cutoff(args.emax))
    same = trace == series.fermionic_character(args.emax)
    print(f"\nbasis at e2_max={args.emax}: {len(fock.enumerate_basis(fock.Cutoff(args.emax)))} states; "
          f"trace matches product: {same}")
    print(series.jacobi_identity_check(args.order).line())


if __name__ == "__main__":
    main()
