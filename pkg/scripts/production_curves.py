"""Tabulate phi_tilde for every catalog function and write one CSV per function.

    python scripts/production_curves.py --out results/curves --s 0.01:100:80
"""

import argparse
from pathlib import Path

import numpy as np

from chiralnet import inner, scatter
from chiralnet.config import parse_range
from chiralnet.quadrature import QuadratureSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/curves")
    ap.add_argument("--s", default="0.01:100:80")
    ap.add_argument("--tol", type=float, default=1e-7)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    s_grid = np.geomspace(*parse_range(args.s))
    quad = QuadratureSpec(tol=args.tol)
    print(f"{'name':<22}{'min |phi~|':>12}{'at s':>10}{'production':>12}")
    for name, phi in inner.CATALOG.items():
        rep = scatter.production_report(phi, s_grid, quad)
        (out / f"{name}.csv").write_text(rep.to_csv())
        k = int(np.argmin(rep.elastic_modulus))
        print(f"{name:<22}{rep.min_modulus:>12.6f}{rep.s[k]:>10.3g}{str(rep.production):>12}")


if __name__ == "__main__":
    main()
