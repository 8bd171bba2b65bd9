"""One-particle invariance residual and functional-equation probe across a family.

Sweeps a single Blaschke zero w = a + i b and prints both diagnostics, which
vanish only for exponentials.

    python scripts/residual_survey.py --b 0.5 1 2 4
"""

import argparse

from chiralnet import inner, scatter


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=float, nargs="+", default=[0.0, 1.0])
    ap.add_argument("--b", type=float, nargs="+", default=[0.5, 1.0, 2.0, 4.0])
    args = ap.parse_args()

    wave = scatter.exp_decay_wave()
    print(f"{'zero':>14}{'lw residual':>14}{'fe probe':>12}{'min |phi~|':>12}")
    for a in args.a:
        for b in args.b:
            phi = inner.Blaschke((complex(a, b),))
            r = scatter.lw_invariance_residual(phi, wave)
            fe = inner.functional_equation_probe(phi)
            rep = scatter.production_report(phi, scatter.log_grid(0.1, 10, 20))
            print(f"{a:>6.2f}+{b:.2f}i{r:>14.4e}{fe:>12.4e}{rep.min_modulus:>12.4f}")
    for kappa in (0.5, 2.0):
        phi = inner.Exponential(kappa, 0.0)
        print(f"{'exp k=' + str(kappa):>14}{scatter.lw_invariance_residual(phi, wave):>14.4e}"
              f"{inner.functional_equation_probe(phi):>12.4e}{'1 (exact)':>12}")


if __name__ == "__main__":
    main()
