#!/usr/bin/env python3
"""Map the type of the deformed structure rho = z1 + dz1^dz2 over a grid.

Prints the type at each grid point of the z1-plane (z2 fixed), showing the
jump from symplectic type 0 to complex type 2 along z1 = 0, and verifies the
integrability witness on the way.
"""

import argparse
from fractions import Fraction

from gcgeo.charts import Chart
from gcgeo.forms import MixedForm
from gcgeo.scalars import GaussRat
from gcgeo.integrability import check_spinor_integrability


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radius", type=int, default=2, help="grid radius in each real direction")
    args = ap.parse_args()

    chart = Chart.complex_plane(2)
    rho = MixedForm(4, {0: chart.z(0)}) + chart.dz(0).wedge(chart.dz(1))

    rep = check_spinor_integrability(chart, rho)
    print(f"integrability: {rep.verdict}, witness = {rep.witness}")
    print()
    r = args.radius
    print("type of rho over the z1 plane (rows Im z1, columns Re z1):")
    for im in range(r, -r - 1, -1):
        row = []
        for re in range(-r, r + 1):
            p = chart.point(re, im, 1, 0)
            row.append(str(rho.eval_at(p).min_degree()))
        print("  " + " ".join(row))
    print("\n(the jump to type 2 happens exactly on z1 = 0)")


if __name__ == "__main__":
    main()
