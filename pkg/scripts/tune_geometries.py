"""Tune the coplanar geometries used by the efficiency-anchor test.

Family: the pumped atom at the origin and N-1 passive atoms at distance L
in the xy-plane, every dipole along z (transverse to all separations):

    N = 2   one passive atom on the x-axis
    N = 3   passive pair at +-45 degrees from the x-axis
    N = 4   passive triangle at 0/120/240 degrees (circumradius L)
    N = 5   passive square at 0/90/180/270 degrees (circumradius L)

For each N this scans L, brackets where the line width at the saturation
point crosses the target 1/0.43 gamma_ca, and refines the crossing by
bisection. The width is measured at the pump rate that maximizes the band
photon number, matching how saturation operating points are compared
across cluster sizes.

The N = 3 wedge angle was chosen from a coarse angle scan: the straight
line (90 degrees) and the equilateral wedge (30 degrees) both land outside
the efficiency corridor between the tuned N = 2 and N = 4 geometries,
while 45 degrees sits inside it.

Run from the repository root:

    python3 scripts/tune_geometries.py

The resulting L values are frozen into tests/test_acceptance.py; rerun
this script if the coupling conventions ever change.

Other width targets take options. The broad-line table frozen into
scripts/make_figure_fixtures.py comes from

    python3 scripts/tune_geometries.py --inverse-width 0.47 \
        --L-range 0.55:0.95:0.05
    python3 scripts/tune_geometries.py --inverse-width 0.29 \
        --L-range 0.40:0.80:0.05 --W-max 1500 --n-atoms 3,4,5
    python3 scripts/tune_geometries.py --inverse-width 0.29 \
        --L-range 0.75:0.95:0.05 --n-atoms 2 --axial-pair

(the in-plane pair never broadens past ~2.7 gamma_ca at saturation, so
the 1/0.29 pair point displaces the passive atom along the dipole axis
instead, where the stronger longitudinal coupling reaches the target).
"""

import argparse
import sys

import numpy as np

sys.path.insert(0, "src")

from fewatom import (  # noqa: E402
    AtomConfiguration,
    operating_point,
    pump_sweep,
    saturation_point,
)

W_GRID = np.geomspace(0.3, 150.0, 45)

PASSIVE_ANGLES = {
    2: (0.0,),
    3: (45.0, -45.0),
    4: (0.0, 120.0, 240.0),
    5: (0.0, 90.0, 180.0, 270.0),
}


def anchor_configuration(n_atoms: int, distance: float, axial_pair: bool = False) -> AtomConfiguration:
    if axial_pair:
        if n_atoms != 2:
            raise ValueError("the axial variant is defined for the pair only")
        positions = [np.zeros(3), np.array([0.0, 0.0, distance])]
    else:
        positions = [np.zeros(3)]
        for deg in PASSIVE_ANGLES[n_atoms]:
            phi = np.radians(deg)
            positions.append(distance * np.array([np.cos(phi), np.sin(phi), 0.0]))
    return AtomConfiguration(
        positions=np.array(positions),
        dipoles=np.tile([0.0, 0.0, 1.0], (n_atoms, 1)),
        pumped_index=0,
    )


def saturation_measure(n_atoms: int, distance: float, w_grid=W_GRID, axial_pair: bool = False):
    """(width, n_max, efficiency, W*) at the saturation point, or None
    when the sweep window does not bracket the photon-number maximum."""
    config = anchor_configuration(n_atoms, distance, axial_pair)
    sat = saturation_point(pump_sweep(config, w_grid))
    if not sat.bracketed:
        return None
    point = operating_point(config, sat.W_at_nmax)
    return (
        point.delta_omega,
        point.n,
        point.n / point.absorption_rate,
        sat.W_at_nmax,
    )


def main():
    ap = argparse.ArgumentParser(description="tune anchor distances to a width target")
    ap.add_argument(
        "--inverse-width",
        type=float,
        default=0.43,
        help="target 1/delta_omega at saturation, units of 1/gamma_ca",
    )
    ap.add_argument(
        "--L-range",
        default="0.55:1.00:0.05",
        help="coarse distance scan as lo:hi:step",
    )
    ap.add_argument("--W-max", type=float, default=150.0, help="top of the pump window")
    ap.add_argument("--W-points", type=int, default=45, help="pump window points")
    ap.add_argument(
        "--n-atoms",
        default="2,3,4,5",
        help="comma-separated cluster sizes to tune",
    )
    ap.add_argument(
        "--axial-pair",
        action="store_true",
        help="N = 2 only: passive atom along the dipole axis (longitudinal)",
    )
    args = ap.parse_args()

    target = 1.0 / args.inverse_width
    lo, hi, step = (float(v) for v in args.L_range.split(":"))
    L_coarse = np.arange(lo, hi + step / 2, step)
    w_grid = np.geomspace(0.3, args.W_max, args.W_points)
    sizes = [int(v) for v in args.n_atoms.split(",")]

    print(f"target width at saturation = {target:.6f} gamma_ca\n")
    frozen = []
    for n_atoms in sizes:
        rows = []
        for distance in L_coarse:
            m = saturation_measure(n_atoms, distance, w_grid, args.axial_pair)
            if m is None:
                print(f"N={n_atoms} L={distance:.3f} saturation not bracketed")
                rows.append((distance, None))
                continue
            print(
                f"N={n_atoms} L={distance:.3f} width={m[0]:.5f}"
                f" n_max={m[1]:.5f} eff={m[2]:.4f} W*={m[3]:.2f}"
            )
            rows.append((distance, m[0]))

        # bisect the first crossing of the target, either direction
        found = False
        for (d0, w0), (d1, w1) in zip(rows, rows[1:]):
            if w0 is None or w1 is None:
                continue
            sign = 1.0 if w0 > target else -1.0
            if not (sign * (w0 - target) > 0 >= sign * (w1 - target)):
                continue
            lo_d, hi_d = d0, d1
            for _ in range(22):
                mid = 0.5 * (lo_d + hi_d)
                m = saturation_measure(n_atoms, mid, w_grid, args.axial_pair)
                if m is not None and sign * (m[0] - target) > 0:
                    lo_d = mid
                else:
                    hi_d = mid
            best = 0.5 * (lo_d + hi_d)
            width, n_max, eff, w_star = saturation_measure(
                n_atoms, best, w_grid, args.axial_pair
            )
            print(
                f"  => N={n_atoms}: L*={best:.6f} width={width:.6f}"
                f" n_max={n_max:.6f} eff={eff:.6f} W*={w_star:.4f}\n"
            )
            frozen.append((n_atoms, best, width, n_max, eff, w_star))
            found = True
            break
        if not found:
            print(f"  => N={n_atoms}: no crossing of the target in the scan window\n")

    print("frozen table (N: L*, width, n_max, efficiency, W*):")
    for n_atoms, best, width, n_max, eff, w_star in frozen:
        print(
            f"  {n_atoms}: ({best:.6f}, {width:.6f}, {n_max:.6f}, {eff:.6f}, {w_star:.4f}),"
        )


if __name__ == "__main__":
    main()
