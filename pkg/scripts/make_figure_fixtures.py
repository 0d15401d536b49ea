"""Regenerate the CSV/JSON fixtures the figure frontend is tested against.

Everything here goes through the command-line interface — this script
writes configuration files and calls `python -m fewatom.cli`, never the
library, so the fixtures pin down exactly the artifacts an external
plotting tool sees. Outputs land in frontend/tests/fixtures/:

    spectrum_W1.77.csv/.json    normalized reference-cluster spectra on a
    spectrum_W10.10.csv/.json   common frequency grid, one per pump rate

    sweep_triangle.csv/.json    the 40-point pump sweep of the same
                                cluster with its saturation summary

    nmax_groups.json            saturation points of clusters tuned to a
                                common line width at saturation, grouped
                                by that width's inverse (the coherence
                                time); built from one sweep per cluster

The tuned distances come from scripts/tune_geometries.py (see its
docstring for the exact invocations). Each nmax_groups entry records the
sweep summary of one cluster: n_max, efficiency, W_at_nmax,
delta_omega_min, plus the geometry parameters that produced it.

Run from the repository root:

    python3 scripts/make_figure_fixtures.py
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "frontend" / "tests" / "fixtures"

PASSIVE_ANGLES = {
    2: (0.0,),
    3: (45.0, -45.0),
    4: (0.0, 120.0, 240.0),
    5: (0.0, 90.0, 180.0, 270.0),
}

# clusters tuned so the width at the saturation point is 1/(inverse_width);
# (n_atoms, distance, family, top of the pump window)
TUNED = {
    0.47: [
        (2, 0.787125, "plane", 150.0),
        (3, 0.729290, "plane", 150.0),
        (4, 0.681069, "plane", 150.0),
        (5, 0.778276, "plane", 150.0),
    ],
    0.43: [
        (2, 0.757505, "plane", 150.0),
        (3, 0.702864, "plane", 150.0),
        (4, 0.653669, "plane", 150.0),
        (5, 0.712930, "plane", 150.0),
    ],
    0.29: [
        (2, 0.865186, "axis", 150.0),
        (3, 0.562706, "plane", 1500.0),
        (4, 0.473401, "plane", 1500.0),
        (5, 0.604375, "plane", 1500.0),
    ],
}


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "fewatom.cli", *args],
        cwd=ROOT,
        capture_output=True,
        text=True,
    )
    if proc.returncode != 0:
        raise RuntimeError(
            f"fewatom.cli {' '.join(args)} exited {proc.returncode}:\n{proc.stderr}"
        )
    return proc


def anchor_positions(n_atoms, distance, family):
    if family == "axis":
        # passive atom along the dipole axis (longitudinal coupling)
        return [np.zeros(3), np.array([0.0, 0.0, distance])]
    positions = [np.zeros(3)]
    for deg in PASSIVE_ANGLES[n_atoms]:
        phi = np.radians(deg)
        positions.append(distance * np.array([np.cos(phi), np.sin(phi), 0.0]))
    return positions


def anchor_config_text(n_atoms, distance, family, w_hi):
    lines = [
        "# tuned cluster for the n_max-versus-N figure",
        "[geometry]",
        f"n_atoms = {n_atoms}",
    ]
    for i, pos in enumerate(anchor_positions(n_atoms, distance, family)):
        lines.append(f"position_{i} = {pos[0]:.9f} {pos[1]:.9f} {pos[2]:.9f}")
    lines += [
        "pumped = 0",
        "",
        "[drive]",
        f"W_sweep = 0.3 {w_hi:g} 45",
    ]
    return "\n".join(lines) + "\n"


def make_spectra():
    for W in ("1.77", "10.10"):
        out = FIXTURES / f"spectrum_W{W}.csv"
        run_cli(
            "spectrum",
            "configs/triangle4.cfg",
            "--W",
            W,
            "--normalized",
            "--grid=-12:12:1201",
            "--out",
            str(out),
        )
        print(f"wrote {out.relative_to(ROOT)} (+ .json)")


def make_sweep():
    out = FIXTURES / "sweep_triangle.csv"
    run_cli(
        "sweep",
        "configs/triangle4.cfg",
        "--out",
        str(out),
        "--json",
        str(FIXTURES / "sweep_triangle.json"),
    )
    print(f"wrote {out.relative_to(ROOT)} (+ .json)")


def make_nmax_groups(scratch):
    groups = []
    for inverse_width in sorted(TUNED, reverse=True):
        points = []
        for n_atoms, distance, family, w_hi in TUNED[inverse_width]:
            cfg = scratch / f"anchor_{inverse_width}_{n_atoms}.cfg"
            cfg.write_text(anchor_config_text(n_atoms, distance, family, w_hi))
            csv_path = scratch / (cfg.stem + ".csv")
            json_path = scratch / (cfg.stem + ".json")
            run_cli(
                "sweep", str(cfg), "--out", str(csv_path), "--json", str(json_path)
            )
            summary = json.loads(json_path.read_text())
            if not summary["bracketed"]:
                raise RuntimeError(f"saturation not bracketed for {cfg.name}")
            points.append(
                {
                    "n_atoms": n_atoms,
                    "L": distance,
                    "family": family,
                    "n_max": summary["n_max"],
                    "efficiency": summary["efficiency"],
                    "W_at_nmax": summary["W_at_nmax"],
                    "delta_omega_min": summary["delta_omega_min"],
                }
            )
        groups.append(
            {
                "inverse_width": inverse_width,
                "label": f"{inverse_width:g}/gamma_ca",
                "points": points,
            }
        )
    out = FIXTURES / "nmax_groups.json"
    out.write_text(
        json.dumps({"units": "rates in gamma_ca", "groups": groups}, indent=2)
        + "\n"
    )
    print(f"wrote {out.relative_to(ROOT)} ({len(groups)} groups)")


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    make_spectra()
    make_sweep()
    with tempfile.TemporaryDirectory() as tmp:
        make_nmax_groups(Path(tmp))


if __name__ == "__main__":
    main()
