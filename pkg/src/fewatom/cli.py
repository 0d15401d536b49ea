"""Command-line interface.

Subcommands
-----------
couplings   Pairwise frequency shifts and decay cross-rates for a geometry.
spectrum    Emission spectrum on a frequency grid (CSV), plus a JSON sidecar
            carrying the exact Lorentzian decomposition, the line width and
            the band photon number.
sweep       Pump sweep over the W_sweep grid: width, band photon number and
            rates per point (CSV), plus a JSON saturation summary.
scan        Distance scan: rescales the geometry to each L, repeats the pump
            sweep, and tabulates n_max(L), delta_omega_min(L), efficiency(L).

Every CSV starts with comment lines ('#') carrying the canonical configuration
echo on '#cfg '-prefixed lines, so a result file documents the run that
produced it; config.parse_config_echo recovers the configuration from such a
file. Floats are printed %.12e and row order is fixed, so identical inputs
produce byte-identical output.

The JSON sidecar goes to --json when given, else to '<out>.json' next to
--out, else it is skipped (CSV on stdout stays plain CSV).

Exit codes: 0 success; 2 malformed input or usage; 3 physical failure (dark
spectrum, steady-state residual, ...); 4 the spectrum eigendecomposition was
defective and the time-integration fallback failed as well; 5 a sweep or scan
finished with less than 90% of its points usable.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import _kernels, analysis
from .config import RunConfig, format_config, load_config
from .coupling import coupling_matrices
from .errors import (
    DarkSpectrumError,
    DefectiveBlockError,
    FewatomError,
    IntegrationError,
    SchemaError,
)
from .hilbert import build_liouvillian
from .spectrum import evaluate_spectrum, spectrum_lorentzians, spectrum_via_integration
from .steady import steady_state, total_emission_rate

__all__ = ["main"]


class _FallbackFailed(FewatomError):
    """Defective eigendecomposition and the integration fallback failed too."""


def _fmt(x) -> str:
    return f"{float(x):.12e}"


def _csv_text(s: str) -> str:
    if s == "":
        return s
    return '"' + s.replace('"', '""') + '"'


_UNITS_LINE = "# frequencies are offsets from the atomic resonance, in units of gamma_ca"


def _echo_lines(run: RunConfig):
    return [_UNITS_LINE] + ["#cfg " + line for line in format_config(run).splitlines()]


def _write_text(path, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise SchemaError(f"cannot write {path}: {exc}") from exc


def _json_path(args):
    if args.json is not None:
        return args.json
    if args.out is not None and args.out != "-":
        return args.out + ".json"
    return None


def _write_json(args, payload: dict):
    path = _json_path(args)
    if path is None:
        return
    _write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _set_threads(k: int):
    # best effort: BLAS pools only honor this if not yet initialized
    os.environ.setdefault("OMP_NUM_THREADS", str(k))
    os.environ.setdefault("MKL_NUM_THREADS", str(k))
    try:
        import numba

        numba.set_num_threads(k)
    except Exception:
        pass


def _parse_triplet(text: str, flag: str, count_floor: int):
    parts = text.split(":")
    if len(parts) != 3:
        raise SchemaError(f"{flag} expects 'lo:hi:n', got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise SchemaError(f"{flag} expects 'lo:hi:n' with numeric fields, got {text!r}") from None
    if n < count_floor:
        raise SchemaError(f"{flag} needs at least {count_floor} points, got {n}")
    # a single-point range may be degenerate (lo == hi), mirroring W_sweep
    if not (hi > lo or (n == 1 and hi == lo)):
        raise SchemaError(f"{flag} needs hi > lo, got {text!r}")
    return lo, hi, n


# ---------------------------------------------------------------- couplings


def _cmd_couplings(args) -> int:
    run = load_config(args.config)
    mats = coupling_matrices(run.atoms)
    lines = ["# fewatom couplings"]
    lines += _echo_lines(run)
    lines.append("i,j,delta,gamma")
    n = run.atoms.n_atoms
    for i in range(n):
        for j in range(i, n):
            lines.append(f"{i},{j},{_fmt(mats.delta[i, j])},{_fmt(mats.gammas[i, j])}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


# ----------------------------------------------------------------- spectrum


def _spectrum_pieces(superop, couplings, state, omegas):
    """Lorentzian decomposition, falling back to time integration when the
    emission block is defective. Returns (lorentzians_or_None, omegas, S)."""
    try:
        lor = spectrum_lorentzians(superop, couplings, state)
    except DefectiveBlockError as exc:
        try:
            grid = spectrum_via_integration(superop, couplings, state, omegas=omegas)
        except IntegrationError as fallback_exc:
            raise _FallbackFailed(
                f"eigendecomposition defective ({exc}) and integration fallback "
                f"failed ({fallback_exc})"
            ) from fallback_exc
        return None, grid.omegas, grid.intensities
    return lor, None, None


def _cmd_spectrum(args) -> int:
    run = load_config(args.config)
    W = run.W if args.W is None else args.W
    if W < 0:
        raise SchemaError(f"W must be >= 0, got {W}")
    couplings = coupling_matrices(run.atoms)
    superop = build_liouvillian(couplings, run.atoms.pumped_index, W)
    state = steady_state(superop)

    explicit = None
    if args.grid is not None:
        lo, hi, n = _parse_triplet(args.grid, "--grid", 2)
        explicit = np.linspace(lo, hi, n)

    fallback_grid = explicit
    if fallback_grid is None:
        half = 20.0 * run.atoms.gamma_ca
        fallback_grid = np.linspace(-half, half, 2001)
    lor, omegas, intensities = _spectrum_pieces(superop, couplings, state, fallback_grid)

    payload = {
        "W": float(W),
        "gamma_ca": float(run.atoms.gamma_ca),
        "normalized": bool(args.normalized),
        "backend": _kernels.BACKEND,
        "config": format_config(run),
    }
    if lor is not None:
        delta_omega, omega_peak = analysis.fwhm(lor)
        n_band = analysis.photon_number(lor, delta_omega, omega_peak)
        if explicit is not None:
            omegas = explicit
        else:
            half = max(4.0 * delta_omega, 2.0 * run.atoms.gamma_ca)
            omegas = np.linspace(omega_peak - half, omega_peak + half, 2001)
        intensities = evaluate_spectrum(lor, omegas, normalized=args.normalized).intensities
        payload.update(
            method="eigen",
            n_terms=len(lor),
            nu=[float(v) for v in lor.nu],
            gamma_hwhm=[float(v) for v in lor.gamma_hwhm],
            w_re=[float(v) for v in lor.weight.real],
            w_im=[float(v) for v in lor.weight.imag],
            total_rate=float(lor.total_rate),
            delta_omega=float(delta_omega),
            omega_peak=float(omega_peak),
            n=float(n_band),
        )
    else:
        if args.normalized:
            top = float(np.max(intensities))
            if top <= 0:
                raise DarkSpectrumError("cannot normalize an empty spectrum")
            intensities = intensities / top
        payload.update(
            method="integration",
            n_terms=0,
            nu=[],
            gamma_hwhm=[],
            w_re=[],
            w_im=[],
            total_rate=float(total_emission_rate(state, couplings)),
            delta_omega=None,
            omega_peak=None,
            n=None,
        )

    lines = ["# fewatom spectrum", f"# method = {payload['method']}", f"# W = {_fmt(W)}"]
    lines += _echo_lines(run)
    lines.append("omega_offset,intensity")
    for w, s in zip(omegas, intensities):
        lines.append(f"{_fmt(w)},{_fmt(s)}")
    _write_text(args.out, "\n".join(lines) + "\n")
    _write_json(args, payload)
    return 0


# -------------------------------------------------------------------- sweep


def _sweep_points(atoms, W_grid, couplings):
    """Run the pipeline per W; failures become (W, None, message) rows."""
    rows = []
    for W in W_grid:
        try:
            point = analysis.operating_point(atoms, float(W), couplings)
            rows.append((float(W), point, ""))
        except FewatomError as exc:
            rows.append((float(W), None, str(exc)))
    return rows


def _summary_payload(points, gamma_ca, atoms):
    """Saturation summary dict (+ efficiency) from successful sweep points."""
    if len(points) == 0:
        return {
            "status": "no usable points",
            "bracketed": False,
            "delta_omega_min": None,
            "n_max": None,
            "W_at_nmax": None,
            "W_at_domin": None,
            "efficiency": None,
        }
    if len(points) < 3:
        # too few points to bracket a turnover; report the raw extrema
        best = max(points, key=lambda p: p.n)
        narrowest = min(points, key=lambda p: p.delta_omega)
        return {
            "status": "saturation not bracketed",
            "bracketed": False,
            "delta_omega_min": float(narrowest.delta_omega),
            "n_max": float(best.n),
            "W_at_nmax": float(best.W),
            "W_at_domin": float(narrowest.W),
            "efficiency": None,
        }
    sweep = analysis.SweepResult(points=points, config=atoms, gamma_ca=gamma_ca)
    sat, eff = analysis.sweep_summary(sweep)
    return {
        "status": sat.status,
        "bracketed": sat.bracketed,
        "delta_omega_min": float(sat.delta_omega_min),
        "n_max": float(sat.n_max),
        "W_at_nmax": float(sat.W_at_nmax),
        "W_at_domin": float(sat.W_at_domin),
        "efficiency": None if eff is None else float(eff),
    }


def _sweep_grid_of(args, run: RunConfig) -> np.ndarray:
    if args.W_sweep is not None:
        lo, hi, n = _parse_triplet(args.W_sweep, "--W-sweep", 1)
        if lo <= 0:
            raise SchemaError(f"--W-sweep needs lo > 0, got {lo}")
        return np.geomspace(lo, hi, n)
    return run.sweep_grid()


def _cmd_sweep(args) -> int:
    run = load_config(args.config)
    W_grid = _sweep_grid_of(args, run)
    couplings = coupling_matrices(run.atoms)
    rows = _sweep_points(run.atoms, W_grid, couplings)

    lines = ["# fewatom sweep"]
    lines += _echo_lines(run)
    lines.append("W,delta_omega,n,emission_rate,absorption_rate,omega_peak,error")
    for W, point, err in rows:
        if point is None:
            nan = _fmt(float("nan"))
            lines.append(f"{_fmt(W)},{nan},{nan},{nan},{nan},{nan},{_csv_text(err)}")
        else:
            lines.append(
                f"{_fmt(W)},{_fmt(point.delta_omega)},{_fmt(point.n)},"
                f"{_fmt(point.emission_rate)},{_fmt(point.absorption_rate)},"
                f"{_fmt(point.omega_peak)},"
            )
    _write_text(args.out, "\n".join(lines) + "\n")

    points = [p for _, p, _ in rows if p is not None]
    payload = _summary_payload(points, run.atoms.gamma_ca, run.atoms)
    payload.update(
        n_points=len(rows),
        n_failed=len(rows) - len(points),
        backend=_kernels.BACKEND,
        config=format_config(run),
    )
    _write_json(args, payload)

    if len(points) < 0.9 * len(rows):
        print(
            f"fewatom: sweep kept {len(points)}/{len(rows)} points (< 90%)",
            file=sys.stderr,
        )
        return 5
    return 0


# --------------------------------------------------------------------- scan


def _cmd_scan(args) -> int:
    run = load_config(args.config)
    if run.length_scale is None:
        raise SchemaError("scan needs an 'L = <scale>' line in the configuration")
    W_grid = _sweep_grid_of(args, run)
    lo, hi, steps = _parse_triplet(args.L, "--L", 2)
    if lo <= 0:
        raise SchemaError(f"--L needs lo > 0, got {lo}")
    L_values = np.linspace(lo, hi, steps)

    lines = ["# fewatom scan"]
    lines += _echo_lines(run)
    lines.append("L,n_max,delta_omega_min,W_at_nmax,efficiency,status")
    summaries = []
    n_ok = 0
    for L in L_values:
        atoms_L = run.atoms.rescaled(float(L) / run.length_scale)
        try:
            couplings = coupling_matrices(atoms_L)
            rows = _sweep_points(atoms_L, W_grid, couplings)
            points = [p for _, p, _ in rows if p is not None]
            if len(points) < 3:
                raise FewatomError(
                    f"only {len(points)}/{len(rows)} sweep points usable"
                )
            summary = _summary_payload(points, atoms_L.gamma_ca, atoms_L)
        except FewatomError as exc:
            summary = {
                "status": str(exc),
                "bracketed": False,
                "delta_omega_min": None,
                "n_max": None,
                "W_at_nmax": None,
                "W_at_domin": None,
                "efficiency": None,
            }
        summary["L"] = float(L)
        summaries.append(summary)
        ok = summary["n_max"] is not None
        n_ok += ok
        nan = _fmt(float("nan"))
        lines.append(
            ",".join(
                [
                    _fmt(L),
                    _fmt(summary["n_max"]) if ok else nan,
                    _fmt(summary["delta_omega_min"]) if ok else nan,
                    _fmt(summary["W_at_nmax"]) if ok else nan,
                    _fmt(summary["efficiency"]) if summary["efficiency"] is not None else nan,
                    _csv_text(summary["status"]),
                ]
            )
        )
    _write_text(args.out, "\n".join(lines) + "\n")

    payload = {
        "L": [s["L"] for s in summaries],
        "n_max": [s["n_max"] for s in summaries],
        "delta_omega_min": [s["delta_omega_min"] for s in summaries],
        "W_at_nmax": [s["W_at_nmax"] for s in summaries],
        "efficiency": [s["efficiency"] for s in summaries],
        "status": [s["status"] for s in summaries],
        "backend": _kernels.BACKEND,
        "config": format_config(run),
    }
    usable = [s for s in summaries if s["n_max"] is not None]
    if usable:
        best = max(usable, key=lambda s: s["n_max"])
        payload["best_L"] = best["L"]
        payload["best_n_max"] = best["n_max"]
    _write_json(args, payload)

    if n_ok < 0.9 * len(L_values):
        print(
            f"fewatom: scan kept {n_ok}/{len(L_values)} L points (< 90%)",
            file=sys.stderr,
        )
        return 5
    return 0


# --------------------------------------------------------------------- main


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fewatom",
        description="Steady states and emission spectra of radiatively coupled "
        "pumped two-level atoms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, threads=True):
        p.add_argument("config", help="key=value configuration file")
        p.add_argument("--out", default=None, help="output CSV path (default stdout)")
        if threads:
            p.add_argument("--json", default=None, help="JSON sidecar path")
            p.add_argument("--threads", type=int, default=None, help="thread cap (best effort)")

    p = sub.add_parser("couplings", help="pairwise shift/decay matrices")
    add_common(p, threads=False)
    p.set_defaults(func=_cmd_couplings)

    p = sub.add_parser("spectrum", help="emission spectrum at one pump strength")
    add_common(p)
    p.add_argument("--W", type=float, default=None, help="override the config pump rate")
    p.add_argument("--grid", default=None, help="frequency grid lo:hi:n")
    p.add_argument("--normalized", action="store_true", help="scale the peak to 1")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("sweep", help="pump sweep over the W_sweep grid")
    add_common(p)
    p.add_argument(
        "--W-sweep", dest="W_sweep", default=None, help="override grid, lo:hi:n (log-spaced)"
    )
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("scan", help="distance scan of the saturation point")
    add_common(p)
    p.add_argument("--L", required=True, help="scale range lo:hi:steps")
    p.add_argument(
        "--W-sweep", dest="W_sweep", default=None, help="override grid, lo:hi:n (log-spaced)"
    )
    p.set_defaults(func=_cmd_scan)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if getattr(args, "threads", None):
        _set_threads(args.threads)
    try:
        return args.func(args)
    except _FallbackFailed as exc:
        print(f"fewatom: {exc}", file=sys.stderr)
        return 4
    except SchemaError as exc:
        print(f"fewatom: {exc}", file=sys.stderr)
        return 2
    except FewatomError as exc:
        print(f"fewatom: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
