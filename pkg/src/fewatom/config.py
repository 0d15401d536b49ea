"""Flat key=value run configuration.

Grammar, line by line: blank lines and ``# comment`` text are dropped,
``[section]`` headers are tolerated and ignored (so files can be organized
visually), and every remaining line must be ``key = value``. Keys:

    position_<i> = x y z       atom i position, 0-based, contiguous from 0
    dipole_<i>   = x y z       optional; must be a unit vector; default 0 0 1
    n_atoms      = <int>       optional; must match the position count
    pumped       = <int>       index of the pumped atom, default 0
    W            = <float>     pump rate in units of gamma_ca, default 0
    gamma_ca     = <float>     free-space decay rate, default 1
    W_sweep      = lo hi n     log-spaced sweep grid, n >= 1 point
    L            = <float>     geometry scale the positions correspond to

``L`` exists so a distance scan can rescale the stored positions by
``L_new / L``; it is otherwise inert. Unknown or duplicate keys are errors —
a typo should fail loudly, not silently fall back to a default.

``format_config`` writes the canonical echo of a parsed configuration; its
output parses back to an identical RunConfig (floats are %.12e).
"""

import re
from dataclasses import dataclass

import numpy as np

from .coupling import AtomConfiguration
from .errors import SchemaError

__all__ = [
    "RunConfig",
    "parse_config_text",
    "parse_config_echo",
    "load_config",
    "format_config",
]

_INDEXED = re.compile(r"^(position|dipole)_(\d+)$")
_FLAT_KEYS = ("n_atoms", "pumped", "W", "gamma_ca", "W_sweep", "L")


@dataclass
class RunConfig:
    """Parsed run configuration: geometry plus optional sweep/scan controls."""

    atoms: AtomConfiguration
    W: float = 0.0
    W_sweep: tuple | None = None  # (lo, hi, n_points)
    length_scale: float | None = None

    def sweep_grid(self) -> np.ndarray:
        if self.W_sweep is None:
            raise SchemaError("configuration has no W_sweep line")
        lo, hi, n = self.W_sweep
        return np.geomspace(lo, hi, n)


def _parse_float(token, lineno, key):
    try:
        value = float(token)
    except ValueError:
        raise SchemaError(f"line {lineno}: {key} expects a number, got {token!r}") from None
    if not np.isfinite(value):
        raise SchemaError(f"line {lineno}: {key} must be finite, got {token!r}")
    return value


def _parse_vector(tokens, lineno, key):
    if len(tokens) != 3:
        raise SchemaError(f"line {lineno}: {key} expects three numbers, got {len(tokens)}")
    return np.array([_parse_float(t, lineno, key) for t in tokens])


def parse_config_text(text: str) -> RunConfig:
    positions: dict[int, np.ndarray] = {}
    dipoles: dict[int, np.ndarray] = {}
    flat: dict[str, object] = {}
    flat_lines: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            continue
        if "=" not in line:
            raise SchemaError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        tokens = value.split()
        if not tokens:
            raise SchemaError(f"line {lineno}: {key} has no value")

        m = _INDEXED.match(key)
        if m:
            kind, idx = m.group(1), int(m.group(2))
            table = positions if kind == "position" else dipoles
            if idx in table:
                raise SchemaError(f"line {lineno}: duplicate key {key}")
            table[idx] = _parse_vector(tokens, lineno, key)
            continue

        if key not in _FLAT_KEYS:
            raise SchemaError(f"line {lineno}: unknown key {key!r}")
        if key in flat:
            raise SchemaError(
                f"line {lineno}: duplicate key {key} (first seen on line {flat_lines[key]})"
            )
        flat_lines[key] = lineno

        if key in ("pumped", "n_atoms"):
            if len(tokens) != 1:
                raise SchemaError(f"line {lineno}: {key} expects one integer")
            try:
                flat[key] = int(tokens[0])
            except ValueError:
                raise SchemaError(
                    f"line {lineno}: {key} expects an integer, got {tokens[0]!r}"
                ) from None
        elif key in ("W", "gamma_ca", "L"):
            if len(tokens) != 1:
                raise SchemaError(f"line {lineno}: {key} expects one number")
            flat[key] = _parse_float(tokens[0], lineno, key)
        else:  # W_sweep
            if len(tokens) != 3:
                raise SchemaError(f"line {lineno}: W_sweep expects 'lo hi n_points'")
            lo = _parse_float(tokens[0], lineno, "W_sweep")
            hi = _parse_float(tokens[1], lineno, "W_sweep")
            try:
                n = int(tokens[2])
            except ValueError:
                raise SchemaError(
                    f"line {lineno}: W_sweep point count must be an integer, got {tokens[2]!r}"
                ) from None
            if n < 1:
                raise SchemaError(f"line {lineno}: W_sweep needs at least 1 point")
            if n == 1:
                if not lo > 0 or lo > hi:
                    raise SchemaError(f"line {lineno}: W_sweep needs 0 < lo <= hi")
            elif not 0 < lo < hi:
                raise SchemaError(f"line {lineno}: W_sweep needs 0 < lo < hi")
            flat[key] = (lo, hi, n)

    if not positions:
        raise SchemaError("configuration defines no atoms (no position_<i> lines)")
    n_atoms = len(positions)
    missing = sorted(set(range(n_atoms)) - set(positions))
    if missing:
        raise SchemaError(
            f"position indices must be contiguous from 0; missing {missing}, "
            f"got {sorted(positions)}"
        )
    stray = sorted(set(dipoles) - set(positions))
    if stray:
        raise SchemaError(f"dipole indices without matching position: {stray}")
    declared = flat.get("n_atoms")
    if declared is not None and declared != n_atoms:
        raise SchemaError(
            f"n_atoms = {declared} but {n_atoms} position_<i> line(s) found"
        )

    pos = np.array([positions[i] for i in range(n_atoms)])
    dip = np.empty((n_atoms, 3))
    for i in range(n_atoms):
        dip[i] = dipoles[i] if i in dipoles else (0.0, 0.0, 1.0)

    pumped = flat.get("pumped", 0)
    if not 0 <= pumped < n_atoms:
        raise SchemaError(f"pumped index {pumped} out of range for {n_atoms} atom(s)")
    W = float(flat.get("W", 0.0))
    if W < 0:
        raise SchemaError(f"W must be >= 0, got {W}")
    gamma_ca = float(flat.get("gamma_ca", 1.0))
    if gamma_ca <= 0:
        raise SchemaError(f"gamma_ca must be > 0, got {gamma_ca}")
    length_scale = flat.get("L")
    if length_scale is not None and length_scale <= 0:
        raise SchemaError(f"L must be > 0, got {length_scale}")

    atoms = AtomConfiguration(
        positions=pos,
        dipoles=dip,
        pumped_index=pumped,
        pump_W=W,
        gamma_ca=gamma_ca,
    )
    return RunConfig(
        atoms=atoms,
        W=W,
        W_sweep=flat.get("W_sweep"),
        length_scale=length_scale,
    )


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read configuration {path}: {exc}") from exc
    return parse_config_text(text)


def parse_config_echo(result_text: str) -> RunConfig:
    """Recover the configuration embedded in a result file's '#cfg ' lines."""
    lines = [ln[5:] for ln in result_text.splitlines() if ln.startswith("#cfg ")]
    if not lines:
        raise SchemaError("no '#cfg ' echo lines found")
    return parse_config_text("\n".join(lines))


def format_config(run: RunConfig) -> str:
    """Canonical, re-parseable echo of a configuration."""
    out = []
    atoms = run.atoms
    out.append(f"gamma_ca = {atoms.gamma_ca:.12e}")
    out.append(f"pumped = {atoms.pumped_index}")
    out.append(f"W = {run.W:.12e}")
    if run.W_sweep is not None:
        lo, hi, n = run.W_sweep
        out.append(f"W_sweep = {lo:.12e} {hi:.12e} {n}")
    if run.length_scale is not None:
        out.append(f"L = {run.length_scale:.12e}")
    for i in range(atoms.n_atoms):
        p = atoms.positions[i]
        out.append(f"position_{i} = {p[0]:.12e} {p[1]:.12e} {p[2]:.12e}")
        d = atoms.dipoles[i]
        out.append(f"dipole_{i} = {d[0]:.12e} {d[1]:.12e} {d[2]:.12e}")
    return "\n".join(out) + "\n"
