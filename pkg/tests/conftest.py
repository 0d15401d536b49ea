"""Shared helpers for the test suite: seeded random geometries and the
four-atom reference cluster used across several suites."""

import numpy as np

from fewatom import AtomConfiguration


def random_configuration(rng, n_atoms=None, min_sep=0.25, span=2.5, pumped=None):
    """Random cluster with pairwise separations above min_sep and random
    unit dipoles. Deterministic given the caller's rng."""
    if n_atoms is None:
        n_atoms = int(rng.integers(1, 5))
    while True:
        pos = rng.uniform(-span, span, size=(n_atoms, 3))
        if n_atoms == 1:
            break
        gaps = np.linalg.norm(pos[:, None, :] - pos[None, :, :], axis=-1)
        if np.min(gaps[np.triu_indices(n_atoms, 1)]) > min_sep:
            break
    dip = rng.normal(size=(n_atoms, 3))
    dip /= np.linalg.norm(dip, axis=1, keepdims=True)
    if pumped is None:
        pumped = int(rng.integers(0, n_atoms))
    return AtomConfiguration(positions=pos, dipoles=dip, pumped_index=pumped)


def triangle4(circumradius=0.7):
    """Pumped atom at the origin, three passive atoms on an equilateral
    triangle of the given circumradius around it, dipoles out of plane."""
    angles = np.array([0.0, 2.0 * np.pi / 3.0, 4.0 * np.pi / 3.0])
    ring = np.column_stack(
        [circumradius * np.cos(angles), circumradius * np.sin(angles), np.zeros(3)]
    )
    positions = np.vstack([[0.0, 0.0, 0.0], ring])
    dipoles = np.tile([0.0, 0.0, 1.0], (4, 1))
    return AtomConfiguration(positions=positions, dipoles=dipoles, pumped_index=0)


def single_atom(W=0.0):
    return AtomConfiguration(
        positions=np.zeros((1, 3)),
        dipoles=np.array([[0.0, 0.0, 1.0]]),
        pumped_index=0,
        pump_W=W,
    )
