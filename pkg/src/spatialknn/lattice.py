"""Site geometry.

Sites live in ``R^N`` and are either nodes of a regular lattice, stored
with normalized coordinates ``(i_1/n_1, ..., i_N/n_N)``, or irregular
points (e.g. survey stations with raw longitude/latitude). Both are held
in a :class:`SiteSet`; all distances are Euclidean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _frozen_array(values, dtype=float) -> np.ndarray:
    out = np.array(values, dtype=dtype)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class SiteSet:
    """Ordered collection of site coordinates.

    Parameters
    ----------
    coords : ndarray of shape (n_sites, n_dims)
        One row per site. Row order is stable and meaningful: site ``i``
        of a dataset is row ``i`` here.
    shape : tuple of int, optional
        Lattice dimensions ``(n_1, ..., n_N)`` when the sites form a full
        regular grid; ``None`` for irregular point sets.
    """

    coords: np.ndarray
    shape: tuple[int, ...] | None = None

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.ndim == 1:
            coords = coords[:, None]
        if coords.ndim != 2 or coords.shape[1] < 1:
            raise ValueError("coords must be a 2-D array with at least one column")
        if coords.size and not np.all(np.isfinite(coords)):
            raise ValueError("site coordinates must be finite")
        object.__setattr__(self, "coords", _frozen_array(coords))
        if self.shape is not None:
            shape = tuple(int(n) for n in self.shape)
            if any(n < 1 for n in shape):
                raise ValueError(f"lattice shape must be positive, got {shape}")
            if len(coords) != math.prod(shape):
                raise ValueError(
                    f"{len(coords)} sites do not fill a {shape} lattice"
                )
            object.__setattr__(self, "shape", shape)

    def __len__(self) -> int:
        return self.coords.shape[0]

    @property
    def ndim(self) -> int:
        """Dimension N of the site space."""
        return self.coords.shape[1]


def make_lattice(shape) -> SiteSet:
    """Build the full regular lattice with normalized coordinates.

    Site ``(i_1, ..., i_N)`` with ``1 <= i_r <= n_r`` is stored as
    ``(i_1/n_1, ..., i_N/n_N)``, so every coordinate lies in ``(0, 1]``.
    Sites are emitted in row-major order (last index varies fastest).

    Parameters
    ----------
    shape : sequence of int
        Lattice dimensions ``(n_1, ..., n_N)``, all >= 1.
    """
    shape = tuple(int(n) for n in shape)
    if not shape or any(n < 1 for n in shape):
        raise ValueError(f"lattice dimensions must be positive integers, got {shape}")
    axes = [np.arange(1, n + 1, dtype=float) / n for n in shape]
    mesh = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([m.ravel() for m in mesh], axis=-1)
    return SiteSet(coords, shape=shape)


def site_distance(a, b) -> float:
    """Euclidean distance between two sites of equal dimension."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return float(np.linalg.norm(a - b))


def distances_to(coords, point) -> np.ndarray:
    """Euclidean distances from one point to each row of ``coords``."""
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    point = np.asarray(point, dtype=float).ravel()
    if coords.shape[1] != point.shape[0]:
        raise ValueError(
            f"dimension mismatch: points are {coords.shape[1]}-D, "
            f"query is {point.shape[0]}-D"
        )
    return np.linalg.norm(coords - point, axis=1)


def pairwise_distances(coords) -> np.ndarray:
    """Dense matrix of Euclidean distances between all rows of ``coords``."""
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    diff = coords[:, None, :] - coords[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
