"""Univariate kernel catalog.

The same six shapes serve both smoothing roles: applied radially to
covariate differences (via :func:`eval_radial`) and directly to scalar
site distances (via :func:`eval_scalar`). Support is *closed*: compact
kernels are positive up to and including ``|u| = 1``, so an indicator
kernel paired with a k-th-neighbour bandwidth keeps exactly the k
nearest points. Kernels are not normalized to unit mass; every estimator
in this package is a ratio in which the constant cancels.

All evaluators accept scalars or arrays and tolerate ``inf`` arguments
(which land outside every support and yield 0).
"""

from __future__ import annotations

import numpy as np

KERNEL_NAMES = (
    "biweight",
    "epanechnikov",
    "gaussian",
    "indicator",
    "parzen",
    "triangular",
)


def _biweight(u):
    out = np.zeros_like(u)
    m = u <= 1.0
    out[m] = 0.9375 * (1.0 - u[m] ** 2) ** 2
    return out


def _epanechnikov(u):
    out = np.zeros_like(u)
    m = u <= 1.0
    out[m] = 0.75 * (1.0 - u[m] ** 2)
    return out


def _gaussian(u):
    return np.exp(-0.5 * u**2)


def _indicator(u):
    return (u <= 1.0).astype(float)


def _parzen(u):
    # Piecewise cubic: 1 - 6u^2 + 6u^3 on [0, 1/2), 2(1-u)^3 on [1/2, 1].
    out = np.zeros_like(u)
    inner = u < 0.5
    outer = ~inner & (u <= 1.0)
    out[inner] = 1.0 - 6.0 * u[inner] ** 2 + 6.0 * u[inner] ** 3
    out[outer] = 2.0 * (1.0 - u[outer]) ** 3
    return out


def _triangular(u):
    out = np.zeros_like(u)
    m = u <= 1.0
    out[m] = 1.0 - u[m]
    return out


_KERNELS = {
    "biweight": _biweight,
    "epanechnikov": _epanechnikov,
    "gaussian": _gaussian,
    "indicator": _indicator,
    "parzen": _parzen,
    "triangular": _triangular,
}

#: Mass of each kernel on the real line (closed forms, for checks).
KERNEL_INTEGRALS = {
    "biweight": 1.0,
    "epanechnikov": 1.0,
    "gaussian": float(np.sqrt(2.0 * np.pi)),
    "indicator": 2.0,
    "parzen": 0.75,
    "triangular": 1.0,
}


def validate_kernel(name: str) -> str:
    """Return ``name`` if it is a catalog kernel, else raise ``ValueError``."""
    if name not in _KERNELS:
        raise ValueError(
            f"unknown kernel {name!r}; choose one of {', '.join(KERNEL_NAMES)}"
        )
    return name


def eval_scalar(name: str, u):
    """Evaluate kernel ``name`` at scalar argument(s) ``u``.

    Kernels are even functions; ``u`` may be any real (or array of
    reals) and only ``|u|`` matters.
    """
    fn = _KERNELS.get(name)
    if fn is None:
        validate_kernel(name)
    u = np.abs(np.asarray(u, dtype=float))
    scalar = u.ndim == 0
    out = fn(u[None] if scalar else u)
    return float(out[0]) if scalar else out


def eval_radial(name: str, v):
    """Evaluate kernel ``name`` radially at vector argument(s) ``v``.

    ``v`` is a single d-vector or an array of them (last axis = d); the
    kernel is applied to the Euclidean norm, so for d = 1 this equals
    :func:`eval_scalar` at ``|v|``.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim == 0:
        v = v[None]
    return eval_scalar(name, np.linalg.norm(v, axis=-1))
