"""Dense truncated power series about 0.

A series is a 1-D float array ``p`` with ``p[k]`` the coefficient of ``z**k``;
everything beyond ``len(p) - 1`` is discarded.
"""
from __future__ import annotations

import numpy as np


def mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Cauchy product truncated to the length of ``p``."""
    n = len(p)
    return np.convolve(p, q[:n])[:n]


def powers(p: np.ndarray, n_max: int) -> list[np.ndarray]:
    """Return ``[p, p**2, ..., p**n_max]`` by repeated Cauchy products."""
    out = [np.array(p, dtype=float)]
    for _ in range(n_max - 1):
        out.append(mul(out[-1], p))
    return out


def log_shifted(alpha: float, k_max: int) -> np.ndarray:
    """Taylor coefficients of ``log(z + alpha)`` for ``alpha > 0``."""
    k = np.arange(1, k_max + 1)
    p = np.empty(k_max + 1)
    p[0] = np.log(alpha)
    p[1:] = (-1.0) ** (k + 1) / (k * alpha**k)
    return p


def reciprocal_shifted(alpha: float, k_max: int) -> np.ndarray:
    """Taylor coefficients of ``1 / (z + alpha)``."""
    k = np.arange(k_max + 1)
    return (-1.0) ** k / alpha ** (k + 1)


def horner(p: np.ndarray, z):
    """Evaluate the series at ``z`` (scalar or array) by nested multiplication."""
    z = np.asarray(z)
    acc = np.zeros(z.shape, dtype=np.result_type(z, p, float))
    for coef in p[::-1]:
        acc = acc * z + coef
    return acc


def derivative(p: np.ndarray) -> np.ndarray:
    """Coefficients of the term-wise derivative (length ``len(p) - 1``, at least 1)."""
    if len(p) == 1:
        return np.zeros(1)
    return p[1:] * np.arange(1, len(p))
