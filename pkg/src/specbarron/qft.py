"""Fourier transforms of operators on a finite phase space.

The transform of an N x N matrix T is the function

    F(T)(xi) = tr(T U_xi*)

on the N^2 phase-space points xi, and with the 1/N weight on the transform
domain the inversion formula reads

    T = (1/N) sum_xi F(T)(xi) U_xi .

Operator composition becomes twisted convolution,

    F(S T) = F(S) *_m F(T),
    (f *_m g)(xi) = (1/N) sum_eta f(xi - eta) g(eta) m(xi - eta, eta),

with m the multiplier of the Weyl system.  The argument order of m in the
kernel is pinned by the composition identity above and by a calibration
test; do not change one without the other.

``qft_naive`` evaluates the defining traces at O(N^2) per point and is the
reference implementation.  ``qft_fast`` computes the same values for a
single cyclic factor by gathering the generalized diagonals
d_a(i) = T[(i+a) mod n, i] and running one length-n FFT per offset
(F(T)(a, b) = sum_i d_a(i) omega^{-b i}), at O(N^2 log N) total.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatchError, GroupMismatchError
from .phase_space import Group, difference_table, point_arrays
from .weyl import STACK_LIMIT, WeylSystem, weyl_stack


@dataclass(frozen=True, eq=False)
class PhaseFunction:
    """Complex function on the N^2 transform-domain points.

    ``values[i]`` is the value at ``group.point_at(i)``; the array is
    frozen after construction.
    """

    group: Group
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex).reshape(-1)
        if values.size != self.group.phase_card:
            raise DimensionMismatchError(
                f"expected {self.group.phase_card} values, got {values.size}"
            )
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


def _check_operator(group: Group, t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=complex)
    n = group.dim_h
    if t.shape != (n, n):
        raise DimensionMismatchError(f"expected a {n}x{n} operator, got shape {t.shape}")
    return t


def _check_same_group(group: Group, f: PhaseFunction):
    if f.group != group:
        raise GroupMismatchError(
            f"phase function over {f.group.factors} used with group {group.factors}"
        )


def qft_naive(system: WeylSystem, t: np.ndarray) -> PhaseFunction:
    """Transform by direct evaluation of tr(T U_xi*) at every point."""
    group = system.group
    t = _check_operator(group, t)
    if group.dim_h <= STACK_LIMIT:
        values = np.einsum("ij,kij->k", t, weyl_stack(system).conj())
    else:
        values = np.empty(group.phase_card, dtype=complex)
        for i, p in enumerate(group.points()):
            adjoint = system.operator(p).conj().T
            values[i] = np.einsum("ij,ji->", t, adjoint)
    return PhaseFunction(group, values)


def qft_fast(system: WeylSystem, t: np.ndarray) -> PhaseFunction:
    """FFT-based transform for a single cyclic factor.

    Falls back to :func:`qft_naive` for multi-factor groups.
    """
    group = system.group
    t = _check_operator(group, t)
    if len(group.factors) != 1:
        return qft_naive(system, t)
    n = group.dim_h
    col = np.arange(n)
    rows = (col[None, :] + col[:, None]) % n        # rows[a, i] = (i + a) mod n
    diags = t[rows, col[None, :]]                   # diags[a, i] = T[(i+a)%n, i]
    values = np.fft.fft(diags, axis=1).reshape(-1)
    return PhaseFunction(group, values)


def qft(system: WeylSystem, t: np.ndarray) -> PhaseFunction:
    """Default transform: fast path when available, else the direct one."""
    if len(system.group.factors) == 1:
        return qft_fast(system, t)
    return qft_naive(system, t)


def iqft(system: WeylSystem, f: PhaseFunction) -> np.ndarray:
    """Inverse transform (1/N) sum_xi f(xi) U_xi."""
    group = system.group
    _check_same_group(group, f)
    n = group.dim_h
    if len(group.factors) == 1:
        # T[(i+a)%n, i] = (1/n) sum_b f(a, b) omega^{b i}, one inverse FFT per offset
        rowsum = np.fft.ifft(f.values.reshape(n, n), axis=1)
        col = np.arange(n)
        rows = (col[None, :] + col[:, None]) % n
        t = np.zeros((n, n), dtype=complex)
        t[rows, col[None, :]] = rowsum
        return t
    if n <= STACK_LIMIT:
        return group.haar_weight * np.einsum("k,kij->ij", f.values, weyl_stack(system))
    t = np.zeros((n, n), dtype=complex)
    for i, p in enumerate(group.points()):
        t += f.values[i] * system.operator(p)
    return group.haar_weight * t


@lru_cache(maxsize=8)
def _twist_kernel(system: WeylSystem) -> np.ndarray:
    """Kernel K[i, j] = m(point_i - point_j, point_j) for the convolution."""
    group = system.group
    a, b = point_arrays(group)
    diff = difference_table(group)
    turns = np.zeros(diff.shape)
    for c, n in enumerate(group.factors):
        turns += ((b[diff][:, :, c] * a[None, :, c]) % n) / n
    kernel = np.exp(2j * np.pi * (turns % 1.0))
    kernel.flags.writeable = False
    return kernel


def twisted_convolution(system: WeylSystem, f: PhaseFunction, g: PhaseFunction) -> PhaseFunction:
    """(f *_m g)(xi) = (1/N) sum_eta f(xi - eta) g(eta) m(xi - eta, eta)."""
    group = system.group
    _check_same_group(group, f)
    _check_same_group(group, g)
    if group.dim_h <= STACK_LIMIT:
        diff = difference_table(group)
        kernel = _twist_kernel(system)
        out = group.haar_weight * ((f.values[diff] * kernel) @ g.values)
        return PhaseFunction(group, out)
    # Row-at-a-time fallback: same sums without the quadratic tables.
    a, b = point_arrays(group)
    factors = np.array(group.factors)
    weights = np.ones(len(factors), dtype=np.int64)
    for c in range(len(factors) - 2, -1, -1):
        weights[c] = weights[c + 1] * factors[c + 1]
    out = np.empty(group.phase_card, dtype=complex)
    for i in range(group.phase_card):
        a_diff = (a[i] - a) % factors
        b_diff = (b[i] - b) % factors
        idx = (a_diff @ weights) * group.dim_h + (b_diff @ weights)
        turns = ((b_diff * a) % factors) / factors
        kernel = np.exp(2j * np.pi * (turns.sum(axis=1) % 1.0))
        out[i] = group.haar_weight * np.sum(f.values[idx] * kernel * g.values)
    return PhaseFunction(group, out)
