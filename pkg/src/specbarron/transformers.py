"""Linear maps on operators that are diagonal in the Weyl coefficients.

Every transformer here multiplies the transform of its input by a fixed
symbol on the phase-space points:  apply(tr, T) = F^{-1}[symbol . F(T)].
The stock symbols are

    Q(s)          (1 + gamma^2)^s
    Laplacian     -gamma^2
    Resolvent(a)  1 / (a + gamma^2),  a > 0

so Resolvent(a) inverts a*I - Laplacian, and Q(s) is an isometry from the
B^{2s} norm onto the B^0 norm.  Symbols are stored as arrays, never as
N^2 x N^2 matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import GroupMismatchError
from .phase_space import Group
from .qft import PhaseFunction, iqft, qft
from .spaces import WeightFunction, barron_norm
from .weyl import WeylSystem


@dataclass(frozen=True, eq=False)
class DiagonalTransformer:
    group: Group
    gamma: WeightFunction
    symbol: np.ndarray
    kind: str

    def __post_init__(self):
        symbol = np.asarray(self.symbol)
        if symbol.shape != (self.group.phase_card,):
            raise GroupMismatchError(
                f"symbol must have {self.group.phase_card} entries, got shape {symbol.shape}"
            )
        if not np.all(np.isfinite(symbol)):
            raise ValueError("transformer symbol must be finite")
        symbol = symbol.copy()
        symbol.flags.writeable = False
        object.__setattr__(self, "symbol", symbol)


def q_power(gamma: WeightFunction, s: float) -> DiagonalTransformer:
    """Q(s), symbol (1 + gamma^2)^s; negative s gives the inverse symbol."""
    symbol = np.power(1.0 + gamma.values ** 2, s)
    return DiagonalTransformer(gamma.group, gamma, symbol, f"Q({s:g})")


def laplacian(gamma: WeightFunction) -> DiagonalTransformer:
    """Laplacian, symbol -gamma^2."""
    return DiagonalTransformer(gamma.group, gamma, -(gamma.values ** 2), "Laplacian")


def resolvent(gamma: WeightFunction, alpha: float) -> DiagonalTransformer:
    """Inverse of alpha*I - Laplacian, symbol 1 / (alpha + gamma^2)."""
    if alpha <= 0:
        raise ValueError(f"resolvent parameter must be positive, got {alpha}")
    symbol = 1.0 / (alpha + gamma.values ** 2)
    return DiagonalTransformer(gamma.group, gamma, symbol, f"Resolvent({alpha:g})")


def custom(gamma: WeightFunction, symbol: np.ndarray) -> DiagonalTransformer:
    return DiagonalTransformer(gamma.group, gamma, symbol, "Custom")


def inverse(tr: DiagonalTransformer) -> DiagonalTransformer:
    """Transformer with the reciprocal symbol; requires a nonvanishing symbol."""
    if np.any(tr.symbol == 0):
        raise ValueError(f"{tr.kind} has a vanishing symbol and is not invertible")
    return DiagonalTransformer(tr.group, tr.gamma, 1.0 / tr.symbol, f"{tr.kind}^-1")


def apply(system: WeylSystem, tr: DiagonalTransformer, t: np.ndarray) -> np.ndarray:
    """F^{-1}[symbol . F(T)]."""
    if tr.group != system.group:
        raise GroupMismatchError(
            f"transformer over {tr.group.factors} used with group {system.group.factors}"
        )
    f = qft(system, t)
    return iqft(system, PhaseFunction(system.group, tr.symbol * f.values))


class IsometryPair(NamedTuple):
    lhs: float
    rhs: float


def q_isometry_pair(
    system: WeylSystem, t: np.ndarray, s: float, gamma: WeightFunction
) -> IsometryPair:
    """Both sides of ||Q(s) T||_{B^0} = ||T||_{B^{2s}}."""
    if s < 0:
        raise ValueError(f"smoothness order s must be >= 0, got {s}")
    lhs = barron_norm(system, apply(system, q_power(gamma, s), t), 0.0, gamma)
    rhs = barron_norm(system, t, 2.0 * s, gamma)
    return IsometryPair(lhs, rhs)


def resolvent_apply(
    system: WeylSystem, t: np.ndarray, alpha: float, gamma: WeightFunction
) -> np.ndarray:
    """Apply (alpha*I - Laplacian)^{-1}; contracts every B^s norm by 1/alpha."""
    return apply(system, resolvent(gamma, alpha), t)
