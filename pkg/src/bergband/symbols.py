"""Radial symbols: representation, moment-system synthesis, and periodic lifts.

A profile is a real polynomial b(r) = c0 + sum_m c_m r^{2m+1} supported on
[0, support] (default support 1/2, c0 = 0).  The odd monomials r^{2m+1}
are exactly the family whose moments against r^{2n+1} form the solvable
Gram system used to hit prescribed eigenvalue targets; the constant term
exists only so the unit symbol (the identity operator's symbol) fits the
same closed-form moment machinery.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .geometry import CellGeometry

__all__ = [
    "RadialProfile",
    "TargetSpec",
    "IllConditionedError",
    "synthesize_profile",
    "eval_disc_symbol",
    "eval_cell_symbol",
    "eval_periodic_symbol",
    "profile_to_json",
    "profile_from_json",
]

MAX_TARGETS = 8
GRAM_COND_LIMIT = 1e12


class IllConditionedError(ValueError):
    """Synthesis Gram system too ill-conditioned to solve reliably."""

    def __init__(self, condition: float, limit: float) -> None:
        self.condition = condition
        self.limit = limit
        super().__init__(
            f"moment Gram matrix condition number {condition:.3e} exceeds {limit:.1e}"
        )


@dataclass(frozen=True)
class RadialProfile:
    """Radial symbol b(r) = constant_term + sum_{m=1..K} coeffs[m-1] r^{2m+1}.

    b is extended by zero outside [0, support]; support <= 1/2 for all
    synthesized profiles, which keeps the symbol compactly supported
    inside the disc and makes the associated Toeplitz operator compact.
    """

    coeffs: tuple[float, ...]
    constant_term: float = 0.0
    support: float = 0.5

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not (0.0 < self.support <= 1.0):
            raise ValueError(f"support radius must be in (0, 1], got {self.support}")

    @property
    def K(self) -> int:
        return len(self.coeffs)

    @classmethod
    def unit(cls) -> "RadialProfile":
        """The constant symbol a == 1 on the whole disc (identity operator)."""
        return cls(coeffs=(), constant_term=1.0, support=1.0)

    def __call__(self, r: float | np.ndarray) -> float | np.ndarray:
        """Evaluate b(r), including the zero extension beyond the support."""
        r = np.asarray(r, dtype=float)
        val = np.full(r.shape, self.constant_term, dtype=float)
        for m, c in enumerate(self.coeffs, start=1):
            val += c * r ** (2 * m + 1)
        val = np.where(r <= self.support, val, 0.0)
        return float(val) if val.ndim == 0 else val

    def sup_norm(self, n_samples: int = 4001) -> float:
        """sup |b| over [0, support] by dense sampling (b is a polynomial)."""
        r = np.linspace(0.0, self.support, n_samples)
        return float(np.max(np.abs(self(r))))


@dataclass(frozen=True)
class TargetSpec:
    """Prescribed spectral targets with proximity and gap radii."""

    targets: tuple[float, ...]
    epsilon: float
    delta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", tuple(float(t) for t in self.targets))
        if len(set(self.targets)) != len(self.targets):
            raise ValueError("targets must be pairwise distinct")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not (self.epsilon < self.delta):
            raise ValueError(
                f"need epsilon < delta, got epsilon={self.epsilon}, delta={self.delta}"
            )


def _gram_matrix(K: int) -> np.ndarray:
    # G_{nm} = integral_0^{1/2} r^{2n+1} r^{2m+1} dr = (1/2)^{2n+2m+3} / (2n+2m+3)
    n = np.arange(1, K + 1)
    p = n[:, None] + n[None, :]
    return 0.5 ** (2 * p + 3) / (2 * p + 3)


def synthesize_profile(
    targets,
    moment_constant: str = "corrected",
) -> RadialProfile:
    """Solve the moment system so that the n-th disc eigenvalue hits targets[n-1].

    The K x K Gram system G c = rhs uses rhs_n = x_n / (2 (n+1)) under the
    corrected moment normalization (see ``disc_spectrum.moment_eigenvalue``);
    with ``moment_constant="literal"`` the right-hand side becomes
    pi x_n / (n+1) instead, which only rescales the profile.

    Raises
    ------
    IllConditionedError
        If K > 8 or the Gram condition number exceeds 1e12.  The Gram
        matrix is Hilbert-like, so conditioning degrades geometrically
        with K; capping at 8 keeps the solve trustworthy in doubles.
    """
    x = np.asarray(tuple(targets), dtype=float)
    K = x.size
    if K == 0:
        return RadialProfile(coeffs=())
    if K > MAX_TARGETS:
        raise IllConditionedError(condition=float("inf"), limit=GRAM_COND_LIMIT)

    G = _gram_matrix(K)
    cond = float(np.linalg.cond(G))
    if cond > GRAM_COND_LIMIT:
        raise IllConditionedError(condition=cond, limit=GRAM_COND_LIMIT)

    n = np.arange(1, K + 1)
    if moment_constant == "corrected":
        rhs = x / (2.0 * (n + 1))
    elif moment_constant == "literal":
        rhs = np.pi * x / (n + 1)
    else:
        raise ValueError(f"unknown moment_constant {moment_constant!r}")
    c = np.linalg.solve(G, rhs)
    return RadialProfile(coeffs=tuple(c))


def eval_disc_symbol(profile: RadialProfile, z: complex | np.ndarray):
    """Symbol on the unit disc: b(|z|), zero outside the profile support."""
    z = np.asarray(z, dtype=complex)
    val = profile(np.abs(z))
    return val


def eval_cell_symbol(profile: RadialProfile, cell: CellGeometry, z):
    """Symbol on the cell: b(|z|/R0) on the disc part, zero on the strip."""
    z = np.asarray(z, dtype=complex)
    r = np.abs(z) / cell.R0
    val = np.where(r < 1.0, profile(r), 0.0)
    return float(val) if val.ndim == 0 else val


def eval_periodic_symbol(profile: RadialProfile, cell: CellGeometry, z):
    """1-periodic symbol on the periodic domain.

    Each point is reduced to the centered cell by subtracting the nearest
    integer to Re z; rounding (rather than floor) is what makes the
    reduction land in the cell centered at the origin.
    """
    z = np.asarray(z, dtype=complex)
    m = np.round(z.real)
    return eval_cell_symbol(profile, cell, z - m)


def profile_to_json(profile: RadialProfile, R0: float) -> str:
    doc = {"R0": R0, "coeffs": list(profile.coeffs)}
    if profile.constant_term != 0.0 or profile.support != 0.5:
        doc["constant_term"] = profile.constant_term
        doc["support"] = profile.support
    return json.dumps(doc, indent=2)


def profile_from_json(text: str) -> tuple[RadialProfile, float]:
    doc = json.loads(text)
    profile = RadialProfile(
        coeffs=tuple(doc["coeffs"]),
        constant_term=float(doc.get("constant_term", 0.0)),
        support=float(doc.get("support", 0.5)),
    )
    return profile, float(doc["R0"])
