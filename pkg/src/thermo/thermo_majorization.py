"""
Beta-ordering and thermo-majorization curves for population transitions.
"""
import csv
import io
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Optional, Sequence

import numpy as np

from src.config import config
from src.exceptions import DimensionMismatchError, DomainError, ValidationError
from src.thermo.core import BetaLike, Hamiltonian, as_beta


@dataclass(frozen=True)
class BetaOrderedSpectrum:
    """(p_i, E_i) pairs sorted by p_i e^{beta E_i}, descending."""
    probabilities: tuple[float, ...]
    energies: tuple[float, ...]
    permutation: tuple[int, ...]
    beta: float


@dataclass(frozen=True)
class ThermoCurve:
    """Piecewise-linear concave curve through (0, 0), ..., (Z, 1)."""
    xs: tuple[float, ...]
    ys: tuple[float, ...]

    @property
    def Z(self) -> float:  # pylint: disable=invalid-name
        """Partition function, the final abscissa."""
        return self.xs[-1]

    @property
    def points(self) -> list[tuple[float, float]]:
        """Breakpoints as (x, y) pairs."""
        return list(zip(self.xs, self.ys))


def _validated_distribution(diag: Sequence[float], tol: float) -> np.ndarray:
    probs = np.asarray(diag, dtype=float)
    if probs.ndim != 1 or probs.size == 0:
        raise ValidationError("population vector must be a non-empty 1D list", field="diag")
    if np.any(probs < -tol):
        raise DomainError(f"negative probability {float(probs.min())} in population vector")
    total = float(probs.sum())
    if abs(total - 1.0) > tol:
        raise ValidationError(f"populations sum to {total}, expected 1", field="diag")
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def beta_order(diag: Sequence[float], H: Hamiltonian, beta: BetaLike,
               tol: Optional[float] = None) -> BetaOrderedSpectrum:
    """
    Sorts levels by p_i e^{beta E_i} in non-increasing order.

    Weighted values within ``tol`` of each other are ties and are ordered by
    ascending energy, which leaves the curve geometry unchanged.
    """
    tol = config.tolerances.trace if tol is None else tol
    beta = as_beta(beta)
    probs = _validated_distribution(diag, tol)
    if probs.size != H.dimension:
        raise DimensionMismatchError(H.dimension, probs.size, "population vector")

    energies = [float(e) for e in H.energies]
    weighted = [float(w) for w in probs * np.exp(beta.beta * H.energies)]

    def compare(i: int, j: int) -> int:
        scale = max(1.0, abs(weighted[i]), abs(weighted[j]))
        if abs(weighted[i] - weighted[j]) <= tol * scale:
            by_energy = (energies[i] > energies[j]) - (energies[i] < energies[j])
            return by_energy or (i > j) - (i < j)
        return -1 if weighted[i] > weighted[j] else 1

    order = sorted(range(probs.size), key=cmp_to_key(compare))
    return BetaOrderedSpectrum(
        probabilities=tuple(float(probs[k]) for k in order),
        energies=tuple(float(energies[k]) for k in order),
        permutation=tuple(order),
        beta=beta.beta,
    )


def build_curve(spectrum: BetaOrderedSpectrum) -> ThermoCurve:
    """Joins the cumulative points (sum e^{-beta E_i}, sum p_i)."""
    widths = np.exp(-spectrum.beta * np.asarray(spectrum.energies))
    xs = np.concatenate([[0.0], np.cumsum(widths)])
    ys = np.concatenate([[0.0], np.cumsum(spectrum.probabilities)])
    ys[-1] = 1.0
    return ThermoCurve(xs=tuple(float(x) for x in xs), ys=tuple(float(y) for y in ys))


def thermo_curve(diag: Sequence[float], H: Hamiltonian, beta: BetaLike) -> ThermoCurve:
    """Shortcut for build_curve(beta_order(...))."""
    return build_curve(beta_order(diag, H, beta))


def curve_value(curve: ThermoCurve, x) -> np.ndarray:
    """Evaluates the curve at x by linear interpolation."""
    return np.interp(x, curve.xs, curve.ys)


def curve_dominates(fp: ThermoCurve, fq: ThermoCurve, tol: Optional[float] = None) -> bool:
    """
    True iff fp(x) >= fq(x) - tol everywhere.

    Both curves are piecewise linear, so checking fp at fq's breakpoints and
    fq at fp's breakpoints is enough.
    """
    tol = config.tolerances.curve if tol is None else tol
    if abs(fp.Z - fq.Z) > tol * max(1.0, fp.Z):
        raise ValidationError(
            f"curves have different partition functions ({fp.Z} vs {fq.Z})", field="curve")

    fq_xs, fq_ys = np.asarray(fq.xs), np.asarray(fq.ys)
    fp_xs, fp_ys = np.asarray(fp.xs), np.asarray(fp.ys)
    if np.any(curve_value(fp, fq_xs) < fq_ys - tol):
        return False
    return not np.any(curve_value(fq, fp_xs) > fp_ys + tol)


def diagonal_feasible(p_vec: Sequence[float], q_vec: Sequence[float], H: Hamiltonian,
                      beta: BetaLike, tol: Optional[float] = None) -> bool:
    """Whether populations p can be mapped to q by a thermal operation."""
    return curve_dominates(thermo_curve(p_vec, H, beta), thermo_curve(q_vec, H, beta), tol)


@dataclass(frozen=True)
class QubitDiagonalVerdict:
    """Feasibility of a qubit population transition and its beta-order case."""
    feasible: bool
    case: str


def qubit_diagonal_feasible(p: float, q: float, H: Hamiltonian, beta: BetaLike,
                            tol: Optional[float] = None) -> QubitDiagonalVerdict:
    """
    Four-case classifier for ground populations p -> q.

    A population f is ground-first when f/(1-f) >= e^{beta dE}. The cases are
    (a) both ground-first, (b) both excited-first, (c) p ground-first and q
    excited-first, (d) the reverse. Conditions are compared in curve-value
    form so they agree with curve_dominates at the same tolerance.
    """
    tol = config.tolerances.curve if tol is None else tol
    if H.dimension != 2:
        raise DimensionMismatchError(2, H.dimension, "Hamiltonian")
    for name, value in (("p", p), ("q", q)):
        if not 0.0 <= value <= 1.0:
            raise DomainError(f"population {name}={value} outside [0, 1]")

    boltzmann = float(np.exp(as_beta(beta).beta * H.levels[1]))

    def ground_first(f: float) -> bool:
        return f >= boltzmann * (1.0 - f)

    p_ground, q_ground = ground_first(p), ground_first(q)
    if p_ground and q_ground:
        return QubitDiagonalVerdict(feasible=q <= p + tol, case="a")
    if not p_ground and not q_ground:
        return QubitDiagonalVerdict(feasible=p <= q + tol, case="b")
    if p_ground:
        # p/(1-q) >= r/(1-r)
        return QubitDiagonalVerdict(feasible=1.0 - q <= p / boltzmann + tol, case="c")
    # p/(1-q) <= r/(1-r)
    return QubitDiagonalVerdict(feasible=q <= 1.0 - p / boltzmann + tol, case="d")


def curve_to_csv(curve: ThermoCurve) -> str:
    """CSV with header "x,y" and one breakpoint per row."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["x", "y"])
    for x, y in curve.points:
        writer.writerow([repr(x), repr(y)])
    return buffer.getvalue()
