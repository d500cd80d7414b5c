"""Solve the preparation-angle system and the equatorial-cloner optimum.

The two-wire preparation circuit

    R0(t1)  P(0,1)  R1(t2)  P(1,0)  R0(t3)      (execution order, on |00>)

produces the real coefficient vector

    C1 = c1 c2 c3 + s1 s2 s3        C2 = s1 c2 c3 - c1 s2 s3
    C3 = c1 c2 s3 - s1 s2 c3        C4 = c1 s2 c3 + s1 c2 s3

with ci = cos(ti), si = sin(ti); the squared sum is identically 1.  Inverting
it uses three exact identities (A = 1 - 2 C3^2 - 2 C4^2, B = 1 - 2 C2^2 - 2 C4^2,
P = C1^2 C4^2 + C2^2 C3^2, Q = C1 C2 C3 C4):

    cos(2 t2)^2 = 1 - 4 P + 8 Q        (= A^2 + 4 (C1 C3 + C2 C4)^2 >= 0)
    cos(2 t3)   = A / cos(2 t2)
    cos(2 t1)   = B / cos(2 t2)

Note the discriminant: dividing by sqrt(1 - 4 P) instead -- i.e. dropping the
8 Q term -- is only correct when Q = 0 and silently breaks otherwise, so this
module keeps the full expression.  The closed form fixes cosines squared only;
both discriminant branches and all sine/cosine sign choices (2 x 4^3 = 128
candidates) are enumerated and filtered by reconstruction residual.  Near the
removable singularity cos(2 t2) ~ 0 the module falls back to damped least
squares from 8 fixed starts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares, minimize

from .gates import Circuit, CnotOp, RotationOp, apply_circuit
from .qnum import PureState, basis_state

__all__ = [
    "NoSolution",
    "DegenerateDenominator",
    "ConvergenceFailure",
    "PrepCoeffs",
    "AngleTriple",
    "PcSolution",
    "as_prep_coeffs",
    "coeff_formula",
    "prep_circuit",
    "simulate_prep",
    "reconstruct_coeffs",
    "residual_of",
    "solve_prep_angles",
    "pc_optimize",
    "bh_from_pc_system",
]


class NoSolution(ValueError):
    """Raised when no branch/sign combination reconstructs the coefficients."""


class DegenerateDenominator(ArithmeticError):
    """Signals the removable singularity cos(2 t2) ~ 0 of the closed form."""


class ConvergenceFailure(RuntimeError):
    """Raised when the constrained optimizer produces no feasible candidate."""


_TWO_PI = 2.0 * math.pi


def _wrap_angle(x: float) -> float:
    """Normalize to (-pi, pi]."""
    w = x % _TWO_PI
    if w > math.pi:
        w -= _TWO_PI
    return w


@dataclass(frozen=True)
class PrepCoeffs:
    """Real unit 4-vector (C1, C2, C3, C4) of the preparation state."""

    c: tuple[float, float, float, float]

    def __post_init__(self):
        vec = tuple(float(v) for v in self.c)
        if len(vec) != 4 or not all(math.isfinite(v) for v in vec):
            raise ValueError("PrepCoeffs needs four finite reals")
        norm_sq = sum(v * v for v in vec)
        if abs(norm_sq - 1.0) > 1e-9:
            raise ValueError(f"coefficients have squared norm {norm_sq}, not 1")
        object.__setattr__(self, "c", vec)

    def as_array(self) -> np.ndarray:
        return np.array(self.c)

    def as_state(self) -> PureState:
        return PureState(self.c)


def as_prep_coeffs(values) -> PrepCoeffs:
    """Coerce a 4-sequence, renormalizing when within 1e-6 of unit norm."""
    if isinstance(values, PrepCoeffs):
        return values
    vec = [float(v) for v in values]
    if len(vec) != 4:
        raise ValueError("expected four coefficients")
    norm = math.sqrt(sum(v * v for v in vec))
    if abs(norm - 1.0) > 1e-6:
        raise ValueError(f"coefficient norm {norm} too far from 1 to renormalize")
    return PrepCoeffs(tuple(v / norm for v in vec))


@dataclass(frozen=True)
class AngleTriple:
    """Rotation angles (theta1, theta2, theta3), each wrapped to (-pi, pi]."""

    theta1: float
    theta2: float
    theta3: float

    def __post_init__(self):
        for name in ("theta1", "theta2", "theta3"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, _wrap_angle(v))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.theta1, self.theta2, self.theta3)

    def degrees(self) -> tuple[float, float, float]:
        return tuple(math.degrees(t) for t in self.as_tuple())


@dataclass(frozen=True)
class PcSolution:
    """Feasible point (x, y, z) of the equatorial-cloner system with its value."""

    x: float
    y: float
    z: float
    f0_sq: float

    def __post_init__(self):
        if abs(self.x**2 + self.y**2 - self.f0_sq) > 1e-9:
            raise ValueError("f0_sq must equal x^2 + y^2")
        if abs(self.y**2 + self.z**2 - (1.0 - self.f0_sq)) > 1e-9:
            raise ValueError("y^2 + z^2 must equal 1 - f0_sq")
        if abs(2.0 * (self.x * self.y + self.y * self.z) - (2.0 * self.f0_sq - 1.0)) > 1e-9:
            raise ValueError("cross-term constraint violated")


def coeff_formula(t1: float, t2: float, t3: float) -> np.ndarray:
    """Closed-form coefficients of the preparation circuit."""
    c1, s1 = math.cos(t1), math.sin(t1)
    c2, s2 = math.cos(t2), math.sin(t2)
    c3, s3 = math.cos(t3), math.sin(t3)
    return np.array(
        [
            c1 * c2 * c3 + s1 * s2 * s3,
            s1 * c2 * c3 - c1 * s2 * s3,
            c1 * c2 * s3 - s1 * s2 * c3,
            c1 * s2 * c3 + s1 * c2 * s3,
        ]
    )


def prep_circuit(angles: AngleTriple) -> Circuit:
    """The two-wire preparation circuit in execution order."""
    return Circuit(
        2,
        (
            RotationOp(0, angles.theta1),
            CnotOp(0, 1),
            RotationOp(1, angles.theta2),
            CnotOp(1, 0),
            RotationOp(0, angles.theta3),
        ),
    )


def simulate_prep(angles: AngleTriple) -> PureState:
    """Run the preparation circuit on |00>."""
    return apply_circuit(basis_state(2, 0), prep_circuit(angles))


def reconstruct_coeffs(angles: AngleTriple) -> PrepCoeffs:
    """Coefficients reached by the given angles (closed trigonometric form)."""
    return PrepCoeffs(tuple(coeff_formula(*angles.as_tuple())))


def residual_of(angles: AngleTriple, coeffs: PrepCoeffs) -> float:
    """Max-norm reconstruction error of a candidate triple."""
    return float(np.abs(coeff_formula(*angles.as_tuple()) - coeffs.as_array()).max())


_DEGENERATE_U = 1e-7
_CLOSED_TOL = 1e-9
_ACCEPT_TOL = 1e-6

_FALLBACK_STARTS = (
    (0.0, 0.0, 0.0),
    (math.pi / 8, 0.0, math.pi / 8),
    (math.pi / 4, math.pi / 4, math.pi / 4),
    (-math.pi / 8, math.pi / 3, -math.pi / 8),
    (math.pi / 3, -math.pi / 4, math.pi / 6),
    (1.0, 1.0, -1.0),
    (-1.0, 0.5, 1.0),
    (0.3, -0.3, 0.9),
)


def _angle_candidates(cos_sq: float) -> list[float]:
    """All quadrant placements of an angle with the given squared cosine."""
    cos_sq = min(max(cos_sq, 0.0), 1.0)
    ca = math.sqrt(cos_sq)
    sa = math.sqrt(1.0 - cos_sq)
    cands = []
    for sc, ss in itertools.product((1.0, -1.0), repeat=2):
        angle = math.atan2(ss * sa, sc * ca)
        if not any(abs(angle - other) < 1e-12 for other in cands):
            cands.append(angle)
    return cands


def _closed_form_candidates(c: np.ndarray) -> list[tuple[float, float, float]]:
    c1, c2, c3, c4 = c
    big_a = 1.0 - 2.0 * c3 * c3 - 2.0 * c4 * c4
    big_b = 1.0 - 2.0 * c2 * c2 - 2.0 * c4 * c4
    disc = (
        1.0
        - 4.0 * (c1 * c1 * c4 * c4 + c2 * c2 * c3 * c3)
        + 8.0 * c1 * c2 * c3 * c4
    )
    if disc < -1e-12:
        raise NoSolution(f"negative discriminant {disc}")
    disc = max(disc, 0.0)
    u_mag = math.sqrt(disc)
    if u_mag < _DEGENERATE_U:
        raise DegenerateDenominator(
            f"cos(2 t2) magnitude {u_mag:.2e} too small for the closed form"
        )
    out = []
    for u in (u_mag, -u_mag):
        v = big_a / u
        w = big_b / u
        if max(abs(v), abs(w)) > 1.0 + 1e-9:
            continue
        t1s = _angle_candidates((1.0 + w) / 2.0)
        t2s = _angle_candidates((1.0 + u) / 2.0)
        t3s = _angle_candidates((1.0 + v) / 2.0)
        out.extend(itertools.product(t1s, t2s, t3s))
    return out


def _fallback_candidates(c: np.ndarray) -> list[tuple[float, float, float]]:
    found = []
    for start in _FALLBACK_STARTS:
        result = least_squares(
            lambda t: coeff_formula(*t) - c, start, xtol=1e-14, ftol=1e-14
        )
        if np.abs(result.fun).max() < _ACCEPT_TOL:
            found.append(tuple(result.x))
    return found


def _angles_close(a: AngleTriple, b: AngleTriple, tol: float = 1e-7) -> bool:
    return all(
        abs(_wrap_angle(x - y)) < tol
        for x, y in zip(a.as_tuple(), b.as_tuple())
    )


def solve_prep_angles(coeffs) -> list[AngleTriple]:
    """All angle triples reproducing the coefficients, verified and deduplicated.

    Closed-form candidates are filtered at residual 1e-9; when the closed form
    degenerates (or unexpectedly yields nothing) the least-squares fallback is
    accepted at 1e-6.  Results are sorted by residual, then lexicographically.
    """
    coeffs = as_prep_coeffs(coeffs)
    target = coeffs.as_array()
    accepted: list[tuple[float, AngleTriple]] = []

    def consider(raw_triple, tol):
        triple = AngleTriple(*raw_triple)
        res = residual_of(triple, coeffs)
        if res < tol and not any(_angles_close(triple, t) for _, t in accepted):
            accepted.append((res, triple))

    try:
        for cand in _closed_form_candidates(target):
            consider(cand, _CLOSED_TOL)
    except DegenerateDenominator:
        pass
    if not accepted:
        for cand in _fallback_candidates(target):
            consider(cand, _ACCEPT_TOL)
    if not accepted:
        raise NoSolution("no branch or sign assignment reconstructs the coefficients")
    accepted.sort(key=lambda item: (item[0], item[1].as_tuple()))
    return [triple for _, triple in accepted]


def _project_feasible(point: np.ndarray, constraints) -> np.ndarray:
    """Nudge a point onto the constraint manifold (small least-squares solve)."""
    result = least_squares(
        lambda p: np.array([g(p) for g in constraints]),
        point,
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
    )
    return result.x


def _maximize_f0(constraints, objective_vars: int, n_starts: int, seed: int):
    """Shared multistart SLSQP driver; returns the best feasible point."""
    rng = np.random.default_rng(seed)
    cons = [{"type": "eq", "fun": g} for g in constraints]
    best = None
    for _ in range(n_starts):
        start = _project_feasible(rng.normal(size=objective_vars), constraints)
        result = minimize(
            lambda p: -(p[0] ** 2 + p[1] ** 2),
            start,
            method="SLSQP",
            constraints=cons,
            options={"ftol": 1e-14, "maxiter": 300},
        )
        point = _project_feasible(result.x, constraints)
        if max(abs(g(point)) for g in constraints) > 1e-9:
            continue
        value = point[0] ** 2 + point[1] ** 2
        if best is None or value > best[0] + 1e-15:
            best = (value, point)
    if best is None:
        raise ConvergenceFailure("no feasible optimizer candidate")
    return best


def pc_optimize(n_starts: int = 100, seed: int = 7) -> PcSolution:
    """Maximize f0^2 = x^2 + y^2 over the equatorial-cloner constraint set.

    Constraints: x^2 + 2 y^2 + z^2 = 1 (normalization) and
    2 (x y + y z) = x^2 - z^2 (equal scaling of both clone channels).
    Multistart SLSQP from seeded feasible starts; the sign-flipped twin of the
    optimum is folded to x > 0.
    """
    constraints = (
        lambda p: p[0] ** 2 + 2.0 * p[1] ** 2 + p[2] ** 2 - 1.0,
        lambda p: 2.0 * (p[0] * p[1] + p[1] * p[2]) - (p[0] ** 2 - p[2] ** 2),
    )
    value, point = _maximize_f0(constraints, 3, n_starts, seed)
    x, y, z = (float(v) for v in point)
    if x < 0:
        x, y, z = -x, -y, -z
    return PcSolution(x, y, z, x * x + y * y)


def bh_from_pc_system(n_starts: int = 100, seed: int = 11) -> PcSolution:
    """Same optimization with z frozen at 0; lands on f0^2 = 5/6."""
    constraints = (
        lambda p: p[0] ** 2 + 2.0 * p[1] ** 2 - 1.0,
        lambda p: 2.0 * p[0] * p[1] - p[0] ** 2,
    )
    value, point = _maximize_f0(constraints, 2, n_starts, seed)
    x, y = (float(v) for v in point)
    if x < 0:
        x, y = -x, -y
    return PcSolution(x, y, 0.0, x * x + y * y)
