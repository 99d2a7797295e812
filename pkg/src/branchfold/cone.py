"""Constant-curvature cone metrics and rational cone angles.

Angles are exact rational multiples of ``2 pi`` wherever possible.  A cone
angle ``2 pi p / q`` in lowest terms corresponds to the codimension-2 model
``(h, k) = (q, p)``, whose holonomy is a rotation of order ``q``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import ParamOutOfRange

FLOAT_TOLERANCE = 1e-12
MAX_DENOMINATOR = 10_000


class RadiusBoundWarning(UserWarning):
    """A radius passes the conventional spherical bound but not the literal ``k / sqrt(pi)`` one."""


@dataclass(frozen=True)
class ConeParams:
    k: float
    r: float
    d_link: float
    t1: float
    t2: float
    literal_bound: bool = False

    def __post_init__(self) -> None:
        for name in ("k", "r", "d_link", "t1", "t2"):
            if not math.isfinite(getattr(self, name)):
                raise ParamOutOfRange(f"{name} must be finite")
        if self.r <= 0:
            raise ParamOutOfRange("radius must be positive")
        if self.d_link < 0:
            raise ParamOutOfRange("link distance must be nonnegative")
        if not (0 <= self.t1 < self.r and 0 <= self.t2 < self.r):
            raise ParamOutOfRange("t1 and t2 must lie in [0, r)")
        if self.k > 0:
            conventional = math.pi / math.sqrt(self.k)
            literal = self.k / math.sqrt(math.pi)
            bound = literal if self.literal_bound else conventional
            if self.r > bound:
                raise ParamOutOfRange(f"radius {self.r} exceeds the bound {bound:.6g}")
            if not self.literal_bound and self.r > literal:
                warnings.warn(f"radius {self.r} exceeds k/sqrt(pi) = {literal:.6g}",
                              RadiusBoundWarning, stacklevel=3)

    @property
    def theta(self) -> float:
        return min(self.d_link, math.pi)


def _clamp(x: float, lo: float, hi: float) -> float:
    return max(lo, min(hi, x))


def cone_distance(p: ConeParams) -> float:
    """Length of the side opposite the apex in the model triangle with legs ``t1, t2``."""
    t1, t2, th, k = p.t1, p.t2, p.theta, p.k
    if k == 0:
        return math.sqrt(max(t1 * t1 + t2 * t2 - 2 * t1 * t2 * math.cos(th), 0.0))
    if k > 0:
        s = math.sqrt(k)
        c = (math.cos(s * t1) * math.cos(s * t2)
             + math.sin(s * t1) * math.sin(s * t2) * math.cos(th))
        return math.acos(_clamp(c, -1.0, 1.0)) / s
    s = math.sqrt(-k)
    c = (math.cosh(s * t1) * math.cosh(s * t2)
         - math.sinh(s * t1) * math.sinh(s * t2) * math.cos(th))
    return math.acosh(max(c, 1.0)) / s


def distance(k: float, t1: float, t2: float, theta: float, r: float | None = None,
             literal_bound: bool = False) -> float:
    """Convenience wrapper: ``theta`` is the link distance, ``r`` defaults to just past the legs."""
    if r is None:
        r = max(t1, t2) * 2 + 1.0
        if k > 0:
            r = min(r, math.pi / math.sqrt(k))
    return cone_distance(ConeParams(k, r, theta, t1, t2, literal_bound))


# ---------------------------------------------------------------------------
# Angles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConeAngle:
    """An angle stored as ``turns * 2 pi`` with ``turns`` exact, or as raw radians."""

    turns: Fraction | None = None
    radians: float | None = None

    def __post_init__(self) -> None:
        if (self.turns is None) == (self.radians is None):
            raise ParamOutOfRange("give exactly one of turns or radians")
        if self.turns is not None and self.turns <= 0:
            raise ParamOutOfRange("angles must be positive")
        if self.radians is not None and not (self.radians > 0 and math.isfinite(self.radians)):
            raise ParamOutOfRange("angles must be positive and finite")

    @classmethod
    def of_turns(cls, p: int, q: int = 1) -> "ConeAngle":
        return cls(turns=Fraction(p, q))

    @classmethod
    def parse(cls, text: str) -> "ConeAngle":
        """``"p/q tau"`` means ``2 pi p / q``; anything else is decimal radians."""
        text = text.strip()
        if text.endswith("tau"):
            return cls(turns=Fraction(text[:-3].strip() or "1"))
        try:
            return cls(radians=float(text))
        except ValueError as exc:
            raise ParamOutOfRange(f"cannot read angle {text!r}") from exc

    @property
    def value(self) -> float:
        return float(self.turns) * 2 * math.pi if self.turns is not None else self.radians

    def exact_turns(self) -> Fraction | None:
        if self.turns is not None:
            return self.turns
        return rational_turns(self.radians)

    def __str__(self) -> str:
        if self.turns is None:
            return f"{self.radians!r} rad"
        t = self.turns
        return f"{t.numerator}/{t.denominator} tau" if t.denominator != 1 else f"{t.numerator} tau"


def rational_turns(radians: float, tol: float = FLOAT_TOLERANCE,
                   max_denominator: int = MAX_DENOMINATOR) -> Fraction | None:
    """Continued-fraction test: the best approximation of ``radians / 2 pi`` if it is within ``tol``."""
    x = radians / (2 * math.pi)
    approx = Fraction(x).limit_denominator(max_denominator)
    if approx > 0 and abs(float(approx) - x) <= tol * max(1.0, abs(x)):
        return approx
    return None


@dataclass(frozen=True)
class AngleModel:
    h: int
    k: int


class Irrational:
    """Marker for an angle that is not a rational multiple of ``2 pi``."""

    def __repr__(self) -> str:
        return "Irrational"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Irrational)

    def __hash__(self) -> int:
        return hash("Irrational")


INFINITE = math.inf


def angle_of_model(h: int, k: int) -> ConeAngle:
    if h < 1 or k < 1 or math.gcd(h, k) != 1:
        raise ParamOutOfRange(f"(h, k) = ({h}, {k}) must be coprime positive integers")
    return ConeAngle(turns=Fraction(k, h))


def model_of_angle(a: ConeAngle) -> AngleModel | Irrational:
    t = a.exact_turns()
    if t is None:
        return Irrational()
    return AngleModel(t.denominator, t.numerator)


def local_holonomy_order(a: ConeAngle) -> int | float:
    t = a.exact_turns()
    return INFINITE if t is None else t.denominator


@dataclass(frozen=True)
class ConifoldVerdict:
    rational: bool
    entries: tuple[tuple[ConeAngle, AngleModel | Irrational, int | float], ...]


def rational_conifold_verdict(angles: Iterable[ConeAngle]) -> ConifoldVerdict:
    rows = tuple((a, model_of_angle(a), local_holonomy_order(a)) for a in angles)
    return ConifoldVerdict(all(order != INFINITE for _, _, order in rows), rows)
