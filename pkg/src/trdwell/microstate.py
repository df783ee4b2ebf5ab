"""Constants of the motion labelling the microstates of one energy.

A microstate is a coefficient triple (a, b, c) weighting the bilinear
combination a*phi1^2 + b*phi2^2 + c*phi1*phi2 of two independent region
solutions.  The physical family is the normalized slice ab - c^2/4 = 1 with
a > 0; the monochromatic member (1, 1, 0) reproduces the textbook stationary
state of the same energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DegenerateMicrostate, DomainError

#: Tolerance on |ab - c^2/4 - 1| accepted by the Microstate constructor.
NORMALIZATION_TOL = 1e-12

#: Open admissibility limit on |c| for extremal searches.
ADMISSIBLE_C_LIMIT = 2.0


@dataclass(frozen=True)
class Microstate:
    """Normalized coefficient triple: a > 0, b > 0 and ab - c^2/4 = 1.

    Construct directly only with already-normalized values; use
    :func:`normalize` to rescale a raw triple onto the physical slice.
    """

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.a, self.b, self.c)):
            raise DomainError("microstate coefficients must be finite")
        if self.a <= 0.0:
            raise DomainError(f"coefficient a must be positive, got {self.a!r}")
        if self.b <= 0.0:
            raise DomainError(f"coefficient b must be positive, got {self.b!r}")
        norm = self.a * self.b - 0.25 * self.c * self.c
        # The two products cancel down to 1, so the achievable accuracy of the
        # residual is set by their own magnitude, not by 1.
        scale = max(1.0, self.a * self.b + 0.25 * self.c * self.c)
        if abs(norm - 1.0) > NORMALIZATION_TOL * scale:
            raise DomainError(
                f"coefficients are not normalized: ab - c^2/4 = {norm!r}; use normalize()"
            )

    @property
    def discriminant(self) -> float:
        """c^2 - 4ab of the bilinear form; exactly -4 on the normalized slice."""
        return self.c * self.c - 4.0 * self.a * self.b


class RawCoefficients(NamedTuple):
    """Unnormalized coefficient triple, e.g. the image of a basis rescale."""

    a: float
    b: float
    c: float


#: The unique microstate indistinguishable from the textbook stationary state.
MONOCHROMATIC = Microstate(1.0, 1.0, 0.0)


def normalize(a_raw: float, b_raw: float, c_raw: float) -> Microstate:
    """Rescale a raw triple onto the slice ab - c^2/4 = 1.

    The scale factor is s = (a_raw*b_raw - c_raw^2/4)^(-1/2), applied to all
    three coefficients; the input must have a_raw > 0 (else
    :class:`DomainError`) and a positive quadratic invariant (else
    :class:`DegenerateMicrostate`).
    """
    if not all(math.isfinite(v) for v in (a_raw, b_raw, c_raw)):
        raise DomainError("raw coefficients must be finite")
    if a_raw <= 0.0:
        raise DomainError(f"raw coefficient a must be positive, got {a_raw!r}")
    invariant = a_raw * b_raw - 0.25 * c_raw * c_raw
    if invariant <= 0.0:
        raise DegenerateMicrostate(
            f"ab - c^2/4 = {invariant!r} is not positive; the bilinear form degenerates"
        )
    s = 1.0 / math.sqrt(invariant)
    a, b, c = s * a_raw, s * b_raw, s * c_raw
    # One polish step absorbs the rounding of s itself; the residual is then
    # dominated by the cancellation of a*b against c^2/4 alone.
    residual = a * b - 0.25 * c * c
    if residual > 0.0 and residual != 1.0:
        s2 = 1.0 / math.sqrt(residual)
        a, b, c = s2 * a, s2 * b, s2 * c
    return Microstate(a, b, c)


def is_monochromatic(ms: Microstate, tol: float = 1e-12) -> bool:
    """True when ms is (1, 1, 0) to within ``tol`` (i.e. a = b and c = 0)."""
    return abs(ms.a - ms.b) <= tol and abs(ms.c) <= tol


def admissible(ms: Microstate) -> bool:
    """Membership in the open extremal-search region a > 0, |c| < 2.

    Normalized triples with |c| -> 2 make b -> c^2/(4a) and push the dwell
    time toward its supremum; the unconstrained closure is excluded because
    the extremum diverges there in the degenerate limit.
    """
    return ms.a > 0.0 and abs(ms.c) < ADMISSIBLE_C_LIMIT


@dataclass(frozen=True)
class BasisRescale:
    """Diagonal change of basis phi1 -> alpha*phi1, phi2 -> beta*phi2."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not math.isfinite(value) or value == 0.0:
                raise DomainError(f"{name} must be finite and nonzero, got {value!r}")


def transform_basis(ms: Microstate, rescale: BasisRescale) -> tuple[RawCoefficients, float]:
    """Coefficients of ``ms`` in the rescaled basis, plus the Wronskian factor.

    Returns ``((a/alpha^2, b/beta^2, c/(alpha*beta)), alpha*beta)``.  The raw
    triple is in general unnormalized: its quadratic invariant picks up
    1/(alpha*beta)^2, which is exactly compensated by the Wronskian factor in
    any observable, so the bilinear momentum field is left invariant.
    """
    alpha, beta = rescale.alpha, rescale.beta
    raw = RawCoefficients(ms.a / alpha**2, ms.b / beta**2, ms.c / (alpha * beta))
    return raw, alpha * beta
