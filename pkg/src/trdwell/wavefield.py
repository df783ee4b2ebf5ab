"""Region bases, the bilinear conjugate momentum, and probability densities.

The central object is the trajectory conjugate momentum

    W_x(x) = hbar |W0| sqrt(ab - c^2/4) / (a phi1^2 + b phi2^2 + c phi1 phi2)

built from two independent stationary solutions (phi1, phi2) of one region
with Wronskian W0.  Its denominator is a positive-definite quadratic form for
every microstate, so W_x is finite, positive and nodeless.  The same module
hosts the conventional probability-density states (scattering off the step,
square-well eigenstates) used for coverage comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateMicrostate, DomainError
from .microstate import Microstate, RawCoefficients
from .potential import (
    FORBIDDEN,
    FREE,
    SQUARE_WELL,
    STEP_BARRIER,
    BoundState,
    Kinematics,
    Potential,
    Units,
    bound_state_energies,
)

BARRIER_SCATTERING = "barrier-scattering"
WELL_EIGENSTATE = "well-eigenstate"

#: Relative mismatch tolerated between a basis wavenumber and the kinematics
#: it is used with.
_WAVENUMBER_MATCH_RTOL = 1e-9


@dataclass(frozen=True)
class RegionBasis:
    """Two independent stationary solutions on one region, in local coordinates.

    free:       phi1 = alpha sin(w xi),   phi2 = beta cos(w xi),    W0 = -w alpha beta
    forbidden:  phi1 = alpha exp(-w xi),  phi2 = beta exp(+w xi),   W0 = 2 w alpha beta

    ``w`` is the region wavenumber (k when free, kappa when forbidden) and xi
    is measured from the region's interface, growing into the region.  alpha
    and beta default to the canonical gauge; observables are invariant under
    rescaling them jointly with the microstate coefficients.
    """

    region: str
    wavenumber: float
    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self) -> None:
        if self.region not in (FREE, FORBIDDEN):
            raise DomainError(f"unknown region {self.region!r}")
        if not (math.isfinite(self.wavenumber) and self.wavenumber > 0.0):
            raise DomainError(f"wavenumber must be finite and positive, got {self.wavenumber!r}")
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not math.isfinite(value) or value == 0.0:
                raise DomainError(f"{name} must be finite and nonzero, got {value!r}")

    @property
    def wronskian(self) -> float:
        """phi1 phi2' - phi1' phi2 (constant across the region)."""
        base = -self.wavenumber if self.region == FREE else 2.0 * self.wavenumber
        return base * self.alpha * self.beta

    @property
    def curvature(self) -> float:
        """Coefficient in phi'' = curvature * phi: -w^2 free, +w^2 forbidden."""
        w2 = self.wavenumber * self.wavenumber
        return -w2 if self.region == FREE else w2

    def values(self, x: float) -> tuple[float, float]:
        w = self.wavenumber
        if self.region == FREE:
            return self.alpha * math.sin(w * x), self.beta * math.cos(w * x)
        return self.alpha * math.exp(-w * x), self.beta * math.exp(w * x)

    def derivatives(self, x: float) -> tuple[float, float]:
        w = self.wavenumber
        if self.region == FREE:
            return self.alpha * w * math.cos(w * x), -self.beta * w * math.sin(w * x)
        return -self.alpha * w * math.exp(-w * x), self.beta * w * math.exp(w * x)

    def wavenumber_gradient(self, x: float) -> tuple[float, float]:
        """d(phi1)/dw and d(phi2)/dw at fixed position."""
        w = self.wavenumber
        if self.region == FREE:
            return self.alpha * x * math.cos(w * x), -self.beta * x * math.sin(w * x)
        return -self.alpha * x * math.exp(-w * x), self.beta * x * math.exp(w * x)

    def with_wavenumber(self, w: float) -> "RegionBasis":
        return RegionBasis(self.region, w, self.alpha, self.beta)

    def rescaled(self, alpha: float, beta: float) -> "RegionBasis":
        return RegionBasis(self.region, self.wavenumber, self.alpha * alpha, self.beta * beta)


def canonical_basis(region: str, kin: Kinematics) -> RegionBasis:
    """Unit-amplitude basis of ``region`` at the wavenumber given by ``kin``."""
    if region == FREE:
        return RegionBasis(FREE, kin.k)
    if region == FORBIDDEN:
        return RegionBasis(FORBIDDEN, kin.kappa)
    raise DomainError(f"unknown region {region!r}")


def gauge_factor(ms: Microstate | RawCoefficients) -> float:
    """sqrt(ab - c^2/4); raises :class:`DegenerateMicrostate` when not positive."""
    invariant = ms.a * ms.b - 0.25 * ms.c * ms.c
    if not (invariant > 0.0 and math.isfinite(invariant)):
        raise DegenerateMicrostate(f"ab - c^2/4 = {invariant!r} is not positive")
    return math.sqrt(invariant)


def bilinear(ms: Microstate | RawCoefficients, basis: RegionBasis, x: float) -> float:
    """Denominator a phi1^2 + b phi2^2 + c phi1 phi2 at position ``x``."""
    phi1, phi2 = basis.values(x)
    return ms.a * phi1 * phi1 + ms.b * phi2 * phi2 + ms.c * phi1 * phi2


def bilinear_with_derivatives(
    ms: Microstate | RawCoefficients, basis: RegionBasis, x: float
) -> tuple[float, float, float]:
    """(D, D', D'') of the bilinear denominator, using phi'' = curvature*phi."""
    a, b, c = ms.a, ms.b, ms.c
    phi1, phi2 = basis.values(x)
    d1, d2 = basis.derivatives(x)
    D = a * phi1 * phi1 + b * phi2 * phi2 + c * phi1 * phi2
    Dp = 2.0 * a * phi1 * d1 + 2.0 * b * phi2 * d2 + c * (d1 * phi2 + phi1 * d2)
    Dpp = 2.0 * (a * d1 * d1 + b * d2 * d2 + c * d1 * d2) + 2.0 * basis.curvature * D
    return D, Dp, Dpp


def conjugate_momentum(
    x: float, ms: Microstate | RawCoefficients, basis: RegionBasis, units: Units = Units()
) -> float:
    """Trajectory conjugate momentum W_x at position ``x``.

    Strictly positive and finite for any microstate with positive quadratic
    invariant; the Wronskian enters through its magnitude so either sign
    convention of the basis ordering gives the same field.
    """
    numerator = units.hbar * abs(basis.wronskian) * gauge_factor(ms)
    D = bilinear(ms, basis, x)
    if not (D > 0.0 and math.isfinite(D)):
        raise DegenerateMicrostate(f"bilinear denominator {D!r} at x={x!r} is not positive")
    return numerator / D


def momentum_derivatives(
    x: float, ms: Microstate | RawCoefficients, basis: RegionBasis, units: Units = Units()
) -> tuple[float, float, float]:
    """(W_x, W_xx, W_xxx) via closed-form derivatives of the denominator.

    With N the constant numerator and D the bilinear denominator,
    W_x = N/D, W_xx = -N D'/D^2 and W_xxx = -N D''/D^2 + 2 N D'^2/D^3, so no
    numerical differentiation is involved.
    """
    N = units.hbar * abs(basis.wronskian) * gauge_factor(ms)
    D, Dp, Dpp = bilinear_with_derivatives(ms, basis, x)
    if not (D > 0.0 and math.isfinite(D)):
        raise DegenerateMicrostate(f"bilinear denominator {D!r} at x={x!r} is not positive")
    W_x = N / D
    W_xx = -N * Dp / (D * D)
    W_xxx = -N * Dpp / (D * D) + 2.0 * N * Dp * Dp / (D * D * D)
    return W_x, W_xx, W_xxx


def qshje_residual(x: float, ms: Microstate | RawCoefficients, basis: RegionBasis, kin: Kinematics) -> float:
    """Residual of the stationary quantum Hamilton-Jacobi equation at ``x``.

    The stationary equation satisfied by the conjugate momentum reads

        W_x^2/(2m) + V - E + (hbar^2/4m) [W_xxx/W_x - (3/2)(W_xx/W_x)^2] = 0,

    i.e. the classical stationary Hamilton-Jacobi form plus the quantum
    correction bracket; the return value is the left-hand side.  V - E is
    expressed through the region wavenumber (-(hbar k)^2/2m when free,
    +(hbar kappa)^2/2m when forbidden), which keeps the check exact for the
    kinematics the basis was built from.
    """
    expected = kin.k if basis.region == FREE else kin.kappa
    if abs(basis.wavenumber - expected) > _WAVENUMBER_MATCH_RTOL * expected:
        raise DomainError(
            f"basis wavenumber {basis.wavenumber!r} does not match kinematics ({expected!r})"
        )
    hbar, m = kin.units.hbar, kin.units.mass
    if basis.region == FREE:
        v_minus_e = -((hbar * kin.k) ** 2) / (2.0 * m)
    else:
        v_minus_e = (hbar * kin.kappa) ** 2 / (2.0 * m)
    W_x, W_xx, W_xxx = momentum_derivatives(x, ms, basis, kin.units)
    ratio1 = W_xxx / W_x
    ratio2 = W_xx / W_x
    quantum = (hbar * hbar / (4.0 * m)) * (ratio1 - 1.5 * ratio2 * ratio2)
    return W_x * W_x / (2.0 * m) + v_minus_e + quantum


@dataclass(frozen=True)
class CopenhagenState:
    """A conventional probability-density state for one spectral problem.

    kind ``"barrier-scattering"``: unit-amplitude wave incident from x < 0 on
    the step, with its reflected and transmitted (evanescent) parts.  kind
    ``"well-eigenstate"``: one normalized bound state of the square well,
    identified by its index in the ascending energy ladder.
    """

    potential: Potential
    kinematics: Kinematics
    kind: str
    parity: str | None = None
    index: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in (BARRIER_SCATTERING, WELL_EIGENSTATE):
            raise DomainError(f"unknown state kind {self.kind!r}")
        if self.kind == BARRIER_SCATTERING and self.potential.kind != STEP_BARRIER:
            raise DomainError("barrier scattering requires a step potential")
        if self.kind == WELL_EIGENSTATE:
            if self.potential.kind != SQUARE_WELL:
                raise DomainError("well eigenstates require a square-well potential")
            if self.parity is None or self.index is None:
                raise DomainError("well eigenstates carry a parity and a ladder index")

    # -- scattering amplitudes (step) ------------------------------------

    def _reflection(self) -> complex:
        k, kappa = self.kinematics.k, self.kinematics.kappa
        return (k - 1j * kappa) / (k + 1j * kappa)

    def _transmission(self) -> complex:
        k, kappa = self.kinematics.k, self.kinematics.kappa
        return 2.0 * k / (k + 1j * kappa)

    # -- wavefunctions ---------------------------------------------------

    def wavefunction(self, x: float) -> complex:
        """psi(x); complex for scattering, real-valued for eigenstates."""
        k, kappa = self.kinematics.k, self.kinematics.kappa
        if self.kind == BARRIER_SCATTERING:
            if x < 0.0:
                return complex(math.cos(k * x), math.sin(k * x)) + self._reflection() * complex(
                    math.cos(k * x), -math.sin(k * x)
                )
            return self._transmission() * math.exp(-kappa * x)
        q = self.potential.q
        assert q is not None
        inv_norm = 1.0 / math.sqrt(self._norm_squared())
        if self.parity == "even":
            if abs(x) < q:
                return complex(inv_norm * math.cos(k * x))
            return complex(inv_norm * math.cos(k * q) * math.exp(-kappa * (abs(x) - q)))
        if abs(x) < q:
            return complex(inv_norm * math.sin(k * x))
        return complex(
            inv_norm * math.copysign(1.0, x) * math.sin(k * q) * math.exp(-kappa * (abs(x) - q))
        )

    def _norm_squared(self) -> float:
        k, kappa = self.kinematics.k, self.kinematics.kappa
        q = self.potential.q
        assert q is not None
        if self.parity == "even":
            return q + math.sin(2.0 * k * q) / (2.0 * k) + math.cos(k * q) ** 2 / kappa
        return q - math.sin(2.0 * k * q) / (2.0 * k) + math.sin(k * q) ** 2 / kappa

    def density(self, x: float) -> float:
        """|psi(x)|^2."""
        psi = self.wavefunction(x)
        return psi.real * psi.real + psi.imag * psi.imag


def barrier_scattering(kin: Kinematics, pot: Potential | None = None) -> CopenhagenState:
    """Scattering state of energy ``kin.E`` against the step.

    The transmitted intensity is 4k^2/(k^2 + kappa^2) and the reflection
    coefficient has unit modulus, so the density is |T|^2 exp(-2 kappa x) for
    x >= 0 and an interference pattern of full contrast for x < 0.
    """
    if pot is None:
        pot = Potential(STEP_BARRIER, kin.U)
    if pot.kind != STEP_BARRIER:
        raise DomainError("barrier scattering requires a step potential")
    if abs(pot.U - kin.U) > 1e-9 * pot.U:
        raise DomainError(f"kinematics were built for U={kin.U!r}, potential has U={pot.U!r}")
    return CopenhagenState(potential=pot, kinematics=kin, kind=BARRIER_SCATTERING)


def well_eigenstate(pot: Potential, units: Units = Units(), index: int = 0) -> CopenhagenState:
    """Normalized bound state number ``index`` (0-based, ascending energy)."""
    if pot.kind != SQUARE_WELL:
        raise DomainError("well eigenstates require a square-well potential")
    ladder = bound_state_energies(pot, units)
    if not 0 <= index < len(ladder):
        raise DomainError(f"state index {index} out of range; the well holds {len(ladder)} states")
    state: BoundState = ladder[index]
    kin = Kinematics(E=state.E, k=state.k, kappa=state.kappa, r=state.kappa / state.k, units=units)
    return CopenhagenState(
        potential=pot, kinematics=kin, kind=WELL_EIGENSTATE, parity=state.parity, index=index
    )


def copenhagen_density(state: CopenhagenState, x: float) -> float:
    """Probability density |psi|^2 of ``state`` at position ``x``."""
    if not math.isfinite(x):
        raise DomainError(f"position must be finite, got {x!r}")
    return state.density(x)


def find_nodes(
    state: CopenhagenState, interval: tuple[float, float], grid_points: int = 4001
) -> tuple[float, ...]:
    """All zeros of the eigenstate wavefunction inside the open interval.

    Defined for well eigenstates only: the support question the step scenario
    asks concerns the forbidden side x >= 0, where the density
    |T|^2 exp(-2 kappa x) never vanishes, so nodes play no role there.  Sign
    changes of the real wavefunction on a dense grid are polished by
    bisection to an absolute width of 1e-12.  The ground state returns ().
    """
    if state.kind != WELL_EIGENSTATE:
        raise DomainError("nodes are defined for well eigenstates")
    lo, hi = interval
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError(f"interval must be finite with lo < hi, got {interval!r}")

    def psi(x: float) -> float:
        return state.wavefunction(x).real

    inset = (hi - lo) * 1e-12
    xs = [lo + inset + i * (hi - lo - 2.0 * inset) / (grid_points - 1) for i in range(grid_points)]
    nodes: list[float] = []
    prev_x, prev_f = xs[0], psi(xs[0])
    for x in xs[1:]:
        f = psi(x)
        if prev_f == 0.0:
            nodes.append(prev_x)
        elif (prev_f < 0.0) != (f < 0.0):
            a_lo, a_hi, f_lo = prev_x, x, prev_f
            while a_hi - a_lo > 1e-12:
                mid = 0.5 * (a_lo + a_hi)
                f_mid = psi(mid)
                if f_mid == 0.0:
                    a_lo = a_hi = mid
                    break
                if (f_lo < 0.0) != (f_mid < 0.0):
                    a_hi = mid
                else:
                    a_lo, f_lo = mid, f_mid
            nodes.append(0.5 * (a_lo + a_hi))
        prev_x, prev_f = x, f
    if prev_f == 0.0:
        nodes.append(prev_x)

    deduped: list[float] = []
    for node in nodes:
        if not deduped or node - deduped[-1] > 1e-11:
            deduped.append(node)
    return tuple(deduped)
