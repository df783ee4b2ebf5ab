"""Piecewise-constant potentials, unit bundles, and sub-barrier kinematics.

Two geometries are supported: a semi-infinite step of height U occupying
x >= 0, and a square well of half-width q whose walls of height U occupy
|x| >= q.  Everything downstream works at a single energy 0 < E < U, where
the classically allowed region carries the travelling wavenumber k and the
classically forbidden region carries the decay constant kappa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

STEP_BARRIER = "step"
SQUARE_WELL = "well"

FREE = "free"
FORBIDDEN = "forbidden"

PARITY_EVEN = "even"
PARITY_ODD = "odd"
PARITY_BOTH = "both"

#: Number of grid points used to bracket eigenvalue sign changes.  The scan is
#: in k (monotone in E), so granularity is uniform in wavenumber.
EIGEN_GRID_POINTS = 10_000

#: Absolute bisection width at which an eigenvalue bracket is considered
#: converged, in units of k.
EIGEN_K_TOL = 1e-13


@dataclass(frozen=True)
class Units:
    """Reduced Planck constant and particle mass, carried symbolically.

    Defaults give the dimensionless convention hbar = mass = 1 used by all
    worked examples; every formula in the package keeps both factors explicit
    so any consistent unit system works.
    """

    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self) -> None:
        for name in ("hbar", "mass"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be finite and positive, got {value!r}")


@dataclass(frozen=True)
class Potential:
    """A piecewise-constant potential of height ``U``.

    ``kind`` is ``"step"`` (forbidden half-line x >= 0) or ``"well"``
    (forbidden exterior |x| >= q).  ``q`` is the well half-width and must be
    present exactly when the kind is ``"well"``.
    """

    kind: str
    U: float
    q: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in (STEP_BARRIER, SQUARE_WELL):
            raise DomainError(f"unknown potential kind {self.kind!r}")
        if not (math.isfinite(self.U) and self.U > 0.0):
            raise DomainError(f"U must be finite and positive, got {self.U!r}")
        if self.kind == SQUARE_WELL:
            if self.q is None or not (math.isfinite(self.q) and self.q > 0.0):
                raise DomainError(f"well half-width q must be finite and positive, got {self.q!r}")
        elif self.q is not None:
            raise DomainError("q is only meaningful for the square well")

    def energy_at(self, x: float) -> float:
        """Potential energy at position ``x``."""
        if self.kind == STEP_BARRIER:
            return self.U if x >= 0.0 else 0.0
        assert self.q is not None
        return self.U if abs(x) >= self.q else 0.0

    def region_at(self, x: float) -> str:
        """``"free"`` or ``"forbidden"`` classification of position ``x``.

        Interfaces belong to the forbidden side, matching ``energy_at``.
        """
        return FORBIDDEN if self.energy_at(x) > 0.0 else FREE


def step_barrier(U: float) -> Potential:
    """Semi-infinite step of height ``U`` occupying x >= 0."""
    return Potential(STEP_BARRIER, U)


def square_well(U: float, q: float) -> Potential:
    """Square well with walls of height ``U`` outside |x| < ``q``."""
    return Potential(SQUARE_WELL, U, q)


@dataclass(frozen=True)
class Kinematics:
    """Wavenumber bundle for one sub-barrier energy.

    k      travelling wavenumber of the free region, sqrt(2 m E)/hbar
    kappa  decay constant of the forbidden region, sqrt(2 m (U - E))/hbar
    r      the ratio kappa/k, the single dimensionless knob of most formulas
    """

    E: float
    k: float
    kappa: float
    r: float
    units: Units

    def __post_init__(self) -> None:
        for name in ("E", "k", "kappa", "r"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0.0:
                raise DomainError(f"{name} must be finite and positive, got {value!r}")
        if abs(self.r - self.kappa / self.k) > 1e-12 * self.r:
            raise DomainError(
                f"inconsistent bundle: r={self.r!r} but kappa/k={self.kappa / self.k!r}"
            )

    @property
    def U(self) -> float:
        """Barrier height recovered from E and kappa."""
        return self.E + (self.units.hbar * self.kappa) ** 2 / (2.0 * self.units.mass)

    def at_energy(self, E: float) -> "Kinematics":
        """Kinematics at a different energy under the same barrier and units."""
        return kinematics_from_energies(E, self.U, self.units)


def kinematics_from_energies(E: float, U: float, units: Units = Units()) -> Kinematics:
    """Build :class:`Kinematics` from raw energies (shared by the factories)."""
    if not math.isfinite(E) or E <= 0.0:
        raise DomainError(f"E must be finite and positive, got {E!r}")
    if not math.isfinite(U) or E >= U:
        raise DomainError(f"E must lie below the confining height U; got E={E!r}, U={U!r}")
    two_m = 2.0 * units.mass
    k = math.sqrt(two_m * E) / units.hbar
    kappa = math.sqrt(two_m * (U - E)) / units.hbar
    return Kinematics(E=E, k=k, kappa=kappa, r=kappa / k, units=units)


def make_kinematics(E: float, pot: Potential, units: Units = Units()) -> Kinematics:
    """Kinematics of energy ``E`` inside potential ``pot``.

    Raises :class:`DomainError` unless 0 < E < U.
    """
    return kinematics_from_energies(E, pot.U, units)


@dataclass(frozen=True)
class BoundState:
    """One square-well eigenstate: energy, parity, and its wavenumber pair."""

    E: float
    parity: str
    k: float
    kappa: float


def _even_bracket(k: float, kappa: float, q: float) -> float:
    # Pole-free form of the even matching condition k tan(kq) = kappa.
    return k * math.sin(k * q) - kappa * math.cos(k * q)


def _odd_bracket(k: float, kappa: float, q: float) -> float:
    # Pole-free form of the odd matching condition -k cot(kq) = kappa.
    return k * math.cos(k * q) + kappa * math.sin(k * q)


def _bisect(f, lo: float, hi: float, xtol: float) -> float:
    """Plain bisection on a bracketed sign change; deterministic and robust."""
    flo = f(lo)
    if flo == 0.0:
        return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol:
            return mid
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (flo < 0.0) != (fmid < 0.0):
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def matching_residual(state: BoundState, q: float) -> float:
    """Residual of the transcendental matching condition for ``state``.

    Uses the standard tan/cot form, which is independent of the pole-free
    bracket functions the solver itself scans, so it doubles as a check.
    """
    if state.parity == PARITY_EVEN:
        return state.k * math.tan(state.k * q) - state.kappa
    return -state.k / math.tan(state.k * q) - state.kappa


def bound_state_energies(
    pot: Potential,
    units: Units = Units(),
    parity: str = PARITY_BOTH,
    grid_points: int = EIGEN_GRID_POINTS,
) -> tuple[BoundState, ...]:
    """All bound states of a square well, sorted by increasing energy.

    The matching conditions are scanned in k on a uniform grid over
    (0, k_max), k_max = sqrt(2 m U)/hbar, using pole-free bracket functions
    (k sin(kq) - kappa cos(kq) for even parity, k cos(kq) + kappa sin(kq) for
    odd), so every sign change on the grid is a genuine root.  Each bracket is
    polished by bisection to ``EIGEN_K_TOL`` in k.  The result is independent
    of the grid granularity once the grid is finer than half the minimal
    root spacing.
    """
    if pot.kind != SQUARE_WELL:
        raise DomainError("bound states are defined for the square well only")
    if parity not in (PARITY_EVEN, PARITY_ODD, PARITY_BOTH):
        raise DomainError(f"parity must be even, odd or both, got {parity!r}")
    if grid_points < 2:
        raise DomainError("grid_points must be at least 2")

    q = pot.q
    assert q is not None
    k_max = math.sqrt(2.0 * units.mass * pot.U) / units.hbar

    def kappa_of(k: float) -> float:
        return math.sqrt(max(k_max * k_max - k * k, 0.0))

    brackets = {
        PARITY_EVEN: lambda k: _even_bracket(k, kappa_of(k), q),
        PARITY_ODD: lambda k: _odd_bracket(k, kappa_of(k), q),
    }
    wanted = (PARITY_EVEN, PARITY_ODD) if parity == PARITY_BOTH else (parity,)

    # Open interval: inset the endpoints so k = 0 and k = k_max (E = U) are
    # never sampled.
    inset = k_max * 1e-12
    step = (k_max - 2.0 * inset) / (grid_points - 1)

    states: list[BoundState] = []
    for par in wanted:
        g = brackets[par]
        k_prev = inset
        g_prev = g(k_prev)
        k_last = -math.inf
        for i in range(1, grid_points):
            k_next = inset + i * step
            g_next = g(k_next)
            if g_prev == 0.0 or (g_prev < 0.0) != (g_next < 0.0):
                k_root = _bisect(g, k_prev, k_next, EIGEN_K_TOL)
                # A root landing exactly on a grid point would be bracketed by
                # both adjacent intervals; keep one copy.
                if k_root - k_last > 10.0 * EIGEN_K_TOL:
                    E = (units.hbar * k_root) ** 2 / (2.0 * units.mass)
                    states.append(BoundState(E=E, parity=par, k=k_root, kappa=kappa_of(k_root)))
                    k_last = k_root
            k_prev, g_prev = k_next, g_next

    states.sort(key=lambda s: s.E)
    return tuple(states)
