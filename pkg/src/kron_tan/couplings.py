"""Coupling models: transmission lines, slot apertures, far field, wall echo.

Branin lines act in edge space (a two-port block on the two port edges);
far-field and reflection links are chords acting directly on mesh currents.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .errors import DomainError, SingularFrequencyError
from .metric import ImpedanceExpr

__all__ = [
    "SPEED_OF_LIGHT",
    "BraninLine",
    "BraninTensor",
    "branin_two_port",
    "ApertureModel",
    "gupta_aperture_impedance",
    "FarFieldLink",
    "friis_coupling_impedance",
    "ReflectionLink",
    "reflection_coupling",
    "cascade_coupling",
]


def _wavelength(omega, fixed=None):
    if fixed is not None:
        return fixed
    if omega <= 0:
        raise SingularFrequencyError("the free-space wavelength is undefined at omega = 0")
    return 2 * math.pi * SPEED_OF_LIGHT / omega


# -- transmission lines ------------------------------------------------------


@dataclass(frozen=True)
class _LineTerm:
    Zc: float
    tau: float
    transfer: bool

    def evaluate(self, omega):
        # 1 - x^2 with x = exp(-j omega tau); expm1 keeps it accurate near x^2 = 1
        p = 1j * omega
        one_minus = -np.expm1(-2 * p * self.tau)
        if abs(one_minus) < 1e-300:
            raise SingularFrequencyError(
                f"line of delay {self.tau:.6g} s is resonant at omega = {omega:.6g} rad/s"
            )
        if self.transfer:
            return complex(2 * self.Zc * cmath.exp(-p * self.tau) / one_minus)
        return complex(self.Zc * (2 - one_minus) / one_minus)


@dataclass(frozen=True)
class BraninLine:
    """Lossless line of characteristic impedance ``Zc`` and one-way delay ``tau``.

    The two port edges must be oriented from the signal conductor towards the
    return conductor, so that a positive edge current enters the line.
    """

    edge_left: int
    edge_right: int
    Zc: float
    tau: float

    def __post_init__(self):
        if self.Zc <= 0:
            raise DomainError("characteristic impedance must be positive")
        if self.tau < 0:
            raise DomainError("line delay must be non-negative")
        if self.edge_left == self.edge_right:
            raise DomainError("a line needs two distinct port edges")

    def port_matrix(self, omega: float) -> np.ndarray:
        """Edge-space impedance block of the two ports.

        Obtained from the two retarded-emf relations

            V1 - Zc i1 = x (V2 + Zc i2),   V2 - Zc i2 = x (V1 + Zc i1)

        (``x = exp(-tau p)``, currents entering the line) by eliminating the
        port voltages: ``Z11 = Zc (1 + x^2)/(1 - x^2)``,
        ``Z12 = 2 Zc x / (1 - x^2)``.
        """
        s = _LineTerm(self.Zc, self.tau, False).evaluate(omega)
        t = _LineTerm(self.Zc, self.tau, True).evaluate(omega)
        return np.array([[s, t], [t, s]])

    def edge_terms(self):
        s = _LineTerm(self.Zc, self.tau, False)
        t = _LineTerm(self.Zc, self.tau, True)
        a, b = self.edge_left, self.edge_right
        return ((a, a, s), (b, b, s), (a, b, t), (b, a, t))


@dataclass(frozen=True)
class BraninTensor:
    """Two-mesh tensor of a line between a source ``E0, R0`` and a load ``RL``.

    Mesh 1 holds the generator and the left port, mesh 2 the load and the
    right port.  The retarded emfs give

        [[R0 + Zc, (RL - Zc) x], [(R0 - Zc) x, RL + Zc]] @ [i1, i2] = [E0, E0 x]

    ``RL = inf`` (open far end) is handled by solving for the load voltage
    ``RL * i2`` instead of ``i2``.
    """

    line: BraninLine
    r_source: float
    r_load: float

    @property
    def block(self):
        """The 2x2 tensor as :class:`ImpedanceExpr` entries."""
        if math.isinf(self.r_load):
            raise DomainError("the tensor has no finite form for an open far end")
        zc, tau, r0, rl = self.line.Zc, self.line.tau, self.r_source, self.r_load
        return (
            (ImpedanceExpr(R=r0 + zc), ImpedanceExpr.delay(rl - zc, tau)),
            (ImpedanceExpr.delay(r0 - zc, tau), ImpedanceExpr(R=rl + zc)),
        )

    def matrix(self, omega: float) -> np.ndarray:
        if math.isinf(self.r_load):
            zc, r0 = self.line.Zc, self.r_source
            x = cmath.exp(-1j * omega * self.line.tau)
            return np.array([[r0 + zc, x], [(r0 - zc) * x, 1.0]])
        return np.array([[t.evaluate(omega) for t in row] for row in self.block])

    def sources(self, omega: float, e0: complex = 1.0) -> np.ndarray:
        return np.array([e0, e0 * cmath.exp(-1j * omega * self.line.tau)])

    def solve(self, omega: float, e0: complex = 1.0):
        """Port currents ``(i1, i2)``."""
        sol = np.linalg.solve(self.matrix(omega), self.sources(omega, e0))
        if math.isinf(self.r_load):
            return sol[0], 0.0j
        return sol[0], sol[1]

    def driving_point_impedance(self, omega: float) -> complex:
        """Impedance seen at the left port, generator resistance excluded."""
        i1, _ = self.solve(omega, 1.0)
        return complex(1.0 / i1 - self.r_source)


def branin_two_port(line: BraninLine, r_source: float = 0.0, r_load: float = 0.0) -> BraninTensor:
    return BraninTensor(line, float(r_source), float(r_load))


# -- apertures ---------------------------------------------------------------


def gupta_aperture_impedance(w_e: float, b: float) -> float:
    """Slot impedance ``120 pi^2 / ln(2 (1 + q) / (1 - q))`` with ``q = (1 - (w_e/b)^2)^(1/4)``."""
    if b <= 0:
        raise DomainError("aperture extent b must be positive")
    ratio = w_e / b
    if not 0 < ratio < 1:
        raise DomainError(f"aperture ratio w_e/b = {ratio:.6g} is outside (0, 1)")
    # q and 1 - q without cancellation for narrow slots
    log_q = 0.25 * math.log1p(-ratio * ratio)
    q = math.exp(log_q)
    one_minus_q = -math.expm1(log_q)
    return 120 * math.pi**2 / math.log(2 * (1 + q) / one_minus_q)


@dataclass(frozen=True)
class ApertureModel:
    w_e: float
    b: float

    def __post_init__(self):
        gupta_aperture_impedance(self.w_e, self.b)

    @property
    def impedance(self) -> float:
        return gupta_aperture_impedance(self.w_e, self.b)

    def as_impedance(self) -> ImpedanceExpr:
        return ImpedanceExpr(R=self.impedance)


# -- radiated couplings ------------------------------------------------------


@dataclass(frozen=True)
class FarFieldLink:
    """Far-field chord between a transmitting and a receiving mesh.

    Meshes are named by their closing edge.  ``wavelength`` defaults to the
    free-space value at each frequency; the delay is ``r / c``.
    """

    mesh_t: int
    mesh_r: int
    R11: float
    R22: float
    A_t: float
    A_r: float
    r: float
    wavelength: float | None = None

    def __post_init__(self):
        for name in ("R11", "R22", "A_t", "A_r"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be non-negative")
        if self.mesh_t == self.mesh_r:
            raise DomainError("a far-field link joins two different meshes")

    @property
    def tau(self) -> float:
        return self.r / SPEED_OF_LIGHT

    @property
    def meshes(self):
        return (self.mesh_t, self.mesh_r)

    def entries(self, omega):
        z = friis_coupling_impedance(self, omega)
        return [(self.mesh_r, self.mesh_t, z), (self.mesh_t, self.mesh_r, z)]


def friis_coupling_impedance(link: FarFieldLink, omega: float) -> complex:
    """``z21 = sqrt(R11 R22 A_r A_t) exp(-j omega tau) / (lambda r)``.

    The magnitude is chosen so that ``|z21|^2 / (R11 R22)`` equals the Friis
    power ratio ``A_r A_t / (lambda r)^2``.
    """
    if link.r <= 0:
        raise DomainError("antenna separation must be positive")
    lam = _wavelength(omega, link.wavelength)
    mag = math.sqrt(link.R11 * link.R22 * link.A_r * link.A_t) / (lam * link.r)
    return mag * cmath.exp(-1j * omega * link.tau)


@dataclass(frozen=True)
class ReflectionLink:
    """Echo from a wall at distance ``R`` back into the radiating mesh.

    ``phase`` (+1 or -1) sets whether the echo adds to or opposes the mesh
    current's own emf.
    """

    mesh: int
    G: float
    R: float
    sigma: float
    Rr: float
    phase: int = 1
    wavelength: float | None = None

    def __post_init__(self):
        if self.R <= 0:
            raise DomainError("wall distance must be positive")
        if self.Rr <= 0:
            raise DomainError("radiation resistance must be positive")
        if self.phase not in (1, -1):
            raise DomainError("phase must be +1 or -1")

    @property
    def tau(self) -> float:
        return 2 * self.R / SPEED_OF_LIGHT

    @property
    def meshes(self):
        return (self.mesh,)

    def entries(self, omega):
        return [(self.mesh, self.mesh, reflection_coupling(self, omega))]


def reflection_coupling(link: ReflectionLink, omega: float) -> complex:
    """``G lambda sigma sqrt(Rr) / (4 pi 2R) * exp(-j omega 2R/c)``."""
    lam = _wavelength(omega, link.wavelength)
    mag = link.G * lam * link.sigma * math.sqrt(link.Rr) / (8 * math.pi * link.R)
    return link.phase * mag * cmath.exp(-1j * omega * link.tau)


def cascade_coupling(path, k_source: complex) -> complex:
    """Weak-coupling emf along a chain ``z_n y_n ... y_2 z_21`` driven by ``k_source``.

    ``path`` alternates coupling impedances and intermediate-mesh
    admittances, starting and ending with an impedance.
    """
    path = list(path)
    if not path:
        raise DomainError("a coupling path needs at least one impedance")
    if len(path) % 2 == 0:
        raise DomainError("a coupling path alternates z, y, ..., z and has odd length")
    e = complex(k_source)
    for factor in reversed(path):
        e *= factor
    return e
