"""Bath resolvent G_B(omega), flat-band projector, and the FB approximation.

The eigendecomposition of each model's real-space Hamiltonian is computed once
and cached (models are immutable and hashable), after which resolvent and
projector evaluations are cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from flatqed.errors import NoFlatBand, PoleProximity
from flatqed.lattice import LatticeModel, real_space_hamiltonian

POLE_GUARD = 1e-12  # in units of J


@dataclass(frozen=True)
class FlatBandProjector:
    """Hermitian idempotent projector onto the FB eigenspace."""

    P: np.ndarray
    omega_fb: float
    tol: float

    @property
    def degeneracy(self) -> int:
        return int(round(np.trace(self.P).real))


@lru_cache(maxsize=32)
def eigensystem(model: LatticeModel) -> tuple[np.ndarray, np.ndarray]:
    """Cached (eigenvalues, eigenvectors) of the real-space Hamiltonian."""
    w, U = np.linalg.eigh(real_space_hamiltonian(model))
    w.setflags(write=False)
    U.setflags(write=False)
    return w, U


def _check_pole(model: LatticeModel, omega: float, w: np.ndarray) -> None:
    guard = POLE_GUARD * model.J
    if np.min(np.abs(omega - w)) < guard:
        raise PoleProximity(
            f"omega = {omega} within {guard} of a bath eigenvalue")


def resolvent_vector(model: LatticeModel, omega: float,
                     chi: np.ndarray) -> np.ndarray:
    """G_B(omega) |chi> for an arbitrary site-space vector |chi>."""
    w, U = eigensystem(model)
    _check_pole(model, omega, w)
    return U @ ((U.conj().T @ chi) / (omega - w))


def resolvent_element(model: LatticeModel, omega: float,
                      x: int, xp: int) -> complex:
    """<x| G_B(omega) |x'> = sum_a u_a(x) u_a*(x') / (omega - e_a)."""
    w, U = eigensystem(model)
    _check_pole(model, omega, w)
    return complex(np.sum(U[x, :] * np.conj(U[xp, :]) / (omega - w)))


def chain_green_analytic(J: float, delta: float, d: int) -> float:
    """Thermodynamic-limit chain Green's function below the band:

        G(d) = -(-1)^d / (2 sqrt(J delta)) * exp(-d / sqrt(J / delta))

    for an energy detuned by delta > 0 below the lower band edge of the
    positive-hopping chain (G(0) < 0 there).  Leading order in delta/J."""
    if delta <= 0:
        raise ValueError("detuning must be positive")
    lam = math.sqrt(J / delta)
    return -((-1) ** (d % 2)) / (2.0 * math.sqrt(J * delta)) * math.exp(-abs(d) / lam)


def fb_projector(model: LatticeModel, omega_fb: float,
                 tol: float = 1e-8) -> FlatBandProjector:
    """Sum of eigenprojectors of all states within ``tol * J`` of omega_fb."""
    w, U = eigensystem(model)
    sel = np.abs(w - omega_fb) < tol * model.J
    if not np.any(sel):
        raise NoFlatBand(
            f"no eigenvalues within {tol * model.J} of omega = {omega_fb}")
    V = U[:, sel]
    return FlatBandProjector(P=V @ V.conj().T, omega_fb=float(omega_fb), tol=tol)


def fb_green_approx(P: FlatBandProjector, omega: float) -> np.ndarray:
    """Single-flat-band approximation of the resolvent: P / (omega - omega_FB)."""
    denom = omega - P.omega_fb
    if denom == 0:
        raise PoleProximity("omega coincides with the flat-band energy")
    return P.P / denom
