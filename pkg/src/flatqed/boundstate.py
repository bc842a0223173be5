"""Atom-photon bound states: pole equation, wavefunction, localization fits.

An emitter with transition frequency omega0 couples to the bath through a
normalized site state |chi> (one site for a small atom, several for a giant
atom) with collective strength gbar.  In a spectral gap the dressed bound
state solves

    omega_BS = omega0 + gbar^2 <chi| G_B(omega_BS) |chi>,

and its photonic wavefunction is psi = gbar G_B(omega_BS) |chi| up to joint
normalization with the atomic amplitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from flatqed.errors import InsufficientData, NoRootInGap
from flatqed.greens import POLE_GUARD, eigensystem, resolvent_vector
from flatqed.lattice import LatticeModel, site_index


@dataclass(frozen=True)
class EmitterSpec:
    """Transition frequency and coupling pattern of one emitter.

    ``couplings`` is a nonempty tuple of (flat site index, complex amplitude);
    one entry makes a small atom, several make a giant atom."""

    omega0: float
    couplings: tuple[tuple[int, complex], ...]

    def __post_init__(self) -> None:
        if not self.couplings:
            raise ValueError("emitter needs at least one coupling")

    @property
    def gbar(self) -> float:
        return math.sqrt(sum(abs(g) ** 2 for _x, g in self.couplings))

    def chi(self, n_sites: int) -> np.ndarray:
        """Normalized site state |chi>, chi(x_l) = g_l / gbar.

        A fully decoupled emitter (gbar = 0) has no site state; the zero
        vector is returned so decoupled dynamics stays well defined."""
        chi = np.zeros(n_sites, dtype=complex)
        for x, g in self.couplings:
            if not 0 <= x < n_sites:
                raise ValueError(f"coupling site {x} outside lattice")
            chi[x] += g
        return chi / self.gbar if self.gbar > 0 else chi


def omega0_for_detuning(model: LatticeModel, delta: float,
                        reference: str = "fb") -> float:
    """Emitter frequency detuned by ``delta`` > 0 into the gap.

    ``reference='fb'`` offsets from the flat-band energy toward the gap side
    (which side depends on the lattice); ``reference='lower_edge'`` places
    omega0 a distance delta below the bottom of the spectrum."""
    if delta <= 0:
        raise ValueError("detuning must be positive")
    w, _U = eigensystem(model)
    if reference == "lower_edge":
        return float(w.min()) - delta
    if reference != "fb":
        raise ValueError(f"unknown detuning reference {reference!r}")
    from flatqed.flatband import cls_set

    cls = cls_set(model)
    # step off the FB toward the adjacent gap: up when the FB sits at or
    # below the dispersive bands, down when it caps the spectrum
    if cls.omega_fb >= float(w.max()) - 1e-9 * model.J:
        return cls.omega_fb + delta
    if cls.omega_fb <= float(w.min()) + 1e-9 * model.J:
        # FB at the bottom: genuine gap above -> step up into it; band
        # touching above (the CLS Gram symbol f(k) = 1 + 2 sum alpha cos k
        # can vanish, so the gap closes with system size) -> step below the
        # whole spectrum instead
        touching = 2.0 * sum(abs(a) for a in cls.alphas) >= 1.0 - 1e-12
        return cls.omega_fb - delta if touching else cls.omega_fb + delta
    return cls.omega_fb + delta


def small_atom(model: LatticeModel, omega0: float, g: float,
               cell: Sequence[int] | int, sub: str | int) -> EmitterSpec:
    """Convenience constructor for a single-site emitter."""
    return EmitterSpec(omega0=float(omega0),
                       couplings=((site_index(model, cell, sub), complex(g)),))


@dataclass(frozen=True)
class BoundStateResult:
    """Solved bound state: pole energy, normalized wavefunction, fit slot."""

    omega_bs: float
    psi: np.ndarray                  # photonic amplitudes over all sites
    c_e: float                       # atomic amplitude (real positive)
    emitter: EmitterSpec
    norm_residual: float = 0.0
    localization_length: float | None = field(default=None, compare=False)


def _self_energy(model: LatticeModel, emitter: EmitterSpec,
                 omega: float) -> float:
    chi = emitter.chi(model.n_sites)
    val = np.vdot(chi, resolvent_vector(model, omega, chi))
    return float(val.real)


def _gap_around(w: np.ndarray, omega0: float, J: float) -> tuple[float, float]:
    """Edges of the spectral gap containing omega0 (+-inf outside spectrum)."""
    below = w[w < omega0]
    above = w[w > omega0]
    lo = float(below.max()) if below.size else -math.inf
    hi = float(above.min()) if above.size else math.inf
    return lo, hi


def solve_pole(model: LatticeModel, emitter: EmitterSpec) -> float:
    """Root of  F(omega) = omega - omega0 - gbar^2 <chi|G_B(omega)|chi>  by
    bisection inside the gap containing omega0.

    F is strictly increasing in a gap (F' = 1 + gbar^2 <chi|G^2|chi> > 1), so
    the root is unique when it exists.  Raises :class:`NoRootInGap` if F does
    not change sign between the inward-shifted gap edges."""
    w, _U = eigensystem(model)
    guard = POLE_GUARD * model.J
    lo, hi = _gap_around(w, emitter.omega0, model.J)
    if math.isfinite(lo) and math.isfinite(hi) and hi - lo < 40 * guard:
        raise NoRootInGap("gap around omega0 narrower than the pole guard")
    g2 = emitter.gbar ** 2

    def F(omega: float) -> float:
        return omega - emitter.omega0 - g2 * _self_energy(model, emitter, omega)

    span = max(model.J, g2)
    if math.isfinite(lo):
        a = lo + 10 * guard
    else:  # extend downward until F < 0 (F -> -inf as omega -> -inf)
        a = min(emitter.omega0, float(w.min())) - span
        while F(a) > 0:
            a -= span
            span *= 2
    if math.isfinite(hi):
        b = hi - 10 * guard
    else:
        b = max(emitter.omega0, float(w.max())) + span
        while F(b) < 0:
            b += span
            span *= 2
    Fa, Fb = F(a), F(b)
    if Fa == 0.0:
        return a
    if Fb == 0.0:
        return b
    if Fa > 0 or Fb < 0:
        raise NoRootInGap(
            f"pole equation does not change sign in the gap ({a}, {b})")
    root = brentq(F, a, b, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    return float(root)


def pole_residual(model: LatticeModel, emitter: EmitterSpec,
                  omega_bs: float) -> float:
    """|omega_BS - omega0 - gbar^2 <chi|G_B(omega_BS)|chi>|."""
    g2 = emitter.gbar ** 2
    return abs(omega_bs - emitter.omega0 - g2 * _self_energy(model, emitter, omega_bs))


def bs_wavefunction(model: LatticeModel, emitter: EmitterSpec,
                    omega_bs: float | None = None) -> BoundStateResult:
    """Bound-state wavefunction at the solved pole (or a supplied energy).

    The photonic part is gbar G_B |chi> relative to atomic amplitude 1; the
    returned state is jointly normalized: |c_e|^2 + sum |psi|^2 = 1."""
    if omega_bs is None:
        omega_bs = solve_pole(model, emitter)
    chi = emitter.chi(model.n_sites)
    psi_rel = emitter.gbar * resolvent_vector(model, omega_bs, chi)
    norm = math.sqrt(1.0 + float(np.vdot(psi_rel, psi_rel).real))
    psi = psi_rel / norm
    c_e = 1.0 / norm
    residual = abs(c_e ** 2 + float(np.vdot(psi, psi).real) - 1.0)
    return BoundStateResult(omega_bs=float(omega_bs), psi=psi, c_e=c_e,
                            emitter=emitter, norm_residual=residual)


def total_hamiltonian(model: LatticeModel,
                      emitters: Sequence[EmitterSpec]) -> np.ndarray:
    """Single-excitation Hamiltonian of emitters + bath.

    Basis ordering: the emitters first, then all lattice sites."""
    from flatqed.lattice import real_space_hamiltonian

    n_e = len(emitters)
    n = model.n_sites
    H = np.zeros((n_e + n, n_e + n), dtype=complex)
    H[n_e:, n_e:] = real_space_hamiltonian(model)
    for j, em in enumerate(emitters):
        H[j, j] = em.omega0
        for x, g in em.couplings:
            H[j, n_e + x] += np.conj(g)
            H[n_e + x, j] += g
    return H


# ---------------------------------------------------------------------------
# localization-length fitting
# ---------------------------------------------------------------------------

AMPLITUDE_FLOOR = 1e-13


def _reference_cell(model: LatticeModel, emitter: EmitterSpec) -> tuple[int, ...]:
    """Cell of the strongest coupling (the profile origin)."""
    x, _g = max(emitter.couplings, key=lambda c: abs(c[1]))
    cell_lin = x // model.Q
    coords = []
    for n in reversed(model.shape):
        coords.append(cell_lin % n)
        cell_lin //= n
    return tuple(reversed(coords))


def bs_profile(result: BoundStateResult, model: LatticeModel,
               sub: str | int, axis: int = 0,
               d_max: int | None = None) -> np.ndarray:
    """|psi| sampled on one sublattice along a coordinate axis, as a function
    of the cell distance d >= 0 from the emitter's cell."""
    s = model.sublattice_id(sub)
    ref = _reference_cell(model, result.emitter)
    n_axis = model.shape[axis]
    if d_max is None:
        d_max = n_axis // 2
    prof = np.empty(d_max + 1)
    for d in range(d_max + 1):
        cell = list(ref)
        cell[axis] = (cell[axis] + d) % n_axis
        prof[d] = abs(result.psi[site_index(model, tuple(cell), s)])
    return prof


def localization_length_fit(result: BoundStateResult, model: LatticeModel,
                            sub: str | int, d_min: int = 2,
                            d_max: int | None = None, axis: int = 0,
                            floor: float = AMPLITUDE_FLOOR) -> tuple[float, float]:
    """Least-squares exponential fit of the bound-state tail.

    Fits ln|psi(d)| vs cell distance d on the chosen sublattice along one
    axis; returns (lambda, r^2) with lambda = -1/slope.  The default window
    skips d in {0, 1} (near-field CLS structure) and runs up to
    min(N_axis/4, first point below the amplitude floor)."""
    n_axis = model.shape[axis]
    if d_max is None:
        d_max = n_axis // 4
    d_max = min(d_max, n_axis // 2 - 1)
    prof = bs_profile(result, model, sub, axis=axis, d_max=d_max)
    ds, ys = [], []
    for d in range(d_min, d_max + 1):
        if prof[d] <= floor:
            break
        ds.append(d)
        ys.append(math.log(prof[d]))
    if len(ds) < 4:
        raise InsufficientData(
            f"only {len(ds)} usable points in the fit window")
    ds_a = np.asarray(ds, dtype=float)
    ys_a = np.asarray(ys)
    slope, intercept = np.polyfit(ds_a, ys_a, 1)
    fitted = slope * ds_a + intercept
    ss_res = float(np.sum((ys_a - fitted) ** 2))
    ss_tot = float(np.sum((ys_a - ys_a.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    if slope >= 0:
        raise InsufficientData("profile does not decay in the fit window")
    return -1.0 / slope, r2
