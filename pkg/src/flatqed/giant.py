"""Giant atoms: multi-site couplings shaped as CLSs or smooth envelopes.

A giant atom couples to several sites at once; all of its physics is carried
by the normalized site state |chi> with chi(x_l) = g_l / gbar.  When |chi>
lies in the flat-band eigenspace the bath resolvent acts on it as the scalar
1/(omega - omega_FB), making bound states and interactions exact and local.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from flatqed.boundstate import BoundStateResult, EmitterSpec, bs_wavefunction
from flatqed.flatband import ClsSet, cls_set, cls_vector
from flatqed.greens import fb_projector
from flatqed.interactions import InteractionMatrix
from flatqed.lattice import LatticeModel, site_index

ENVELOPE_CUTOFF = 1e-12
FB_MEMBERSHIP_TOL = 1e-8


@dataclass(frozen=True)
class SiteState:
    """Normalized single-photon state |chi> plus how it was built."""

    chi: np.ndarray
    provenance: str      # "couplings" | "cls" | "cls-superposition" | "envelope"

    def overlap(self, other: np.ndarray) -> complex:
        return complex(np.vdot(self.chi, other))


def site_state(emitter: EmitterSpec, n_sites: int) -> SiteState:
    """chi(x_l) = g_l / gbar, zero elsewhere."""
    return SiteState(chi=emitter.chi(n_sites), provenance="couplings")


def _emitter_from_vector(model: LatticeModel, omega0: float, g: float,
                         vec: np.ndarray) -> EmitterSpec:
    """Couplings g_l = g * vec_l on the support of a unit-norm vector."""
    support = np.nonzero(np.abs(vec) > 0)[0]
    couplings = tuple((int(x), complex(g * vec[x])) for x in support)
    return EmitterSpec(omega0=float(omega0), couplings=couplings)


def cls_emitter(model: LatticeModel, omega0: float, g: float,
                cell: Sequence[int] | int,
                cls: ClsSet | None = None) -> EmitterSpec:
    """Giant atom whose site state is exactly the CLS of one cell."""
    phi = cls_vector(model, cell, cls)
    return _emitter_from_vector(model, omega0, g, phi / np.linalg.norm(phi))


def cls_superposition_emitter(model: LatticeModel, omega0: float, g: float,
                              cells: Sequence[Sequence[int] | int],
                              coeffs: Sequence[complex],
                              cls: ClsSet | None = None) -> EmitterSpec:
    """Giant atom coupled to  sum_n c_n |phi_n>, renormalized to unit norm.

    Neighbouring CLSs are not orthogonal, so the renormalization uses the
    actual vector norm, not sum |c_n|^2."""
    if len(cells) != len(coeffs):
        raise ValueError("cells and coeffs must have equal length")
    if cls is None:
        cls = cls_set(model)
    vec = np.zeros(model.n_sites, dtype=complex)
    for cell, c in zip(cells, coeffs):
        vec += c * cls_vector(model, cell, cls)
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise ValueError("CLS superposition vanishes")
    return _emitter_from_vector(model, omega0, g, vec / norm)


def envelope_emitter(model: LatticeModel, omega0: float, g: float,
                     sub: str | int, center: Sequence[int] | int,
                     ell: float, cls: ClsSet | None = None) -> EmitterSpec:
    """Giant atom with an exponential envelope of CLSs,  c_n ~ e^{-|n-n0|/ell}.

    The superposition is truncated where the envelope drops below 1e-12 and
    wrapped on the periodic lattice (distances measured around the ring).
    ``sub`` is unused for CLS-based envelopes and kept for symmetry with the
    CLI site syntax."""
    if ell <= 0:
        raise ValueError("envelope length ell must be positive")
    if isinstance(center, (int, np.integer)):
        center = (int(center),)
    if len(center) != model.dim:
        raise ValueError("center dimension mismatch")
    cutoff_range = int(math.ceil(-ell * math.log(ENVELOPE_CUTOFF)))
    cells, coeffs = [], []
    half = [n // 2 for n in model.shape]
    if model.dim == 1:
        n_axis = model.shape[0]
        for d in range(-min(cutoff_range, half[0]), min(cutoff_range, half[0]) + 1):
            c = math.exp(-abs(d) / ell)
            if c < ENVELOPE_CUTOFF:
                continue
            cells.append(((center[0] + d) % n_axis,))
            coeffs.append(c)
    else:
        rng = [range(-min(cutoff_range, h), min(cutoff_range, h) + 1) for h in half]
        for dx in rng[0]:
            for dy in rng[1]:
                c = math.exp(-math.hypot(dx, dy) / ell)
                if c < ENVELOPE_CUTOFF:
                    continue
                cells.append(((center[0] + dx) % model.shape[0],
                              (center[1] + dy) % model.shape[1]))
                coeffs.append(c)
    return cls_superposition_emitter(model, omega0, g, cells, coeffs, cls)


def fb_membership_defect(model: LatticeModel, emitter: EmitterSpec,
                         omega_fb: float) -> float:
    """|| (1 - P_FB) chi ||: zero iff chi lies in the flat-band eigenspace."""
    P = fb_projector(model, omega_fb)
    chi = emitter.chi(model.n_sites)
    return float(np.linalg.norm(chi - P.P @ chi))


def giant_bound_state(model: LatticeModel, emitter: EmitterSpec,
                      omega_fb: float | None = None) -> BoundStateResult:
    """Bound state of a giant atom, psi_BS = gbar G_B(omega0) |chi>.

    Evaluated at the bare frequency (leading order in g), so for chi inside
    the FB eigenspace the photonic part is exactly chi / (omega0 - omega_FB)
    up to normalization.  If the site state is not (numerically) inside the
    flat-band eigenspace a warning is emitted: the CLS-shaped results then
    hold only approximately."""
    if omega_fb is None:
        omega_fb = cls_set(model).omega_fb
    defect = fb_membership_defect(model, emitter, omega_fb)
    if defect > FB_MEMBERSHIP_TOL:
        warnings.warn(
            f"site state leaks out of the flat band (defect {defect:.2e}); "
            "CLS-shaped bound-state results are only approximate",
            stacklevel=2)
    return bs_wavefunction(model, emitter, omega_bs=emitter.omega0)


def giant_interaction(model: LatticeModel, emitters: Sequence[EmitterSpec],
                      omega_fb: float | None = None) -> InteractionMatrix:
    """Flat-band-only interaction of FB-member giants:

        K_{nn'} = gbar^2 / (omega0 - omega_FB) * <chi_n | chi_n'>.

    Exact when every chi lies in the FB eigenspace (the resolvent acts as the
    scalar 1/(omega0 - omega_FB) there); each emitter is checked and a warning
    raised otherwise."""
    emitters = tuple(emitters)
    if not emitters:
        raise ValueError("need at least one emitter")
    if omega_fb is None:
        omega_fb = cls_set(model).omega_fb
    omega0 = emitters[0].omega0
    gbar = emitters[0].gbar
    for em in emitters:
        if abs(em.omega0 - omega0) > 1e-12 * model.J:
            raise ValueError("giant_interaction requires a common omega0")
        defect = fb_membership_defect(model, em, omega_fb)
        if defect > FB_MEMBERSHIP_TOL:
            warnings.warn(
                f"emitter site state leaks out of the flat band "
                f"(defect {defect:.2e})", stacklevel=2)
    chis = np.column_stack([em.chi(model.n_sites) for em in emitters])
    gram = chis.conj().T @ chis
    K = gbar ** 2 / (omega0 - omega_fb) * gram
    return InteractionMatrix(
        emitters=emitters, K=K,
        convention="flat-band-only: K = gbar^2/(omega0-omega_FB) <chi_n|chi_n'>")


def single_site_emitter(model: LatticeModel, omega0: float, g: float,
                        cell: Sequence[int] | int, sub: str | int) -> EmitterSpec:
    """Small-atom convenience wrapper (one coupling)."""
    return EmitterSpec(omega0=float(omega0),
                       couplings=((site_index(model, cell, sub), complex(g)),))
