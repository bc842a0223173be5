"""CLS stencils and overlaps, f(k), the weight function xi, and the
settsech localization laws in 1D and 2D.

The weight function is the inverse of the CLS Gram matrix,

    xi_{nn'} = (1/N) sum_k e^{i k . (r_n - r_{n'})} / f(k),
    f(k)     = 1 + 2 sum_d alpha_d cos k_d,

where alpha_d is the nearest-neighbour CLS overlap along direction d.  In 1D
xi has the closed form of a single signed exponential; on a 2D coordinate
axis it is governed by two branch-point singularities whose locations set the
two localization lengths returned by :func:`lambda_2d`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from flatqed.errors import SingularF, UnsupportedLattice
from flatqed.greens import FlatBandProjector
from flatqed.lattice import LatticeModel, site_index

StencilEntry = tuple[int, tuple[int, ...], float]


@dataclass(frozen=True)
class ClsSet:
    """Per-cell compact-localized-state stencil and its overlap data.

    ``stencil`` lists (sublattice id, cell offset, coefficient); the CLS of
    cell n is the translate of the stencil by n.  ``cls_class`` is the class
    U (cells covered per direction); ``alphas`` are the signed
    nearest-neighbour overlaps per direction.
    """

    lattice: str
    omega_fb: float
    stencil: tuple[StencilEntry, ...]
    cls_class: tuple[int, ...]
    alphas: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.alphas)


def cls_set(model: LatticeModel) -> ClsSet:
    """The minimal CLS stencil of a flat-band builder model."""
    J = model.J
    if model.name == "sawtooth":
        h = 0.5
        return ClsSet(
            "sawtooth", -2.0 * J,
            ((0, (0,), h), (0, (1,), h), (1, (0,), -math.sqrt(2) * h)),
            (2,), (0.25,))
    if model.name == "stub":
        Delta = model.param("Delta")
        norm = 1.0 / math.sqrt(2.0 + Delta)
        return ClsSet(
            "stub", 0.0,
            ((0, (0,), norm), (0, (1,), norm), (2, (0,), -math.sqrt(Delta) * norm)),
            (2,), (1.0 / (2.0 + Delta),))
    if model.name == "doublecomb":
        r = 1.0 / math.sqrt(2.0)
        return ClsSet(
            "doublecomb", model.param("omega_c"),
            ((0, (0,), r), (1, (0,), -r)),
            (1,), (0.0,))
    if model.name == "kagome1d":
        r = 1.0 / math.sqrt(6.0)
        return ClsSet(
            "kagome1d", 2.0 * J,
            ((2, (0,), r), (2, (1,), r),
             (0, (0,), -r), (1, (0,), -r), (3, (0,), -r), (4, (0,), -r)),
            (2,), (1.0 / 6.0,))
    if model.name == "checkerboard":
        h = 0.5
        return ClsSet(
            "checkerboard", 0.0,
            ((0, (0, 0), h), (0, (-1, 0), -h), (1, (0, 0), h), (1, (0, 1), -h)),
            (2, 2), (-0.25, -0.25))
    raise UnsupportedLattice(f"no CLS set for lattice {model.name!r}")


def cls_vector(model: LatticeModel, cell: Sequence[int] | int,
               cls: ClsSet | None = None) -> np.ndarray:
    """Site-space vector of the CLS centered at ``cell``."""
    if cls is None:
        cls = cls_set(model)
    if isinstance(cell, (int, np.integer)):
        cell = (int(cell),)
    phi = np.zeros(model.n_sites)
    for sub, off, coeff in cls.stencil:
        shifted = tuple(c + o for c, o in zip(cell, off))
        phi[site_index(model, shifted, sub)] += coeff
    return phi


def _alphas(obj) -> tuple[float, ...]:
    if isinstance(obj, ClsSet):
        return obj.alphas
    if np.isscalar(obj):
        return (float(obj),)
    return tuple(float(a) for a in obj)


def f_of_k(cls, k) -> float:
    """f(k) = 1 + 2 sum_d alpha_d cos(k_d); the CLS Gram symbol."""
    alphas = _alphas(cls)
    kv = np.atleast_1d(np.asarray(k, dtype=float))
    if kv.shape != (len(alphas),):
        raise ValueError("wavevector dimension mismatch with alphas")
    return float(1.0 + 2.0 * np.sum(np.asarray(alphas) * np.cos(kv)))


def xi_numeric(cls, delta_n, n_k: int = 4096) -> float:
    """Discrete Brillouin-zone sum (1/N) sum_k e^{i k . dn} / f(k).

    Raises :class:`SingularF` if f vanishes anywhere on the grid."""
    alphas = _alphas(cls)
    dn = np.atleast_1d(np.asarray(delta_n, dtype=int))
    if dn.shape != (len(alphas),):
        raise ValueError("offset dimension mismatch with alphas")
    k = 2.0 * np.pi * np.arange(n_k) / n_k
    if len(alphas) == 1:
        f = 1.0 + 2.0 * alphas[0] * np.cos(k)
        if np.min(np.abs(f)) < 1e-14:
            raise SingularF("f(k) vanishes on the grid")
        val = np.mean(np.cos(k * dn[0]) / f)
        return float(val)
    # 2D: sum row-by-row over kx to bound memory
    cy = 2.0 * alphas[1] * np.cos(k)
    acc = 0.0
    phase_y = np.cos(k * dn[1])
    for kx in k:
        f = 1.0 + 2.0 * alphas[0] * np.cos(kx) + cy
        if np.min(np.abs(f)) < 1e-14:
            raise SingularF("f(k) vanishes on the grid")
        acc += np.cos(kx * dn[0]) * float(np.sum(phase_y / f))
    return float(acc / n_k ** 2)


def settsech(x: float) -> float:
    """Inverse hyperbolic secant: settsech(x) = ln((1 + sqrt(1 - x^2)) / x)."""
    if not 0.0 < x <= 1.0:
        raise ValueError("settsech defined for 0 < x <= 1")
    return math.log((1.0 + math.sqrt(1.0 - x * x)) / x)


def lambda_1d(alpha: float) -> float:
    """1D localization length of xi: 1 / settsech(2 |alpha|), |alpha| < 1/2."""
    a = abs(alpha)
    if not 0.0 < a < 0.5:
        raise ValueError("lambda_1d requires 0 < |alpha| < 1/2")
    return 1.0 / settsech(2.0 * a)


def lambda_2d(alpha: float) -> tuple[float, float]:
    """The two 2D axis localization lengths (isotropic overlap alpha):

        1/lambda_2d  = settsech|2 alpha / (1 - 2 alpha)|,
        1/lambda'_2d = settsech|2 alpha / (1 + 2 alpha)|.

    lambda_2d diverges as |alpha| -> 1/4 while lambda'_2d stays finite."""
    a = abs(alpha)
    if not 0.0 < a <= 0.25:
        raise ValueError("lambda_2d requires 0 < |alpha| <= 1/4")
    x1 = 2.0 * a / (1.0 - 2.0 * a)
    x2 = 2.0 * a / (1.0 + 2.0 * a)
    lam1 = math.inf if x1 >= 1.0 else 1.0 / settsech(x1)
    lam2 = 1.0 / settsech(x2)
    return lam1, lam2


def xi_analytic_1d(alpha: float, delta_n: int) -> float:
    """Closed form of the 1D weight function:

        xi(dn) = (-sgn alpha)^{|dn|} / sqrt(1 - 4 alpha^2) * exp(-|dn| / lambda_1d)
    """
    a = float(alpha)
    if not abs(a) < 0.5:
        raise ValueError("xi_analytic_1d requires |alpha| < 1/2")
    d = abs(int(delta_n))
    if a == 0.0:
        return 1.0 if d == 0 else 0.0
    pref = 1.0 / math.sqrt(1.0 - 4.0 * a * a)
    sign = (-1.0 if a > 0 else 1.0) ** d
    return sign * pref * math.exp(-d / lambda_1d(a))


def xi_2d_poles(alpha: float) -> tuple[float, float]:
    """The two real singularities (inside the unit circle) that govern the
    on-axis decay of the 2D weight function, for 0 < alpha < 1/4:

        z_1 = (2a - 1 + sqrt(1 - 4a)) / (2a),
        z_2 = (-(2a + 1) + sqrt(1 + 4a)) / (2a).

    |z_1| = exp(-1/lambda_2d) and |z_2| = exp(-1/lambda'_2d)."""
    a = float(alpha)
    if not 0.0 < a < 0.25:
        raise ValueError("poles defined for 0 < alpha < 1/4")
    z1 = (2.0 * a - 1.0 + math.sqrt(1.0 - 4.0 * a)) / (2.0 * a)
    z2 = (-(2.0 * a + 1.0) + math.sqrt(1.0 + 4.0 * a)) / (2.0 * a)
    return z1, z2


@lru_cache(maxsize=64)
def _axis_quadrature(alpha: float, n_nodes: int = 256):
    """Precompute the branch-cut quadrature nodes/weights for xi_2d_axis.

    Doing the inner (transverse) momentum integral by residues leaves an
    outer contour integral whose only singularities inside the unit circle
    are the branch points z_1 < z_2 < 0.  Collapsing the contour onto the
    cut [z_1, z_2] and substituting z = -t, t = mid + half*cos(theta) gives a
    smooth positive integrand evaluated by Gauss-Legendre quadrature.
    """
    z1, z2 = xi_2d_poles(alpha)
    t1, t2 = -z1, -z2          # 0 < t2 < t1 < 1
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    theta = 0.5 * np.pi * (nodes + 1.0)
    wq = 0.5 * np.pi * weights
    t = 0.5 * (t1 + t2) + 0.5 * (t1 - t2) * np.cos(theta)
    outer = np.sqrt((1.0 / t1 - t) * (1.0 / t2 - t))
    base = wq / (np.pi * alpha * outer)
    return t, base


def xi_2d_axis(alpha: float, d: int) -> float:
    """Exact on-axis 2D weight function xi(d, 0) for isotropic |alpha| < 1/4.

    Evaluated from the branch-cut representation

        xi(d) = (-sgn a)^d / (pi a) * Int_{t2}^{t1} t^d dt /
                sqrt((t1 - t)(t - t2)(1/t1 - t)(1/t2 - t)),   a = |alpha|,

    which is positive and non-oscillatory, so the relative accuracy is
    preserved even deep in the exponential tail.  Asymptotically
    |xi(d+1)/xi(d)| -> exp(-1/lambda_2d) (the slower branch point)."""
    a = float(alpha)
    if a == 0.0:
        raise ValueError("alpha = 0: xi is a Kronecker delta; no 2D law")
    if not abs(a) < 0.25:
        raise SingularF("|alpha| >= 1/4: f(k) vanishes in the Brillouin zone")
    d = abs(int(d))
    t, base = _axis_quadrature(abs(a))
    val = float(np.sum(t ** d * base))
    sign = (-1.0 if a > 0 else 1.0) ** d
    return sign * val


# ---------------------------------------------------------------------------
# CLS expansion of the FB projector and of bound states
# ---------------------------------------------------------------------------

def _cls_matrix(model: LatticeModel, cls: ClsSet) -> np.ndarray:
    """Matrix Phi (sites x cells) whose columns are the CLS vectors."""
    Phi = np.zeros((model.n_sites, model.n_cells))
    for cell in model.cells():
        Phi[:, model.cell_index(cell)] = cls_vector(model, cell, cls)
    return Phi


def _xi_kernel(model: LatticeModel, cls: ClsSet) -> np.ndarray:
    """Finite-N weight function xi(dn) on the lattice's own k-grid,
    returned as an array over cell offsets (shape = model.shape)."""
    axes = [2.0 * np.pi * np.arange(n) / n for n in model.shape]
    mesh = np.meshgrid(*axes, indexing="ij")
    f = np.ones(model.shape)
    for a, km in zip(cls.alphas, mesh):
        f = f + 2.0 * a * np.cos(km)
    if np.min(np.abs(f)) < 1e-14:
        raise SingularF("f(k) vanishes on the lattice k-grid "
                        "(incomplete CLS basis; band touching)")
    xi = np.fft.ifftn(1.0 / f)  # ifftn carries the (1/N) sum convention
    assert np.max(np.abs(xi.imag)) < 1e-12
    return xi.real


def projector_cls_expansion(cls: ClsSet, model: LatticeModel) -> np.ndarray:
    """Assemble P_FB = sum_{nn'} xi_{nn'} |phi_{n'}><phi_n| from stencils and
    the finite-N weight function.  Equals the eigenvector-based projector for
    isolated flat bands with a complete CLS basis."""
    Phi = _cls_matrix(model, cls)
    Xi = _xi_circulant(model, cls)
    return Phi @ Xi @ Phi.T


def _xi_circulant(model: LatticeModel, cls: ClsSet) -> np.ndarray:
    """The weight function as a circulant over cells:
    Xi[n, n'] = xi[(n - n') mod shape]."""
    xi = _xi_kernel(model, cls)
    coords = np.stack([g.ravel() for g in np.indices(model.shape)], axis=-1)
    diff = (coords[:, None, :] - coords[None, :, :]) % np.asarray(model.shape)
    return xi[tuple(diff[..., d] for d in range(model.dim))]


def bs_cls_weights(cls: ClsSet, model: LatticeModel, x0: int) -> np.ndarray:
    """CLS weights of the flat-band part of a bound state seeded at site x0:

        w_n = sum_{n'} xi_{nn'} phi_{n'}(x0),

    so that sum_n w_n phi_n(x) = <x| P_FB |x0>."""
    Phi = _cls_matrix(model, cls)
    Xi = _xi_circulant(model, cls)
    return Xi @ Phi[x0, :]


def reconstruct_from_weights(cls: ClsSet, model: LatticeModel,
                             w: np.ndarray) -> np.ndarray:
    """Site-space vector sum_n w_n |phi_n>."""
    return _cls_matrix(model, cls) @ w


def fb_projector_matches(P_eigen: FlatBandProjector, P_cls: np.ndarray) -> float:
    """Max elementwise deviation between the two projector constructions."""
    return float(np.max(np.abs(P_eigen.P - P_cls)))
