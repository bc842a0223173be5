"""Tight-binding photonic lattice models.

A :class:`LatticeModel` stores a Bravais lattice (1D or 2D, periodic), a set of
sublattices with on-site energies, and a Hermitian-closed hopping list.  Each
hopping entry ``(nu, nup, offset, amp)`` stands for the term

    amp * a^dag_{nu, n} a_{nup, n + offset}  +  h.c.

summed over all cells ``n`` (periodic wrap on every axis).  Models are
immutable and hashable, so eigendecompositions can be cached per model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from flatqed.errors import ConfigError, UnsupportedLattice

Hopping = tuple[int, int, tuple[int, ...], complex]


@dataclass(frozen=True)
class DisorderSpec:
    """Uniform disorder drawn on [-strength, +strength] with a fixed seed.

    ``kind`` is ``"diagonal"`` (on-site energies) or ``"off-diagonal"``
    (hopping magnitudes only; Hermiticity and any chiral symmetry of the
    hopping pattern are preserved).
    """

    kind: str
    strength: float
    seed: int

    def __post_init__(self) -> None:
        if self.kind not in ("diagonal", "off-diagonal"):
            raise ConfigError(f"unknown disorder kind {self.kind!r}")
        if self.strength < 0:
            raise ConfigError("disorder strength must be >= 0")


@dataclass(frozen=True)
class LatticeModel:
    """Immutable tight-binding model on a periodic 1D or 2D lattice."""

    name: str
    dim: int
    shape: tuple[int, ...]           # cells per axis
    sublattices: tuple[str, ...]
    onsite: tuple[float, ...]        # per sublattice, units of J
    hoppings: tuple[Hopping, ...]    # one entry per bond; h.c. implied
    J: float
    params: tuple[tuple[str, float], ...] = ()
    disorder: DisorderSpec | None = None

    def __post_init__(self) -> None:
        if self.dim not in (1, 2) or len(self.shape) != self.dim:
            raise ConfigError("dimension/shape mismatch")
        if len(self.onsite) != self.Q:
            raise ConfigError("one on-site energy per sublattice required")
        for nu, nup, off, _amp in self.hoppings:
            if not (0 <= nu < self.Q and 0 <= nup < self.Q):
                raise ConfigError("hopping sublattice index out of range")
            if len(off) != self.dim:
                raise ConfigError("hopping offset dimension mismatch")
            if any(abs(o) >= n for o, n in zip(off, self.shape)):
                raise ConfigError("hopping offset wraps onto itself")

    @property
    def Q(self) -> int:
        return len(self.sublattices)

    @property
    def n_cells(self) -> int:
        return int(np.prod(self.shape))

    @property
    def n_sites(self) -> int:
        return self.Q * self.n_cells

    def param(self, key: str) -> float:
        for k, v in self.params:
            if k == key:
                return v
        raise KeyError(key)

    def cell_index(self, cell: Sequence[int] | int) -> int:
        """Linear index of a cell (lexicographic, periodic wrap)."""
        if isinstance(cell, (int, np.integer)):
            cell = (int(cell),)
        if len(cell) != self.dim:
            raise ConfigError("cell coordinate dimension mismatch")
        idx = 0
        for c, n in zip(cell, self.shape):
            idx = idx * n + (int(c) % n)
        return idx

    def cells(self) -> Iterable[tuple[int, ...]]:
        return np.ndindex(*self.shape)

    def sublattice_id(self, sub: str | int) -> int:
        if isinstance(sub, (int, np.integer)):
            return int(sub)
        try:
            return self.sublattices.index(sub)
        except ValueError:
            raise ConfigError(f"unknown sublattice {sub!r}") from None


def site_index(model: LatticeModel, cell: Sequence[int] | int, sub: str | int) -> int:
    """Flat site index: sites are ordered cell-major, sublattice-minor."""
    return model.cell_index(cell) * model.Q + model.sublattice_id(sub)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def build_chain(N: int, J: float = 1.0, onsite: float = 0.0) -> LatticeModel:
    """Homogeneous chain (Q=1): single band  onsite + 2J cos k.

    ``N == 1`` is allowed as the degenerate single-cavity case (no hopping);
    ``N == 2`` is rejected (the wrap bond would coincide with the direct one).
    """
    if N != 1 and N < 3:
        raise ConfigError("chain requires N = 1 or N >= 3")
    if J <= 0:
        raise ConfigError("J must be positive")
    hops: tuple[Hopping, ...] = () if N == 1 else ((0, 0, (1,), J),)
    return LatticeModel("chain", 1, (N,), ("a",), (onsite,), hops, J)


def build_sawtooth(N: int, J: float = 1.0) -> LatticeModel:
    """Sawtooth lattice (Q=2): flat band at -2J, dispersive band 2J(1+cos k).

    Hopping signs (+J between b neighbours, +sqrt(2) J on the a-b zigzag) are
    fixed so that the flat band sits at -2J below the dispersive band.
    """
    if N < 4:
        raise ConfigError("sawtooth requires N >= 4")
    if J <= 0:
        raise ConfigError("J must be positive")
    s2 = math.sqrt(2.0)
    hops: tuple[Hopping, ...] = (
        (1, 1, (1,), J),        # b_n -- b_{n+1}
        (0, 1, (0,), s2 * J),   # a_n -- b_n
        (0, 1, (-1,), s2 * J),  # a_n -- b_{n-1}
    )
    return LatticeModel("sawtooth", 1, (N,), ("a", "b"), (0.0, 0.0), hops, J)


def build_stub(N: int, J: float = 1.0, Delta: float = 4.0) -> LatticeModel:
    """Stub lattice (Q=3): bands {0, +-J sqrt(Delta + 2(1+cos k))}.

    The a-sublattice is side-coupled to b with rate J sqrt(Delta); Delta = 0
    closes the gap (band touching at k = pi).
    """
    if N < 4:
        raise ConfigError("stub requires N >= 4")
    if J <= 0 or Delta < 0:
        raise ConfigError("require J > 0 and Delta >= 0")
    hops: tuple[Hopping, ...] = (
        (0, 1, (0,), math.sqrt(Delta) * J),  # a_n -- b_n
        (1, 2, (0,), J),                     # b_n -- c_n
        (2, 1, (1,), J),                     # c_n -- b_{n+1}
    )
    return LatticeModel(
        "stub", 1, (N,), ("a", "b", "c"), (0.0, 0.0, 0.0), hops, J,
        params=(("Delta", float(Delta)),),
    )


def build_double_comb(N: int, J: float = 1.0, t: float = 1.0,
                      omega_c: float = 0.0) -> LatticeModel:
    """Double-comb lattice (Q=3): two side cavities a, b at frequency omega_c
    hanging off every site of a c-chain.  Exact flat band at omega_c with
    orthogonal CLSs (|a_n> - |b_n>)/sqrt(2)."""
    if N < 3:
        raise ConfigError("double-comb requires N >= 3")
    if J <= 0 or t <= 0:
        raise ConfigError("require J > 0 and t > 0")
    hops: tuple[Hopping, ...] = (
        (0, 2, (0,), t),   # a_n -- c_n
        (1, 2, (0,), t),   # b_n -- c_n
        (2, 2, (1,), J),   # c_n -- c_{n+1}
    )
    return LatticeModel(
        "doublecomb", 1, (N,), ("a", "b", "c"),
        (float(omega_c), float(omega_c), 0.0), hops, J,
        params=(("t", float(t)), ("omega_c", float(omega_c))),
    )


def build_kagome1d(N: int, J: float = 1.0) -> LatticeModel:
    """1D analog of the Kagome lattice (Q=5): flat band at +2J touching the
    upper edge of a dispersive band quadratically."""
    if N < 4:
        raise ConfigError("kagome1d requires N >= 4")
    if J <= 0:
        raise ConfigError("J must be positive")
    # sublattices a,b,c,d,e = 0..4
    hops: tuple[Hopping, ...] = (
        (0, 1, (0,), J),    # + a_n b_n
        (1, 2, (0,), -J),   # - b_n c_n
        (2, 3, (0,), -J),   # - c_n d_n
        (3, 4, (0,), J),    # + d_n e_n
        (4, 2, (1,), -J),   # - e_n c_{n+1}
        (2, 0, (-1,), -J),  # - c_{n+1} a_n
        (0, 1, (1,), -J),   # - a_n b_{n+1}
        (3, 4, (-1,), -J),  # - d_{n+1} e_n
    )
    return LatticeModel(
        "kagome1d", 1, (N,), ("a", "b", "c", "d", "e"),
        (0.0,) * 5, hops, J,
    )


def build_checkerboard(Nx: int, Ny: int, J: float = 1.0) -> LatticeModel:
    """2D checkerboard lattice (Q=2): flat band at 0 touching the dispersive
    band 2J(2 - cos kx - cos ky) quadratically at the Gamma point.

    Bloch form H_k = omega_d(k) I - J v_k v_k^dag with
    v_k = (1 - e^{-i kx}, 1 - e^{i ky}).
    """
    if Nx < 4 or Ny < 4:
        raise ConfigError("checkerboard requires Nx, Ny >= 4")
    if J <= 0:
        raise ConfigError("J must be positive")
    hops: tuple[Hopping, ...] = (
        (0, 0, (0, 1), -J),    # a_n -- a_{n+y}
        (1, 1, (1, 0), -J),    # b_n -- b_{n+x}
        (0, 1, (0, 0), -J),
        (0, 1, (1, 0), J),
        (0, 1, (0, 1), J),
        (0, 1, (1, 1), -J),
    )
    return LatticeModel(
        "checkerboard", 2, (Nx, Ny), ("a", "b"), (2.0 * J, 2.0 * J), hops, J,
    )


_BUILDERS = {
    "chain": build_chain,
    "sawtooth": build_sawtooth,
    "stub": build_stub,
    "doublecomb": build_double_comb,
    "kagome1d": build_kagome1d,
    "checkerboard": build_checkerboard,
}


def model_from_spec(spec: Mapping) -> LatticeModel:
    """Build a model from a JSON-style dict.

    Schema: ``{"model": name, "N": int or [Nx, Ny], "J": float,
    "params": {"Delta"|"t"|"omega_c": float}, "disorder": {...}}``.
    """
    try:
        name = spec["model"]
    except KeyError:
        raise ConfigError("lattice spec missing 'model'") from None
    if name not in _BUILDERS:
        raise ConfigError(f"unknown lattice model {name!r}")
    N = spec.get("N")
    if N is None:
        raise ConfigError("lattice spec missing 'N'")
    J = float(spec.get("J", 1.0))
    params = dict(spec.get("params", {}))
    try:
        if name == "checkerboard":
            if np.isscalar(N):
                N = (int(N), int(N))
            model = build_checkerboard(int(N[0]), int(N[1]), J)
        elif name == "stub":
            model = build_stub(int(N), J, float(params.get("Delta", 4.0)))
        elif name == "doublecomb":
            model = build_double_comb(
                int(N), J, float(params.get("t", 1.0)),
                float(params.get("omega_c", 0.0)))
        else:
            model = _BUILDERS[name](int(N), J)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad lattice spec: {exc}") from exc
    dis = spec.get("disorder")
    if dis:
        model = apply_disorder(model, DisorderSpec(
            kind=dis["kind"], strength=float(dis["strength"]),
            seed=int(dis.get("seed", 0))))
    return model


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------

def _is_real(model: LatticeModel) -> bool:
    return all(complex(amp).imag == 0.0 for *_ignore, amp in model.hoppings)


def _disorder_draws(model: LatticeModel) -> tuple[np.ndarray | None, np.ndarray | None]:
    """Deterministic disorder draws (diagonal per site, off-diagonal per bond)."""
    if model.disorder is None:
        return None, None
    rng = np.random.default_rng(model.disorder.seed)
    d = model.disorder.strength
    if model.disorder.kind == "diagonal":
        return rng.uniform(-d, d, size=model.n_sites), None
    n_bonds = model.n_cells * len(model.hoppings)
    return None, rng.uniform(-d, d, size=n_bonds)


def real_space_hamiltonian(model: LatticeModel) -> np.ndarray:
    """Dense Hermitian single-excitation Hamiltonian over all sites."""
    n = model.n_sites
    dtype = float if _is_real(model) else complex
    H = np.zeros((n, n), dtype=dtype)
    diag_dis, hop_dis = _disorder_draws(model)
    for s, eps in enumerate(model.onsite):
        idx = np.arange(s, n, model.Q)
        H[idx, idx] += eps
    if diag_dis is not None:
        H[np.arange(n), np.arange(n)] += diag_dis
    bond = 0
    for cell in model.cells():
        ci = model.cell_index(cell)
        for nu, nup, off, amp in model.hoppings:
            cj = model.cell_index(tuple(c + o for c, o in zip(cell, off)))
            i = ci * model.Q + nu
            j = cj * model.Q + nup
            t = complex(amp) if dtype is complex else float(np.real(amp))
            if hop_dis is not None and t != 0:
                t = t * (abs(t) + hop_dis[bond]) / abs(t)
            bond += 1
            H[i, j] += t
            H[j, i] += np.conj(t)
    return H


def bloch_hamiltonian(model: LatticeModel, k: float | Sequence[float]) -> np.ndarray:
    """Q x Q Bloch Hamiltonian at wavevector k (components in [-pi, pi)).

    Convention: a hopping ``amp * a^dag_{nu,n} a_{nup,n+off}`` contributes
    ``amp * exp(-i k . off)`` to ``H_k[nu, nup]`` (plus Hermitian conjugate),
    so real-space eigenvalues on the commensurate grid coincide with the union
    of Bloch eigenvalues.
    """
    if model.disorder is not None:
        raise UnsupportedLattice("Bloch Hamiltonian undefined for disordered models")
    kv = np.atleast_1d(np.asarray(k, dtype=float))
    if kv.shape != (model.dim,):
        raise ConfigError("wavevector dimension mismatch")
    H = np.diag(np.asarray(model.onsite, dtype=complex))
    for nu, nup, off, amp in model.hoppings:
        phase = np.exp(-1j * float(np.dot(kv, off)))
        H[nu, nup] += amp * phase
        H[nup, nu] += np.conj(amp * phase)
    return H


def apply_disorder(model: LatticeModel, spec: DisorderSpec) -> LatticeModel:
    """Return a disordered copy of the model (deterministic given the seed).

    Strength 0 returns the model unchanged.  Disorder is realized when the
    real-space Hamiltonian is assembled; diagonal disorder shifts on-site
    energies site-by-site, off-diagonal disorder shifts hopping magnitudes
    bond-by-bond (leaving on-site energies untouched).
    """
    if spec.strength < 0:
        raise ConfigError("disorder strength must be >= 0")
    if spec.strength == 0:
        return model
    if model.disorder is not None:
        raise ConfigError("model already carries disorder")
    return replace(model, disorder=spec)
