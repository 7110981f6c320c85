"""U(r) link fields on the finite torus (Z/N)^d.

A gauge field assigns one unitary r x r matrix to every (site, direction)
pair: the parallel transport from the fiber over x to the fiber over
x + e_j.  Constant-flux line bundles are built in closed form with the
standard boundary-twist prescription, so every plaquette in a flux-carrying
coordinate plane has the same phase 2*pi*K_jl/N^2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm


@dataclass(frozen=True)
class LatticeGeometry:
    """Finite torus (Z/N)^d with lattice spacing a = 1/N.

    Sites are indexed lexicographically: coordinates (x_1, ..., x_d) map to
    x_1*N^(d-1) + ... + x_d (C order).
    """

    d: int
    N: int

    @property
    def n_sites(self) -> int:
        return self.N ** self.d

    @property
    def spacing(self) -> float:
        return 1.0 / self.N

    def site_index(self, coords) -> int:
        coords = np.mod(coords, self.N)
        return int(np.ravel_multi_index(tuple(coords), (self.N,) * self.d))

    def site_coords(self, index: int):
        return np.array(np.unravel_index(index, (self.N,) * self.d))

    def all_sites(self):
        return itertools.product(range(self.N), repeat=self.d)


@dataclass(frozen=True)
class FluxMatrix:
    """Antisymmetric integer matrix of first-Chern fluxes per 2-plane."""

    d: int
    K: np.ndarray

    def __post_init__(self):
        K = np.asarray(self.K, dtype=int)
        if K.shape != (self.d, self.d):
            raise ValueError("flux matrix must be d x d")
        if not np.array_equal(K, -K.T):
            raise ValueError("flux matrix must be antisymmetric")
        K.setflags(write=False)
        object.__setattr__(self, "K", K)

    @staticmethod
    def zero(d: int) -> "FluxMatrix":
        return FluxMatrix(d, np.zeros((d, d), dtype=int))

    @staticmethod
    def from_entries(d: int, entries) -> "FluxMatrix":
        """entries: iterable of (j, l, k) with 1-based j < l."""
        K = np.zeros((d, d), dtype=int)
        for j, l, k in entries:
            K[j - 1, l - 1] += k
            K[l - 1, j - 1] -= k
        return FluxMatrix(d, K)

    def __add__(self, other: "FluxMatrix") -> "FluxMatrix":
        if self.d != other.d:
            raise ValueError("flux dimension mismatch")
        return FluxMatrix(self.d, self.K + other.K)


@dataclass(frozen=True)
class GaugeField:
    """Link field: links[site, j] is the r x r transport U_j(x).

    flux_sectors records provenance for fields assembled from
    constant-flux line bundles; it feeds the continuum-index prediction
    and is None when unknown.
    """

    geometry: LatticeGeometry
    rank: int
    links: np.ndarray = field(repr=False)
    flux_sectors: tuple | None = None

    def link(self, coords, j: int) -> np.ndarray:
        """U_j(x) for 0-based direction j."""
        return self.links[self.geometry.site_index(coords), j]


def make_geometry(d: int, N: int) -> LatticeGeometry:
    if d < 1:
        raise ValueError("dimension must be positive")
    if N < 2:
        raise ValueError("lattice too coarse")
    return LatticeGeometry(d=d, N=N)


def _new_links(geom: LatticeGeometry, rank: int) -> np.ndarray:
    links = np.zeros((geom.n_sites, geom.d, rank, rank), dtype=complex)
    links[:, :] = np.eye(rank)
    return links


def trivial_field(geom: LatticeGeometry, rank: int = 1) -> GaugeField:
    if rank < 1:
        raise ValueError("rank must be >= 1")
    sectors = tuple(FluxMatrix.zero(geom.d) for _ in range(rank))
    return GaugeField(geom, rank, _new_links(geom, rank), sectors)


def constant_flux_field(geom: LatticeGeometry, flux: FluxMatrix) -> GaugeField:
    """U(1) link field of a constant-curvature line bundle.

    Per plane j < l with flux K_jl: the bulk phase sits on U_l and grows
    linearly in x_j, and U_j carries the compensating boundary twist on
    the hyperplane x_j = N-1.  All (j,l)-plaquettes then equal
    exp(2*pi*i*K_jl/N^2) and the total flux per 2-torus slice is
    exp(2*pi*i*K_jl).
    """
    if flux.d != geom.d:
        raise ValueError("flux dimension mismatch")
    N = geom.N
    links = _new_links(geom, 1)
    for site, coords in enumerate(geom.all_sites()):
        theta = np.zeros(geom.d)
        for j in range(geom.d):
            for l in range(j + 1, geom.d):
                k = flux.K[j, l]
                if k == 0:
                    continue
                theta[l] += 2 * np.pi * k * coords[j] / N ** 2
                if coords[j] == N - 1:
                    theta[j] -= 2 * np.pi * k * coords[l] / N
        links[site, :, 0, 0] = np.exp(1j * theta)
    return GaugeField(geom, 1, links, (flux,))


def tensor_field(f: GaugeField, g: GaugeField) -> GaugeField:
    if f.geometry != g.geometry:
        raise ValueError("geometry mismatch")
    rank = f.rank * g.rank
    links = np.einsum("sjab,sjcd->sjacbd", f.links, g.links).reshape(
        f.geometry.n_sites, f.geometry.d, rank, rank
    )
    sectors = None
    if f.flux_sectors is not None and g.flux_sectors is not None:
        sectors = tuple(kf + kg for kf in f.flux_sectors for kg in g.flux_sectors)
    return GaugeField(f.geometry, rank, links, sectors)


def direct_sum_field(f: GaugeField, g: GaugeField) -> GaugeField:
    if f.geometry != g.geometry:
        raise ValueError("geometry mismatch")
    rank = f.rank + g.rank
    links = _new_links(f.geometry, rank)
    links[:, :, : f.rank, : f.rank] = f.links
    links[:, :, f.rank :, f.rank :] = g.links
    sectors = None
    if f.flux_sectors is not None and g.flux_sectors is not None:
        sectors = f.flux_sectors + g.flux_sectors
    return GaugeField(f.geometry, rank, links, sectors)


def perturb_field(f: GaugeField, strength: float, seed: int) -> GaugeField:
    """Multiply every link by exp(i H) with a seeded random Hermitian H,
    ||H|| <= strength.  Generator: numpy default_rng (PCG64)."""
    if strength < 0:
        raise ValueError("strength must be >= 0")
    if strength == 0:
        return f
    rng = np.random.default_rng(seed)
    r = f.rank
    links = f.links.copy()
    for site in range(f.geometry.n_sites):
        for j in range(f.geometry.d):
            raw = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
            herm = (raw + raw.conj().T) / 2
            norm = np.linalg.norm(herm, 2)
            if norm > 0:
                herm *= strength / norm
            links[site, j] = links[site, j] @ expm(1j * herm)
    return GaugeField(f.geometry, r, links, None)


def plaquette(f: GaugeField, coords, j: int, l: int) -> np.ndarray:
    """Ordered transport around the elementary (j,l) square at x,
    first along l then along j: U_l(x)^-1 U_j(x+e_l)^-1 U_l(x+e_j) U_j(x)
    read right to left.  For the constant-flux field this has phase
    +2*pi*K_jl/N^2 (0-based directions j < l)."""
    coords = np.asarray(coords)
    ej = np.eye(f.geometry.d, dtype=int)[j]
    el = np.eye(f.geometry.d, dtype=int)[l]
    return (
        f.link(coords, j)
        @ f.link(coords + ej, l)
        @ f.link(coords + el, j).conj().T
        @ f.link(coords, l).conj().T
    )


def estimate_curvature_norm(f: GaugeField) -> float:
    """max over sites and planes of ||P_jl(x) - 1||_2 / a^2."""
    geom = f.geometry
    eye = np.eye(f.rank)
    worst = 0.0
    for coords in geom.all_sites():
        for j in range(geom.d):
            for l in range(j + 1, geom.d):
                dev = np.linalg.norm(plaquette(f, coords, j, l) - eye, 2)
                if dev > worst:
                    worst = dev
    return worst * geom.N ** 2


def wilson_loop(f: GaugeField, base, j: int) -> np.ndarray:
    """Ordered product of the N links along the full j-cycle through base."""
    geom = f.geometry
    coords = np.asarray(base)
    ej = np.eye(geom.d, dtype=int)[j]
    out = np.eye(f.rank, dtype=complex)
    for step in range(geom.N):
        out = f.link(coords + step * ej, j) @ out
    return out


def gauge_transform(f: GaugeField, g) -> GaugeField:
    """Conjugate by a site-dependent unitary: U_j(x) -> g(x+e_j) U_j(x) g(x)*.

    g: array (n_sites, r, r).  Used to test gauge covariance.
    """
    geom = f.geometry
    g = np.asarray(g)
    links = np.empty_like(f.links)
    for site, coords in enumerate(geom.all_sites()):
        for j in range(geom.d):
            ej = np.eye(geom.d, dtype=int)[j]
            nbr = geom.site_index(np.asarray(coords) + ej)
            links[site, j] = g[nbr] @ f.links[site, j] @ g[site].conj().T
    return GaugeField(geom, f.rank, links, f.flux_sectors)


def shift_unitaries(f: GaugeField):
    """The big link-times-shift unitaries U_j acting on sites (x) C^r.

    (U_j psi)(x + e_j) = U_j(x) psi(x); returned as dense arrays of size
    (n_sites*r, n_sites*r), one per direction.
    """
    geom = f.geometry
    n, r = geom.n_sites, f.rank
    out = []
    for j in range(geom.d):
        ej = np.eye(geom.d, dtype=int)[j]
        U = np.zeros((n * r, n * r), dtype=complex)
        for site, coords in enumerate(geom.all_sites()):
            tgt = geom.site_index(np.asarray(coords) + ej)
            U[tgt * r : (tgt + 1) * r, site * r : (site + 1) * r] = f.links[site, j]
        out.append(U)
    return out
