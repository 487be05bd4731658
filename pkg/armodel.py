"""
Auslander-Reiten Model
Iso-classes of indecomposables of mod KQ, the bounded derived category and the
cluster category of a bipartite Dynkin quiver, with the folding projection onto
the I2(2n) root plane.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from algnum import RealCycNumber, cyc_context, integer_inverse
from quiver import Folding, build_folding

logger = logging.getLogger(__name__)

LAYERS = ('module', 'derived', 'cluster')

ProjVector = Tuple[RealCycNumber, RealCycNumber]


class ProjectiveError(ValueError):
    """Raised when τ is applied to a projective module"""


@dataclass(frozen=True)
class Indec:
    """
    An indecomposable object up to isomorphism.

    Args:
        layer: 'module', 'derived' or 'cluster'
        vertex: row of the object, τ^m I(vertex)
        m: power of τ
        shift: derived shift k of Σ^k τ^m I(vertex)
        shifted_projective: cluster object ΣP(vertex)
    """
    layer: str
    vertex: str
    m: int = 0
    shift: int = 0
    shifted_projective: bool = False

    def __post_init__(self):
        if self.layer not in LAYERS:
            raise ValueError(f"unknown layer {self.layer!r}")


# -------------------------
# Root system of I2(2n)
# -------------------------
def rotation(n: int) -> np.ndarray:
    """Action of τ on projections, [[θ²-1, -θ²], [1, -1]]"""
    ctx = cyc_context(n)
    t2 = ctx.theta() * ctx.theta()
    return np.array([[t2 - 1, -t2], [ctx.one(), -ctx.one()]], dtype=object)


def apply_matrix(R: np.ndarray, v: ProjVector) -> ProjVector:
    return (R[0, 0] * v[0] + R[0, 1] * v[1], R[1, 0] * v[0] + R[1, 1] * v[1])


@lru_cache(maxsize=None)
def short_roots(n: int) -> Tuple[ProjVector, ...]:
    """α_m = R^m (1, 0) for m = 0..2n-1"""
    ctx = cyc_context(n)
    R = rotation(n)
    out = [(ctx.one(), ctx.zero())]
    for _ in range(2 * n - 1):
        out.append(apply_matrix(R, out[-1]))
    return tuple(out)


@lru_cache(maxsize=None)
def long_roots(n: int) -> Tuple[ProjVector, ...]:
    """β_m = R^m (θ², 1) for m = 0..2n-1"""
    ctx = cyc_context(n)
    R = rotation(n)
    out = [(ctx.theta() * ctx.theta(), ctx.one())]
    for _ in range(2 * n - 1):
        out.append(apply_matrix(R, out[-1]))
    return tuple(out)


def positive_roots(n: int) -> List[ProjVector]:
    """The 2n positive roots, n short then n long, in simple-root coordinates"""
    return list(short_roots(n)[:n]) + list(long_roots(n)[:n])


def all_roots(n: int) -> List[ProjVector]:
    return list(short_roots(n)) + list(long_roots(n))


def gram_matrix(folding: Folding) -> np.ndarray:
    """Euclidean Gram matrix of the simple roots: |α0| = λ, |α1| = λθ"""
    ctx = folding.ctx
    lam = ctx.one() * folding.ftype.lam
    t2 = ctx.theta() * ctx.theta()
    half = lam * lam * t2 / 2
    return np.array([[lam * lam, -half], [-half, lam * lam * t2]], dtype=object)


def squared_length(folding: Folding, v: ProjVector) -> RealCycNumber:
    G = gram_matrix(folding)
    return v[0] * v[0] * G[0, 0] + 2 * v[0] * v[1] * G[0, 1] + v[1] * v[1] * G[1, 1]


# -------------------------
# AR model
# -------------------------
class ARModel:
    """
    The AR quiver of a folding's bipartite Dynkin quiver, knitted from the
    injectives by the Coxeter transformation.
    """

    def __init__(self, folding: Folding):
        if folding.doubled:
            raise ValueError("AR models are built from the undoubled folding")
        self.folding = folding
        self.n = folding.n
        self.vertices = list(folding.vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        size = len(self.vertices)
        self.arrows = [(self.index[a], self.index[b]) for a, b in folding.arrows()]
        self.neighbours = {i: sorted({b for a, b in self.arrows if a == i} | {a for a, b in self.arrows if b == i})
                           for i in range(size)}
        self.parity = {v: folding.image[i] for i, v in enumerate(self.vertices)}

        eye = np.eye(size, dtype=np.int64)
        self.proj = {}
        self.inj = {}
        for i in range(size):
            p = eye[i].copy()
            q = eye[i].copy()
            for a, b in self.arrows:
                if a == i:
                    p[b] += 1
                if b == i:
                    q[a] += 1
            self.proj[i] = p
            self.inj[i] = q

        # columns dim P(i)
        self.cartan = np.stack([self.proj[i] for i in range(size)], axis=1)
        self.coxeter = -self.cartan.T @ integer_inverse(self.cartan)

        self.rows: Dict[str, List[np.ndarray]] = {}
        self.sigma: Dict[str, str] = {}
        projectives = {tuple(p): self.vertices[i] for i, p in self.proj.items()}
        for v in self.vertices:
            row = [self.inj[self.index[v]]]
            while tuple(row[-1]) not in projectives:
                row.append(self.coxeter @ row[-1])
                if len(row) > 4 * self.n:
                    raise ArithmeticError(f"row of {v} does not reach a projective")
            self.rows[v] = row
            self.sigma[v] = projectives[tuple(row[-1])]

        self._by_dims = {tuple(d): Indec('module', v, m) for v, row in self.rows.items() for m, d in enumerate(row)}
        logger.debug("AR model for %s: %d indecomposables", folding.ftype, len(self._by_dims))

    def __repr__(self):
        return f"<ARModel {self.folding.ftype}>"

    # -------------------------
    # Objects
    # -------------------------
    def m_max(self, vertex: str) -> int:
        return len(self.rows[vertex]) - 1

    def module_indecs(self) -> List[Indec]:
        return [Indec('module', v, m) for v in self.vertices for m in range(len(self.rows[v]))]

    def enumerate_indecs(self, layer: str = 'module', shifts: Sequence[int] = (0, 1)) -> List[Indec]:
        """All indecomposables of a layer; the derived layer is cut to the given shifts"""
        if layer == 'module':
            return self.module_indecs()
        if layer == 'derived':
            return [Indec('derived', x.vertex, x.m, k) for k in shifts for x in self.module_indecs()]
        if layer == 'cluster':
            out = [Indec('cluster', x.vertex, x.m) for x in self.module_indecs()]
            out += [Indec('cluster', v, shifted_projective=True) for v in self.vertices]
            return out
        raise ValueError(f"unknown layer {layer!r}")

    def projective(self, vertex: str, layer: str = 'module') -> Indec:
        """P(vertex) as τ^m I(σ^-1(vertex))"""
        for v, target in self.sigma.items():
            if target == vertex:
                return Indec(layer, v, self.m_max(v))
        raise KeyError(f"unknown vertex {vertex!r}")

    def injective(self, vertex: str, layer: str = 'module') -> Indec:
        self._check_vertex(vertex)
        return Indec(layer, vertex, 0)

    def shifted_projective(self, vertex: str) -> Indec:
        self._check_vertex(vertex)
        return Indec('cluster', vertex, shifted_projective=True)

    def _check_vertex(self, vertex: str):
        if vertex not in self.index:
            raise KeyError(f"unknown vertex {vertex!r} for {self.folding.ftype}")

    def is_projective(self, x: Indec) -> bool:
        return not x.shifted_projective and x.m == self.m_max(x.vertex)

    def is_injective(self, x: Indec) -> bool:
        return not x.shifted_projective and x.m == 0

    def dim(self, x: Indec) -> np.ndarray:
        """Dimension vector of the underlying module (of P(i) for ΣP(i))"""
        if x.shifted_projective:
            return self.proj[self.index[x.vertex]].copy()
        return self.rows[x.vertex][x.m].copy()

    def class_vector(self, x: Indec) -> np.ndarray:
        """Class in the Grothendieck group: shifts alternate the sign"""
        sign = -1 if (x.shift % 2 or x.shifted_projective) else 1
        return sign * self.dim(x)

    def column(self, x: Indec) -> int:
        """AR column: 2m + parity, shifted by 2n per derived degree; cyclic mod 2n+2 for clusters"""
        par = self.parity[x.vertex]
        if x.shifted_projective:
            return 2 * self.n + par
        col = 2 * x.m + par
        if x.layer == 'derived':
            col -= 2 * self.n * x.shift
        return col

    def cluster_columns(self) -> int:
        return 2 * self.n + 2

    # -------------------------
    # Translation
    # -------------------------
    def tau(self, x: Indec) -> Indec:
        if x.shifted_projective:
            return Indec('cluster', x.vertex, 0)
        if not self.is_projective(x):
            return Indec(x.layer, x.vertex, x.m + 1, x.shift)
        target = self.sigma[x.vertex]
        if x.layer == 'module':
            raise ProjectiveError(f"τ of the projective P({target}) is not a module")
        if x.layer == 'cluster':
            return Indec('cluster', target, shifted_projective=True)
        return Indec('derived', target, 0, x.shift - 1)

    def tau_inverse(self, x: Indec) -> Indec:
        if x.shifted_projective:
            return self.projective(x.vertex, 'cluster')
        if x.m > 0:
            return Indec(x.layer, x.vertex, x.m - 1, x.shift)
        if x.layer == 'module':
            raise ProjectiveError(f"τ^-1 of the injective I({x.vertex}) is not a module")
        if x.layer == 'cluster':
            return Indec('cluster', x.vertex, shifted_projective=True)
        p = self.projective(x.vertex)
        return Indec('derived', p.vertex, p.m, x.shift + 1)

    def mesh_predecessors(self, x: Indec) -> List[Indec]:
        """Middle terms of the mesh ending in the module x"""
        i = self.index[x.vertex]
        m = x.m if self.parity[x.vertex] == 0 else x.m + 1
        out = []
        for j in self.neighbours[i]:
            v = self.vertices[j]
            if m <= self.m_max(v):
                out.append(Indec('module', v, m))
        return out

    # -------------------------
    # Hom and Ext
    # -------------------------
    def euler_form(self, a: np.ndarray, b: np.ndarray) -> int:
        value = int(np.dot(a, b))
        for i, j in self.arrows:
            value -= int(a[i] * b[j])
        return value

    def hom_dim(self, x: Indec, y: Indec) -> int:
        if x.layer == 'cluster' or y.layer == 'cluster':
            raise ValueError("hom_dim is defined on modules and complexes; use cluster_ext1_dim")
        if x.layer == 'derived' or y.layer == 'derived':
            a = Indec('module', x.vertex, x.m)
            b = Indec('module', y.vertex, y.m)
            if y.shift == x.shift:
                return self.hom_dim(a, b)
            if y.shift == x.shift + 1:
                return self.ext1_dim(a, b)
            return 0
        if x == y:
            return 1
        return max(self.euler_form(self.dim(x), self.dim(y)), 0)

    def ext1_dim(self, x: Indec, y: Indec) -> int:
        if x.layer == 'cluster' or y.layer == 'cluster':
            return self.cluster_ext1_dim(x, y)
        if x.layer == 'derived' or y.layer == 'derived':
            return self.hom_dim(x, Indec('derived', y.vertex, y.m, y.shift + 1))
        if x == y:
            return 0
        return max(-self.euler_form(self.dim(x), self.dim(y)), 0)

    def cluster_ext1_dim(self, x: Indec, y: Indec) -> int:
        """Ext^1 in the cluster category, symmetric in x and y"""
        if x.shifted_projective and y.shifted_projective:
            return 0
        if x.shifted_projective:
            return int(self.dim(y)[self.index[x.vertex]])
        if y.shifted_projective:
            return int(self.dim(x)[self.index[y.vertex]])
        a = Indec('module', x.vertex, x.m)
        b = Indec('module', y.vertex, y.m)
        return self.ext1_dim(a, b) + self.ext1_dim(b, a)

    def hom_oracle(self, x: Indec, y: Indec) -> int:
        """dim Hom(x, y) by knitting the hammock of x through the meshes"""
        x = Indec('module', x.vertex, x.m)
        y = Indec('module', y.vertex, y.m)
        start = self.column(x)
        h: Dict[Indec, int] = {}
        objects = sorted(self.module_indecs(), key=self.column, reverse=True)
        for z in objects:
            c = self.column(z)
            if c > start:
                continue
            if c == start:
                h[z] = 1 if z == x else 0
                continue
            value = sum(h.get(e, 0) for e in self.mesh_predecessors(z))
            if not self.is_projective(z):
                value -= h.get(self.tau(z), 0)
            h[z] = max(value, 0)
        return h.get(y, 0)

    def ext_oracle(self, x: Indec, y: Indec) -> int:
        """dim Ext^1(x, y) = dim Hom(y, τx)"""
        x = Indec('module', x.vertex, x.m)
        if self.is_projective(x):
            return 0
        return self.hom_oracle(y, self.tau(x))

    # -------------------------
    # Projection
    # -------------------------
    def row_weight(self, vertex: str) -> RealCycNumber:
        return self.folding.row_weight(vertex)

    def project_vector(self, d: Sequence) -> ProjVector:
        """(Σ_{F(i)=[0]} w_i d_i / μ0, Σ_{F(i)=[1]} w_i d_i / μ1)"""
        ctx = self.folding.ctx
        sums = [ctx.zero(), ctx.zero()]
        for i, c in enumerate(d):
            if c:
                sums[self.folding.image[i]] = sums[self.folding.image[i]] + self.folding.weights[i] * int(c)
        mu = self.folding.mu
        return (sums[0] / mu[0], sums[1] / mu[1])

    def dimproj(self, x: Union[Indec, Iterable[Indec]]) -> ProjVector:
        if isinstance(x, Indec):
            return self.project_vector(self.class_vector(x))
        ctx = self.folding.ctx
        total = (ctx.zero(), ctx.zero())
        for y in x:
            p = self.dimproj(y)
            total = (total[0] + p[0], total[1] + p[1])
        return total

    def root_of(self, x: Indec) -> Tuple[ProjVector, RealCycNumber]:
        """(α, ε) with dimproj(x) = ε α and α a root of I2(2n)"""
        eps = self.row_weight(x.vertex)
        if x.shifted_projective:
            p = self.projective(x.vertex)
            alpha, _ = self.root_of(p)
            return (-alpha[0], -alpha[1]), self.row_weight(p.vertex)
        roots = short_roots(self.n) if self.parity[x.vertex] == 0 else long_roots(self.n)
        alpha = roots[x.m % (2 * self.n)]
        if x.shift % 2:
            alpha = (-alpha[0], -alpha[1])
        return alpha, eps

    # -------------------------
    # Names
    # -------------------------
    def name(self, x: Indec) -> str:
        if x.shifted_projective:
            return "Σ" + self._dims_name(self.dim(x))
        base = self._dims_name(self.dim(x))
        if x.layer == 'derived' and x.shift:
            return f"Σ^{x.shift}{base}"
        return base

    def _dims_name(self, d: np.ndarray) -> str:
        support = [(self.vertices[i], int(c)) for i, c in enumerate(d) if c]
        if len(support) == 1 and support[0][1] == 1:
            return support[0][0]
        tops = [v for v, c in support if self.parity[v] == 0 for _ in range(c)]
        bottoms = [v for v, c in support if self.parity[v] == 1 for _ in range(c)]
        return f"[{' '.join(tops)}/{' '.join(bottoms)}]"

    def find(self, key, layer: str = 'module') -> Indec:
        """Look up a module by dimension vector or by name"""
        if isinstance(key, str):
            for x in self.enumerate_indecs(layer, shifts=(0,)):
                if self.name(x) == key:
                    return x
            raise KeyError(f"no indecomposable named {key!r} for {self.folding.ftype}")
        d = tuple(int(c) for c in key)
        try:
            x = self._by_dims[d]
        except KeyError:
            raise KeyError(f"{list(d)} is not the dimension vector of an indecomposable") from None
        return Indec(layer, x.vertex, x.m)

    def coxeter_order(self, limit: int = 200) -> int:
        """Smallest k with Φ^k = 1"""
        size = len(self.vertices)
        eye = np.eye(size, dtype=np.int64)
        M = self.coxeter.copy()
        for k in range(1, limit + 1):
            if np.array_equal(M, eye):
                return k
            M = M @ self.coxeter
        raise ArithmeticError("Coxeter transformation has no finite order below the limit")


@lru_cache(maxsize=None)
def ar_model(ftype) -> ARModel:
    return ARModel(build_folding(ftype))
