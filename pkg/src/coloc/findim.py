"""Finite-dimensional algebras, coalgebras, bialgebras and their modules.

All structure maps are matrices in the fixed tensor convention of
:mod:`coloc.exact`.  Nothing is assumed: each axiom has a verifier that
returns a :class:`~coloc.report.CheckReport` whose witnesses name the basis
elements on which the identity fails.

Coactions are right coactions ``rho: E -> E (x) B`` and modules are left
modules throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

from .exact import (
    QQ,
    Field,
    Matrix,
    Quotient,
    RowReducer,
    Subspace,
    flip,
    kernel_basis,
    permute_factors,
    quotient_from_reducer,
    solve_linear,
    tensor_map,
    tensor_maps,
    unit_vector,
)
from .report import CheckReport, Witness, compare_maps, fmt_vector, tensor_labels


def _ident(n: int, fld: Field) -> Matrix:
    return Matrix.identity(n, fld)


# --------------------------------------------------------------------------
# data
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Algebra:
    mult: Matrix  # dim x dim^2
    unit: tuple
    labels: tuple = field(default=(), compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = len(self.unit)
        if self.mult.shape != (n, n * n):
            raise ValueError(f"multiplication of shape {self.mult.shape} for an algebra of dimension {n}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i}" for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.unit)

    @property
    def field(self) -> Field:
        return self.mult.field

    @classmethod
    def from_table(
        cls,
        labels: Sequence[str],
        table: Mapping[tuple[str, str], Mapping[str, object]],
        unit: Mapping[str, object] | str,
        fld: Field = QQ,
        name: str = "",
    ) -> "Algebra":
        """Build from a sparse product table; missing products are zero."""
        labels = tuple(labels)
        pos = {a: i for i, a in enumerate(labels)}
        n = len(labels)
        cols = [{} for _ in range(n * n)]
        for (a, b), val in table.items():
            cols[pos[a] * n + pos[b]] = {pos[k]: fld(v) for k, v in val.items()}
        if isinstance(unit, str):
            unit = {unit: 1}
        u = [fld.zero] * n
        for k, v in unit.items():
            u[pos[k]] = fld(v)
        return cls(Matrix.from_sparse_columns(cols, n, fld), tuple(u), labels, name)

    def basis(self, i: int) -> tuple:
        return unit_vector(self.dim, i, self.field)

    def element(self, coeffs: Mapping[str, object]) -> tuple:
        pos = {a: i for i, a in enumerate(self.labels)}
        v = [self.field.zero] * self.dim
        for k, c in coeffs.items():
            v[pos[k]] = v[pos[k]] + self.field(c)
        return tuple(v)

    @property
    def one(self) -> tuple:
        return self.unit

    def unit_map(self) -> Matrix:
        return Matrix.from_columns([self.unit], self.dim, self.field)

    def mul(self, x: Sequence, y: Sequence) -> tuple:
        n = self.dim
        return self.mult.apply(tuple(a * b for a in x for b in y)) if n else ()

    def left_mult(self, x: Sequence) -> Matrix:
        return self.mult @ tensor_map(Matrix.from_columns([x], self.dim, self.field), _ident(self.dim, self.field))

    def right_mult(self, x: Sequence) -> Matrix:
        return self.mult @ tensor_map(_ident(self.dim, self.field), Matrix.from_columns([x], self.dim, self.field))

    def inverse(self, x: Sequence):
        """Two-sided inverse of x, or None.

        In finite dimension a right inverse is automatically two-sided.
        """
        y = solve_linear(self.left_mult(x), self.unit)
        if y is None:
            return None
        if tuple(self.mul(y, x)) != tuple(self.unit):
            return None
        return y

    def fmt(self, v: Sequence) -> str:
        return fmt_vector(v, self.field, self.labels)

    def is_central(self, x: Sequence) -> bool:
        return self.left_mult(x) == self.right_mult(x)


@dataclass(frozen=True)
class Coalgebra:
    comult: Matrix  # dim^2 x dim
    counit: Matrix  # 1 x dim
    labels: tuple = field(default=(), compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = self.counit.cols
        if self.comult.shape != (n * n, n) or self.counit.rows != 1:
            raise ValueError("comultiplication/counit shapes do not match")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"c{i}" for i in range(n)))

    @property
    def dim(self) -> int:
        return self.counit.cols

    @property
    def field(self) -> Field:
        return self.counit.field

    def cop(self) -> "Coalgebra":
        """Co-opposite coalgebra (comultiplication followed by the flip)."""
        n = self.dim
        return Coalgebra(flip(n, n, self.field) @ self.comult, self.counit, self.labels, self.name + "^cop")

    @classmethod
    def from_table(
        cls,
        labels: Sequence[str],
        comult: Mapping[str, Mapping[tuple[str, str], object]],
        counit: Mapping[str, object],
        fld: Field = QQ,
        name: str = "",
    ) -> "Coalgebra":
        labels = tuple(labels)
        pos = {a: i for i, a in enumerate(labels)}
        n = len(labels)
        cols = []
        for a in labels:
            cols.append({pos[x] * n + pos[y]: fld(v) for (x, y), v in comult.get(a, {}).items()})
        eps = Matrix([[counit.get(a, 0) for a in labels]], fld, cols=n)
        return cls(Matrix.from_sparse_columns(cols, n * n, fld), eps, labels, name)


@dataclass(frozen=True)
class Bialgebra:
    algebra: Algebra
    coalgebra: Coalgebra
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.algebra.dim != self.coalgebra.dim:
            raise ValueError("algebra and coalgebra dimensions differ")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def labels(self) -> tuple:
        return self.algebra.labels

    @property
    def mult(self) -> Matrix:
        return self.algebra.mult

    @property
    def unit(self) -> tuple:
        return self.algebra.unit

    @property
    def comult(self) -> Matrix:
        return self.coalgebra.comult

    @property
    def counit(self) -> Matrix:
        return self.coalgebra.counit


@dataclass(frozen=True)
class CoactionData:
    """Right coaction rho: E -> E (x) B."""

    source: Algebra
    target: Bialgebra
    rho: Matrix
    name: str = field(default="", compare=False)

    def __post_init__(self):
        nE, nB = self.source.dim, self.target.dim
        if self.rho.shape != (nE * nB, nE):
            raise ValueError(f"coaction of shape {self.rho.shape}, expected {(nE * nB, nE)}")

    @property
    def field(self) -> Field:
        return self.rho.field

    def fmt_value(self, v: Sequence) -> str:
        return fmt_vector(v, self.field, tensor_labels(self.source.labels, self.target.labels))


@dataclass(frozen=True)
class ModuleData:
    """Left module with action matrix ``act: A (x) M -> M``."""

    algebra: Algebra
    act: Matrix
    labels: tuple = field(default=(), compare=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        d = self.act.rows
        if self.act.cols != self.algebra.dim * d:
            raise ValueError(f"action of shape {self.act.shape} for algebra of dimension {self.algebra.dim}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"m{i}" for i in range(d)))

    @property
    def dim(self) -> int:
        return self.act.rows

    @property
    def field(self) -> Field:
        return self.act.field

    def action(self, i: int) -> Matrix:
        """Matrix of the i-th algebra basis element acting on M."""
        return _action_matrices(self)[i]

    def action_of(self, x: Sequence) -> Matrix:
        out = Matrix.zero(self.dim, self.dim, self.field)
        for i, c in enumerate(x):
            if c:
                out = out + self.action(i).scale(c)
        return out

    def identity(self) -> "ModuleHom":
        return ModuleHom(self, self, _ident(self.dim, self.field))


@lru_cache(maxsize=None)
def _action_matrices(M: ModuleData) -> tuple:
    d, n = M.dim, M.algebra.dim
    fld = M.field
    out = []
    for i in range(n):
        sel = tensor_map(Matrix.from_columns([unit_vector(n, i, fld)], n, fld), _ident(d, fld))
        out.append(M.act @ sel)
    return tuple(out)


@dataclass(frozen=True)
class ModuleHom:
    source: ModuleData
    target: ModuleData
    matrix: Matrix
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ValueError(f"module map of shape {self.matrix.shape}, expected {(self.target.dim, self.source.dim)}")

    def __matmul__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(other.source, self.target, self.matrix @ other.matrix)


@dataclass(frozen=True)
class HopfModuleData:
    """Left E-module N with a right B-coaction rho_N: N -> N (x) B."""

    module: ModuleData
    coaction: CoactionData  # the coaction of E; fixes E and B
    coact: Matrix
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.module.algebra != self.coaction.source:
            raise ValueError("Hopf module over a different algebra than the coaction")
        d, nB = self.module.dim, self.coaction.target.dim
        if self.coact.shape != (d * nB, d):
            raise ValueError(f"module coaction of shape {self.coact.shape}, expected {(d * nB, d)}")

    @property
    def bialgebra(self) -> Bialgebra:
        return self.coaction.target


@dataclass(frozen=True)
class AlgebraHom:
    source: Algebra
    target: Algebra
    matrix: Matrix
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ValueError("algebra map of wrong shape")

    def __matmul__(self, other: "AlgebraHom") -> "AlgebraHom":
        return AlgebraHom(other.source, self.target, self.matrix @ other.matrix)

    @classmethod
    def identity(cls, A: Algebra) -> "AlgebraHom":
        return cls(A, A, _ident(A.dim, A.field))


# --------------------------------------------------------------------------
# constructions
# --------------------------------------------------------------------------


def tensor_algebra(A: Algebra, B: Algebra, name: str = "") -> Algebra:
    """A (x) B with the componentwise product."""
    a, b = A.dim, B.dim
    fld = A.field
    swap = permute_factors((a, b, a, b), (0, 2, 1, 3), fld)
    mult = tensor_map(A.mult, B.mult) @ swap
    unit = tuple(x * y for x in A.unit for y in B.unit)
    return Algebra(mult, unit, tuple(tensor_labels(A.labels, B.labels)), name or f"{A.name}⊗{B.name}")


def tensor_coalgebra(C: Coalgebra, D: Coalgebra) -> Coalgebra:
    c, d = C.dim, D.dim
    fld = C.field
    swap = permute_factors((c, c, d, d), (0, 2, 1, 3), fld)
    return Coalgebra(swap @ tensor_map(C.comult, D.comult), tensor_map(C.counit, D.counit),
                     tuple(tensor_labels(C.labels, D.labels)), f"{C.name}⊗{D.name}")


def tensor_bialgebra(B: Bialgebra, C: Bialgebra) -> Bialgebra:
    return Bialgebra(tensor_algebra(B.algebra, C.algebra), tensor_coalgebra(B.coalgebra, C.coalgebra),
                     f"{B.name}⊗{C.name}")


def ground_bialgebra(fld: Field = QQ) -> Bialgebra:
    """The one-dimensional bialgebra k."""
    one = Matrix.identity(1, fld)
    return Bialgebra(Algebra(one, (fld.one,), ("1",), "k"), Coalgebra(one, one, ("1",), "k"), "k")


def regular_module(A: Algebra) -> ModuleData:
    return ModuleData(A, A.mult, A.labels, f"{A.name or 'A'}_reg")


def trivial_coaction(E: Algebra, B: Bialgebra) -> CoactionData:
    """rho(a) = a (x) 1."""
    return CoactionData(E, B, tensor_map(_ident(E.dim, E.field), Matrix.from_columns([B.unit], B.dim, E.field)),
                        "trivial")


def regular_coaction(B: Bialgebra) -> CoactionData:
    """B as a comodule algebra over itself via its comultiplication."""
    return CoactionData(B.algebra, B, B.comult, "Δ")


def coaction_on_tensor(
    coaction: CoactionData, M: ModuleData, P: ModuleData
) -> ModuleData:
    """M (x) P as an E-module: e (m (x) p) = sum e_(0) m (x) e_(1) p.

    M is an E-module and P a B-module (B = target of the coaction).
    """
    E, B = coaction.source, coaction.target
    if M.algebra != E or P.algebra != B.algebra:
        raise ValueError("modules do not match the coaction")
    nE, nB, d, p = E.dim, B.dim, M.dim, P.dim
    fld = E.field
    step = tensor_maps(coaction.rho, _ident(d, fld), _ident(p, fld))  # E M P -> E B M P
    perm = permute_factors((nE, nB, d, p), (0, 2, 1, 3), fld)  # -> E M B P
    act = tensor_map(M.act, P.act) @ perm @ step
    return ModuleData(E, act, tuple(tensor_labels(M.labels, P.labels)), f"{M.name}◁{P.name}")


def restrict(f: AlgebraHom, N: ModuleData) -> ModuleData:
    """Restriction of scalars along f: E -> E'."""
    if N.algebra != f.target:
        raise ValueError("module is not over the target of the map")
    fld = N.field
    act = N.act @ tensor_map(f.matrix, _ident(N.dim, fld))
    return ModuleData(f.source, act, N.labels, N.name)


def restrict_hom(f: AlgebraHom, h: ModuleHom) -> ModuleHom:
    return ModuleHom(restrict(f, h.source), restrict(f, h.target), h.matrix)


@dataclass(frozen=True)
class Extension:
    """f*M = E' (x)_E M with its quotient presentation and canonical map."""

    hom: AlgebraHom
    source: ModuleData
    module: ModuleData
    quotient: Quotient
    canonical: Matrix  # M -> f*M, m |-> [1 (x) m]

    @property
    def projection(self) -> Matrix:
        return self.quotient.projection

    @property
    def section(self) -> Matrix:
        return self.quotient.section


@lru_cache(maxsize=None)
def extend_scalars(f: AlgebraHom, M: ModuleData) -> Extension:
    """Extension of scalars along f: E' (x) M modulo e'f(e) (x) m - e' (x) e m."""
    E, E2 = f.source, f.target
    if M.algebra != E:
        raise ValueError("module is not over the source of the map")
    n, n2, d = E.dim, E2.dim, M.dim
    fld = M.field
    red = RowReducer(n2 * d, fld)
    Fm = f.matrix
    for i in range(n):
        if E.basis(i) == E.unit:
            continue
        fi = Fm.column(i)
        # e'_{i'} * f(e_i) for every i'
        prods = E2.right_mult(fi)
        Li = M.action(i)
        for i2 in range(n2):
            pcol = prods.column(i2)
            for j in range(d):
                v = {}
                for k, x in enumerate(pcol):
                    if x:
                        v[k * d + j] = x
                for l, row in enumerate(Li.data):
                    y = row[j]
                    if y:
                        key = i2 * d + l
                        v[key] = v.get(key, 0) - y
                red.add(v)
    q = quotient_from_reducer(red)
    act = q.projection @ tensor_map(E2.mult, _ident(d, fld)) @ tensor_map(_ident(n2, fld), q.section)
    amb_labels = tensor_labels(E2.labels, M.labels)
    labels = tuple(f"[{amb_labels[j]}]" for j in q.basis_indices)
    module = ModuleData(E2, act, labels, f"{f.name or 'f'}*{M.name}")
    canonical = q.projection @ tensor_map(E2.unit_map(), _ident(d, fld))
    return Extension(f, M, module, q, canonical)


def extend_hom(f: AlgebraHom, h: ModuleHom) -> ModuleHom:
    """f*(h) = [e' (x) m] |-> [e' (x) h(m)]."""
    ext_s, ext_t = extend_scalars(f, h.source), extend_scalars(f, h.target)
    mat = ext_t.projection @ tensor_map(_ident(f.target.dim, h.matrix.field), h.matrix) @ ext_s.section
    return ModuleHom(ext_s.module, ext_t.module, mat)


def composite_comparison(f: AlgebraHom, g: AlgebraHom, M: ModuleData) -> ModuleHom:
    """The canonical isomorphism g*f*M -> (gf)*M, [e'' (x) [e' (x) m]] |-> [e'' g(e') (x) m]."""
    fM = extend_scalars(f, M)
    gfM = extend_scalars(g, fM.module)
    gf = g @ f
    direct = extend_scalars(gf, M)
    E2, E3 = f.target, g.target
    n2, n3, d = E2.dim, E3.dim, M.dim
    fld = M.field
    # E'' (x) E' (x) M -> E'' (x) M via e'' g(e')
    mult = tensor_map(E3.mult @ tensor_map(_ident(n3, fld), g.matrix), _ident(d, fld))
    mat = direct.projection @ mult @ tensor_map(_ident(n3, fld), fM.section) @ gfM.section
    return ModuleHom(gfM.module, direct.module, mat)


def quotient_module(M: ModuleData, generators: Sequence[Sequence]) -> tuple[ModuleData, ModuleHom]:
    """M / (A . span(generators)) with its projection."""
    A = M.algebra
    fld = M.field
    red = RowReducer(M.dim, fld)
    for v in generators:
        for i in range(A.dim):
            w = M.action(i).apply(v)
            red.add({k: x for k, x in enumerate(w) if x})
    q = quotient_from_reducer(red)
    act = q.projection @ M.act @ tensor_map(_ident(A.dim, fld), q.section)
    labels = tuple(f"[{M.labels[j]}]" for j in q.basis_indices)
    Q = ModuleData(A, act, labels, f"{M.name}/~")
    return Q, ModuleHom(M, Q, q.projection)


def cofree_hopf_module(coaction: CoactionData, M: ModuleData) -> HopfModuleData:
    """G M = M (x) B with coaction id (x) Delta."""
    B = coaction.target
    B_reg = regular_module(B.algebra)
    GM = coaction_on_tensor(coaction, M, B_reg)
    return HopfModuleData(GM, coaction, tensor_map(_ident(M.dim, M.field), B.comult), f"G({M.name})")


def regular_hopf_module(coaction: CoactionData) -> HopfModuleData:
    """E over itself: action = multiplication, coaction = rho."""
    return HopfModuleData(regular_module(coaction.source), coaction, coaction.rho, "E")


# --------------------------------------------------------------------------
# verifiers
# --------------------------------------------------------------------------


def check_algebra(A: Algebra, report: CheckReport | None = None) -> CheckReport:
    r = report or CheckReport("algebra")
    n, fld = A.dim, A.field
    I = _ident(n, fld)
    compare_maps(r, "associativity", A.mult @ tensor_map(A.mult, I), A.mult @ tensor_map(I, A.mult),
                 (n, n, n), A.labels, [A.labels] * 3)
    u = A.unit_map()
    compare_maps(r, "left unit", A.mult @ tensor_map(u, I), I, (n,), A.labels, [A.labels])
    compare_maps(r, "right unit", A.mult @ tensor_map(I, u), I, (n,), A.labels, [A.labels])
    return r


def check_coalgebra(C: Coalgebra, report: CheckReport | None = None) -> CheckReport:
    r = report or CheckReport("coalgebra")
    n, fld = C.dim, C.field
    I = _ident(n, fld)
    lab3 = tensor_labels(C.labels, C.labels, C.labels)
    compare_maps(r, "coassociativity", tensor_map(C.comult, I) @ C.comult, tensor_map(I, C.comult) @ C.comult,
                 (n,), lab3, [C.labels])
    compare_maps(r, "left counit", tensor_map(C.counit, I) @ C.comult, I, (n,), C.labels, [C.labels])
    compare_maps(r, "right counit", tensor_map(I, C.counit) @ C.comult, I, (n,), C.labels, [C.labels])
    return r


def check_bialgebra(B: Bialgebra) -> CheckReport:
    r = CheckReport("bialgebra")
    check_algebra(B.algebra, r)
    check_coalgebra(B.coalgebra, r)
    n, fld = B.dim, B.field
    lab2 = tensor_labels(B.labels, B.labels)
    BB = tensor_algebra(B.algebra, B.algebra)
    compare_maps(r, "comultiplication multiplicative", B.comult @ B.mult,
                 BB.mult @ tensor_map(B.comult, B.comult), (n, n), lab2, [B.labels] * 2)
    compare_maps(r, "comultiplication unital", B.comult @ B.algebra.unit_map(), BB.unit_map(), (1,), lab2, [["1"]])
    compare_maps(r, "counit multiplicative", B.counit @ B.mult, tensor_map(B.counit, B.counit), (n, n),
                 ["1"], [B.labels] * 2)
    compare_maps(r, "counit unital", B.counit @ B.algebra.unit_map(), Matrix.identity(1, fld), (1,), ["1"], [["1"]])
    return r


def check_coaction_axioms(rho: Matrix, dim: int, B: Bialgebra, labels: Sequence[str], report: CheckReport,
                          what: str = "comodule") -> CheckReport:
    """(rho (x) id) rho = (id (x) Delta) rho and (id (x) eps) rho = id."""
    fld = B.field
    nB = B.dim
    I = _ident(dim, fld)
    IB = _ident(nB, fld)
    compare_maps(report, f"{what} coassociativity", tensor_map(rho, IB) @ rho, tensor_map(I, B.comult) @ rho,
                 (dim,), tensor_labels(labels, B.labels, B.labels), [labels])
    compare_maps(report, f"{what} counit", tensor_map(I, B.counit) @ rho, I, (dim,), labels, [labels])
    return report


def check_comodule_algebra(c: CoactionData) -> CheckReport:
    r = CheckReport("comodule-algebra")
    E, B = c.source, c.target
    check_coaction_axioms(c.rho, E.dim, B, E.labels, r)
    EB = tensor_algebra(E, B.algebra)
    labs = tensor_labels(E.labels, B.labels)
    compare_maps(r, "coaction multiplicative", c.rho @ E.mult, EB.mult @ tensor_map(c.rho, c.rho),
                 (E.dim, E.dim), labs, [E.labels] * 2)
    compare_maps(r, "coaction unital", c.rho @ E.unit_map(), EB.unit_map(), (1,), labs, [["1"]])
    return r


def check_module(M: ModuleData, report: CheckReport | None = None) -> CheckReport:
    r = report or CheckReport("module")
    A = M.algebra
    n, d, fld = A.dim, M.dim, M.field
    I = _ident(d, fld)
    compare_maps(r, f"{M.name or 'module'} action associativity", M.act @ tensor_map(A.mult, I),
                 M.act @ tensor_map(_ident(n, fld), M.act), (n, n, d), M.labels, [A.labels, A.labels, M.labels])
    compare_maps(r, f"{M.name or 'module'} unit acts as identity", M.act @ tensor_map(A.unit_map(), I), I,
                 (d,), M.labels, [M.labels])
    return r


def check_module_hom(h: ModuleHom, report: CheckReport | None = None, name: str = "") -> CheckReport:
    r = report or CheckReport("module-map")
    A = h.source.algebra
    if h.target.algebra != A:
        r.add(Witness(name or "module map", (), "source algebra", "target algebra differs"))
        return r
    n, fld = A.dim, h.matrix.field
    compare_maps(r, f"{name or h.name or 'map'} linearity", h.matrix @ h.source.act,
                 h.target.act @ tensor_map(_ident(n, fld), h.matrix), (n, h.source.dim),
                 h.target.labels, [A.labels, h.source.labels])
    return r


def check_algebra_hom(f: AlgebraHom, report: CheckReport | None = None) -> CheckReport:
    r = report or CheckReport("algebra-map")
    A, B = f.source, f.target
    compare_maps(r, "map multiplicative", f.matrix @ A.mult, B.mult @ tensor_map(f.matrix, f.matrix),
                 (A.dim, A.dim), B.labels, [A.labels] * 2)
    compare_maps(r, "map unital", f.matrix @ A.unit_map(), B.unit_map(), (1,), B.labels, [["1"]])
    return r


def check_hopf_module(N: HopfModuleData) -> CheckReport:
    """rho_N(e n) = (nu (x) mu_B)(id (x) tau_{B,N} (x) id)(rho_E(e) (x) rho_N(n))."""
    r = CheckReport("hopf-module")
    M = N.module
    E, B = N.coaction.source, N.bialgebra
    nE, nB, d, fld = E.dim, B.dim, M.dim, M.field
    check_module(M, r)
    check_coaction_axioms(N.coact, d, B, M.labels, r, "module coaction")
    lhs = N.coact @ M.act
    perm = permute_factors((nE, nB, d, nB), (0, 2, 1, 3), fld)
    rhs = tensor_map(M.act, B.mult) @ perm @ tensor_map(N.coaction.rho, N.coact)
    compare_maps(r, "relative Hopf compatibility", lhs, rhs, (nE, d), tensor_labels(M.labels, B.labels),
                 [E.labels, M.labels])
    return r


def check_comodule_algebra_map(f: AlgebraHom, phi: AlgebraHom, c: CoactionData, c2: CoactionData,
                               report: CheckReport | None = None) -> CheckReport:
    """rho' o f = (f (x) phi) o rho."""
    r = report or CheckReport("comodule-algebra-map")
    check_algebra_hom(f, r)
    check_algebra_hom(phi, r)
    compare_maps(r, "ρ'∘f = (f⊗φ)∘ρ", c2.rho @ f.matrix, tensor_map(f.matrix, phi.matrix) @ c.rho,
                 (c.source.dim,), tensor_labels(c2.source.labels, c2.target.labels), [c.source.labels])
    return r


def coinvariants(coact: Matrix, dim: int, B: Bialgebra) -> Subspace:
    """{u : rho(u) = u (x) 1} as the kernel of rho - (id (x) 1_B)."""
    fld = B.field
    one = tensor_map(_ident(dim, fld), B.algebra.unit_map())
    return kernel_basis(coact - one)


def transport_coaction(coact: Matrix, iso: Matrix, nB: int) -> Matrix:
    """Conjugate a comodule structure along a linear isomorphism V -> W."""
    fld = coact.field
    return tensor_map(iso, _ident(nB, fld)) @ coact @ iso.inverse()
