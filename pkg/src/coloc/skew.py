"""Skew-Laurent algebras: q-commuting generators, some of them invertible.

Relations are ``g_j g_i = q_ij g_i g_j`` for i < j and nothing else, so every
element has a unique normal form as a combination of ordered monomials
``g_1^a_1 ... g_k^a_k`` (exponents may be negative on invertible generators).
With all q_ij nonzero the algebra is a Z^k-graded domain, hence its units are
exactly the nonzero multiples of monomials in the invertible generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field as dc_field
from typing import Iterable, Mapping, Sequence

from .exact import QQ, Field
from .report import CheckReport, Witness


class SkewError(ValueError):
    pass


class RelationError(SkewError):
    """An assignment of generator images that does not define an algebra map."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class SkewLaurentAlgebra:
    q: tuple  # k x k grid, q[i][j] meaningful for i < j
    inv_mask: tuple
    field: Field = QQ
    gens: tuple = dc_field(default=(), compare=False)
    blocks: tuple = dc_field(default=(), compare=False)
    name: str = dc_field(default="", compare=False)

    def __post_init__(self):
        k = len(self.inv_mask)
        if len(self.q) != k or any(len(r) != k for r in self.q):
            raise SkewError("q grid does not match the number of generators")
        for i in range(k):
            for j in range(i + 1, k):
                if not self.q[i][j]:
                    raise SkewError(f"q[{i}][{j}] must be nonzero")
        if not self.gens:
            object.__setattr__(self, "gens", tuple(f"g{i}" for i in range(k)))
        if len(self.gens) != k:
            raise SkewError("generator names do not match")
        if not self.blocks:
            object.__setattr__(self, "blocks", (k,))
        pairs = tuple((i, j, self.q[i][j]) for i in range(k) for j in range(i + 1, k) if self.q[i][j] != 1)
        object.__setattr__(self, "_pairs", pairs)

    @classmethod
    def create(
        cls,
        gens: Sequence[str],
        q: Mapping[tuple[str, str], object] | None = None,
        inv: Iterable[str] = (),
        fld: Field = QQ,
        name: str = "",
    ) -> "SkewLaurentAlgebra":
        """``q[(x, y)] = c`` declares y x = c x y for x before y."""
        gens = tuple(gens)
        if len(set(gens)) != len(gens):
            raise SkewError("duplicate generator names")
        pos = {g: i for i, g in enumerate(gens)}
        k = len(gens)
        grid = [[fld.one] * k for _ in range(k)]
        for (a, b), c in (q or {}).items():
            i, j = pos[a], pos[b]
            if i >= j:
                raise SkewError(f"q must be declared for ordered pairs; got ({a}, {b})")
            grid[i][j] = fld(c)
        inv = set(inv)
        for g in inv:
            if g not in pos:
                raise SkewError(f"unknown generator {g}")
        mask = tuple(g in inv for g in gens)
        return cls(tuple(tuple(r) for r in grid), mask, fld, gens, (k,), name)

    @property
    def ngens(self) -> int:
        return len(self.inv_mask)

    def index(self, name: str) -> int:
        try:
            return self.gens.index(name)
        except ValueError:
            raise SkewError(f"unknown generator {name!r} in {self.name or 'algebra'}") from None

    # -- elements ----------------------------------------------------------

    def zero(self) -> "SkewElement":
        return SkewElement(self, {})

    def one(self) -> "SkewElement":
        return SkewElement(self, {(0,) * self.ngens: self.field.one})

    def scalar(self, c) -> "SkewElement":
        return SkewElement(self, {(0,) * self.ngens: self.field(c)})

    def gen(self, g: str | int) -> "SkewElement":
        i = self.index(g) if isinstance(g, str) else g
        e = [0] * self.ngens
        e[i] = 1
        return SkewElement(self, {tuple(e): self.field.one})

    def monomial(self, exps: Sequence[int], c=1) -> "SkewElement":
        return SkewElement(self, {tuple(exps): self.field(c)})

    def valid_exponents(self, exps: Sequence[int]) -> bool:
        return len(exps) == self.ngens and all(e >= 0 or inv for e, inv in zip(exps, self.inv_mask))

    def monomial_coefficient(self, a: Sequence[int], b: Sequence[int]):
        """x^a x^b = c x^(a+b); returns c."""
        c = self.field.one
        for i, j, qij in self._pairs:
            e = a[j] * b[i]
            if e:
                c = c * qij**e
        return c

    def fmt_monomial(self, exps: Sequence[int], ascii: bool = False) -> str:
        parts = []
        start = 0
        for size in self.blocks:
            factors = []
            for i in range(start, start + size):
                e = exps[i]
                if e == 1:
                    factors.append(self.gens[i])
                elif e:
                    factors.append(f"{self.gens[i]}^{e}")
            parts.append("*".join(factors) or "1")
            start += size
        if not self.blocks:
            parts = ["1"]
        return ("(x)" if ascii else "⊗").join(parts)

    def structure_key(self):
        return (self.q, self.inv_mask, self.field)


class SkewElement:
    """Finite combination of normal-form monomials with nonzero coefficients."""

    __slots__ = ("parent", "terms", "_hash")

    def __init__(self, parent: SkewLaurentAlgebra, terms: Mapping[tuple, object]):
        self.parent = parent
        clean = {}
        for e, c in terms.items():
            if c:
                if not parent.valid_exponents(e):
                    raise SkewError(f"exponent vector {e} not allowed in {parent.name or 'algebra'}")
                clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    def _check(self, other: "SkewElement"):
        if self.parent != other.parent:
            raise SkewError("elements of different algebras")

    def __add__(self, other):
        if not isinstance(other, SkewElement):
            other = self.parent.scalar(other)
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return SkewElement(self.parent, t)

    __radd__ = __add__

    def __neg__(self):
        return SkewElement(self.parent, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, SkewElement) else -self.parent.field(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SkewElement):
            c = self.parent.field(other)
            return SkewElement(self.parent, {e: c * x for e, x in self.terms.items()})
        self._check(other)
        A = self.parent
        out: dict = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                e = tuple(i + j for i, j in zip(a, b))
                out[e] = out.get(e, 0) + x * y * A.monomial_coefficient(a, b)
        return SkewElement(A, out)

    def __rmul__(self, c):
        return self * c

    def __pow__(self, n: int):
        if n < 0:
            inv = self.inverse()
            if inv is None:
                raise SkewError(f"{self} is not a unit")
            return inv ** (-n)
        out = self.parent.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, SkewElement):
            if not self.terms:
                return not other
            return False
        return self.parent == other.parent and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def inverse(self):
        """The two-sided inverse, or None when the element is not a unit."""
        return is_unit(self)

    def fmt(self, ascii: bool = False) -> str:
        if not self.terms:
            return "0"
        fld = self.parent.field
        parts = []
        for e in sorted(self.terms, reverse=True):
            mono = self.parent.fmt_monomial(e, ascii)
            s = fld.fmt(self.terms[e])
            neg = s.startswith("-")
            s = s.lstrip("-")
            if not any(e) and len(self.parent.blocks) <= 1:
                body = s
            elif s == "1":
                body = mono
            else:
                body = f"{s} {mono}"
            parts.append((neg, body))
        text = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, body in parts[1:]:
            text += (" - " if neg else " + ") + body
        return text

    def __str__(self):
        return self.fmt()

    def __repr__(self):
        return f"SkewElement({self.fmt()})"


def is_unit(a: SkewElement):
    """Inverse of a when a = c * (monomial in invertible generators), c != 0; else None."""
    if len(a.terms) != 1:
        return None
    (e, c), = a.terms.items()
    A = a.parent
    if any(x and not inv for x, inv in zip(e, A.inv_mask)):
        return None
    neg = tuple(-x for x in e)
    k = A.monomial_coefficient(e, neg)
    inv = A.monomial(neg, A.field.one / (c * k))
    if not (a * inv == A.one() and inv * a == A.one()):
        raise SkewError("graded-domain unit characterization violated")
    return inv


# --------------------------------------------------------------------------
# tensor products and maps
# --------------------------------------------------------------------------


def ground_algebra(fld: Field = QQ) -> SkewLaurentAlgebra:
    return SkewLaurentAlgebra((), (), fld, (), (), "k")


def tensor_skew(A: SkewLaurentAlgebra, B: SkewLaurentAlgebra, name: str = "") -> SkewLaurentAlgebra:
    """A (x) B: generators concatenated, the two sides commute with each other."""
    if A.field != B.field:
        raise SkewError("tensor of algebras over different fields")
    ka, kb = A.ngens, B.ngens
    k = ka + kb
    fld = A.field
    grid = [[fld.one] * k for _ in range(k)]
    for i in range(ka):
        for j in range(ka):
            grid[i][j] = A.q[i][j]
    for i in range(kb):
        for j in range(kb):
            grid[ka + i][ka + j] = B.q[i][j]
    names = list(A.gens)
    for g in B.gens:
        while g in names:
            g = g + "'"
        names.append(g)
    blocks = tuple(A.blocks) + tuple(B.blocks)
    return SkewLaurentAlgebra(
        tuple(tuple(r) for r in grid), A.inv_mask + B.inv_mask, fld, tuple(names), blocks,
        name or f"{A.name}⊗{B.name}",
    )


def embed(x: SkewElement, target: SkewLaurentAlgebra, offset: int) -> SkewElement:
    """Push an element of a tensor factor into the tensor algebra."""
    k = target.ngens
    n = x.parent.ngens
    terms = {}
    for e, c in x.terms.items():
        full = [0] * k
        full[offset:offset + n] = e
        terms[tuple(full)] = c
    return SkewElement(target, terms)


def pure_tensor(target: SkewLaurentAlgebra, *parts: SkewElement) -> SkewElement:
    out = target.one()
    off = 0
    for p in parts:
        out = out * embed(p, target, off)
        off += p.parent.ngens
    return out


@dataclass(frozen=True, eq=False)
class SkewAlgebraHom:
    source: SkewLaurentAlgebra
    target: SkewLaurentAlgebra
    images: tuple  # one SkewElement per source generator
    name: str = ""

    def __post_init__(self):
        if len(self.images) != self.source.ngens:
            raise SkewError("need one image per generator")
        for im in self.images:
            if im.parent != self.target:
                raise SkewError("image outside the target algebra")
        object.__setattr__(self, "_inverses", {})

    def image_power(self, i: int, n: int) -> SkewElement:
        if n >= 0:
            return self.images[i] ** n
        inv = self._inverses.get(i)
        if inv is None:
            inv = is_unit(self.images[i])
            if inv is None:
                raise RelationError(f"image of {self.source.gens[i]} is not a unit", (self.source.gens[i],))
            self._inverses[i] = inv
        return inv ** (-n)

    def __call__(self, x: SkewElement) -> SkewElement:
        if x.parent != self.source:
            raise SkewError("element outside the source algebra")
        out = self.target.zero()
        for e, c in x.terms.items():
            term = self.target.scalar(c)
            for i, n in enumerate(e):
                if n:
                    term = term * self.image_power(i, n)
            out = out + term
        return out

    def __matmul__(self, other: "SkewAlgebraHom") -> "SkewAlgebraHom":
        return SkewAlgebraHom(other.source, self.target, tuple(self(im) for im in other.images))

    def same_as(self, other: "SkewAlgebraHom") -> bool:
        return (self.source == other.source and self.target == other.target
                and all(a == b for a, b in zip(self.images, other.images)))


def identity_hom(A: SkewLaurentAlgebra) -> SkewAlgebraHom:
    return SkewAlgebraHom(A, A, tuple(A.gen(i) for i in range(A.ngens)), "id")


def tensor_homs(f: SkewAlgebraHom, g: SkewAlgebraHom) -> SkewAlgebraHom:
    src = tensor_skew(f.source, g.source)
    tgt = tensor_skew(f.target, g.target)
    ims = tuple(embed(x, tgt, 0) for x in f.images) + tuple(embed(x, tgt, f.target.ngens) for x in g.images)
    return SkewAlgebraHom(src, tgt, ims)


def inclusions(A: SkewLaurentAlgebra, B: SkewLaurentAlgebra):
    """a |-> a (x) 1 and b |-> 1 (x) b."""
    T = tensor_skew(A, B)
    left = SkewAlgebraHom(A, T, tuple(embed(A.gen(i), T, 0) for i in range(A.ngens)))
    right = SkewAlgebraHom(B, T, tuple(embed(B.gen(i), T, A.ngens) for i in range(B.ngens)))
    return T, left, right


def relation_violations(source: SkewLaurentAlgebra, images: Sequence[SkewElement]) -> list[tuple]:
    out = []
    for i in range(source.ngens):
        for j in range(i + 1, source.ngens):
            lhs = images[j] * images[i]
            rhs = images[i] * images[j] * source.q[i][j]
            if lhs != rhs:
                out.append((source.gens[i], source.gens[j], lhs, rhs))
    return out


def extend_algebra_map(
    source: SkewLaurentAlgebra, target: SkewLaurentAlgebra, images: Sequence[SkewElement] | Mapping[str, SkewElement],
    name: str = "",
) -> SkewAlgebraHom:
    """Algebra map determined by generator images, after checking the relations."""
    if isinstance(images, Mapping):
        missing = [g for g in source.gens if g not in images]
        if missing:
            raise SkewError(f"no image for generator(s) {', '.join(missing)}")
        images = [images[g] for g in source.gens]
    images = tuple(images)
    bad = relation_violations(source, images)
    if bad:
        gi, gj, lhs, rhs = bad[0]
        raise RelationError(
            f"relation {gj}{gi} = q {gi}{gj} not preserved: {lhs} != {rhs}", (gi, gj, lhs.fmt(), rhs.fmt())
        )
    for i, inv in enumerate(source.inv_mask):
        if inv and is_unit(images[i]) is None:
            raise RelationError(f"image of invertible generator {source.gens[i]} is not a unit: {images[i]}",
                                (source.gens[i], images[i].fmt()))
    return SkewAlgebraHom(source, target, images, name)


def check_skew_hom(f: SkewAlgebraHom, report: CheckReport | None = None, what: str = "map") -> CheckReport:
    r = report or CheckReport("skew-map")
    for gi, gj, lhs, rhs in relation_violations(f.source, f.images):
        r.add(Witness(f"{what} relation {gj}·{gi}", (gi, gj), lhs.fmt(), rhs.fmt()))
    for i, inv in enumerate(f.source.inv_mask):
        if inv and is_unit(f.images[i]) is None:
            r.add(Witness(f"{what} image of invertible generator is not a unit", (f.source.gens[i],),
                          f.images[i].fmt(), "unit"))
    return r


# --------------------------------------------------------------------------
# localization at generators
# --------------------------------------------------------------------------


def localize_at_generators(A: SkewLaurentAlgebra, subset: Iterable[str]):
    """S^{-1}A for S the monoids generated by the chosen generators, and iota."""
    subset = list(subset)
    idx = {A.index(g) for g in subset}
    mask = tuple(m or i in idx for i, m in enumerate(A.inv_mask))
    suffix = "[" + ",".join(f"{g}^-1" for g in subset) + "]" if subset else ""
    Amu = SkewLaurentAlgebra(A.q, mask, A.field, A.gens, A.blocks, f"{A.name}{suffix}")
    iota = SkewAlgebraHom(A, Amu, tuple(Amu.gen(i) for i in range(A.ngens)), "ι")
    return Amu, iota


def check_ore_generated(A: SkewLaurentAlgebra, subset: Iterable[str]) -> CheckReport:
    """Left Ore condition on generators: s e = e' s with e' = lambda e."""
    r = CheckReport("ore")
    witnesses = []
    for s in subset:
        si = A.index(s)
        sv = A.gen(si)
        for ei in range(A.ngens):
            ev = A.gen(ei)
            se = sv * ev
            es = ev * sv
            (m1, c1), = se.terms.items()
            (m2, c2), = es.terms.items()
            lam = c1 / c2
            e2 = ev * lam
            if sv * ev != e2 * sv:
                r.add(Witness("left Ore witness", (s, A.gens[ei]), (sv * ev).fmt(), (e2 * sv).fmt()))
            witnesses.append((s, A.gens[ei], sv.fmt(), e2.fmt()))
    r.details["witnesses"] = [f"s={s}, e={e}: s'={s2}, e'={e2}" for s, e, s2, e2 in witnesses]
    r.details["ore_witnesses"] = witnesses
    return r


# --------------------------------------------------------------------------
# bialgebras and coactions
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SkewBialgebra:
    algebra: SkewLaurentAlgebra
    comult: SkewAlgebraHom  # B -> B (x) B
    counit: SkewAlgebraHom  # B -> k
    name: str = ""

    @property
    def field(self) -> Field:
        return self.algebra.field


@dataclass(frozen=True, eq=False)
class SkewCoaction:
    """Right coaction rho: E -> E (x) B given on generators."""

    source: SkewLaurentAlgebra
    target: SkewBialgebra
    rho: SkewAlgebraHom
    name: str = ""


def make_bialgebra(B: SkewLaurentAlgebra, comult: Mapping[str, SkewElement], counit: Mapping[str, object],
                   name: str = "", check: bool = True) -> SkewBialgebra:
    BB = tensor_skew(B, B)
    k = ground_algebra(B.field)
    ims = [comult[g] for g in B.gens]
    cims = [k.scalar(counit[g]) for g in B.gens]
    if check:
        d = extend_algebra_map(B, BB, ims, "Δ")
        e = extend_algebra_map(B, k, cims, "ε")
    else:
        d = SkewAlgebraHom(B, BB, tuple(ims), "Δ")
        e = SkewAlgebraHom(B, k, tuple(cims), "ε")
    return SkewBialgebra(B, d, e, name or B.name)


def check_skew_bialgebra(B: SkewBialgebra) -> CheckReport:
    r = CheckReport("bialgebra")
    A = B.algebra
    check_skew_hom(B.comult, r, "Δ")
    check_skew_hom(B.counit, r, "ε")
    if not r.ok:
        return r
    idA = identity_hom(A)
    left = tensor_homs(B.comult, idA) @ B.comult
    right = tensor_homs(idA, B.comult) @ B.comult
    for g, a, b in zip(A.gens, left.images, right.images):
        if a != b:
            r.add(Witness("coassociativity", (g,), a.fmt(), b.fmt()))
    for which, h in (("left counit", tensor_homs(B.counit, idA)), ("right counit", tensor_homs(idA, B.counit))):
        comp = h @ B.comult
        for i, g in enumerate(A.gens):
            got = comp.images[i]
            want = A.gen(i)
            if got.terms != want.terms:
                r.add(Witness(which, (g,), got.fmt(), want.fmt()))
    return r


def make_coaction(E: SkewLaurentAlgebra, B: SkewBialgebra, images: Mapping[str, SkewElement], name: str = "",
                  check: bool = True) -> SkewCoaction:
    T = tensor_skew(E, B.algebra)
    ims = [images[g] for g in E.gens]
    rho = extend_algebra_map(E, T, ims, "ρ") if check else SkewAlgebraHom(E, T, tuple(ims), "ρ")
    return SkewCoaction(E, B, rho, name)


def check_skew_comodule_algebra(c: SkewCoaction) -> CheckReport:
    r = CheckReport("comodule-algebra")
    check_skew_hom(c.rho, r, "ρ")
    if not r.ok:
        return r
    E, B = c.source, c.target
    idE, idB = identity_hom(E), identity_hom(B.algebra)
    left = tensor_homs(c.rho, idB) @ c.rho
    right = tensor_homs(idE, B.comult) @ c.rho
    for g, a, b in zip(E.gens, left.images, right.images):
        if a.terms != b.terms:
            r.add(Witness("comodule coassociativity", (g,), a.fmt(), b.fmt()))
    cu = tensor_homs(idE, B.counit) @ c.rho
    for i, g in enumerate(E.gens):
        if cu.images[i].terms != E.gen(i).terms:
            r.add(Witness("comodule counit", (g,), cu.images[i].fmt(), g))
    return r
