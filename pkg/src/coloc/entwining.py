"""Entwining structures psi: A (x) C -> C (x) A and their localizations.

The comonad of an entwining acts on left A-modules by ``G M = C (x) M`` with
``a (c (x) m) = sum c' (x) a' m`` where ``psi(a (x) c) = sum c' (x) a'``.
Entwined modules are the coalgebras over this comonad.

Finite-dimensional entwinings are matrices.  For a skew-Laurent algebra and
a finite-dimensional coalgebra, psi is stored as one matrix over A per
generator, ``psi(g (x) c_j) = sum_k c_k (x) Psi(g)[k][j]``; axiom (i) then
forces ``Psi(ab) = Psi(a) Psi(b)``, which is how psi is extended to
monomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .exact import Matrix, flip, permute_factors, tensor_map, tensor_maps
from .findim import (
    Algebra,
    Bialgebra,
    CoactionData,
    Coalgebra,
    ModuleData,
    ModuleHom,
    check_module_hom,
    regular_module,
)
from .hopfcat import (
    IDENTITY,
    Comonad,
    Functor,
    FunctorProbe,
    NatFamily,
    PreconditionError,
    _cmp,
    build_hopf_comonad,
    check_comonad,
    check_g_comodule,
    check_mixed_distributive_law,
    localization_monad,
)
from .localization import LocalizationData
from .report import CheckReport, Witness, compare_maps, tensor_labels, timed
from .skew import SkewElement, SkewError, SkewLaurentAlgebra, is_unit


def _id(n, fld):
    return Matrix.identity(n, fld)


@dataclass(frozen=True)
class EntwiningData:
    A: Algebra
    C: Coalgebra
    psi: Matrix  # A (x) C -> C (x) A
    name: str = ""

    def __post_init__(self):
        n, m = self.A.dim, self.C.dim
        if self.psi.shape != (n * m, n * m):
            raise ValueError(f"psi of shape {self.psi.shape}, expected {(n * m, n * m)}")


def flip_entwining(A: Algebra, C: Coalgebra) -> EntwiningData:
    return EntwiningData(A, C, flip(A.dim, C.dim, A.field), "flip")


def check_entwining(w: EntwiningData, r: CheckReport | None = None) -> CheckReport:
    r = r or CheckReport("entwining")
    with timed(r):
        A, C, psi = w.A, w.C, w.psi
        fld = A.field
        n, m = A.dim, C.dim
        IA, IC = _id(n, fld), _id(m, fld)
        lab_CA = tensor_labels(C.labels, A.labels)
        # (i) psi (mu (x) C) = (C (x) mu)(psi (x) A)(A (x) psi)
        lhs = psi @ tensor_map(A.mult, IC)
        rhs = tensor_map(IC, A.mult) @ tensor_map(psi, IA) @ tensor_map(IA, psi)
        compare_maps(r, "ψ(ab⊗c) = (C⊗μ)(ψ⊗A)(a⊗ψ(b⊗c))", lhs, rhs, (n, n, m), lab_CA, [A.labels, A.labels, C.labels])
        # (ii) psi (eta (x) C) = C (x) eta
        compare_maps(r, "ψ(1⊗c) = c⊗1", psi @ tensor_map(A.unit_map(), IC), tensor_map(IC, A.unit_map()),
                     (m,), lab_CA, [C.labels])
        # (iii) (Delta (x) A) psi = (C (x) psi)(psi (x) C)(A (x) Delta)
        lhs = tensor_map(C.comult, IA) @ psi
        rhs = tensor_map(IC, psi) @ tensor_map(psi, IC) @ tensor_map(IA, C.comult)
        compare_maps(r, "(Δ⊗A)ψ = (C⊗ψ)(ψ⊗C)(A⊗Δ)", lhs, rhs, (n, m), tensor_labels(C.labels, C.labels, A.labels),
                     [A.labels, C.labels])
        # (iv) (eps (x) A) psi = A (x) eps
        compare_maps(r, "(ε⊗A)ψ = A⊗ε", tensor_map(C.counit, IA) @ psi, tensor_map(IA, C.counit), (n, m), A.labels,
                     [A.labels, C.labels])
    return r


def canonical_entwining_from_coaction(c: CoactionData) -> EntwiningData:
    """psi(e (x) b) = sum e_(1) b (x) e_(0) over the co-opposite coalgebra of B.

    With the comultiplication of B itself this map satisfies axiom (iii)
    only when B is cocommutative; the co-opposite makes it an entwining in
    general and still reproduces the action e (m (x) b) = sum e_(0) m (x) e_(1) b.
    """
    E, B = c.source, c.target
    fld = E.field
    n, m = E.dim, B.dim
    # E C -> E B C -> B C E -> (B-mult) C E
    step = tensor_map(c.rho, _id(m, fld))
    perm = permute_factors((n, m, m), (1, 2, 0), fld)
    psi = tensor_map(B.mult, _id(n, fld)) @ perm @ step
    return EntwiningData(E, B.coalgebra.cop(), psi, f"ψ[{c.name}]")


# --------------------------------------------------------------------------
# the comonad of an entwining
# --------------------------------------------------------------------------


def entwining_comonad(w: EntwiningData) -> Comonad:
    """G M = C (x) M, delta = Delta (x) M, eps = eps (x) M."""
    A, C = w.A, w.C
    fld = A.field
    n, m = A.dim, C.dim

    def obj(M):
        if M.algebra != A:
            raise ValueError(f"module {M.name} is not over {A.name}")
        d = M.dim
        act = tensor_map(_id(m, fld), M.act) @ tensor_map(w.psi, _id(d, fld))
        return ModuleData(A, act, tuple(tensor_labels(C.labels, M.labels)), f"G({M.name})")

    def mor(h):
        return ModuleHom(G.obj(h.source), G.obj(h.target), tensor_map(_id(m, fld), h.matrix), f"G({h.name})")

    G = Functor("Gψ", obj, mor)
    delta = NatFamily("δψ", G, G.then(G), lambda M: ModuleHom(G.obj(M), G.obj(G.obj(M)),
                                                                tensor_map(C.comult, _id(M.dim, fld))))
    eps = NatFamily("εψ", G, IDENTITY, lambda M: ModuleHom(G.obj(M), M, tensor_map(C.counit, _id(M.dim, fld))))
    return Comonad(f"G[{w.name}]", G, delta, eps)


def entwining_suite(w: EntwiningData, probe: FunctorProbe) -> CheckReport:
    r = CheckReport("entwining-suite")
    with timed(r):
        r.merge(check_entwining(w), "axioms")
        if r.ok:
            r.merge(check_comonad(entwining_comonad(w), probe))
    return r


def compare_with_hopf_comonad(c: CoactionData, probe: FunctorProbe) -> CheckReport:
    """The flip M (x) B -> B (x) M is an isomorphism of comonads from the Hopf comonad to G^psi."""
    r = CheckReport("Gψ vs G")
    with timed(r):
        w = canonical_entwining_from_coaction(c)
        r.merge(check_entwining(w), "canonical entwining")
        G, W = build_hopf_comonad(c), entwining_comonad(w)
        fld = c.source.field
        nB = c.target.dim

        def phi(M):
            return ModuleHom(G.functor.obj(M), W.functor.obj(M), flip(M.dim, nB, fld), f"flip_{M.name}")

        for M in probe.modules:
            p = phi(M)
            check_module_hom(p, r, f"flip at {M.name}")
            _cmp(r, f"flip respects counits at {M.name}", W.counit(M) @ p, G.counit(M), p.source)
            # phi * phi = W(phi_M) o phi_{GM}: GGM -> W W M
            pp = W.functor.mor(p) @ phi(G.functor.obj(M))
            _cmp(r, f"flip respects comultiplications at {M.name}", pp @ G.comult(M), W.comult(M) @ p, p.source)
        for h in probe.maps:
            compare_maps(r, f"flip natural along {h.name}", phi(h.target).matrix @ G.functor.mor(h).matrix,
                         W.functor.mor(h).matrix @ phi(h.source).matrix)
    return r


# --------------------------------------------------------------------------
# compatible pairs and the induced law
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EntwiningPair:
    psi: EntwiningData
    psi_mu: EntwiningData
    loc: LocalizationData


def check_compatible_pair(p: EntwiningPair) -> CheckReport:
    """(C (x) iota) psi = psi_mu (iota (x) C)."""
    r = CheckReport("compatible-pair")
    with timed(r):
        w, wm, loc = p.psi, p.psi_mu, p.loc
        if w.C != wm.C:
            r.add(Witness("coalgebras differ", (), w.C.name, wm.C.name))
            return r
        fld = w.A.field
        m = w.C.dim
        lhs = tensor_map(_id(m, fld), loc.iota.matrix) @ w.psi
        rhs = wm.psi @ tensor_map(loc.iota.matrix, _id(m, fld))
        compare_maps(r, "(C⊗ι)ψ = ψ_μ(ι⊗C)", lhs, rhs, (w.A.dim, m), tensor_labels(w.C.labels, loc.target.labels),
                     [w.A.labels, w.C.labels])
    return r


def canonical_pair(c: CoactionData, localized: CoactionData, loc: LocalizationData) -> EntwiningPair:
    return EntwiningPair(canonical_entwining_from_coaction(c), canonical_entwining_from_coaction(localized), loc)


def descent_squares(p: EntwiningPair) -> CheckReport:
    """The two squares that make psi_mu (x) M descend to A_mu (x)_A (C (x) M).

    On A_mu (x) A (x) C: psi_mu (u iota(a) (x) c) = (C (x) mu)(psi_mu (x) A_mu)(u (x) (C (x) iota) psi(a (x) c)).
    """
    r = CheckReport("descent squares")
    w, wm, loc = p.psi, p.psi_mu, p.loc
    fld = w.A.field
    nmu, n, m = loc.target.dim, w.A.dim, w.C.dim
    Amu = loc.target
    iota = loc.iota.matrix
    lhs = wm.psi @ tensor_map(Amu.mult @ tensor_map(_id(nmu, fld), iota), _id(m, fld))
    mid = tensor_maps(_id(nmu, fld), _id(m, fld), iota) @ tensor_map(_id(nmu, fld), w.psi)  # u C A_mu
    rhs_a = tensor_map(_id(m, fld), Amu.mult) @ tensor_map(wm.psi, _id(nmu, fld)) @ mid
    compare_maps(r, "left square via ψ", lhs, rhs_a, (nmu, n, m))
    # second square: the same with psi_mu applied to iota(a) directly
    rhs_b = tensor_map(_id(m, fld), Amu.mult) @ tensor_map(wm.psi, _id(nmu, fld)) \
        @ tensor_map(_id(nmu, fld), wm.psi @ tensor_map(iota, _id(m, fld)))
    compare_maps(r, "left square via ψ_μ", lhs, rhs_b, (nmu, n, m))
    return r


def induced_l(p: EntwiningPair, check_pair: bool = True) -> NatFamily:
    """l_M: Q_*(A_mu (x)_A G M) -> G Q_*(A_mu (x)_A M), [u (x) (c (x) m)] |-> sum c' (x) [u' (x) m]."""
    if check_pair:
        r = check_compatible_pair(p)
        if not r.ok:
            raise PreconditionError("entwinings do not form a compatible pair", r)
    w, wm, loc = p.psi, p.psi_mu, p.loc
    fld = w.A.field
    m, nmu = w.C.dim, loc.target.dim
    G = entwining_comonad(w)
    L = localization_monad(loc)
    cache = {}

    def ambient(M):
        if M not in cache:
            qM = loc.inverse_image(M)
            # A_mu C M -> C A_mu M -> C Q*M
            cache[M] = tensor_map(_id(m, fld), qM.projection) @ tensor_map(wm.psi, _id(M.dim, fld))
        return cache[M]

    def comp(M):
        ext = loc.inverse_image(G.functor.obj(M))
        return ModuleHom(L.functor.obj(G.functor.obj(M)), G.functor.obj(L.functor.obj(M)), ambient(M) @ ext.section,
                         f"l_{M.name}")

    def descent(M):
        r = CheckReport("descent")
        ext = loc.inverse_image(G.functor.obj(M))
        compare_maps(r, f"l_{M.name} descends to A_μ⊗_A GM", ambient(M), comp(M).matrix @ ext.projection,
                     (nmu, m * M.dim), G.functor.obj(L.functor.obj(M)).labels,
                     [loc.target.labels, G.functor.obj(M).labels])
        return r

    return NatFamily("l", G.functor.then(L.functor), L.functor.then(G.functor), comp, descent)


def check_entwined_distributivity(p: EntwiningPair, probe: FunctorProbe, check_pair: bool = True) -> CheckReport:
    r = CheckReport("entwined-distributivity")
    with timed(r):
        pr = check_compatible_pair(p)
        r.merge(pr, "pair")
        r.merge(descent_squares(p))
        l = induced_l(p, check_pair=False)
        r.merge(check_mixed_distributive_law(l, localization_monad(p.loc), entwining_comonad(p.psi), probe))
    return r


@dataclass(frozen=True, eq=False)
class EntwinedModule:
    module: ModuleData
    coact: Matrix  # M -> C (x) M
    name: str = ""


def check_entwined_module(w: EntwiningData, N: EntwinedModule) -> CheckReport:
    return check_g_comodule(entwining_comonad(w), N.module, N.coact)


def cofree_entwined(w: EntwiningData, M: ModuleData) -> EntwinedModule:
    G = entwining_comonad(w)
    return EntwinedModule(G.functor.obj(M), G.comult(M).matrix, f"G({M.name})")


def regular_entwined(c: CoactionData) -> EntwinedModule:
    """E with coaction e |-> sum e_(1) (x) e_(0), for the canonical entwining."""
    E, B = c.source, c.target
    return EntwinedModule(regular_module(E), flip(E.dim, B.dim, E.field) @ c.rho, "E")


def lift_entwined(p: EntwiningPair, N: EntwinedModule) -> EntwinedModule:
    """Q*_psi (M, coaction) = (Q*M, l_M o Q*(coaction))."""
    loc = p.loc
    G = entwining_comonad(p.psi)
    l = induced_l(p, check_pair=False)
    h = ModuleHom(N.module, G.functor.obj(N.module), N.coact)
    Qh = loc.inverse_image_hom(h)
    QM = loc.inverse_image(N.module).module
    return EntwinedModule(QM, l(N.module).matrix @ Qh.matrix, f"Q*({N.name})")


def lift_entwined_localization(p: EntwiningPair, probe: Sequence[EntwinedModule]) -> CheckReport:
    r = CheckReport("U_μQ*_ψ = Q*U")
    with timed(r):
        for N in probe:
            sub = check_entwined_module(p.psi, N)
            if not sub.ok:
                r.merge(sub, f"input {N.name}")
                continue
            out = lift_entwined(p, N)
            r.merge(check_entwined_module(p.psi_mu, out), f"Q*_ψ({N.name})")
            compare_maps(r, f"underlying module of Q*_ψ({N.name})", out.module.act,
                         p.loc.inverse_image(N.module).module.act)
    return r


# --------------------------------------------------------------------------
# skew-Laurent algebras with a finite-dimensional coalgebra
# --------------------------------------------------------------------------


class SkewEntwining:
    """psi on a skew-Laurent algebra, determined by its values on generators."""

    def __init__(self, A: SkewLaurentAlgebra, C: Coalgebra, images: Mapping[str, Sequence[Sequence[SkewElement]]],
                 name: str = ""):
        self.A, self.C, self.name = A, C, name
        m = C.dim
        self.images = {}
        for g in A.gens:
            mat = images.get(g)
            if mat is None:
                raise SkewError(f"no value of ψ on generator {g}")
            if len(mat) != m or any(len(row) != m for row in mat):
                raise SkewError(f"ψ on {g} must be a {m}x{m} matrix over the algebra")
            self.images[g] = tuple(tuple(x for x in row) for row in mat)
        self._inverse = {}
        for i, g in enumerate(A.gens):
            if A.inv_mask[i]:
                inv = _monomial_matrix_inverse(self.images[g], A)
                if inv is None:
                    raise SkewError(f"ψ on {g} is not invertible by a monomial matrix; inverse not supported")
                self._inverse[g] = inv
        self._cache: dict = {}

    def _ident(self):
        A, m = self.A, self.C.dim
        return tuple(tuple(A.one() if i == j else A.zero() for j in range(m)) for i in range(m))

    def monomial_matrix(self, exps: tuple) -> tuple:
        if exps in self._cache:
            return self._cache[exps]
        A = self.A
        out = self._ident()
        for i, e in enumerate(exps):
            g = A.gens[i]
            base = self.images[g] if e > 0 else self._inverse.get(g)
            for _ in range(abs(e)):
                out = _matmul(out, base, A)
        self._cache[exps] = out
        return out

    def matrix_of(self, a: SkewElement) -> tuple:
        """Psi(a) as a C.dim x C.dim matrix over A."""
        A, m = self.A, self.C.dim
        out = [[A.zero() for _ in range(m)] for _ in range(m)]
        for e, c in a.terms.items():
            # the normal-form monomial x^e is the ordered product, so Psi is multiplicative on it
            M = self.monomial_matrix(e)
            for i in range(m):
                for j in range(m):
                    if M[i][j]:
                        out[i][j] = out[i][j] + M[i][j] * c
        return tuple(tuple(r) for r in out)

    def apply(self, a: SkewElement, j: int) -> list:
        """psi(a (x) c_j) as a list of (k, element)."""
        M = self.matrix_of(a)
        return [(k, M[k][j]) for k in range(self.C.dim) if M[k][j]]


def _matmul(X, Y, A):
    m = len(X)
    return tuple(tuple(sum((X[i][k] * Y[k][j] for k in range(m)), A.zero()) for j in range(m)) for i in range(m))


def _monomial_matrix_inverse(M, A):
    m = len(M)
    perm = {}
    for j in range(m):
        nz = [i for i in range(m) if M[i][j]]
        if len(nz) != 1:
            return None
        perm[j] = nz[0]
    if len(set(perm.values())) != m:
        return None
    out = [[A.zero() for _ in range(m)] for _ in range(m)]
    for j, i in perm.items():
        inv = is_unit(M[i][j])
        if inv is None:
            return None
        out[j][i] = inv
    return tuple(tuple(r) for r in out)


def check_skew_entwining(w: SkewEntwining) -> CheckReport:
    r = CheckReport("entwining")
    with timed(r):
        A, C = w.A, w.C
        m = C.dim
        gens = list(range(A.ngens))
        # relations: Psi(g_j) Psi(g_i) = q_ij Psi(g_i) Psi(g_j)
        for i in gens:
            for j in gens:
                if i < j:
                    lhs = _matmul(w.images[A.gens[j]], w.images[A.gens[i]], A)
                    q = A.q[i][j]
                    rhs = tuple(tuple(x * q for x in row) for row in _matmul(w.images[A.gens[i]], w.images[A.gens[j]], A))
                    _cmp_skew(r, "ψ respects the commutation relation", (A.gens[i], A.gens[j]), lhs, rhs, C)
        for g, inv in w._inverse.items():
            _cmp_skew(r, "ψ(g g⁻¹⊗c) = c⊗1", (g,), _matmul(w.images[g], inv, A), w._ident(), C)
        # (iii) and (iv) on generators and inverses
        letters = [(g, A.gen(g)) for g in A.gens]
        letters += [(f"{g}^-1", is_unit(A.gen(g))) for g in w._inverse]
        for name, a in letters:
            Pa = w.matrix_of(a)
            for j in range(m):
                # LHS: sum_k Delta(c_k) (x) Pa[k][j]
                lhs: dict = {}
                for k in range(m):
                    if Pa[k][j]:
                        for idx, coef in enumerate(C.comult.column(k)):
                            if coef:
                                p, s = divmod(idx, m)
                                _acc(lhs, (p, s), Pa[k][j] * coef, A)
                rhs: dict = {}
                for idx, coef in enumerate(C.comult.column(j)):
                    if not coef:
                        continue
                    p, s = divmod(idx, m)
                    for k in range(m):
                        x = Pa[k][p]
                        if x:
                            Px = w.matrix_of(x)
                            for t in range(m):
                                if Px[t][s]:
                                    _acc(rhs, (k, t), Px[t][s] * coef, A)
                if _clean(lhs) != _clean(rhs):
                    r.add(Witness("(Δ⊗A)ψ = (C⊗ψ)(ψ⊗C)(A⊗Δ)", (name, C.labels[j]), _fmt2(lhs, C), _fmt2(rhs, C)))
                cu = sum((Pa[k][j] * C.counit[0, k] for k in range(m)), A.zero())
                want = a * C.counit[0, j]
                if cu != want:
                    r.add(Witness("(ε⊗A)ψ = A⊗ε", (name, C.labels[j]), cu.fmt(), want.fmt()))
    return r


def _acc(d, key, val, A):
    d[key] = d.get(key, A.zero()) + val


def _clean(d):
    return {k: v for k, v in d.items() if v}


def _fmt2(d, C):
    parts = [f"{C.labels[p]}⊗{C.labels[s]}⊗({v.fmt()})" for (p, s), v in sorted(d.items()) if v]
    return " + ".join(parts) or "0"


def _cmp_skew(r, what, idx, X, Y, C):
    m = len(X)
    for i in range(m):
        for j in range(m):
            if X[i][j] != Y[i][j]:
                r.add(Witness(what, idx + (C.labels[j], C.labels[i]), X[i][j].fmt(), Y[i][j].fmt()))


def grading_entwining(A: SkewLaurentAlgebra, H: Bialgebra, degrees: Mapping[str, str], name: str = "") -> SkewEntwining:
    """Canonical entwining of a grading rho(g) = g (x) h_g by group-like elements: psi(g (x) c) = h_g c (x) g."""
    m = H.dim
    fld = H.field
    images = {}
    for g in A.gens:
        h = H.algebra.basis(H.labels.index(degrees[g]))
        L = H.algebra.left_mult(h)
        images[g] = tuple(tuple(A.gen(g) * L[k, j] if L[k, j] else A.zero() for j in range(m)) for k in range(m))
    return SkewEntwining(A, H.coalgebra.cop(), images, name or "grading")


def skew_flip_entwining(A: SkewLaurentAlgebra, C: Coalgebra) -> SkewEntwining:
    m = C.dim
    images = {g: tuple(tuple(A.gen(g) if i == j else A.zero() for j in range(m)) for i in range(m)) for g in A.gens}
    return SkewEntwining(A, C, images, "flip")


def check_skew_compatible_pair(w: SkewEntwining, wm: SkewEntwining, loc: LocalizationData) -> CheckReport:
    r = CheckReport("compatible-pair")
    A = w.A
    for g in A.gens:
        lhs = tuple(tuple(loc.iota(x) for x in row) for row in w.images[g])
        rhs = wm.matrix_of(loc.iota(A.gen(g)))
        _cmp_skew(r, "(C⊗ι)ψ = ψ_μ(ι⊗C)", (g,), lhs, rhs, w.C)
    return r
