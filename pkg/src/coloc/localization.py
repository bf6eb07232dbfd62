"""Perfect localizations and their compatibility with coactions.

Two families are supported:

* finite-dimensional: S = {1, e} for a nonzero central idempotent e, so that
  S^{-1}E = E / (1 - e)E and iota is the quotient map;
* skew-Laurent: S generated by a set of generators, iota the inclusion into
  the algebra where those generators become invertible.

A localization is compatible with a coaction rho when (iota (x) id) rho(s) is
a unit of S^{-1}E (x) B for every s in S; then the localized coaction is
forced by rho_S o iota = (iota (x) id) o rho.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Sequence

from .exact import QQ, Field, Matrix, PrimeField, Subspace, kernel_basis, quotient_space, tensor_map
from .findim import (
    Algebra,
    AlgebraHom,
    Bialgebra,
    CoactionData,
    ModuleData,
    ModuleHom,
    check_comodule_algebra,
    check_module_hom,
    coinvariants,
    extend_hom,
    extend_scalars,
    regular_module,
    restrict,
    tensor_algebra,
)
from .report import CheckReport, Witness, compare_maps, fmt_vector, tensor_labels, timed
from .skew import (
    RelationError,
    SkewAlgebraHom,
    SkewCoaction,
    SkewElement,
    SkewLaurentAlgebra,
    check_skew_comodule_algebra,
    extend_algebra_map,
    identity_hom,
    is_unit,
    localize_at_generators,
    tensor_homs,
)


class LocalizationError(ValueError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class IncompatibleLocalization(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LocalizationData:
    kind: str  # "idempotent" or "generators"
    source: object
    target: object
    iota: object
    element: tuple | None = None
    generators: tuple = ()
    name: str = ""

    @property
    def findim(self) -> bool:
        return self.kind == "idempotent"

    # -- functors Q* -| Q_* on module categories (finite-dimensional kind) --

    def inverse_image(self, M: ModuleData):
        """Q*M = E_mu (x)_E M."""
        return extend_scalars(self.iota, M)

    def inverse_image_hom(self, h: ModuleHom) -> ModuleHom:
        return extend_hom(self.iota, h)

    def direct_image(self, N: ModuleData) -> ModuleData:
        """Q_*N: N viewed as an E-module through iota."""
        return restrict(self.iota, N)

    def direct_image_hom(self, h: ModuleHom) -> ModuleHom:
        return ModuleHom(self.direct_image(h.source), self.direct_image(h.target), h.matrix)

    def unit(self, M: ModuleData) -> ModuleHom:
        """eta_M: M -> Q_*Q*M."""
        ext = self.inverse_image(M)
        return ModuleHom(M, self.direct_image(ext.module), ext.canonical)

    def counit(self, N: ModuleData) -> ModuleHom:
        """epsilon_N: Q*Q_*N -> N, [u (x) n] |-> u n."""
        ext = self.inverse_image(self.direct_image(N))
        return ModuleHom(ext.module, N, N.act @ ext.section)

    def monad(self, M: ModuleData) -> ModuleData:
        """L M = Q_*Q*M."""
        return self.direct_image(self.inverse_image(M).module)

    def monad_mult(self, M: ModuleData) -> ModuleHom:
        """mu_M = Q_* epsilon_{Q*M}: LLM -> LM."""
        c = self.counit(self.inverse_image(M).module)
        return self.direct_image_hom(c)

    def quotient_by_idempotent(self, M: ModuleData) -> ModuleData:
        """M / (1 - e)M over E_mu; an independent realization of Q*M."""
        E = self.source
        one_minus = tuple(a - b for a, b in zip(E.unit, self.element))
        L = M.action_of(one_minus)
        q = quotient_space(M.dim, Subspace.span(L.columns(), M.dim, M.field).basis, M.field)
        act = q.projection @ M.act @ tensor_map(self.iota_section(), q.section)
        return ModuleData(self.target, act, tuple(M.labels[j] for j in q.basis_indices), f"{M.name}/(1-e)")

    def iota_section(self) -> Matrix:
        return _section(self)


def _section(loc: LocalizationData) -> Matrix:
    return _idem_quotient(loc.source, loc.element)[1].section


@lru_cache(maxsize=None)
def _idem_quotient(E: Algebra, e: tuple):
    one_minus = tuple(a - b for a, b in zip(E.unit, e))
    rel = E.left_mult(one_minus)
    q = quotient_space(E.dim, Subspace.span(rel.columns(), E.dim, E.field).basis, E.field)
    fld = E.field
    mult = q.projection @ E.mult @ tensor_map(q.section, q.section)
    unit = q.projection.apply(E.unit)
    labels = tuple(E.labels[j] for j in q.basis_indices)
    Emu = Algebra(mult, unit, labels, f"{E.name}[e^-1]")
    return Emu, q


def localize_central_idempotent(E: Algebra, e: Sequence, name: str = "") -> LocalizationData:
    fld = E.field
    e = tuple(fld(x) for x in e)
    if len(e) != E.dim:
        raise LocalizationError("idempotent has the wrong length")
    if E.mul(e, e) != e:
        raise LocalizationError(f"{E.fmt(e)} is not idempotent", (E.fmt(E.mul(e, e)), E.fmt(e)))
    for i in range(E.dim):
        b = E.basis(i)
        if E.mul(e, b) != E.mul(b, e):
            raise LocalizationError(f"{E.fmt(e)} is not central: fails against {E.labels[i]}", (E.labels[i],))
    if not any(e):
        raise LocalizationError("localizing at 0 gives the zero ring (0 in S); not admitted")
    Emu, q = _idem_quotient(E, e)
    iota = AlgebraHom(E, Emu, q.projection, "ι")
    return LocalizationData("idempotent", E, Emu, iota, e, (), name or f"at {E.fmt(e)}")


def localize_generators(E: SkewLaurentAlgebra, gens: Sequence[str], name: str = "") -> LocalizationData:
    Emu, iota = localize_at_generators(E, gens)
    return LocalizationData("generators", E, Emu, iota, None, tuple(gens), name or f"at {{{', '.join(gens)}}}")


# --------------------------------------------------------------------------
# idempotent monad
# --------------------------------------------------------------------------


def fixed_submodule(loc: LocalizationData, M: ModuleData) -> Subspace:
    """eM = {m : e m = m}, the equalizer of id and e· on M."""
    L = M.action_of(loc.element) - Matrix.identity(M.dim, M.field)
    return kernel_basis(L)


def check_fork_comparison(loc: LocalizationData, M: ModuleData) -> CheckReport:
    """eM -> M -> E_mu (x)_E M is an E-linear isomorphism onto the coequalizer presentation."""
    r = CheckReport("fork comparison")
    ext = loc.inverse_image(M)
    fix = fixed_submodule(loc, M)
    if not fix.dim:
        inc = Matrix.zero(M.dim, 0, M.field)
    else:
        inc = fix.matrix()
    comp = ext.canonical @ inc
    if comp.rows != comp.cols or not comp.is_invertible():
        r.add(Witness(f"eM -> Q*M at {M.name}", (), f"rank {comp.rank()} of {fix.dim}", f"dim {ext.module.dim}"))
        return r
    for i in range(loc.source.dim):
        a = loc.source.basis(i)
        lhs = ext.canonical @ M.action_of(a) @ inc
        rhs = ext.module.action_of(loc.iota.matrix.apply(a)) @ comp
        compare_maps(r, f"E-linearity at {M.name}", lhs, rhs)
    return r


def check_idempotent_monad(loc: LocalizationData, probe: Sequence[ModuleData] = (), window: int = 3) -> CheckReport:
    r = CheckReport("idempotent-monad")
    with timed(r):
        if loc.findim:
            mods = list(probe) or [regular_module(loc.source)]
            targets = [loc.inverse_image(M).module for M in mods] + [regular_module(loc.target)]
            for N in targets:
                c = loc.counit(N)
                check_module_hom(c, r, f"counit at {N.name}")
                if not c.matrix.is_invertible():
                    r.add(Witness(f"counit Q*Q_*{N.name} -> {N.name} not invertible", (),
                                  f"rank {c.matrix.rank()}", f"dim {N.dim}"))
            for M in mods:
                mu = loc.monad_mult(M)
                if not mu.matrix.is_invertible():
                    r.add(Witness(f"monad multiplication at {M.name} not invertible", (),
                                  f"rank {mu.matrix.rank()}", f"dim {mu.target.dim}"))
            r.details["objects"] = len(targets) + len(mods)
        else:
            _windowed_idempotence(loc, window, r)
    return r


def window_monomials(A: SkewLaurentAlgebra, d: int) -> list[tuple]:
    ranges = [range(-d, d + 1) if inv else range(0, d + 1) for inv in A.inv_mask]
    return [e for e in product(*ranges)]


def _windowed_idempotence(loc: LocalizationData, d: int, r: CheckReport):
    """Multiplication E_mu (x)_E E_mu -> E_mu is bijective on the degree window.

    Surjectivity is u |-> u (x) 1.  For injectivity each u (x) v is rewritten
    as (u s^-1 b) (x) 1 with s in S, b = s v in iota(E), which uses only the
    balancing relation of (x)_E.
    """
    E, Emu = loc.source, loc.target
    inv_idx = [E.index(g) for g in loc.generators]
    mons = window_monomials(Emu, d)
    count = 0
    for u in mons:
        for v in mons:
            s_exp = [0] * Emu.ngens
            for i in inv_idx:
                s_exp[i] = max(0, -v[i])
            s = Emu.monomial(s_exp)
            vv = Emu.monomial(v)
            b = s * vv
            (bexp, _), = b.terms.items()
            if not E.valid_exponents(bexp):
                r.add(Witness("rewrite leaves iota(E)", (Emu.fmt_monomial(u), Emu.fmt_monomial(v)),
                              b.fmt(), "element of E"))
                continue
            uu = Emu.monomial(u)
            rewritten = uu * is_unit(s) * b
            if rewritten != uu * vv:
                r.add(Witness("u⊗v ≠ (u s⁻¹ b)⊗1", (Emu.fmt_monomial(u), Emu.fmt_monomial(v)),
                              rewritten.fmt(), (uu * vv).fmt()))
            count += 1
    r.details["window"] = d
    r.details["pairs"] = count


# --------------------------------------------------------------------------
# compatibility
# --------------------------------------------------------------------------


@dataclass
class CompatibilityVerdict:
    outcome: str  # "compatible" | "incompatible"
    localization: LocalizationData
    coaction: object
    localized: object = None  # CoactionData or SkewCoaction when compatible
    witness: object = None  # offending element of S
    value: str = ""  # rendering of (iota (x) id) rho(s)
    report: CheckReport = field(default_factory=lambda: CheckReport("compat"))

    @property
    def compatible(self) -> bool:
        return self.outcome == "compatible"


def iota_tensor_rho(coaction: CoactionData, loc: LocalizationData) -> Matrix:
    """(iota (x) id_B) o rho: E -> E_mu (x) B."""
    B = coaction.target
    return tensor_map(loc.iota.matrix, Matrix.identity(B.dim, B.field)) @ coaction.rho


def check_compatibility(coaction, loc: LocalizationData) -> CompatibilityVerdict:
    if loc.findim:
        return _compat_findim(coaction, loc)
    return _compat_skew(coaction, loc)


def _compat_findim(c: CoactionData, loc: LocalizationData) -> CompatibilityVerdict:
    r = CheckReport("compat")
    with timed(r):
        if c.source != loc.source:
            raise ValueError("coaction and localization live on different algebras")
        E, Emu, B = loc.source, loc.target, c.target
        EmuB = tensor_algebra(Emu, B.algebra)
        labs = tensor_labels(Emu.labels, B.labels)
        down = iota_tensor_rho(c, loc)
        s = loc.element
        val = down.apply(s)
        if EmuB.inverse(val) is None:
            text = fmt_vector(val, E.field, labs)
            r.add(Witness("(ι⊗id)ρ(s) not invertible in S⁻¹E⊗B", (E.fmt(s),), text, "unit"), "incompatible")
            return CompatibilityVerdict("incompatible", loc, c, None, s, text, r)
        rho_S = down @ loc.iota_section()
        loc_c = CoactionData(Emu, B, rho_S, f"{c.name}_S")
        compare_maps(r, "ρ_S∘ι = (ι⊗id)∘ρ", rho_S @ loc.iota.matrix, down, (E.dim,), labs, [E.labels])
        r.merge(check_comodule_algebra(loc_c), "localized coaction")
        text = fmt_vector(val, E.field, labs)
    return CompatibilityVerdict("compatible" if r.ok else "incompatible", loc, c, loc_c, s, text, r)


def _compat_skew(c: SkewCoaction, loc: LocalizationData) -> CompatibilityVerdict:
    r = CheckReport("compat")
    with timed(r):
        E, Emu, B = loc.source, loc.target, c.target
        if c.source != E:
            raise ValueError("coaction and localization live on different algebras")
        down = tensor_homs(loc.iota, identity_hom(B.algebra))  # E (x) B -> E_mu (x) B
        values = {}
        for g in loc.generators:
            v = down(c.rho(E.gen(g)))
            values[g] = v
            if is_unit(v) is None:
                r.add(Witness("(ι⊗id)ρ(s) not invertible in S⁻¹E⊗B", (g,), v.fmt(), "unit"), "incompatible")
                return CompatibilityVerdict("incompatible", loc, c, None, g, v.fmt(), r)
        T = down.target
        images = [down(c.rho(E.gen(i))) for i in range(E.ngens)]
        try:
            rho_S = extend_algebra_map(Emu, T, images, "ρ_S")
        except RelationError as exc:
            r.add(Witness("localized coaction not an algebra map", exc.witness, str(exc), ""), "incompatible")
            return CompatibilityVerdict("incompatible", loc, c, None, None, "", r)
        loc_c = SkewCoaction(Emu, B, rho_S, f"{c.name}_S")
        for i, g in enumerate(E.gens):
            lhs = rho_S(loc.iota(E.gen(i)))
            rhs = down(c.rho(E.gen(i)))
            if lhs != rhs:
                r.add(Witness("ρ_S∘ι = (ι⊗id)∘ρ", (g,), lhs.fmt(), rhs.fmt()))
        r.merge(check_skew_comodule_algebra(loc_c), "localized coaction")
        r.details["values"] = {g: v.fmt() for g, v in values.items()}
    return CompatibilityVerdict("compatible" if r.ok else "incompatible", loc, c, loc_c, None, "", r)


def localized_coaction_inverse_image(verdict: CompatibilityVerdict, g: str) -> SkewElement:
    """rho_S(g^-1) for an inverted generator (skew kind)."""
    Emu = verdict.localization.target
    e = [0] * Emu.ngens
    e[Emu.index(g)] = -1
    return verdict.localized.rho(Emu.monomial(e))


def check_localized_coaction_unique(verdict: CompatibilityVerdict, candidate: Matrix) -> CheckReport:
    """Any coaction closing the square equals the canonical one (iota is onto)."""
    r = CheckReport("localized-coaction-unique")
    loc, c = verdict.localization, verdict.coaction
    down = iota_tensor_rho(c, loc)
    closes = candidate @ loc.iota.matrix == down
    r.details["candidate closes square"] = closes
    if closes:
        compare_maps(r, "candidate vs canonical ρ_S", candidate, verdict.localized.rho)
    return r


# --------------------------------------------------------------------------
# localized coinvariants
# --------------------------------------------------------------------------


@dataclass
class CoinvariantComparison:
    img: Subspace
    loc_coinv: Subspace
    strict: bool
    labels: tuple = ()
    window: int | None = None

    def describe(self, fld: Field = QQ) -> dict:
        return {
            "img": [fmt_vector(v, fld, self.labels) for v in self.img.basis],
            "loc_coinv": [fmt_vector(v, fld, self.labels) for v in self.loc_coinv.basis],
            "strict": self.strict,
        }


def localized_coinvariants_compare(coaction, loc: LocalizationData, window: int = 3) -> CoinvariantComparison:
    verdict = check_compatibility(coaction, loc)
    if not verdict.compatible:
        raise IncompatibleLocalization(f"localization is not compatible: {verdict.value}")
    if loc.findim:
        E, B = loc.source, coaction.target
        co = coinvariants(coaction.rho, E.dim, B)
        img = Subspace.span([loc.iota.matrix.apply(v) for v in co.basis], loc.target.dim, E.field)
        lc = coinvariants(verdict.localized.rho, loc.target.dim, B)
        if not img.is_subspace_of(lc):
            raise AssertionError("iota(coinvariants) not contained in localized coinvariants")
        return CoinvariantComparison(img, lc, img.dim < lc.dim, loc.target.labels)
    return _skew_coinvariants(coaction, verdict, window)


def _window_coinvariants(rho: SkewAlgebraHom, monos: list[tuple], A: SkewLaurentAlgebra) -> list[tuple]:
    T = rho.target
    cols = []
    keys: dict = {}
    for m in monos:
        u = A.monomial(m)
        one = [0] * T.ngens
        one[: A.ngens] = m
        diff = rho(u) - T.monomial(one)
        col = {}
        for e, c in diff.terms.items():
            col[keys.setdefault(e, len(keys))] = c
        cols.append(col)
    fld = A.field
    M = Matrix.from_sparse_columns(cols, max(len(keys), 1), fld) if keys else Matrix.zero(1, len(monos), fld)
    return list(kernel_basis(M).basis)


def _skew_coinvariants(c: SkewCoaction, verdict: CompatibilityVerdict, d: int) -> CoinvariantComparison:
    loc = verdict.localization
    E, Emu = loc.source, loc.target
    fld = E.field
    monos = window_monomials(Emu, d)
    pos = {m: i for i, m in enumerate(monos)}
    loc_basis = _window_coinvariants(verdict.localized.rho, monos, Emu)
    e_monos = [m for m in monos if E.valid_exponents(m)]
    e_basis = _window_coinvariants(c.rho, e_monos, E)
    img_vecs = []
    for v in e_basis:
        full = [fld.zero] * len(monos)
        for m, x in zip(e_monos, v):
            full[pos[m]] = x
        img_vecs.append(full)
    img = Subspace.span(img_vecs, len(monos), fld)
    lc = Subspace.span(loc_basis, len(monos), fld)
    if not img.is_subspace_of(lc):
        raise AssertionError("iota(coinvariants) not contained in localized coinvariants")
    labels = tuple(Emu.fmt_monomial(m) for m in monos)
    return CoinvariantComparison(img, lc, img.dim < lc.dim, labels, d)


# --------------------------------------------------------------------------
# enumerating idempotent localizations
# --------------------------------------------------------------------------


def center(E: Algebra) -> Subspace:
    rows = []
    for i in range(E.dim):
        b = E.basis(i)
        D = E.left_mult(b) - E.right_mult(b)
        rows.extend(D.data)
    return kernel_basis(Matrix(rows, E.field, cols=E.dim))


def _charpoly_factors(T: Matrix):
    import sympy

    fld = T.field
    n = T.rows
    x = sympy.Symbol("x")
    if isinstance(fld, PrimeField):
        M = sympy.Matrix(n, n, lambda i, j: int(T[i, j].v))
        poly = sympy.Poly(M.charpoly(x).as_expr(), x, modulus=fld.p)
    else:
        M = sympy.Matrix(n, n, lambda i, j: sympy.Rational(int(T[i, j].numerator), int(T[i, j].denominator)))
        poly = sympy.Poly(M.charpoly(x).as_expr(), x)
    _, factors = poly.factor_list()
    out = []
    for f, mult in factors:
        coeffs = [fld(int(c)) if isinstance(fld, PrimeField) else QQ(sympy.Rational(c).p) / QQ(sympy.Rational(c).q)
                  for c in f.all_coeffs()]
        out.append((coeffs, mult))
    return out


def _poly_at(coeffs, T: Matrix) -> Matrix:
    n = T.rows
    out = Matrix.zero(n, n, T.field)
    for c in coeffs:
        out = out @ T + Matrix.identity(n, T.field).scale(c)
    return out


def primitive_central_idempotents(E: Algebra, seed: int = 0) -> list[tuple]:
    """Block idempotents of the center, by primary decomposition of multiplication operators."""
    fld = E.field
    Z = center(E)
    zb = list(Z.basis)
    m = len(zb)
    Zmat = Z.matrix()

    def coords(v):
        from .exact import solve_linear

        return solve_linear(Zmat, v)

    def op(z, block):
        # multiplication by z restricted to a block (list of Z-coordinate vectors)
        Bm = Matrix.from_columns(block, m, fld)
        cols = []
        for b in block:
            elt = Zmat.apply(b)
            prod = coords(E.mul(z, elt))
            from .exact import solve_linear

            cols.append(solve_linear(Bm, prod))
        return Matrix.from_columns(cols, len(block), fld)

    rng = random.Random(seed)
    testers = []
    for _ in range(3):
        testers.append(tuple(sum((fld(rng.randint(-9, 9)) * zv[k] for zv in zb), fld.zero) for k in range(E.dim)))
    testers += [Zmat.apply(tuple(fld.one if i == j else fld.zero for i in range(m))) for j in range(m)]
    blocks = [[tuple(fld.one if i == j else fld.zero for i in range(m)) for j in range(m)]]
    for z in testers:
        new_blocks = []
        for block in blocks:
            T = op(z, block)
            facs = _charpoly_factors(T)
            if len(facs) == 1:
                new_blocks.append(block)
                continue
            Bm = Matrix.from_columns(block, m, fld)
            for coeffs, mult in facs:
                P = _poly_at(coeffs, T)
                Pm = Matrix.identity(T.rows, fld)
                for _ in range(mult):
                    Pm = Pm @ P
                ker = kernel_basis(Pm)
                new_blocks.append([Bm.apply(v) for v in ker.basis])
        blocks = new_blocks
    # component of 1 in each block
    allvecs = [v for b in blocks for v in b]
    one_coords = coords(E.unit)
    from .exact import solve_linear

    sol = solve_linear(Matrix.from_columns(allvecs, m, fld), one_coords)
    out = []
    k = 0
    for b in blocks:
        part = [fld.zero] * m
        for v in b:
            c = sol[k]
            part = [p + c * x for p, x in zip(part, v)]
            k += 1
        out.append(Zmat.apply(part))
    for p in out:
        if E.mul(p, p) != p:
            raise AssertionError("block decomposition produced a non-idempotent")
    return out


def central_idempotents(E: Algebra) -> list[tuple]:
    """All central idempotents: subset sums of the primitive ones."""
    prims = primitive_central_idempotents(E)
    fld = E.field
    out = []
    for mask in product((0, 1), repeat=len(prims)):
        v = [fld.zero] * E.dim
        for use, p in zip(mask, prims):
            if use:
                v = [a + b for a, b in zip(v, p)]
        out.append(tuple(v))
    return out


@dataclass
class IdempotentSurvey:
    idempotent: tuple
    outcome: str  # "compatible" | "incompatible" | "degenerate"
    verdict: CompatibilityVerdict | None = None


def survey_idempotent_localizations(c: CoactionData) -> list[IdempotentSurvey]:
    out = []
    for e in central_idempotents(c.source):
        if not any(e):
            out.append(IdempotentSurvey(e, "degenerate"))
            continue
        v = check_compatibility(c, localize_central_idempotent(c.source, e))
        out.append(IdempotentSurvey(e, v.outcome, v))
    return out
