"""Named fixtures used by tests, demos and the CLI.

Each constructor builds the object directly; the same objects are also
available as DSL files under ``coloc/data`` and the two routes are
cross-checked in the test suite.
"""

from __future__ import annotations

from .exact import QQ, Field, Matrix, permute_factors, tensor_map
from .findim import Algebra, Bialgebra, Coalgebra, CoactionData, tensor_algebra
from .skew import SkewLaurentAlgebra, make_bialgebra, make_coaction, pure_tensor, tensor_skew


def kc2(fld: Field = QQ) -> Bialgebra:
    """Group bialgebra of the cyclic group of order 2, basis 1, g."""
    A = Algebra.from_table(
        ["1", "g"],
        {("1", "1"): {"1": 1}, ("1", "g"): {"g": 1}, ("g", "1"): {"g": 1}, ("g", "g"): {"1": 1}},
        "1", fld, "kC2",
    )
    C = Coalgebra.from_table(["1", "g"], {"1": {("1", "1"): 1}, "g": {("g", "g"): 1}}, {"1": 1, "g": 1}, fld, "kC2")
    return Bialgebra(A, C, "kC2")


def kc2xc2(fld: Field = QQ) -> Bialgebra:
    labels = ["1", "a", "b", "ab"]
    bits = {"1": (0, 0), "a": (1, 0), "b": (0, 1), "ab": (1, 1)}
    inv = {v: k for k, v in bits.items()}
    table = {}
    for x in labels:
        for y in labels:
            s = tuple((p + q) % 2 for p, q in zip(bits[x], bits[y]))
            table[(x, y)] = {inv[s]: 1}
    A = Algebra.from_table(labels, table, "1", fld, "kC2xC2")
    C = Coalgebra.from_table(labels, {x: {(x, x): 1} for x in labels}, {x: 1 for x in labels}, fld, "kC2xC2")
    return Bialgebra(A, C, "kC2xC2")


def two_point(fld: Field = QQ) -> Algebra:
    """k x k with orthogonal idempotents e1, e2."""
    return Algebra.from_table(["e1", "e2"], {("e1", "e1"): {"e1": 1}, ("e2", "e2"): {"e2": 1}},
                              {"e1": 1, "e2": 1}, fld, "k2")


def sweedler_h4(fld: Field = QQ) -> Bialgebra:
    """Sweedler's four-dimensional Hopf algebra: g^2 = 1, x^2 = 0, xg = -gx, x primitive twisted by g."""
    labels = ["1", "g", "x", "gx"]
    # basis g^i x^j; x g = -g x
    def mono(i, j):
        return {(0, 0): "1", (1, 0): "g", (0, 1): "x", (1, 1): "gx"}[(i % 2, j)]

    exps = {"1": (0, 0), "g": (1, 0), "x": (0, 1), "gx": (1, 1)}
    table = {}
    for a in labels:
        for b in labels:
            i1, j1 = exps[a]
            i2, j2 = exps[b]
            if j1 + j2 > 1:
                continue
            sign = -1 if (j1 and i2) else 1  # move x past g
            table[(a, b)] = {mono(i1 + i2, j1 + j2): sign}
    A = Algebra.from_table(labels, table, "1", fld, "H4")
    comult = {
        "1": {("1", "1"): 1},
        "g": {("g", "g"): 1},
        "x": {("x", "1"): 1, ("g", "x"): 1},
        "gx": {("gx", "g"): 1, ("1", "gx"): 1},
    }
    C = Coalgebra.from_table(labels, comult, {"1": 1, "g": 1, "x": 0, "gx": 0}, fld, "H4")
    return Bialgebra(A, C, "H4")


def regular_coaction(B: Bialgebra, name: str = "delta") -> CoactionData:
    return CoactionData(B.algebra, B, B.comult, name)


def prod_fixture(fld: Field = QQ, copies: int = 1) -> CoactionData:
    """E = k[C2] (x) (k x k)^{(x) copies}, rho = Delta on the first factor, trivial elsewhere."""
    B = kc2(fld)
    E = B.algebra
    rest = two_point(fld)
    for _ in range(copies):
        E = tensor_algebra(E, rest, f"{E.name}⊗k2")
    rest_dim = E.dim // 2
    # E = K (x) R -> K (x) K (x) R -> K (x) R (x) K
    step = tensor_map(B.comult, Matrix.identity(rest_dim, fld))
    rho = permute_factors((2, 2, rest_dim), (0, 2, 1), fld) @ step
    name = "prod" if copies == 1 else f"prod{copies}"
    return CoactionData(E, B, rho, name)


def prod2_chain(fld: Field = QQ):
    """prod2 with two successive idempotent localizations E -> E_mu -> E_mumu.

    Returns (coaction, first localization, second localization).
    """
    from .localization import localize_central_idempotent

    c = prod_fixture(fld, copies=2)
    E = c.source
    e = E.element({"1⊗e1⊗e1": 1, "1⊗e1⊗e2": 1})
    loc1 = localize_central_idempotent(E, e, "at_e1")
    Emu = loc1.target
    e2 = next(Emu.basis(i) for i, lab in enumerate(Emu.labels) if lab.startswith("1") and lab.endswith("e1"))
    loc2 = localize_central_idempotent(Emu, e2, "at_e1_e1")
    return c, loc1, loc2


def inclusion_chain(fld: Field = QQ):
    """k -> k[C2] -> k[C2] (x) k^2 as comodule algebra maps over the identity of k[C2].

    The unit map followed by a |-> a (x) 1.  Neither map is onto, so the
    canonical isomorphisms g*f* = (gf)* are not identity matrices here.
    """
    from .findim import AlgebraHom, ground_bialgebra, trivial_coaction
    from .hopfcat import ComoduleAlgebraMap

    B = kc2(fld)
    K = regular_coaction(B)
    c = prod_fixture(fld)
    k = ground_bialgebra(fld).algebra
    u = AlgebraHom(k, B.algebra, Matrix.from_sparse_columns([{0: fld.one}], 2, fld), "u")
    E = c.source
    one, g = (E.element({f"{a}⊗e1": 1, f"{a}⊗e2": 1}) for a in ("1", "g"))
    inc = AlgebraHom(B.algebra, E, Matrix.from_columns([one, g], E.dim, fld), "j")
    idB = AlgebraHom.identity(B.algebra)
    return (ComoduleAlgebraMap(u, idB, trivial_coaction(k, B), K), ComoduleAlgebraMap(inc, idB, K, c))


def two_point_coaction(fld: Field = QQ, broken: bool = False) -> CoactionData:
    """k x k over k[C2]: rho(e_i) = e_i (x) 1, or rho(e2) = e2 (x) g when broken."""
    B, A = kc2(fld), two_point(fld)
    cols = [{0: fld.one}, {3 if broken else 2: fld.one}]
    return CoactionData(A, B, Matrix.from_sparse_columns(cols, 4, fld), "broken" if broken else "trivial")


def swap_action(fld: Field = QQ):
    """k[C2] acting on k x k by exchanging the factors."""
    from .hopfcat import HopfAction

    B, A = kc2(fld), two_point(fld)
    # H (x) A -> A: 1|>a = a, g|>e1 = e2, g|>e2 = e1
    act = Matrix.from_sparse_columns([{0: fld.one}, {1: fld.one}, {1: fld.one}, {0: fld.one}], 2, fld)
    return HopfAction(B, A, act, "swap")


# -- skew fixtures ---------------------------------------------------------


def qplane(fld: Field = QQ, q=2) -> SkewLaurentAlgebra:
    return SkewLaurentAlgebra.create(["x", "y"], {("x", "y"): q}, (), fld, "qplane")


def laurent(fld: Field = QQ):
    L = SkewLaurentAlgebra.create(["g"], {}, ["g"], fld, "laurent")
    LL = tensor_skew(L, L)
    return make_bialgebra(L, {"g": pure_tensor(LL, L.gen("g"), L.gen("g"))}, {"g": 1}, "laurent")


def grading_coaction(fld: Field = QQ, q=2):
    E, B = qplane(fld, q), laurent(fld)
    T = tensor_skew(E, B.algebra)
    ims = {v: pure_tensor(T, E.gen(v), B.algebra.gen("g")) for v in ("x", "y")}
    return make_coaction(E, B, ims, "grading")


def polynomial_line(fld: Field = QQ):
    """k[t] with t primitive."""
    P = SkewLaurentAlgebra.create(["t"], {}, (), fld, "kt")
    PP = tensor_skew(P, P)
    t = P.gen("t")
    return make_bialgebra(P, {"t": pure_tensor(PP, t, P.one()) + pure_tensor(PP, P.one(), t)}, {"t": 0}, "kt")


def kx_coaction(fld: Field = QQ):
    """k[x] over k[t] by x |-> x (x) 1 + 1 (x) t, the comultiplication after renaming t to x."""
    E = SkewLaurentAlgebra.create(["x"], {}, (), fld, "kx")
    B = polynomial_line(fld)
    T = tensor_skew(E, B.algebra)
    x, t = E.gen("x"), B.algebra.gen("t")
    return make_coaction(E, B, {"x": pure_tensor(T, x, B.algebra.one()) + pure_tensor(T, E.one(), t)}, "delta")
