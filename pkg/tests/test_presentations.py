from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coloc import fixtures as fx
from coloc.entwining import canonical_entwining_from_coaction
from coloc.presentations import (
    AlgebraDecl,
    ElaborationError,
    ParseError,
    PresentationBundle,
    SkewDecl,
    elaborate,
    load,
    parse,
    print_bundle,
)
from coloc.skew import SkewCoaction

from conftest import DATA, ROOT

FIXTURES = sorted(DATA.glob("*.alg"))
REJECTS = ROOT / "tests" / "rejects"


def test_empty_text():
    b = parse("")
    assert b == PresentationBundle() and len(b) == 0
    assert print_bundle(b) == ""
    assert parse("# only a comment\n\n") == b


def test_kc2_text_has_one_bialgebra():
    b = parse((DATA / "kc2.alg").read_text())
    kinds = [d.kind for d in b.declarations if isinstance(d, AlgebraDecl)]
    assert kinds == ["bialgebra"]


def test_incomplete_bialgebra():
    with pytest.raises(ParseError, match="incomplete declaration") as exc:
        parse("bialgebra B { basis 1 }")
    assert (exc.value.line, exc.value.column) == (1, 1)


def test_qplane_decl():
    b = parse("skew qplane { gens x y; q x y = 2 }")
    (d,) = b.declarations
    assert d == SkewDecl("qplane", ("x", "y"), (), ((("x", "y"), Fraction(2)),))


def test_statement_separators_are_interchangeable():
    a = parse("algebra A { basis a b; mult a*a = a; mult b*b = b; unit = a + b }")
    b = parse("algebra A {\n  basis a b\n\n  mult b*b = b  # later\n  mult a*a = a\n  unit = a + b\n}\n")
    assert a == b


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.stem)
def test_fixture_round_trip(path):
    b = parse(path.read_text())
    text = print_bundle(b)
    assert parse(text) == b
    assert print_bundle(parse(text)) == text


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.stem)
def test_fixture_elaborates(path):
    b, env = load(path)
    assert set(env.objects) == {n for n in b.names() if n}


# -- rejection corpus -------------------------------------------------------

REJECTIONS = {
    "backend_mismatch": (9, 27, "coaction between different backends"),
    "bad_field": (1, 7, "not prime"),
    "duplicate_name": (2, 9, "duplicate name 'A'"),
    "field_scalar": (2, 1, "no image in GF(2)"),
    "forward_reference": (1, 15, "unresolved reference 'A'"),
    "incomplete_bialgebra": (1, 1, "incomplete declaration"),
    "kind_mismatch": (2, 27, "'E' is an algebra"),
    "negative_power": (3, 25, "negative power of non-invertible generator 't'"),
    "not_central": (9, 1, "not central"),
    "not_idempotent": (7, 1, "not idempotent"),
    "probe_dimension": (6, 8, "dimension mismatch"),
    "q_zero": (3, 5, "q must be nonzero"),
    "stray_character": (2, 1, "unexpected character '%'"),
    "syntax_missing_brace": (4, 1, "unterminated block"),
    "unknown_basis": (3, 10, "unknown basis element 'c'"),
    "unresolved_reference": (2, 27, "unresolved reference 'B'"),
    "wrong_arity": (3, 14, "expected 2 tensor factors"),
    "zero_denominator": (1, 35, "zero denominator"),
}


def test_rejection_corpus_is_complete():
    assert {p.stem for p in REJECTS.glob("*.alg")} == set(REJECTIONS)


@pytest.mark.parametrize("stem", sorted(REJECTIONS))
def test_rejection_has_location(stem):
    line, col, fragment = REJECTIONS[stem]
    with pytest.raises(ParseError) as exc:
        load(REJECTS / f"{stem}.alg")
    err = exc.value
    assert (err.line, err.column) == (line, col)
    assert fragment in err.message
    assert str(err).startswith(f"line {line}, column {col}: ")


def test_elaboration_error_is_a_parse_error_with_location():
    with pytest.raises(ElaborationError) as exc:
        load(REJECTS / "not_idempotent.alg")
    assert exc.value.line == 7


# -- elaboration and the python fixtures ------------------------------------


def test_elaborate_kc2():
    _, env = load(DATA / "kc2.alg")
    B = env["kc2"]
    ref = fx.kc2()
    assert B.dim == 2
    assert (B.mult, B.unit, B.comult, B.counit) == (ref.mult, ref.unit, ref.comult, ref.counit)
    assert env["delta"].rho == ref.comult
    assert env["half"].target.dim == 1
    assert env["canonical"].psi == canonical_entwining_from_coaction(fx.regular_coaction(ref)).psi


def test_elaborate_qplane():
    _, env = load(DATA / "qplane.alg")
    A = env["qplane"]
    assert A.ngens == 2 and A.q[0][1] == 2
    assert A == fx.qplane()
    c = env["grading"]
    assert isinstance(c, SkewCoaction)
    assert c.rho.same_as(fx.grading_coaction().rho)


@pytest.mark.parametrize("stem,name,make", [
    ("h4", "delta", lambda: fx.regular_coaction(fx.sweedler_h4())),
    ("kc2xc2", "delta", lambda: fx.regular_coaction(fx.kc2xc2())),
    ("prod", "prod", fx.prod_fixture),
    ("prod2", "prod2", lambda: fx.prod_fixture(copies=2)),
    ("2pt", "trivial", fx.two_point_coaction),
    ("2pt", "broken", lambda: fx.two_point_coaction(broken=True)),
])
def test_dsl_matches_python_fixture(stem, name, make):
    _, env = load(DATA / f"{stem}.alg")
    c, ref = env[name], make()
    assert c.source.mult == ref.source.mult and c.source.unit == ref.source.unit
    assert c.rho == ref.rho
    assert c.target.comult == ref.target.comult


def test_dsl_swap_action_and_kx():
    _, env = load(DATA / "2pt.alg")
    assert env["swap"].act == fx.swap_action().act
    _, env = load(DATA / "kx.alg")
    assert env["delta"].rho.same_as(fx.kx_coaction().rho)


def test_field_declaration():
    b = parse("field F7\nalgebra A { basis a; mult a*a = 1/2 a; unit = a }")
    env = elaborate(b)
    assert env.field.name == "F7"
    assert env["A"].mult.column(0) == (env.field(4),)  # 1/2 = 4 mod 7


def test_coaction_to_undeclared_bialgebra():
    with pytest.raises(ParseError, match="unresolved reference"):
        parse("algebra E { basis a; mult a*a = a; unit = a }\ncoaction r : E -> E (x) B { rho a = a(x)1 }")


# -- generated bundles -------------------------------------------------------

NAMES = st.sampled_from(["A", "B", "E", "H", "k2", "alg_1", "M", "N", "P", "Q", "rho", "loc", "pr", "w"])
LABELS = ["a", "b", "c", "u", "v", "e1", "e2", "g"]
GENS = ["x", "y", "z", "t", "s"]


def scalars():
    return st.tuples(st.integers(-9, 9), st.integers(1, 6)).map(lambda t: Fraction(*t))


def fmt_scalar(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@st.composite
def expr_text(draw, factor_choices, arity=1):
    n = draw(st.integers(1, 3))
    out = []
    for i in range(n):
        c = draw(scalars())
        atom = "(x)".join(draw(st.sampled_from(choices)) for choices in factor_choices[:arity])
        coef = "" if c == 1 and not atom.startswith("1") else fmt_scalar(abs(c)) + " "
        sign = ("-" if c < 0 else "") if i == 0 else (" - " if c < 0 else " + ")
        out.append(f"{sign}{coef}{atom}")
    return "".join(out)


@st.composite
def monomial(draw, gens, inv):
    if not gens:
        return "1"
    chosen = draw(st.lists(st.sampled_from(gens), min_size=0, max_size=len(gens), unique=True))
    if not chosen:
        return "1"
    parts = []
    for g in sorted(chosen, key=gens.index):
        e = draw(st.integers(-2, 3) if g in inv else st.integers(1, 3))
        if e == 0:
            e = 1
        parts.append(g if e == 1 else f"{g}^{e}")
    return "*".join(parts)


@st.composite
def bundles(draw):
    """Source text for a random well-formed bundle, plus the separators mixed up."""
    sep = draw(st.sampled_from(["\n", "; ", ";\n", "\n\n  "]))
    decls, used = [], set()
    algs, bialgs, skews, mods = {}, {}, {}, {}

    def fresh():
        n = draw(NAMES.filter(lambda x: x not in used))
        used.add(n)
        return n

    if draw(st.booleans()):
        decls.append(f"field {draw(st.sampled_from(['Q', 'F2', 'F3', 'F7']))}")
    for _ in range(draw(st.integers(0, 10))):
        kind = draw(st.sampled_from(["algebra", "coalgebra", "bialgebra", "skew", "localize", "module", "coaction",
                                     "probe"]))
        if kind in ("algebra", "coalgebra", "bialgebra"):
            name = fresh()
            basis = draw(st.lists(st.sampled_from(LABELS), min_size=1, max_size=3, unique=True))
            body = [f"basis {' '.join(basis)}"]
            if kind != "coalgebra":
                pairs = draw(st.lists(st.tuples(st.sampled_from(basis), st.sampled_from(basis)), unique=True,
                                      max_size=4))
                body += [f"mult {a}*{b} = {draw(expr_text([basis]))}" for a, b in pairs]
                body.append(f"unit = {draw(expr_text([basis]))}")
            if kind != "algebra":
                body += [f"comult {a} = {draw(expr_text([basis, basis], 2))}" for a in basis]
                body += [f"counit {a} = {fmt_scalar(draw(scalars()))}" for a in basis]
            body = draw(st.permutations(body[1:])) if kind == "algebra" else body[1:]
            decls.append(f"{kind} {name} {{ basis {' '.join(basis)}{sep}{sep.join(body)} }}")
            if kind != "coalgebra":
                algs[name] = basis
            if kind == "bialgebra":
                bialgs[name] = basis
        elif kind == "skew":
            name = fresh()
            gens = draw(st.lists(st.sampled_from(GENS), min_size=1, max_size=3, unique=True))
            inv = [g for g in gens if draw(st.booleans())]
            body = [f"gens {' '.join(gens)}"]
            if inv:
                body.append(f"inv {' '.join(inv)}")
            for i in range(len(gens)):
                for j in range(i + 1, len(gens)):
                    if draw(st.booleans()):
                        body.append(f"q {gens[i]} {gens[j]} = {fmt_scalar(draw(scalars().filter(bool)))}")
            decls.append(f"skew {name} {{ {sep.join(body)} }}")
            skews[name] = (gens, inv)
        elif kind == "localize" and (algs or skews):
            name = fresh()
            target = draw(st.sampled_from(sorted(algs) + sorted(skews)))
            if target in algs:
                body = draw(expr_text([algs[target]]))
            else:
                gens = skews[target][0]
                body = ", ".join(draw(st.lists(st.sampled_from(gens), min_size=1, unique=True)))
            decls.append(f"localize {name} of {target} at {{ {body} }}")
        elif kind == "module" and algs:
            name = fresh()
            A = draw(st.sampled_from(sorted(algs)))
            basis = draw(st.lists(st.sampled_from(["m", "n", "p"]), min_size=1, max_size=3, unique=True))
            acts = draw(st.lists(st.tuples(st.sampled_from(algs[A]), st.sampled_from(basis)), unique=True,
                                 max_size=3))
            body = [f"basis {' '.join(basis)}"] + [f"act {a} {m} = {draw(expr_text([basis]))}" for a, m in acts]
            decls.append(f"module {name} over {A} {{ {sep.join(body)} }}")
            mods[name] = (A, basis)
        elif kind == "coaction" and algs and bialgs:
            name = fresh()
            E = draw(st.sampled_from(sorted(algs)))
            B = draw(st.sampled_from(sorted(bialgs)))
            rows = [f"rho {a} = {draw(expr_text([algs[E], bialgs[B]], 2))}" for a in algs[E]]
            decls.append(f"coaction {name} : {E} -> {E} (x) {B} {{ {sep.join(rows)} }}")
        elif kind == "probe" and mods:
            name = fresh()
            A = draw(st.sampled_from(sorted({a for a, _ in mods.values()})))
            ms = [m for m in sorted(mods) if mods[m][0] == A]
            body = [f"modules {' '.join(ms)}"]
            if draw(st.booleans()):
                s, t = draw(st.sampled_from(ms)), draw(st.sampled_from(ms))
                ds, dt = len(mods[s][1]), len(mods[t][1])
                rows = [[fmt_scalar(draw(scalars())) for _ in range(ds)] for _ in range(dt)]
                body.append(f"maps f : {s} -> {t} = [" + ", ".join("[" + ", ".join(r) + "]" for r in rows) + "]")
            decls.append(f"probe {name} {{ {sep.join(body)} }}")
    comment = draw(st.sampled_from(["", "# generated\n", "\n"]))
    return comment + "\n".join(decls) + ("\n" if decls and draw(st.booleans()) else "")


@settings(max_examples=100)
@given(bundles())
def test_generated_round_trip(text):
    b = parse(text)
    printed = print_bundle(b)
    again = parse(printed)
    assert again == b
    assert print_bundle(again) == printed
