import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coloc.exact import QQ, GF, Matrix
from coloc.findim import AlgebraHom, regular_module, trivial_coaction
from coloc.fixtures import (
    grading_coaction,
    kc2,
    kc2xc2,
    kx_coaction,
    prod_fixture,
    qplane,
    regular_coaction,
    two_point,
    two_point_coaction,
)
from coloc.localization import (
    IncompatibleLocalization,
    LocalizationError,
    central_idempotents,
    check_compatibility,
    check_fork_comparison,
    check_idempotent_monad,
    check_localized_coaction_unique,
    fixed_submodule,
    localize_central_idempotent,
    localize_generators,
    localized_coaction_inverse_image,
    localized_coinvariants_compare,
    survey_idempotent_localizations,
)
from coloc.report import pretty

half = QQ(1) / 2


def test_localize_at_one_is_identity():
    E = kc2().algebra
    loc = localize_central_idempotent(E, E.unit)
    assert loc.target.dim == E.dim
    assert loc.iota.matrix == Matrix.identity(E.dim, QQ)


def test_localize_two_point_at_e1():
    E = two_point()
    loc = localize_central_idempotent(E, (1, 0))
    assert loc.target.dim == 1 and loc.target.labels == ("e1",)
    assert loc.iota.matrix.apply(E.basis(1)) == (0,)
    assert loc.iota.matrix.apply(E.basis(0)) == loc.target.unit


def test_localize_kc2_at_half_one_plus_g():
    E = kc2().algebra
    loc = localize_central_idempotent(E, (half, half))
    assert loc.target.dim == 1
    assert loc.iota.matrix.apply(E.basis(1)) == loc.target.unit


def test_localize_errors():
    E = two_point()
    with pytest.raises(LocalizationError, match="not idempotent"):
        localize_central_idempotent(E, (2, 0))
    with pytest.raises(LocalizationError, match="zero ring"):
        localize_central_idempotent(E, (0, 0))
    from coloc.fixtures import sweedler_h4
    H = sweedler_h4().algebra
    # (1+g)/2 is idempotent but x does not commute with it
    with pytest.raises(LocalizationError, match="not central") as exc:
        localize_central_idempotent(H, (half, half, 0, 0))
    assert exc.value.args[0].endswith("x")


def test_idempotent_monad_examples():
    E = two_point()
    assert check_idempotent_monad(localize_central_idempotent(E, E.unit)).ok
    r = check_idempotent_monad(localize_central_idempotent(E, (1, 0)))
    assert r.ok and r.details["objects"] == 3
    assert check_idempotent_monad(localize_generators(qplane(), ["x"]), window=2).ok


def test_counit_dims_on_two_point():
    E = two_point()
    loc = localize_central_idempotent(E, (1, 0))
    N = regular_module(loc.target)
    c = loc.counit(N)
    assert c.matrix.rows == c.matrix.cols == 1 and c.matrix.is_invertible()


def test_fork_comparison_and_quotient_agree():
    c = prod_fixture()
    loc = localize_central_idempotent(c.source, c.source.element({"1⊗e1": 1}))
    M = regular_module(c.source)
    assert fixed_submodule(loc, M).dim == 2
    assert check_fork_comparison(loc, M).ok
    assert loc.quotient_by_idempotent(M).dim == loc.inverse_image(M).module.dim == 2


def test_compat_trivial_localization():
    c = regular_coaction(kc2())
    v = check_compatibility(c, localize_central_idempotent(c.source, c.source.unit))
    assert v.compatible
    assert v.localized.rho == c.rho


def test_compat_qplane():
    c = grading_coaction()
    v = check_compatibility(c, localize_generators(c.source, ["x"]))
    assert v.compatible and v.report.ok
    assert pretty(localized_coaction_inverse_image(v, "x").fmt()) == "x⁻¹⊗g⁻¹"


def test_compat_kx_incompatible():
    c = kx_coaction()
    v = check_compatibility(c, localize_generators(c.source, ["x"]))
    assert not v.compatible
    assert v.witness == "x"
    assert pretty(v.value) == "x⊗1 + 1⊗t"


def test_compat_kc2_incompatible():
    c = regular_coaction(kc2())
    v = check_compatibility(c, localize_central_idempotent(c.source, (half, half)))
    assert not v.compatible
    assert v.value == "1/2 1⊗1 + 1/2 1⊗g"


def test_compat_prod():
    c = prod_fixture()
    loc = localize_central_idempotent(c.source, c.source.element({"1⊗e1": 1}))
    v = check_compatibility(c, loc)
    assert v.compatible
    down = v.localized.rho @ loc.iota.matrix
    from coloc.localization import iota_tensor_rho
    assert down == iota_tensor_rho(c, loc)


def test_localized_coaction_unique():
    c = prod_fixture()
    loc = localize_central_idempotent(c.source, c.source.element({"1⊗e1": 1}))
    v = check_compatibility(c, loc)
    r = check_localized_coaction_unique(v, v.localized.rho)
    assert r.ok and r.details["candidate closes square"]
    other = check_localized_coaction_unique(v, Matrix.zero(v.localized.rho.rows, v.localized.rho.cols, QQ))
    assert not other.details["candidate closes square"]


def test_coinvariants_trivial():
    E = two_point()
    c = trivial_coaction(E, kc2())
    cmp = localized_coinvariants_compare(c, localize_central_idempotent(E, (1, 0)))
    assert not cmp.strict and cmp.img.dim == cmp.loc_coinv.dim == 1


def test_coinvariants_qplane_window3():
    c = grading_coaction()
    cmp = localized_coinvariants_compare(c, localize_generators(c.source, ["x"]), 3)
    assert cmp.img.dim == 1 and cmp.loc_coinv.dim == 4 and cmp.strict
    desc = cmp.describe()
    assert sorted(pretty(s) for s in desc["loc_coinv"]) == sorted(["1", "x⁻¹y", "x⁻²y²", "x⁻³y³"])


def test_coinvariants_prod():
    c = prod_fixture()
    cmp = localized_coinvariants_compare(c, localize_central_idempotent(c.source, c.source.element({"1⊗e1": 1})))
    assert cmp.img.dim == cmp.loc_coinv.dim == 1 and not cmp.strict


def test_coinvariants_incompatible_raises():
    c = kx_coaction()
    with pytest.raises(IncompatibleLocalization):
        localized_coinvariants_compare(c, localize_generators(c.source, ["x"]))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_coinvariant_growth(d):
    c = grading_coaction()
    cmp = localized_coinvariants_compare(c, localize_generators(c.source, ["x"]), d)
    assert cmp.img.dim == 1 and cmp.loc_coinv.dim == d + 1


def test_surveys():
    for B, n in ((kc2(), 4), (kc2xc2(), 16)):
        rows = survey_idempotent_localizations(regular_coaction(B))
        assert len(rows) == n
        assert [r.outcome for r in rows].count("compatible") == 1
        assert [r.outcome for r in rows].count("degenerate") == 1
        good = next(r for r in rows if r.outcome == "compatible")
        assert good.idempotent == B.unit


def test_central_idempotents_over_gf3():
    assert len(central_idempotents(kc2(GF(3)).algebra)) == 4


def test_trivial_coaction_every_localization_compatible():
    # trivial coaction: every idempotent localization is compatible
    rows = survey_idempotent_localizations(two_point_coaction())
    assert all(r.outcome in ("compatible", "degenerate") for r in rows)


# -- properties -------------------------------------------------------------


@settings(max_examples=30)
@given(st.sampled_from(["kc2", "prod", "2pt"]), st.data())
def test_square_commutes_when_compatible(which, data):
    c = {"kc2": lambda: regular_coaction(kc2()), "prod": prod_fixture, "2pt": two_point_coaction}[which]()
    idems = [e for e in central_idempotents(c.source) if any(e)]
    e = data.draw(st.sampled_from(idems))
    loc = localize_central_idempotent(c.source, e)
    v = check_compatibility(c, loc)
    if v.compatible:
        from coloc.localization import iota_tensor_rho
        assert v.localized.rho @ loc.iota.matrix == iota_tensor_rho(c, loc)
        cmp = localized_coinvariants_compare(c, loc)
        assert cmp.img.is_subspace_of(cmp.loc_coinv)
        assert check_idempotent_monad(loc).ok
