import pytest

from coloc.exact import QQ, Matrix
from coloc.findim import (
    AlgebraHom,
    Bialgebra,
    Coalgebra,
    HopfModuleData,
    check_hopf_module,
    cofree_hopf_module,
    ground_bialgebra,
    regular_hopf_module,
    regular_module,
    trivial_coaction,
)
from coloc.fixtures import (
    inclusion_chain,
    kc2,
    prod2_chain,
    prod_fixture,
    regular_coaction,
    swap_action,
    two_point,
    two_point_coaction,
)
from coloc.hopfcat import (
    ComoduleAlgebraMap,
    HopfAction,
    IDENTITY,
    NatFamily,
    PreconditionError,
    alpha_component,
    build_hopf_comonad,
    build_hopf_monad,
    build_localized_comonad,
    check_action_compat,
    check_alpha_naturality,
    check_comonad,
    check_g_comodule,
    check_hopf_action,
    check_localized_comonad,
    check_mixed_distributive_law,
    check_monad,
    check_pasting,
    compare_localized_comonads,
    default_probe,
    hopf_comonad_suite,
    hopf_localization,
    hopf_mixed_law,
    hopf_monad_suite,
    identity_map_of,
    lift_inverse_image,
    lift_localization_hopf,
    localization_map,
    localization_monad,
    localized_coaction_via_lift,
    monad_loc_distributive,
    three_object_probe,
    trivial_action,
)
from coloc.localization import IncompatibleLocalization, check_compatibility, localize_central_idempotent
from helpers import perturbations

half = QQ(1) / 2


def prod_at_e1():
    c = prod_fixture()
    loc = localize_central_idempotent(c.source, c.source.element({"1⊗e1": 1}), "at_e1")
    return c, loc


# -- the comonad G ---------------------------------------------------------


def test_comonad_over_ground_field_is_identity():
    E = two_point()
    c = trivial_coaction(E, ground_bialgebra())
    G = build_hopf_comonad(c)
    p = default_probe(E)
    for M in p.modules:
        assert G.functor.obj(M).act == M.act
    assert check_comonad(G, p).ok


def test_comonad_kc2_regular():
    c = regular_coaction(kc2())
    p = default_probe(c.source)
    r = hopf_comonad_suite(c, p)
    assert r.ok
    assert build_hopf_comonad(c).functor.obj(p.modules[0]).dim == 4


def test_comonad_noncoassociative_delta():
    c = regular_coaction(kc2())
    # Delta'(g) = g (x) 1: counital on one side only and not coassociative
    bad = Matrix.from_sparse_columns([{0: QQ.one}, {2: QQ.one}], 4, QQ)
    r = check_comonad(build_hopf_comonad(c, comult=bad), default_probe(c.source))
    assert not r.ok
    assert any("coassociativity" in w.object or "counit" in w.object for w in r.witnesses)


def test_probe_module_over_wrong_algebra():
    c = regular_coaction(kc2())
    G = build_hopf_comonad(c)
    with pytest.raises(ValueError):
        G.functor.obj(regular_module(two_point()))


def test_g_comodules_are_hopf_modules():
    c = prod_fixture()
    G = build_hopf_comonad(c)
    hm = [regular_hopf_module(c)] + [cofree_hopf_module(c, M) for M in default_probe(c.source).modules]
    for N in hm:
        assert check_hopf_module(N).ok
        assert check_g_comodule(G, N.module, N.coact).ok
    for m in perturbations(c.rho, 20, seed=11):
        N = HopfModuleData(regular_module(c.source), c, m, "bad")
        assert check_hopf_module(N).ok == check_g_comodule(G, N.module, m).ok == False


# -- mixed distributive law ------------------------------------------------


def test_identity_law_for_identity_monad():
    c = regular_coaction(kc2())
    G = build_hopf_comonad(c)
    loc = localize_central_idempotent(c.source, c.source.unit)
    H = hopf_localization(loc, c)
    assert check_mixed_distributive_law(H.law, H.L, G, default_probe(c.source)).ok


def test_mixed_law_prod():
    c, loc = prod_at_e1()
    H = hopf_localization(loc, c)
    assert check_mixed_distributive_law(H.law, H.L, H.G, default_probe(c.source)).ok


def test_mixed_law_without_twist_fails():
    c, loc = prod_at_e1()
    H = hopf_localization(loc, c, twisted=False)
    r = check_mixed_distributive_law(H.law, H.L, H.G, default_probe(c.source))
    assert not r.ok


def test_mixed_law_refuses_incompatible():
    c = regular_coaction(kc2())
    with pytest.raises(IncompatibleLocalization):
        hopf_localization(localize_central_idempotent(c.source, (half, half)), c)


# -- alpha and pasting -----------------------------------------------------


def test_alpha_identity_is_invertible():
    c = prod_fixture()
    F = identity_map_of(c)
    p = default_probe(c.source)
    Q = regular_module(c.target.algebra)
    for M in p.modules:
        a = alpha_component(F, M, Q)
        assert a.report.ok and a.hom.matrix.is_invertible()


def test_alpha_prod_localization():
    c, loc = prod_at_e1()
    F = localization_map(loc, c)
    M, Q = regular_module(c.source), regular_module(c.target.algebra)
    a = alpha_component(F, M, Q)
    assert a.report.ok
    assert (a.hom.matrix.rows, a.hom.matrix.cols) == (4, 4)
    assert a.hom.matrix.is_invertible()
    assert check_alpha_naturality(F, default_probe(c.source), default_probe(c.target.algebra)).ok


def test_alpha_rejects_wrong_phi():
    c = prod_fixture()
    B = c.target.algebra
    collapse = AlgebraHom(B, B, Matrix.from_sparse_columns([{0: QQ.one}, {0: QQ.one}], 2, QQ), "g↦1")
    F = ComoduleAlgebraMap(AlgebraHom.identity(c.source), collapse, c, c)
    with pytest.raises(PreconditionError) as exc:
        alpha_component(F, regular_module(c.source), regular_module(B))
    assert any("ρ'∘f" in w.object for w in exc.value.report.witnesses)


def test_pasting_identities():
    c = prod_fixture()
    F = identity_map_of(c)
    assert check_pasting(F, F, default_probe(c.source), default_probe(c.target.algebra)).ok


def test_pasting_chain_prod2():
    c, loc1, loc2 = prod2_chain()
    assert (c.source.dim, loc1.target.dim, loc2.target.dim) == (8, 4, 2)
    F = localization_map(loc1, c)
    Gm = localization_map(loc2, F.target)
    probe = three_object_probe(c.source)
    assert len(probe.modules) == 3
    r = check_pasting(F, Gm, probe, default_probe(c.target.algebra))
    assert r.ok and r.details["objects"] == 6


def test_pasting_without_canonical_isos_mismatches():
    F, Gm = inclusion_chain()
    probe, qprobe = default_probe(F.source.source), default_probe(F.source.target.algebra)
    assert check_pasting(F, Gm, probe, qprobe).ok
    assert not check_pasting(F, Gm, probe, qprobe, with_isos=False).ok


# -- lifted localization ---------------------------------------------------


def test_lift_identity():
    c = prod_fixture()
    N = regular_hopf_module(c)
    out = lift_inverse_image(identity_map_of(c), N)
    assert check_hopf_module(out).ok and out.module.dim == N.module.dim


def test_lift_reproduces_localized_coaction():
    c, loc = prod_at_e1()
    transported, rho_S = localized_coaction_via_lift(loc, c)
    assert transported == rho_S
    assert rho_S == check_compatibility(c, loc).localized.rho


def test_lift_forgetful_square():
    c, loc = prod_at_e1()
    Q = lift_localization_hopf(loc, c)
    probe = [regular_hopf_module(c)] + [cofree_hopf_module(c, M) for M in default_probe(c.source).modules]
    assert Q.check_forgetful_square(probe).ok
    assert Q(probe[0]).module.dim == loc.inverse_image(regular_module(c.source)).module.dim


def test_lift_rejects_broken_hopf_module():
    c, loc = prod_at_e1()
    bad = HopfModuleData(regular_module(c.source), c, perturbations(c.rho, 1, seed=5)[0], "bad")
    with pytest.raises(PreconditionError):
        lift_inverse_image(localization_map(loc, c), bad)


def test_lift_refused_when_incompatible():
    c = regular_coaction(kc2())
    with pytest.raises(IncompatibleLocalization):
        lift_localization_hopf(localize_central_idempotent(c.source, (half, half)), c)


# -- the localized comonad -------------------------------------------------


def test_localized_comonad_trivial_loc():
    c = regular_coaction(kc2())
    H = hopf_localization(localize_central_idempotent(c.source, c.source.unit), c)
    p = default_probe(c.source)
    LC = build_localized_comonad(H)
    for M in p.modules:
        a = LC.alpha(M)
        assert a.matrix == Matrix.identity(a.matrix.rows, QQ)
    assert check_localized_comonad(H, p).ok


def test_localized_comonad_prod():
    c, loc = prod_at_e1()
    H = hopf_localization(loc, c)
    p = default_probe(c.source)
    assert check_localized_comonad(H, p).ok
    assert compare_localized_comonads(H, p).ok


def test_localized_comonad_untwisted_law_fails():
    c, loc = prod_at_e1()
    H = hopf_localization(loc, c)
    bad = hopf_mixed_law(loc, H.localized.rho, H.G, c.target, twisted=False)
    assert not check_localized_comonad(H, default_probe(c.source), bad).ok


# -- Hopf actions and the monad T ------------------------------------------


def test_hopf_action_examples():
    a = swap_action()
    assert check_hopf_action(a).ok
    assert check_hopf_action(trivial_action(kc2(), two_point())).ok


def test_swap_with_bad_unit():
    a = swap_action()
    # g |> e1 = g |> e2 = e1, so g |> 1 = 2 e1
    act = Matrix.from_sparse_columns([{0: QQ.one}, {1: QQ.one}, {0: QQ.one}, {0: QQ.one}], 2, QQ)
    r = check_hopf_action(HopfAction(a.H, a.A, act))
    assert any(w.object.startswith("h▷1") for w in r.witnesses)


def test_monad_over_ground_field_is_identity():
    A = two_point()
    T = build_hopf_monad(trivial_action(ground_bialgebra(), A))
    p = default_probe(A)
    for M in p.modules:
        assert T.functor.obj(M).act == M.act
    assert check_monad(T, p).ok


def test_monad_swap():
    a = swap_action()
    p = default_probe(a.A)
    assert hopf_monad_suite(a, p).ok
    assert build_hopf_monad(a).functor.obj(p.modules[0]).dim == 4


def test_monad_with_perturbed_comultiplication_fails():
    a = swap_action()
    H = a.H
    flip = Matrix.from_sparse_columns([{0: QQ.one}, {1: QQ.one}], 4, QQ)  # g |-> 1 (x) g
    H2 = Bialgebra(H.algebra, Coalgebra(flip, H.counit, H.labels, "bad"), "bad")
    r = check_monad(build_hopf_monad(HopfAction(H2, a.A, a.act)), default_probe(a.A))
    assert not r.ok


def test_action_compat_examples():
    a = swap_action()
    A = a.A
    v = check_action_compat(a, localize_central_idempotent(A, (1, 0)))
    assert not v.compatible
    assert v.report.witnesses[0].indices == ("g", "e1")
    assert check_action_compat(a, localize_central_idempotent(A, A.unit)).compatible
    for e in ((1, 0), (0, 1), (1, 1)):
        assert check_action_compat(trivial_action(kc2(), A), localize_central_idempotent(A, e)).compatible


def test_monad_loc_distributive_cases():
    A = two_point()
    p = default_probe(A)
    for e in ((1, 0), (0, 1), (1, 1)):
        assert monad_loc_distributive(trivial_action(kc2(), A), localize_central_idempotent(A, e), p).ok
        assert monad_loc_distributive(trivial_action(ground_bialgebra(), A), localize_central_idempotent(A, e), p).ok
    assert monad_loc_distributive(swap_action(), localize_central_idempotent(A, A.unit), p).ok
    with pytest.raises(IncompatibleLocalization):
        monad_loc_distributive(swap_action(), localize_central_idempotent(A, (1, 0)), p)


def test_localization_monad_is_a_monad():
    c, loc = prod_at_e1()
    assert check_monad(localization_monad(loc), default_probe(c.source)).ok


# -- perturbation suites ---------------------------------------------------


@pytest.mark.parametrize("make", [lambda: regular_coaction(kc2()), prod_fixture, two_point_coaction])
def test_comonad_perturbations(make):
    c = make()
    p = default_probe(c.source)
    for m in perturbations(c.target.comult, 100, seed=21):
        assert not check_comonad(build_hopf_comonad(c, comult=m), p).ok
    for m in perturbations(c.target.counit, 100, seed=22):
        assert not check_comonad(build_hopf_comonad(c, counit=m), p).ok


def test_monad_perturbations():
    a = swap_action()
    p = default_probe(a.A)
    for m in perturbations(a.act, 100, seed=23):
        assert not hopf_monad_suite(HopfAction(a.H, a.A, m), p).ok
    H = a.H
    for m in perturbations(H.comult, 100, seed=24):
        H2 = Bialgebra(H.algebra, Coalgebra(m, H.counit, H.labels, "p"), "p")
        assert not hopf_monad_suite(HopfAction(H2, a.A, a.act), p).ok


def test_mixed_law_perturbations():
    c, loc = prod_at_e1()
    H = hopf_localization(loc, c)
    p = default_probe(c.source)
    for m in perturbations(H.localized.rho, 100, seed=25):
        l = hopf_mixed_law(loc, m, H.G, c.target)
        assert not check_mixed_distributive_law(l, H.L, H.G, p).ok


def test_localized_comonad_perturbations():
    c, loc = prod_at_e1()
    H = hopf_localization(loc, c)
    p = default_probe(c.source)
    for m in perturbations(H.localized.rho, 100, seed=26):
        assert not check_localized_comonad(H, p, hopf_mixed_law(loc, m, H.G, c.target)).ok
