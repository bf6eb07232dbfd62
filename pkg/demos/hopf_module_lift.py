"""Localizing a comodule algebra and its Hopf modules at once.

E = k[C2] (x) (k x k) with the regular coaction on the first factor is
localized at 1 (x) e1.  The localized coaction is recovered two ways (by
the compatibility check and by transporting along the lifted functor) and
the Hopf comonad is compared with the comonad of the canonical entwining.

    python3 demos/hopf_module_lift.py
"""

from coloc.entwining import compare_with_hopf_comonad
from coloc.findim import cofree_hopf_module, regular_hopf_module
from coloc.fixtures import prod2_chain, prod_fixture
from coloc.hopfcat import (
    check_localized_comonad,
    check_pasting,
    default_probe,
    hopf_localization,
    lift_localization_hopf,
    localization_map,
    localized_coaction_via_lift,
    three_object_probe,
)
from coloc.localization import check_compatibility, localize_central_idempotent


def main():
    c = prod_fixture()
    E = c.source
    loc = localize_central_idempotent(E, E.element({"1⊗e1": 1}), "at_e1")
    print(f"{E.name}: dim {E.dim} -> E_mu dim {loc.target.dim}")

    direct = check_compatibility(c, loc).localized.rho
    transported, rho_S = localized_coaction_via_lift(loc, c)
    print("rho_S from compatibility equals rho_S via the lift:", direct == transported == rho_S)

    Q = lift_localization_hopf(loc, c)
    hopf = [regular_hopf_module(c)] + [cofree_hopf_module(c, M) for M in default_probe(E).modules]
    print("forgetful square commutes:", Q.check_forgetful_square(hopf).status)

    H = hopf_localization(loc, c)
    print("localized comonad G_mu laws:", check_localized_comonad(H, default_probe(E)).status)
    print("entwining comonad vs Hopf comonad:", compare_with_hopf_comonad(c, default_probe(E)).status)

    c2, l1, l2 = prod2_chain()
    F = localization_map(l1, c2)
    G = localization_map(l2, F.target)
    r = check_pasting(F, G, three_object_probe(c2.source), default_probe(c2.target.algebra))
    print(f"pasting along {c2.source.dim} -> {l1.target.dim} -> {l2.target.dim}:", r.status)


if __name__ == "__main__":
    main()
