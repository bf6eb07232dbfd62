"""Which localizations carry a coaction along with them?

Runs the three standard cases: the quantum plane graded by a Laurent
bialgebra (compatible), k[x] coacted on by the line k[t] (not), and the
regular coaction of k[C2] localized at each central idempotent.

    python3 demos/compatibility_tour.py
"""

from coloc.fixtures import grading_coaction, kc2, kc2xc2, kx_coaction, regular_coaction
from coloc.localization import (
    check_compatibility,
    localize_generators,
    localized_coaction_inverse_image,
    localized_coinvariants_compare,
    survey_idempotent_localizations,
)
from coloc.report import pretty


def main():
    c = grading_coaction()
    loc = localize_generators(c.source, ["x"])
    v = check_compatibility(c, loc)
    print(f"qplane at x: compatible={v.compatible}")
    print("  rho_S(x^-1) =", pretty(localized_coaction_inverse_image(v, "x").fmt()))
    for d in (1, 2, 3, 4):
        cmp = localized_coinvariants_compare(c, loc, d)
        print(f"  degree <= {d}: image of E^co has dim {cmp.img.dim}, S^co has dim {cmp.loc_coinv.dim}")

    k = kx_coaction()
    v = check_compatibility(k, localize_generators(k.source, ["x"]))
    print(f"\nk[x] at x: compatible={v.compatible}, rho(x) = {pretty(v.value)} is not invertible")

    for B in (kc2(), kc2xc2()):
        print(f"\nregular coaction of {B.name}, localized at each central idempotent:")
        for row in survey_idempotent_localizations(regular_coaction(B)):
            print(f"  {B.algebra.fmt(row.idempotent):<28} {row.outcome}")


if __name__ == "__main__":
    main()
