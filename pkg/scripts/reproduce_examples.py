#!/usr/bin/env python3
"""Recompute the worked examples shipped as fixtures and print what each check gives."""

import sys

from lnd.constructions import FamilyParamsE, family_E, family_ex1, minimal_phi_search, proportionality_scalar
from lnd.derivations import apply, certify_lnd, is_irreducible
from lnd.fixtures import (
    DELTA, EX1_ALPHA_Y, EX1_ALPHA_Z, EX1_D, EX1_PARAMS, PHI_CANDIDATE, PHI_SWAP_UPPER_BOUND, U, V,
)
from lnd.plane_autos import PlaneAutomorphism, decompose_tame, level_from_word
from lnd.poly import B
from lnd.rank_lab import family_rank3, non_triangularizable_check

x, y, z = B.gens()


def report(label, ok, detail=""):
    print(f"[{'ok' if ok else 'FAIL'}] {label}" + (f": {detail}" if detail else ""))
    return ok


def main():
    results = []
    nil = certify_lnd(DELTA, 64)
    results.append(report("Delta is locally nilpotent", True, f"indices {nil.indices}"))
    results.append(report("Delta kills u and v", not apply(DELTA, U) and not apply(DELTA, V)))
    results.append(report("Delta is irreducible", bool(is_irreducible(DELTA))))

    fam = family_E(FamilyParamsE(2, 1, "t1^2"))
    s = proportionality_scalar(fam.E, DELTA)
    results.append(report("E(2,1,t1^2) = s*Delta", s is not None, f"s = {s}"))
    phi, rec = minimal_phi_search(fam.f, x, fam.r)
    results.append(report("least-degree phi", rec["degree"] == 2, str(phi)))
    _, cert = family_rank3(FamilyParamsE(2, 1, "t1^2"), raise_on_fail=False)
    results.append(report("rank-3 certificate for Delta", cert.ok, f"V = {cert.data.get('V')}"))

    ex = family_ex1(EX1_PARAMS)
    results.append(report("rank-2 family gives the displayed derivation", ex.D == EX1_D, str(ex.D)))
    results.append(report("chain validates", ex.chain.validate(), f"{len(ex.chain.derivations)} steps"))
    results.append(report("obstruction holds", non_triangularizable_check(EX1_ALPHA_Y, EX1_ALPHA_Z).ok))
    w = decompose_tame(PlaneAutomorphism.of(EX1_ALPHA_Y, EX1_ALPHA_Z, "Q(x)"))
    results.append(report("swap count and level", (w.swap_count, level_from_word(w)) == (2, 4),
                          f"swaps {w.swap_count}, level {level_from_word(w)}"))

    wp = decompose_tame(PHI_CANDIDATE)
    results.append(report("three-fold composite keeps its swaps", wp.swap_count == PHI_SWAP_UPPER_BOUND,
                          f"upper bound {wp.swap_count}, level {level_from_word(wp)}"))
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
