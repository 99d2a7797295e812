#!/usr/bin/env python3
"""Build the three-sheeted cover of the sphere branched over three points and
print its invariants together with those of its minimal regularization."""

from branchfold import covering as cov
from branchfold import fixtures as fx


def describe(label: str, f: cov.CoveringMap) -> None:
    rep = cov.analyze(f)
    chi, rh = cov.rh_check(f)
    print(f"{label}:")
    print(f"  degree            {f.degree}")
    print(f"  connected         {rep.connected}")
    print(f"  chi(total)        {rep.euler_total}  (Riemann-Hurwitz predicts {rh})")
    print(f"  singular points   {len(rep.singular_set.vertices)}")
    print(f"  pseudo-singular   {len(rep.pseudo_singular_set.vertices)}")
    print(f"  branch points     {len(rep.branch_set.vertices)}")
    print(f"  regular           {cov.is_regular(f).regular}")
    assert chi == rh


def main() -> None:
    mc = fx.fig3_cocycle()
    f = cov.fox_complete(mc)
    describe("cover", f)
    reg = cov.minimal_regularization(f)
    describe("minimal regularization", reg.r)
    print(f"  deck group order  {len(cov.deck_transformations(reg.r))}")


if __name__ == "__main__":
    main()
