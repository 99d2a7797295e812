#!/usr/bin/env python3
"""Walk through the chart calculus on the disk models (h, k)."""

from branchfold import charts as ch
from branchfold import fixtures as fx


def main() -> None:
    c64, c32 = ch.disk_chart(6, 4), ch.disk_chart(3, 2)
    red = ch.reduce_chart(c64)
    print(f"(6,4): |G|={c64.G.order()} index={ch.chart_index(c64)}")
    print(f"  reduced by |N|={red.N.order()} -> |G|={red.chart.G.order()}, "
          f"isomorphic to (3,2): {ch.chart_isomorphism(red.chart, c32) is not None}")
    print(f"  (6,4) ~ (3,2): {ch.charts_equivalent(c64, c32)}")
    print(f"  (3,2) ~ (3,1): {ch.charts_equivalent(c32, ch.disk_chart(3, 1))}")

    cd = ch.common_dominating_chart(c64, ch.disk_chart(12, 8))
    print(f"common dominating chart of (6,4) and (12,8): |G|={cd.chart.G.order()}, "
          f"valid={ch.validate_chart(cd.chart).valid}")

    for h, k in ((2, 1), (3, 2), (5, 3), (1, 4)):
        lc = ch.local_characteristic(ch.disk_chart(h, k))
        print(f"local characteristic of ({h},{k}): image order {lc.image_order}")

    st = ch.stratify_chart(ch.fig2_chart())
    print("strata of the two-involution cone chart:")
    for comp in st.components:
        print(f"  dim {comp.dim}  label {comp.label}  simplices {len(comp.simplices)}")

    c = ch.disk_chart(1, 2, rim=6)
    cbar = ch.quotient_chart(c, [fx.rotation_perm(6, 2)])
    back = ch.lift_chart(ch.induced_projection(c, cbar), cbar).chart
    print(f"Z3 quotient of (1,2) has model {ch.classify_codim2(cbar)}; "
          f"lifting recovers the chart: {ch.charts_equivalent(back, c)}")


if __name__ == "__main__":
    main()
