"""
WNG and DF versus frequency for the three design methods
=========================================================

Look direction 50 deg, M = 8, r = 2 cm. First order uses a null at +120 deg
(SymNull mirrors it to -120 deg); second order uses nulls at +120/+240 deg.
"""

import numpy as np

from steerdma import ArrayGeometry, MetricCurve, design, df, make_spec, wng

geom = ArrayGeometry(8, 0.02)
freqs = np.geomspace(200, 8000, 12)
setups = {1: ([120], [1, 0, 0]), 2: ([120, 240], [1, 0, -2, 0, 0])}

for order, (offsets, i_beta) in setups.items():
    print(f"\norder {order}")
    print("freq_hz  " + "  ".join(f"{m:>17s}" for m in ("DerivCon", "Null", "SymNull")))
    curves = {}
    for method in ("DerivCon", "Null", "SymNull"):
        spec = make_spec(method, order, np.radians(50), np.radians(offsets),
                         i_beta=i_beta if method == "DerivCon" else None)
        filters = [design(geom, f, spec) for f in freqs]
        curves[method] = (MetricCurve(freqs, np.array([wng(h, geom).db for h in filters]), "wng_db"),
                          MetricCurve(freqs, np.array([df(h, geom).db for h in filters]), "df_db"))
    for i, f in enumerate(freqs):
        cells = [f"{curves[m][1].values[i]:6.2f}/{curves[m][0].values[i]:7.2f}"
                 for m in ("DerivCon", "Null", "SymNull")]
        print(f"{f:7.0f}  " + "  ".join(f"{c:>17s}" for c in cells))
    print("(cells are DF dB / WNG dB)")
