"""
Continuous steering with derivative constraints
===============================================

First order: one null 120 deg behind the look direction, right-hand side
[1, 0, 0]. Second order: nulls at +120 and +240 deg, right-hand side
[1, 0, -2, 0, 0]. The look direction is swept over arbitrary angles.
"""

import numpy as np

from steerdma import (ArrayGeometry, beampattern, design, main_lobe_direction, make_spec,
                      pattern_derivative_at)
from steerdma.metrics import angle_grid, magnitude_db

geom = ArrayGeometry(8, 0.02)
setups = {1: ([120], [1, 0, 0]), 2: ([120, 240], [1, 0, -2, 0, 0])}

for order, (offsets, i_beta) in setups.items():
    print(f"order {order}")
    for steer_deg in (20, 50, 120, 240, 333):
        spec = make_spec("DerivCon", order, np.radians(steer_deg), np.radians(offsets), i_beta=i_beta)
        h = design(geom, 1000.0, spec)
        bp = beampattern(h, geom, angle_grid(1.0))
        lobe = np.degrees(main_lobe_direction(bp))
        slope = abs(pattern_derivative_at(h, geom, spec.steering, 1))
        depth = [magnitude_db(abs(bp.values[int(round(np.degrees(n.angle))) % 360]))
                 for n in spec.nulls]
        print(f"  steer {steer_deg:3d}: peak at {lobe:5.1f} deg, |dB/dtheta| = {slope:.1e}, "
              f"null depth {np.round(depth, 1)} dB")

# %%
# Rough polar plot, if matplotlib is around.
try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(subplot_kw={"projection": "polar"})
    for steer_deg in (20, 50, 120, 240):
        spec = make_spec("DerivCon", 2, np.radians(steer_deg), np.radians([120, 240]),
                         i_beta=[1, 0, -2, 0, 0])
        bp = beampattern(design(geom, 1000.0, spec), geom)
        ax.plot(bp.angles, magnitude_db(bp.magnitude, -40) + 40, label=f"{steer_deg} deg")
    ax.legend(loc="lower left", fontsize=7)
    fig.savefig("steering_second_order.png", dpi=120)
    print("wrote steering_second_order.png")
