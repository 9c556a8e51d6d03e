"""
Null constraints alone do not steer a circular array
=====================================================

A second-order hypercardioid has nulls at 72 and 144 degrees. Steering it
to 50 degrees by shifting the nulls to 122 and 194 degrees and solving
only for unit gain plus nulls satisfies every constraint, yet the pattern
exceeds unit gain elsewhere and its peak is not at 50 degrees.
"""

import numpy as np

from steerdma import ArrayGeometry, beampattern, design, main_lobe_direction, make_spec
from steerdma.metrics import angle_grid, response

geom = ArrayGeometry(element_count=8, radius=0.02)
steer = np.radians(50)

spec = make_spec("Null", order=2, steering=steer, offsets=np.radians([72, 144]))
h = design(geom, 1000.0, spec)

print("nulls at", np.degrees([n.angle for n in spec.nulls]))
print("|B(50 deg)|  =", abs(response(h, geom, steer)))
for n in spec.nulls:
    print(f"|B({np.degrees(n.angle):.0f} deg)| =", abs(response(h, geom, n.angle)))

bp = beampattern(h, geom, angle_grid(0.5))
print("largest |B| on the grid:", bp.magnitude.max())
print("main lobe found at", np.degrees(main_lobe_direction(bp)), "deg")

# %%
# Same nulls with the derivative constraint added: the peak moves back to 50 deg.
fixed = design(geom, 1000.0, make_spec("DerivCon", 2, steer, np.radians([72, 144])))
bp = beampattern(fixed, geom, angle_grid(0.5))
print("DerivCon main lobe at", np.degrees(main_lobe_direction(bp)), "deg,",
      "max |B| =", round(bp.magnitude.max(), 6))
