# %% [markdown]
# # Geometry of the level sets of f
#
# At regular points of a soliton the level sets of f are totally umbilic
# with constant mean curvature, and each level has constant sectional
# curvature.  Along a warped profile the levels are the spheres r = const,
# so these are checks of the interpolated profile through the full engine.
# On a generic metric they fail, and the spreads say by how much.

# %%
import numpy as np

from quasiyamabe import catalog
from quasiyamabe.construct import level_points, profile_to_instance
from quasiyamabe.levelset import levelset_report, project_to_level, prop24_checks, prop25_checks

pr = catalog.warp_profile("WARP4")
inst = profile_to_instance(pr)

# %%
for r in (0.3, 0.7, 1.2):
    pts = level_points(pr, r, 8, seed=1)
    worst = max(rep.value for rep in prop24_checks(inst, pts) + prop25_checks(inst, pts))
    lv = levelset_report(inst, pts)
    print(f"r = {r}: H = {np.mean(lv.H):.6f} (spread {np.ptp(lv.H):.1e}),  "
          f"level curvature {np.mean(lv.sect):.6f},  worst check {worst:.1e}")

# %% [markdown]
# For comparison, a random potential on a random metric.  The levels are
# found by Newton projection from an anchor point; nothing is constant.

# %%
gen = catalog.build("RANDOMPOLY4")
pts = project_to_level(gen, np.array([0.2, -0.1, 0.3, 0.05]), 8, seed=3)
for rep in prop24_checks(gen, pts):
    print(f"{rep.name:40s} {rep.value:.3e}")
