# %% [markdown]
# # Integrating the weighted Laplacian on the sphere
#
# L u = Laplacian u - (1/m) <df, du> is symmetric for the measure
# exp(-f/m) dV.  On a closed manifold this makes int v Lu - int u Lv vanish,
# and int v Lu + int <du, dv> as well; with v = 1 the total integral of
# L u is zero.  Product Gauss-Legendre rules in nested angles converge
# spectrally for smooth data.

# %%
import math

from quasiyamabe.fields import expression_scalar
from quasiyamabe.quadrature import QuadratureGrid, convergence_ladder, sphere_volume
from quasiyamabe.soliton import INFINITY

BOX = ((0.0, math.pi), (0.0, math.pi), (-math.pi, math.pi))


def field(text):
    return expression_scalar(text, 3, box=BOX)


for res in (8, 16, 48):
    v = QuadratureGrid.sphere(3, res).volume()
    print(f"resolution {res:2d}: volume error {v / sphere_volume(3) - 1:.2e}")

# %%
f = field("cos(x1) + 0.3*sin(x1)*cos(x2)")
u = field("exp(0.5*cos(x1)) + sin(x1)*sin(x2)*cos(x3)")
v = field("cos(x1)*cos(x1) + sin(x1)*cos(x2)")
for m in (2.0, -1.0, INFINITY):
    print(f"m = {m}")
    for res, (sym, ibp, total) in convergence_ladder(3, f, u, v, m, (4, 8, 16, 24)):
        print(f"  {res:3d}: {sym:.2e} {ibp:.2e} {total:.2e}")
