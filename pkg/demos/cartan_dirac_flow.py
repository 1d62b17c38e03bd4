"""
Deform the Cartan-Dirac structure on su2 by a rational rotation and transport
it with the gauge flow of a small xi.

The flow of the MC element is compared with the exponential transport of the
graph; halving the step should cut the deviation by roughly 2^4.
"""

from fractions import Fraction
from math import log2

import numpy as np

from dirac_stab import courant, lie
from dirac_stab.courant import deformation_algebra, ext_to_vec, extract_eps, split_data, verify_prop_CAauto
from dirac_stab.gauge import DenseModel
from dirac_stab.linfty import mc_residual

I3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
E = courant.cartan_dirac_quadratic(lie.su2(), I3)
d = split_data(E, courant.diagonal(3), courant.antidiagonal(3))

# a nearby Dirac structure: the graph of a rational rotation
R = courant.rational_rotation([40, 1, -1, 2])
L = [[Fraction(int(i == j)) for j in range(3)] + [R[j][i] for j in range(3)] for i in range(3)]
eps = extract_eps(d, [d.to_split(v) for v in L])
alg = deformation_algebra(d)
print("eps =", eps)
print("MC residual:", mc_residual(alg, ext_to_vec(eps)) or "zero")

model = DenseModel(alg)
xi = np.array([0.05, -0.08, 0.03])
rep = verify_prop_CAauto(d, eps, xi, 1.0, 1e-3, 11, alg, model)
print("max deviation at step 1e-3: %.2e" % rep.max_deviation)

errs = []
for h in (0.5, 0.25, 0.125):
    errs.append(verify_prop_CAauto(d, eps, xi, 1.0, h, 3, alg, model).max_deviation)
    print("  step %-6g deviation %.3e" % (h, errs[-1]))
print("observed orders: %.2f %.2f" % (log2(errs[0] / errs[1]), log2(errs[1] / errs[2])))
