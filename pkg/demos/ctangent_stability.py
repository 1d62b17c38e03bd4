"""
Walk through the c-tangent bundle of the coordinate cross x1 x2 x3 = 0 in R^4.

The twisted Poisson structure pi = x4 e1^e4 (with H = e^1^e^2^e^3) vanishes at
the origin. We compute the germ complex there, read off H^2, and then look at
the one-parameter family pi_t to see that nearby structures move the graph
away from the zero section while the fixed point survives.
"""

from fractions import Fraction

from dirac_stab.algebroid import (
    ctangent_example, d_B, evaluate_ext, germ_complex, stability_verdict,
    twisted_poisson_residual,
)
from dirac_stab.linfty import cohomology

B, pi, H, p = ctangent_example()
print("algebroid:", B.name)
print("pi =", pi)
print("H  =", H)
print("d_B H vanishes:", d_B(B, H).is_zero())
print("[pi,pi] - 2 pi#H vanishes:", twisted_poisson_residual(B, pi, H).is_zero())

g = germ_complex(B, pi, H, p)
for i in sorted(g.complex.dims):
    print("  degree %d: %d cochains, dim H = %d" % (i, g.complex.dims[i], cohomology(g.complex, i).dim))

rep = stability_verdict(B, pi, H, p)
print("verdict:", rep.verdict, " H2 =", rep.h2, " family dim =", rep.family_dim)

# the deformed family keeps solving the twisted Poisson equation for every t
Bt, pit, Ht, _ = ctangent_example(param=True)
print("pi_t residual identically zero:", twisted_poisson_residual(Bt, pit, Ht).is_zero())
x = [Fraction(1), Fraction(2), Fraction(3), Fraction(5)]
for t in (Fraction(0), Fraction(1, 3), Fraction(1)):
    print("  pi_t at x = %s, t = %s: %s" % (tuple(map(str, x)), t, evaluate_ext(pit, x + [t])))
