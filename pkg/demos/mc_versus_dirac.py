"""
Random two-forms against two splits: the MC equation holds exactly when the
graph is again a Dirac structure. Both tests are exact over the rationals.

With A = su2 every two-form happens to be MC, because the residual lands in
the one-dimensional top degree and vanishes there. Taking A = sl2* instead
makes MC a genuine Poisson condition, and both outcomes show up.
"""

import random

from dirac_stab import courant
from dirac_stab.courant import deformation_algebra, ext_to_vec, graph, is_dirac, split_data
from dirac_stab.documents import bundled_path, parse_document
from dirac_stab.graded import Ext
from dirac_stab.instances import dirac_splits, known_mc_elements
from dirac_stab.linfty import mc_residual

doc = parse_document(bundled_path("su2_double.json").read_text(encoding="utf-8"))
E, A, K = doc.data["E"], doc.data["A"], doc.data["K"]
d = split_data(E, A, K)
alg = deformation_algebra(d)
rng = random.Random(7)

candidates = known_mc_elements(d, [d.to_split(v) for v in A], rng, 4)
candidates += [courant.random_two_form(d.n, rng) for _ in range(4)]


def report(title, E, d, alg, candidates):
    print(title)
    for eps in candidates:
        mc = not mc_residual(alg, ext_to_vec(eps))
        dirac = is_dirac(E, [d.from_split(v) for v in graph(d, eps)])[0]
        print("  MC %-5s Dirac %-5s %s" % (mc, dirac, eps))


report("su2 double", E, d, alg, candidates)

name, E, A, K = next(x for x in dirac_splits(1, 3) if x[0] == "sl2/H=0/A=g*")
d = split_data(E, A, K)
# no seeded MC elements are known for this split, so try coordinate two-forms
candidates = [Ext(3, {ij: 1}) for ij in ((0, 1), (0, 2), (1, 2))]
candidates += [courant.random_two_form(d.n, rng) for _ in range(3)]
report(name, E, d, deformation_algebra(d), candidates)
