"""
Push an MC element out along a gauge direction, then ask the rectifier to
find the direction back.

Runs over the small seeded instance list and prints one line per case.
"""

import numpy as np

from dirac_stab.gauge import DenseModel, Quotient, ev_map, rectify
from dirac_stab.instances import rectify_instances

for k, (name, alg, W) in enumerate(rectify_instances(0, 4)[:8]):
    rng = np.random.default_rng(k)
    model = DenseModel(alg)
    quot = Quotient(model, W)
    w = rng.uniform(-0.05, 0.05, quot.codim(-1))
    Qp = ev_map(model, quot, np.zeros(model.dims[0]), w[None])[1][0]
    r = rectify(alg, W, {}, Qp, model=model)
    status = "ok " if r.success else "FAIL"
    # v need only agree with -w modulo the stabilizer, so compare residuals
    print("%s %-28s iterations %2d  ev residual %.1e  MC residual %.1e"
          % (status, name, r.iterations, r.ev_residual, r.mc_residual))
    if not r.success:
        print("    ", r.diagnostic)
