"""Quick built-in property suite backing the `selftest` CLI subcommand.

A trimmed-down version of the full test suite: softmax sandwich and
increment bounds, exchange-vector properties, and gradient cross-checks.
Returns (ok, number_of_checks) instead of raising, so the CLI can report.
"""

from __future__ import annotations

import numpy as np

from .bruteforce import finite_diff_grad
from .objective import ObjectiveSpec
from .polymatroid import PolymatroidInstance
from .softmax import SoftmaxParams, increment_bound, smax, smax_grad

TOL = 1e-9


def run_quick_suite(seed: int = 0, trials: int = 50):
    rng = np.random.default_rng(seed)
    checks = 0
    ok = True

    # softmax sandwich: ||z||_inf <= smax(z) <= eta ln m + ||z||_inf
    for _ in range(trials):
        m = int(rng.integers(1, 6))
        eta = float(rng.uniform(0.01, 0.5))
        z = rng.uniform(0, 2, size=m)
        p = SoftmaxParams(eta=eta, m=m)
        s = smax(z, p)
        ok &= z.max() <= s + TOL and s <= eta * np.log(m) + z.max() + TOL
        g = smax_grad(z, p)
        ok &= abs(g.sum() - 1.0) <= TOL and g.min() >= 0.0
        checks += 1

    # increment bound dominates the true softmax increase
    for _ in range(trials):
        m = int(rng.integers(1, 5))
        n = int(rng.integers(1, 5))
        eta = float(rng.uniform(0.05, 0.5))
        A = rng.uniform(0, 1, size=(m, n))
        x = rng.uniform(0.01, 1, size=n)
        d = x * rng.uniform(0, 0.3, size=n)
        scale = float(np.abs(A @ d).max()) / eta
        if scale > 0.5:
            d *= 0.4 / scale
        p = SoftmaxParams(eta=eta, m=m)
        ok &= smax(A @ (x + d), p) <= increment_bound(x, d, A, p) + TOL
        checks += 1

    # exchange vector properties on random partition triples
    for _ in range(trials):
        n = 4
        pm = PolymatroidInstance.partition(n, [[0, 1], [2, 3]], [1.0, 1.0])
        b = rng.uniform(0, 0.5, size=n)
        a = b * rng.uniform(0, 1, size=n)
        c = rng.uniform(0, 0.3, size=n)
        while not pm.membership(a + c):
            c *= 0.5
        d = pm.exchange_vector(a, b, c)
        ok &= np.all(d >= -TOL) and np.all(d <= c + TOL)
        ok &= pm.membership(b + d, tol=1e-7)
        ok &= np.abs(c - d).sum() <= np.abs(b - a).sum() + 1e-7
        checks += 1

    # closed-form gradients vs central differences
    objs = [
        ObjectiveSpec.linear([1.0, 2.0, 0.5]),
        ObjectiveSpec.coverage([1.0, 2.0], [[0], [0, 1], [1]]),
        ObjectiveSpec.directed_cut(3, [(0, 1, 1.0), (1, 2, 0.5)]),
    ]
    for obj in objs:
        for _ in range(10):
            x = rng.uniform(0.1, 0.9, size=obj.n)
            g = obj.grad(x)
            fd = finite_diff_grad(obj, x, 1e-5)
            ok &= float(np.abs(g - fd).max()) <= 1e-5 * (1 + np.abs(fd).max())
            checks += 1

    return bool(ok), checks
