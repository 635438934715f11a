"""Independent reference computations shared by the test modules."""
import numpy as np


def himmelblau(z):
    x, y = z
    return (x * x + y - 11.0) ** 2 + (x + y * y - 7.0) ** 2


def _himmelblau_grad_hess(x, y):
    a = x * x + y - 11.0
    b = x + y * y - 7.0
    g = np.array([4 * x * a + 2 * b, 2 * a + 4 * y * b])
    h = np.array([
        [12 * x * x + 4 * y - 42, 4 * x + 4 * y],
        [4 * x + 4 * y, 4 * x + 12 * y * y - 26],
    ])
    return g, h


def newton_oracle(start, iters=100):
    """Damped Newton on the analytic Himmelblau gradient and Hessian."""
    z = np.array(start, dtype=float)
    for _ in range(iters):
        g, h = _himmelblau_grad_hess(*z)
        step = np.linalg.solve(h, g)
        t = 1.0
        while himmelblau(z - t * step) > himmelblau(z) and t > 1e-8:
            t *= 0.5
        z = z - t * step
    return z


def himmelblau_minima():
    # one start per quadrant of a coarse grid over [-5, 5]^2
    return [newton_oracle(s) for s in [(3, 3), (-3, 3), (-3, -3), (3, -3)]]
