"""Exhaustive delay-offset scan and dense coefficient scan.

Prints the values frozen into test_mesh.cpp and test_expr.cpp.
"""
import numpy as np


def scan(X, alpha, requested, tol=1e-9):
    rows = []
    for m0 in range(1, 10 * requested + 1):
        dx = alpha / m0
        J = round(X / dx)
        rows.append((abs(J * dx - X) / dx, m0, J, dx))
    admissible = [r for r in rows if r[0] <= tol and r[2] >= 2]
    return admissible, sorted(rows)[:2]


def main():
    for alpha in (0.1414213562,):
        ok, best = scan(1.0, alpha, 100)
        print(f"alpha={alpha}: admissible={len(ok)}")
        for residual, m0, J, dx in best:
            print(f"  m0={m0} J={J} dx={dx!r} residual={residual:.6g}")

    x = np.linspace(0.0, 1.0, 1001)[:, None]
    t = np.linspace(0.0, 0.5, 1001)[None, :]
    a = (1 + x**2) / (1 + 2 * x * t + 2 * x**2 + x**4)
    print(f"example 1 sup|a| dense 1001x1001: {np.abs(a).max()!r}")


if __name__ == "__main__":
    main()
