"""Arbitrary-precision evaluation of the two D2D noise calibrations on a
fixed random grid. Writes tests/fixtures/d2d_oracle.csv.

Inputs are written with repr() so the Rust side parses the exact doubles.
"""
import csv
import os

import mpmath as mp
import numpy as np

mp.mp.dps = 50


def gamma(m, L):
    return (mp.mpf(L) - m) / (mp.mpf(L) + m)


def thm9(eps, delta, I, M, m, n, L):
    g = gamma(m, L)
    ld = mp.log(1 / mp.mpf(delta))
    gap = mp.sqrt(ld + eps) - mp.sqrt(ld)
    return 4 * mp.sqrt(2) * M * g**I / (m * n * (1 - g**I) * gap)


def thm28(eps, delta, M, m, n, L, d):
    g = gamma(m, L)
    a = 2 * mp.log(2 / mp.mpf(delta))
    arg = mp.sqrt(2 * d) / (1 - g) / (mp.sqrt(a + eps) - mp.sqrt(a))
    i_min = mp.log(arg) / mp.log(1 / g)
    I = max(int(mp.ceil(i_min)), 1)
    sigma = 8 * M * g**I / (m * n * (1 - g**I) * (mp.sqrt(a + 3 * eps) - mp.sqrt(a + 2 * eps)))
    extra = lambda i: mp.log(mp.log(4 * d * i / mp.mpf(delta))) / mp.log(1 / g)
    return sigma, i_min, I, [extra(i) for i in (1, 10, 100)]


def main():
    rs = np.random.RandomState(20240611)
    out = os.path.join(os.path.dirname(__file__), "..", "fixtures", "d2d_oracle.csv")
    with open(out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["eps", "delta", "iters", "clip", "m", "n", "L", "d",
                    "sigma9", "sigma28", "i_min28", "iters28", "extra1", "extra10", "extra100"])
        for _ in range(100):
            eps = float(10 ** rs.uniform(-2, 1))
            delta = float(10 ** rs.uniform(-7, -2))
            I = int(rs.randint(1, 21))
            M = float(rs.choice([1.0, 2.0]))
            m = float(10 ** rs.uniform(-3, -1))
            n = int(rs.randint(1000, 60001))
            L = float(m + rs.uniform(0.2, 1.5))
            d = int(rs.randint(2, 2049))
            s9 = thm9(eps, delta, I, M, m, n, L)
            s28, i_min, I28, extras = thm28(eps, delta, M, m, n, L, d)
            w.writerow([repr(eps), repr(delta), I, repr(M), repr(m), n, repr(L), d,
                        mp.nstr(s9, 20), mp.nstr(s28, 20), mp.nstr(i_min, 20), I28]
                       + [mp.nstr(e, 20) for e in extras])


if __name__ == "__main__":
    main()
