"""Independent oracle for the strongly convex accountant.

Linear K search, dense alpha grid evaluated with numpy and a bounded Brent
refinement. Reported curve values are re-evaluated in mpmath. Prints values
frozen into the Rust tests.
"""
import mpmath as mp
import numpy as np
from scipy.optimize import minimize_scalar

mp.mp.dps = 40

MNIST = dict(n=11982, m=0.0119, M=1.0, L=0.25 + 0.0119, delta=1 / 11982)
XS = np.linspace(-6, 6, 20_001)  # log10(alpha - 1)


def eps0(a, S, sigma, c):
    return 4 * a * S * S * c["M"] ** 2 / (c["m"] * sigma**2 * c["n"] ** 2)


def seq(a, sigma, batches, ks, c):
    eta = 1 / c["L"]
    i = len(ks)
    decay = np.exp(-eta * c["m"] * ks[-1] / a)
    if i == 1:
        return decay * eps0(a, batches[0], sigma, c)
    return decay * (a - 0.5) / (a - 1) * (
        eps0(2 * a, batches[i - 1], sigma, c) + seq(2 * a, sigma, batches[:-1], ks[:-1], c)
    )


def seq_mp(a, sigma, batches, ks, c):
    eta = 1 / mp.mpf(c["L"])
    e0 = lambda a, S: 4 * a * S * S * c["M"] ** 2 / (c["m"] * mp.mpf(sigma) ** 2 * c["n"] ** 2)
    decay = mp.e ** (-eta * c["m"] * ks[-1] / a)
    if len(ks) == 1:
        return decay * e0(a, batches[0])
    return decay * (a - mp.mpf(1) / 2) / (a - 1) * (
        e0(2 * a, batches[len(ks) - 1]) + seq_mp(2 * a, sigma, batches[:-1], ks[:-1], c)
    )


def convert(curve, delta):
    ld = np.log(1 / delta)

    def obj(x):
        a = 1 + 10.0**x
        return curve(a) + ld / (a - 1)

    vals = obj(XS)
    k = int(np.argmin(vals))
    lo, hi = XS[max(k - 1, 0)], XS[min(k + 1, len(XS) - 1)]
    r = minimize_scalar(lambda x: float(obj(x)), bounds=(lo, hi), method="bounded",
                        options={"xatol": 1e-12})
    return min(r.fun, vals[k])


def min_k_single(target, sigma, S, c):
    k = 0
    while True:
        v = convert(lambda a: seq(a, sigma, [S], [k], c), c["delta"])
        if v <= target:
            prev = convert(lambda a: seq(a, sigma, [S], [k - 1], c), c["delta"]) if k else None
            return k, v, prev
        k += 1


def schedule(target, sigma, total, b, c):
    batches, ks = [], []
    left = total
    while left > 0:
        batches.append(min(b, left))
        left -= batches[-1]
        ks.append(0)
        # gallop upward in steps of 64, then linear
        while convert(lambda a: seq(a, sigma, batches, ks[:-1] + [ks[-1] + 64], c), c["delta"]) > target:
            ks[-1] += 64
        while convert(lambda a: seq(a, sigma, batches, ks, c), c["delta"]) > target:
            ks[-1] += 1
    return ks


if __name__ == "__main__":
    c = MNIST
    print("min_k sigma=0.03 S=100:", min_k_single(1.0, 0.03, 100, c))
    for b in (5, 10, 20):
        ks = schedule(1.0, 0.03, 100, b, c)
        print("schedule b=%d total=%d" % (b, sum(ks)), ks)
    ks5 = schedule(1.0, 0.03, 15, 5, c)
    for a in (2.0, 10.0, 50.0):
        print("seq eps alpha=%g i=3 K=%s:" % (a, ks5), mp.nstr(seq_mp(mp.mpf(a), 0.03, [5, 5, 5], ks5, c), 20))
    eta = 1 / c["L"]
    print("retrain saving alpha=20:", mp.nstr(20 / (c["m"] * eta) * mp.log(c["m"]**2 * c["n"]**2 / 16), 20))
    xi = 2 * 3.8168 * 0.03**2
    print("lsi cap exponent:", mp.nstr(4 * (10 + 3.8168) ** 2 / xi, 20))
