"""Pilot values for the disjointness and Weyl acceptance checks.

Independent of the C++ code: Mobius by a numpy sieve, phases with gmpy2 at
200 bits, sums with math.fsum. Writes tests/golden/pilot.json.
"""
import json
import math
import sys

import gmpy2
import numpy as np

gmpy2.get_context().precision = 200


def mobius(n):
    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, n + 1):
        if not is_p[p]:
            continue
        is_p[p * p :: p] = False
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return mu


def frac(x):
    return float(x - gmpy2.floor(x))


def mobius_average(mu, n, phase):
    re, im = [], []
    for k in range(1, n + 1):
        if mu[k]:
            f = 2 * math.pi * frac(phase(k))
            re.append(mu[k] * math.cos(f))
            im.append(mu[k] * math.sin(f))
    return abs(complex(math.fsum(re), math.fsum(im))) / n


def weyl_average(n, phase):
    re, im = [], []
    for k in range(-n, n + 1):
        f = 2 * math.pi * frac(phase(k))
        re.append(math.cos(f))
        im.append(math.sin(f))
    return abs(complex(math.fsum(re), math.fsum(im))) / (2 * n + 1)


def main(out):
    s2 = gmpy2.sqrt(gmpy2.mpfr(2))
    s3 = gmpy2.sqrt(gmpy2.mpfr(3))
    third = gmpy2.mpfr(1) / 3
    N = 10**6
    mu = mobius(N)
    res = {
        "mobius_linear_sqrt2_1e6": mobius_average(mu, N, lambda k: k * s2),
        "mobius_quadratic_sqrt2_1e6": mobius_average(mu, N, lambda k: k * k * s2),
    }
    W = 10**5
    weyl = {}
    for h in (1, 2, 3):
        weyl[f"third_n_plus_sqrt2_n2_k{h}"] = weyl_average(W, lambda k, h=h: h * (third * k + s2 * k * k))
    for h in (1, 2):
        weyl[f"sqrt3_n3_plus_half_n_k{h}"] = weyl_average(W, lambda k, h=h: h * (s3 * k**3 + gmpy2.mpfr(k) / 2))
    res["weyl_1e5"] = weyl
    with open(out, "w") as f:
        json.dump(res, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/golden/pilot.json")
