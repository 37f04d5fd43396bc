#!/usr/bin/env python3
"""Mertens values by plain trial division (independent of the C++ sieve)."""
import json
import sys


def mu(n):
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def main():
    limit = int(sys.argv[1]) if len(sys.argv) > 1 else 10**6
    checkpoints = [10**k for k in range(1, 7) if 10**k <= limit]
    m = 0
    out = {}
    squarefree = {}
    count = 0
    for n in range(1, limit + 1):
        v = mu(n)
        m += v
        count += v != 0
        if n in checkpoints:
            out[str(n)] = m
            squarefree[str(n)] = count
    json.dump({"mertens": out, "squarefree_count": squarefree}, sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main()
