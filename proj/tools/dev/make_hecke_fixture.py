#!/usr/bin/env python3
"""Regenerate tests/data/hecke_fixture.csv from PARI/GP (requires cypari2).

Writes the characteristic polynomial of T_p on the weight-2 new subspace of
level d for every fixture level d and every prime p < BOUND with p not
dividing d. Zero-dimensional levels are written with polynomial 1.
"""
import sys

import cypari2

LEVELS = [14, 21, 23, 27, 31, 36, 42, 49, 54, 63, 81, 84, 98, 108, 126, 217]
BOUND = 1000


def canonical(poly):
    coeffs = [int(c) for c in poly.Vec()]  # descending
    deg = len(coeffs) - 1
    out = ""
    for i, c in enumerate(coeffs):
        e = deg - i
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if e == 0:
            term = str(mag)
        else:
            mono = "z" if e == 1 else "z^%d" % e
            term = mono if mag == 1 else "%d*%s" % (mag, mono)
        if not out:
            out = ("-" if c < 0 else "") + term
        else:
            out += sign + term
    return out or "0"


def main(path):
    pari = cypari2.Pari()
    pari.allocatemem(2 * 10**9)
    primes = [int(p) for p in pari.primes(pari.primepi(BOUND - 1))]
    lines = []
    for d in sorted(LEVELS):
        mf = pari("mfinit([%d,2],0)" % d)
        dim = int(pari.mfdim(mf))
        for p in primes:
            if d % p == 0:
                continue
            poly = pari.charpoly(pari.mfheckemat(mf, p), "z") if dim else pari("1")
            lines.append("%d,%d,%s" % (d, p, canonical(poly)))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/hecke_fixture.csv")
