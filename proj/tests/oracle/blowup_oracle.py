#!/usr/bin/env python3
"""Cup table of A*(Hilb^2(P1 x P1)) computed from the blowup of Q x Q along the diagonal.

Q = P1 x P1 has A*(Q) spanned by h0, h1, h2, h3 (h1 h2 = h3). The blowup U of Q x Q along
the diagonal is presented as pairs (alpha, u): alpha in A*(Q x Q), u in A*(Q) standing for
the pushforward from the exceptional divisor. Hilb^2 is U modulo the swap, so integrals are
half of those on U. Nothing here uses the relation-based normal form.

Usage: blowup_oracle.py [OUTPUT]   (writes "i j -> c0,...,c13" lines)
"""
import sys
from fractions import Fraction as Fr
from itertools import combinations_with_replacement

N = 14
CODIM = [0, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3, 4]


def qmul(r, s):
    if r == 0:
        return {s: 1}
    if s == 0:
        return {r: 1}
    if {r, s} == {1, 2}:
        return {3: 1}
    return {}


def clean(x):
    return {k: v for k, v in x.items() if v}


def add(*xs):
    out = {}
    for x in xs:
        for k, v in x.items():
            out[k] = out.get(k, 0) + v
    return clean(out)


def scale(x, c):
    return clean({k: v * c for k, v in x.items()})


def pmul(x, y):
    out = {}
    for (r1, s1), c1 in x.items():
        for (r2, s2), c2 in y.items():
            for r, a in qmul(r1, r2).items():
                for s, b in qmul(s1, s2).items():
                    out[(r, s)] = out.get((r, s), 0) + c1 * c2 * a * b
    return clean(out)


def restrict(x):
    # pullback to the diagonal
    out = {}
    for (r, s), c in x.items():
        for t, a in qmul(r, s).items():
            out[t] = out.get(t, 0) + c * a
    return clean(out)


def qprod(u, v):
    out = {}
    for r, a in u.items():
        for s, b in v.items():
            for t, c in qmul(r, s).items():
                out[t] = out.get(t, 0) + a * b * c
    return clean(out)


CHERN = {1: 2, 2: 2}                               # c1 of the normal bundle of the diagonal
DIAG = {(0, 3): 1, (1, 2): 1, (2, 1): 1, (3, 0): 1}  # class of the diagonal


def bmul(x, y):
    a, u = x
    b, v = y
    uv = qprod(u, v)
    alpha = add(pmul(a, b), scale(pmul(DIAG, {(t, 0): c for t, c in uv.items()}), -1))
    e = add(qprod(u, restrict(b)), qprod(v, restrict(a)), scale(qprod(CHERN, uv), -1))
    return (alpha, e)


def badd(x, y, c=1):
    return (add(x[0], scale(y[0], c)), add(x[1], scale(y[1], c)))


def bscale(x, c):
    return (scale(x[0], c), scale(x[1], c))


ZERO = ({}, {})
ONE = ({(0, 0): 1}, {})
GEN = {
    1: ({(1, 0): 1, (0, 1): 1}, {}),
    2: ({(2, 0): 1, (0, 2): 1}, {}),
    4: ({(3, 0): 1, (0, 3): 1}, {}),
}
GEN[3] = badd(badd(GEN[1], GEN[2]), ({}, {0: 1}))


def integral(x):
    return Fr(x[0].get((3, 3), 0), 2)


def product(*xs):
    out = ONE
    for x in xs:
        out = bmul(out, x)
    return out


def solve(m, rhs):
    n = len(m)
    a = [[Fr(v) for v in row] + [Fr(r)] for row, r in zip(m, rhs)]
    for col in range(n):
        p = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[p] = a[p], a[col]
        pv = a[col][col]
        a[col] = [v / pv for v in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [v - f * w for v, w in zip(a[i], a[col])]
    return [a[i][n] for i in range(n)]


def basis():
    t = [None] * N
    t[0] = ONE
    for g in (1, 2, 3, 4):
        t[g] = GEN[g]
    t[5] = product(t[1], t[2])
    t[6] = product(t[1], t[1])
    t[7] = product(t[2], t[2])
    t[8] = product(t[1], t[3])
    t[9] = product(t[2], t[3])
    # codim 3: the classes with divisor pairings (T1,T2,T3) = (1,0,1), (0,1,1), (1,1,1)
    cubes = []
    for mono in combinations_with_replacement((1, 2, 3), 3):
        cubes.append(product(*(GEN[g] for g in mono)))
    for mono in ((1, 4), (2, 4), (3, 4)):
        cubes.append(product(*(GEN[g] for g in mono)))
    chosen = []
    for c in cubes:
        trial = chosen + [c]
        m = [[integral(bmul(x, GEN[d])) for d in (1, 2, 3)] for x in trial]
        if rank(m) == len(trial):
            chosen = trial
        if len(chosen) == 3:
            break
    pair = [[integral(bmul(x, GEN[d])) for x in chosen] for d in (1, 2, 3)]
    for idx, target in ((10, (1, 0, 1)), (11, (0, 1, 1)), (12, (1, 1, 1))):
        coeffs = solve(pair, target)
        v = ZERO
        for c, x in zip(coeffs, chosen):
            v = badd(v, bscale(x, c))
        t[idx] = v
    t[13] = product(t[4], t[4])
    return t


def rank(m):
    a = [[Fr(v) for v in row] for row in m]
    r = 0
    for col in range(len(a[0]) if a else 0):
        p = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col] / a[r][col]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        r += 1
    return r


def main():
    t = basis()
    g = [[integral(bmul(t[i], t[j])) for j in range(N)] for i in range(N)]
    # normalise the point class so that T13 is the basis element of top degree
    lines = []
    for i in range(N):
        for j in range(N):
            x = bmul(t[i], t[j])
            rhs = [integral(bmul(x, t[k])) for k in range(N)]
            coeffs = solve([[g[k][l] for k in range(N)] for l in range(N)], rhs)
            for f, c in enumerate(coeffs):
                if c != 0 and CODIM[f] != CODIM[i] + CODIM[j]:
                    raise SystemExit("inhomogeneous product T%d T%d" % (i, j))
            lines.append("%d %d -> %s" % (i, j, ",".join(fmt(c) for c in coeffs)))
    text = "".join(l + "\n" for l in lines)
    if len(sys.argv) > 1:
        with open(sys.argv[1], "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def fmt(c):
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)


if __name__ == "__main__":
    main()
