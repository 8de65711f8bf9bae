#!/usr/bin/env python3
"""Brute-force reference for the Toeplitz construction on integer towers.

Everything here follows the set definitions literally (no digit tricks, no
reduction shortcuts beyond `%`). The C++ library must agree with the values
printed by this script; the frozen expectations in the unit and acceptance
tests were produced by running it.

    python3 tests/oracle/brute_force.py            # prints the reference tables
"""

from fractions import Fraction
from itertools import product
import json
import sys


class Line:
    """Z with Gamma_n = N_n Z and interval fundamental domains."""

    def __init__(self, indices, centered=False):
        self.indices = list(indices)
        self.N = [1]
        for q in self.indices:
            self.N.append(self.N[-1] * q)
        self.centered = centered

    def domain(self, n):
        N = self.N[n]
        if self.centered:
            h = (N - 1) // 2
            return list(range(-h, h + 1))
        return list(range(N))

    def same_coset(self, a, b, n):
        return (a - b) % self.N[n] == 0

    def in_subgroup(self, a, n):
        return a % self.N[n] == 0

    def mul(self, a, b):
        return a + b

    def inv(self, a):
        return -a


def j_sets(tw, upto):
    J = [[0]]
    for n in range(1, upto + 1):
        covered = []
        Jn = []
        for x in tw.domain(n):
            hit = any(tw.same_coset(x, j, i + 1) for i in range(n) for j in J[i])
            if not hit:
                Jn.append(x)
        J.append(Jn)
    return J


def construct(tw, depth):
    """Run the step-by-step construction; returns assignments and h records."""
    J = j_sets(tw, depth)
    m = [len(J[i]) for i in range(len(J))]

    def m_block(k):
        return 1 + k + sum(m[: k + 1])

    # assignments[s] = (modulus level s+1, {rep: value}) for J(s) Gamma_{s+1}
    assignments = []
    records = []
    for step in range(1, depth + 1):
        s = step - 1
        if s == 0:
            assignments.append((1, {0: 1}))
            continue
        if s == 1:
            assignments.append((2, {j: 0 for j in J[1]}))
            continue
        k = 1
        while not (m_block(k - 1) <= s < m_block(k)):
            k += 1
        sp = s - m_block(k - 1)
        vals = {j: 0 for j in J[s]}
        if m_block(k - 1) < s + 1 < m_block(k):
            g = J[k][sp]
            cands = [x for x in J[s] if tw.same_coset(x, g, k)]
            h = cands[0]
            vals[h] = 1
            records.append({"step": step, "k": k, "slot": sp + 1, "h": h})
        assignments.append((s + 1, vals))
    return J, assignments, records


def evaluate(tw, assignments, x):
    for lvl, vals in assignments:
        for rep, v in vals.items():
            if tw.same_coset(x, rep, lvl):
                return v
    return None


def report(name, tw, depth, window_levels):
    J, assignments, records = construct(tw, depth)
    out = {"name": name}
    out["J"] = {n: J[n] for n in range(min(len(J), 4))}
    out["records"] = records
    out["windows"] = {
        n: [evaluate(tw, assignments, x) for x in tw.domain(n)] for n in window_levels
    }
    dens = {}
    a = {}
    for n in range(1, depth + 1):
        D = tw.domain(n)
        per = [x for x in D if any(tw.same_coset(x, j, i + 1) for i in range(n) for j in J[i])]
        dens[n] = str(Fraction(len(per), len(D)))
        per_vals = [evaluate(tw, assignments, x) for x in per]
        a[n] = (per_vals.count(0), per_vals.count(1), len(D) - len(per))
    out["d"] = dens
    out["a_counts_and_J"] = a
    return out


def good_relation_count(tw, n, m):
    """|(Gamma_{n+1} cap D_m) minus (D_{n+1}Gamma_{n+2} u ... u D_{m-1}Gamma_m)|"""
    cnt = 0
    for g in tw.domain(m):
        if not tw.in_subgroup(g, n + 1):
            continue
        bad = False
        for l in range(n + 1, m):
            if any(tw.same_coset(g, d, l + 1) for d in tw.domain(l)):
                bad = True
                break
        if not bad:
            cnt += 1
    return cnt


def main():
    results = []
    three = Line([3] * 6)
    results.append(report("threeadic", three, 5, [1, 2, 3]))
    results.append(report("threeadic-centered", Line([3] * 6, centered=True), 5, [1, 2]))
    results.append(report("mixed-2-3-2", Line([2, 3, 2, 3, 2]), 4, [1, 2]))
    results.append(report("irregular-small", Line([15, 31, 3]), 2, [1]))

    gr = {f"{n},{m}": good_relation_count(three, n, m) for n in range(0, 3) for m in range(n + 2, 6)}
    results.append({"name": "threeadic good-relation N_{m,n}", "counts": gr})

    # periodic approximations on the 3-adic tower: eta_n(x) = eta(x mod 3^n)
    tw7 = Line([3] * 7)
    _, asg7, _ = construct(tw7, 6)

    def eta_n(n, x):
        return evaluate(tw7, asg7, x % 3 ** n)

    def mu_U(m, n):
        hits = sum(1 for d in range(3 ** m)
                   if all(eta_n(m, d + w) == eta_n(n, w) for w in range(3 ** (n + 1))))
        return str(Fraction(hits, 3 ** m))

    results.append({
        "name": "threeadic periodic measures",
        "mu_4[1]": str(Fraction(sum(eta_n(4, d) for d in range(81)), 81)),
        "mu_4[10]": str(Fraction(sum(1 for d in range(81) if eta_n(4, d) == 1 and eta_n(4, d + 1) == 0), 81)),
        "mu_4(U_1)": mu_U(4, 1),
        "mu_5(U_1)": mu_U(5, 1),
    })

    # tile decomposition oracle on the 3-adic tower
    tiles = {}
    for g in (7, 5, 0):
        cand = [(v, u) for v in three.domain(2) if three.in_subgroup(v, 1)
                for u in three.domain(1) if v + u == g]
        tiles[g] = cand
    results.append({"name": "tile_decompose D_2 -> D_1", "tiles": tiles})

    # lattice Z^2 with [3,3] per axis: |D_1|=9, |D_2|=81
    sizes = {}
    for n in (1, 2):
        N = 3 ** n
        dom = list(product(range(N), range(N)))
        sizes[n] = len(dom)
    results.append({"name": "lattice sizes", "sizes": sizes})

    json.dump(results, sys.stdout, indent=1, default=str)
    print()


if __name__ == "__main__":
    main()
