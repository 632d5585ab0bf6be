#!/usr/bin/env python3
"""Independent brute-force oracle for frozen test values.

Replays the recurrence with Python integers and naive data structures.
Nothing here shares code with the C++ library.

  python3 brute_force.py census BOUND MAX_STEPS
  python3 brute_force.py residues BOUND TERMS MODULUS
  python3 brute_force.py exponents BOUND TERMS
"""
import itertools
import sys

CAP = 10**100


def step(w):
    s = sum(w)
    d = (s & -s).bit_length() - 1
    return s >> d, d


def seeds(bound):
    odd = range(1, bound, 2)
    return itertools.product(odd, repeat=4)


def classify(seed, max_steps):
    windows = [tuple(seed)]
    index = {tuple(seed): 0}
    w = tuple(seed)
    for i in range(1, max_steps + 1):
        t, _ = step(w)
        w = w[1:] + (t,)
        if t > CAP:
            return None
        if w in index:
            start = index[w]
            period = i - start
            terms = [x[0] for x in windows[start:start + period]]
            return canonical(terms)
        index[w] = i
        windows.append(w)
    return None


def canonical(cycle):
    rots = [tuple(cycle[k:] + cycle[:k]) for k in range(len(cycle))]
    return min(rots)


def census(bound, max_steps):
    basins = {}
    unresolved = 0
    for s in seeds(bound):
        c = classify(s, max_steps)
        if c is None:
            unresolved += 1
        else:
            basins[c] = basins.get(c, 0) + 1
    print("cycle,period,basin")
    for c in sorted(basins, key=lambda c: (len(c), c)):
        print('"%s",%d,%d' % (" ".join(map(str, c)), len(c), basins[c]))
    print("unresolved,%d" % unresolved)


def residues(bound, terms, modulus):
    counts = [0] * modulus
    for s in seeds(bound):
        w = tuple(s)
        seq = list(w)
        while len(seq) < terms:
            t, _ = step(w)
            w = w[1:] + (t,)
            seq.append(t)
        for x in seq[:terms]:
            counts[x % modulus] += 1
    print(counts, sum(counts))


def exponents(bound, terms):
    counts = {}
    for s in seeds(bound):
        w = tuple(s)
        for _ in range(terms - 4):
            t, d = step(w)
            w = w[1:] + (t,)
            counts[d] = counts.get(d, 0) + 1
    print(sorted(counts.items()), sum(counts.values()))


if __name__ == "__main__":
    cmd, args = sys.argv[1], list(map(int, sys.argv[2:]))
    {"census": census, "residues": residues, "exponents": exponents}[cmd](*args)
