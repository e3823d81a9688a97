#!/usr/bin/env python3
"""Regenerates the desk contest's test data.

Each problem has a reference implementation used to produce expected
outputs, an independent brute-force check where one is cheap, and a
seeded-wrong variant. The first hidden case the wrong variant fails is
computed here by brute force and frozen into solutions/expectations.json.

Run from anywhere: python3 fixtures/desk/generate.py
"""

import bisect
import heapq
import json
import random
from collections import deque
from itertools import combinations
from pathlib import Path

ROOT = Path(__file__).resolve().parent
SEED = 20260214


# --- reference / wrong logic ------------------------------------------------

def add_ref(inp):
    a, b = map(int, inp.split())
    return f"{a + b}\n"


def add_wrong(inp):
    a, b = map(int, inp.split())
    s = a + b
    if s > 10**9:
        s %= 10**9
    return f"{s}\n"


def max_ref(inp):
    t = inp.split()
    n = int(t[0])
    return f"{max(map(int, t[1:1 + n]))}\n"


def max_wrong(inp):
    t = inp.split()
    n = int(t[0])
    best = 0
    for x in map(int, t[1:1 + n]):
        best = max(best, x)
    return f"{best}\n"


def vowels_ref(inp):
    line = inp.splitlines()[0]
    return f"{sum(ch in 'aeiou' for ch in line)}\n"


def vowels_wrong(inp):
    line = inp.splitlines()[0]
    return f"{sum(ch in 'aeio' for ch in line)}\n"


def prefix_parse(inp):
    t = list(map(int, inp.split()))
    n, q = t[0], t[1]
    a = t[2:2 + n]
    qs = [(t[2 + n + 2 * i], t[3 + n + 2 * i]) for i in range(q)]
    return a, qs


def prefix_ref(inp):
    a, qs = prefix_parse(inp)
    pre = [0]
    for x in a:
        pre.append(pre[-1] + x)
    return "".join(f"{pre[r] - pre[l - 1]}\n" for l, r in qs)


def prefix_brute(inp):
    a, qs = prefix_parse(inp)
    return "".join(f"{sum(a[l - 1:r])}\n" for l, r in qs)


def prefix_wrong(inp):
    a, qs = prefix_parse(inp)
    pre = [0]
    for x in a:
        pre.append(pre[-1] + x)
    out = []
    for l, r in qs:
        if r == len(a) and l > 1:
            r -= 1
        out.append(f"{pre[r] - pre[l - 1]}\n")
    return "".join(out)


def count_parse(inp):
    t = list(map(int, inp.split()))
    n, q = t[0], t[1]
    return t[2:2 + n], t[2 + n:2 + n + q]


def count_ref(inp):
    a, qs = count_parse(inp)
    return "".join(f"{bisect.bisect_right(a, x)}\n" for x in qs)


def count_brute(inp):
    a, qs = count_parse(inp)
    return "".join(f"{sum(v <= x for v in a)}\n" for x in qs)


def count_wrong(inp):
    a, qs = count_parse(inp)
    return "".join(f"{bisect.bisect_left(a, x)}\n" for x in qs)


def grid_solve(inp, unreachable):
    lines = inp.split("\n")
    r, c = map(int, lines[0].split())
    g = lines[1:1 + r]
    for i in range(r):
        for j in range(c):
            if g[i][j] == "S":
                s = (i, j)
            if g[i][j] == "T":
                t = (i, j)
    dist = {s: 0}
    dq = deque([s])
    while dq:
        i, j = dq.popleft()
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            ni, nj = i + di, j + dj
            if 0 <= ni < r and 0 <= nj < c and g[ni][nj] != "#" and (ni, nj) not in dist:
                dist[(ni, nj)] = dist[(i, j)] + 1
                dq.append((ni, nj))
    return f"{dist.get(t, unreachable)}\n"


def grid_ref(inp):
    return grid_solve(inp, -1)


def grid_wrong(inp):
    return grid_solve(inp, 0)


def lis_parse(inp):
    t = list(map(int, inp.split()))
    return t[1:1 + t[0]]


def lis_ref(inp):
    tails = []
    for x in lis_parse(inp):
        k = bisect.bisect_left(tails, x)
        if k == len(tails):
            tails.append(x)
        else:
            tails[k] = x
    return f"{len(tails)}\n"


def lis_brute(inp):
    a = lis_parse(inp)
    best = [1] * len(a)
    for i in range(len(a)):
        for j in range(i):
            if a[j] < a[i]:
                best[i] = max(best[i], best[j] + 1)
    return f"{max(best)}\n"


def lis_wrong(inp):
    tails = []
    for x in lis_parse(inp):
        k = bisect.bisect_right(tails, x)
        if k == len(tails):
            tails.append(x)
        else:
            tails[k] = x
    return f"{len(tails)}\n"


def graph_parse(inp):
    t = list(map(int, inp.split()))
    n, m = t[0], t[1]
    edges = [tuple(t[2 + 3 * i:5 + 3 * i]) for i in range(m)]
    return n, edges


def dijkstra(n, edges, directed):
    adj = [[] for _ in range(n + 1)]
    for u, v, w in edges:
        adj[u].append((v, w))
        if not directed:
            adj[v].append((u, w))
    dist = [None] * (n + 1)
    dist[1] = 0
    pq = [(0, 1)]
    while pq:
        d, u = heapq.heappop(pq)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            if dist[v] is None or d + w < dist[v]:
                dist[v] = d + w
                heapq.heappush(pq, (dist[v], v))
    return f"{dist[n] if dist[n] is not None else -1}\n"


def dijkstra_ref(inp):
    return dijkstra(*graph_parse(inp), directed=False)


def dijkstra_brute(inp):
    n, edges = graph_parse(inp)
    inf = float("inf")
    dist = [inf] * (n + 1)
    dist[1] = 0
    for _ in range(n):
        for u, v, w in edges:
            dist[v] = min(dist[v], dist[u] + w)
            dist[u] = min(dist[u], dist[v] + w)
    return f"{dist[n] if dist[n] < inf else -1}\n"


def dijkstra_wrong(inp):
    return dijkstra(*graph_parse(inp), directed=True)


def knap_parse(inp):
    t = list(map(int, inp.split()))
    n, cap = t[0], t[1]
    return cap, [(t[2 + 2 * i], t[3 + 2 * i]) for i in range(n)]


def knap_ref(inp):
    cap, items = knap_parse(inp)
    best = [0] * (cap + 1)
    for w, v in items:
        for c in range(cap, w - 1, -1):
            best[c] = max(best[c], best[c - w] + v)
    return f"{best[cap]}\n"


def knap_brute(inp):
    cap, items = knap_parse(inp)
    best = 0
    for k in range(len(items) + 1):
        for combo in combinations(items, k):
            if sum(w for w, _ in combo) <= cap:
                best = max(best, sum(v for _, v in combo))
    return f"{best}\n"


def knap_wrong(inp):
    cap, items = knap_parse(inp)
    total = 0
    for w, v in sorted(items, key=lambda it: -it[1] / it[0]):
        if w <= cap:
            cap -= w
            total += v
    return f"{total}\n"


def rmq_parse(inp):
    t = list(map(int, inp.split()))
    n, q = t[0], t[1]
    a = t[2:2 + n]
    ops = [tuple(t[2 + n + 3 * i:5 + n + 3 * i]) for i in range(q)]
    return a, ops


def rmq_brute(inp, apply_updates=True):
    a, ops = rmq_parse(inp)
    a = list(a)
    out = []
    for kind, x, y in ops:
        if kind == 1:
            if apply_updates:
                a[x - 1] = y
        else:
            out.append(f"{min(a[x - 1:y])}\n")
    return "".join(out)


def rmq_wrong(inp):
    return rmq_brute(inp, apply_updates=False)


def inv_parse(inp):
    t = list(map(int, inp.split()))
    return t[1:1 + t[0]]


def inv_ref(inp):
    a = inv_parse(inp)
    ranks = {v: i + 1 for i, v in enumerate(sorted(set(a)))}
    tree = [0] * (len(ranks) + 1)
    count = 0
    for seen, x in enumerate(a):
        r = ranks[x]
        # elements seen so far that are <= x
        s, i = 0, r
        while i > 0:
            s += tree[i]
            i -= i & -i
        count += seen - s
        i = r
        while i < len(tree):
            tree[i] += 1
            i += i & -i
    return f"{count}\n"


def inv_brute(inp):
    a = inv_parse(inp)
    return f"{sum(a[i] > a[j] for i in range(len(a)) for j in range(i + 1, len(a)))}\n"


def inv_wrong(inp):
    a = inv_parse(inp)
    return f"{sum(a[i] >= a[j] for i in range(len(a)) for j in range(i + 1, len(a)))}\n"


def lca_parse(inp):
    t = list(map(int, inp.split()))
    n = t[0]
    parent = [0, 0] + t[1:n]
    q = t[n]
    qs = [(t[n + 1 + 2 * i], t[n + 2 + 2 * i]) for i in range(q)]
    return parent, qs


def ancestors(parent, u):
    chain = [u]
    while u != 1:
        u = parent[u]
        chain.append(u)
    return chain


def lca_brute(inp):
    parent, qs = lca_parse(inp)
    out = []
    for u, v in qs:
        au = set(ancestors(parent, u))
        out.append(f"{next(x for x in ancestors(parent, v) if x in au)}\n")
    return "".join(out)


def lca_wrong(inp):
    parent, qs = lca_parse(inp)
    out = []
    for u, v in qs:
        if u in ancestors(parent, v):
            out.append(f"{u}\n")
        elif v in ancestors(parent, u):
            out.append(f"{v}\n")
        else:
            out.append("1\n")
    return "".join(out)


# --- generators ---------------------------------------------------------------

def gen_add(rng, i):
    if i == 4:
        return f"{rng.randint(6 * 10**8, 10**9)} {rng.randint(6 * 10**8, 10**9)}\n"
    hi = 10**6 if i < 4 else 10**9
    return f"{rng.randint(-hi, hi)} {rng.randint(-hi, hi)}\n"


def gen_max(rng, i):
    n = rng.randint(1, 50 if i < 3 else 2000)
    lo, hi = (-10**9, -1) if i == 2 else (-10**9, 10**9)
    if i < 2:
        lo = 1
    return f"{n}\n{' '.join(str(rng.randint(lo, hi)) for _ in range(n))}\n"


def gen_vowels(rng, i):
    letters = "abcdefghijklmnopqrstvwxyz" if i < 3 else "abcdefghijklmnopqrstuvwxyz"
    n = rng.randint(5, 80)
    words = []
    while sum(map(len, words)) < n:
        words.append("".join(rng.choice(letters) for _ in range(rng.randint(1, 8))))
    return " ".join(words) + "\n"


def gen_prefix(rng, i):
    n = rng.randint(3, 30 if i < 3 else 2000)
    q = rng.randint(1, 30 if i < 3 else 2000)
    a = [rng.randint(-1000, 1000) for _ in range(n)]
    qs = []
    for _ in range(q):
        if i < 3:
            l = rng.randint(1, n - 1)
            r = rng.randint(l, n - 1)
        else:
            l = rng.randint(1, n)
            r = rng.randint(l, n)
        qs.append(f"{l} {r}")
    return f"{n} {q}\n{' '.join(map(str, a))}\n" + "\n".join(qs) + "\n"


def gen_count(rng, i):
    n = rng.randint(1, 40 if i < 2 else 2000)
    pool = range(0, 10**6, 2)
    a = sorted(rng.sample(pool, n))
    q = rng.randint(1, 40 if i < 2 else 2000)
    if i < 2:
        qs = [rng.randrange(1, 10**6, 2) for _ in range(q)]
    else:
        qs = [rng.choice(a) if rng.random() < 0.5 else rng.randint(0, 10**6) for _ in range(q)]
    return f"{n} {q}\n{' '.join(map(str, a))}\n{' '.join(map(str, qs))}\n"


def gen_grid(rng, i):
    r, c = rng.randint(2, 8 if i < 3 else 40), rng.randint(2, 8 if i < 3 else 40)
    wall = 0.2 if i < 3 else 0.45
    while True:
        g = [["#" if rng.random() < wall else "." for _ in range(c)] for _ in range(r)]
        cells = [(x, y) for x in range(r) for y in range(c)]
        s, t = rng.sample(cells, 2)
        g[s[0]][s[1]] = "S"
        g[t[0]][t[1]] = "T"
        text = f"{r} {c}\n" + "\n".join("".join(row) for row in g) + "\n"
        reachable = grid_ref(text) != "-1\n"
        if i < 3 and not reachable:
            continue
        if i == 3 and reachable:
            continue
        return text


def gen_lis(rng, i):
    n = rng.randint(5, 60 if i < 10 else 300)
    if i < 4:
        a = rng.sample(range(1, 10**6), n)
    else:
        a = [rng.randint(1, 20) for _ in range(n)]
    return f"{n}\n{' '.join(map(str, a))}\n"


def gen_graph(rng, i):
    n = rng.randint(2, 10 if i < 3 else 300)
    m = rng.randint(n - 1, 3 * n)
    edges = []
    for v in range(2, n + 1):
        if i < 3:
            u = rng.randint(1, v - 1)
            edges.append((u, v, rng.randint(1, 100)))
        else:
            u = rng.randint(1, n)
            if u != v:
                edges.append((v, u, rng.randint(1, 100)))
    while len(edges) < m:
        u, v = rng.randint(1, n), rng.randint(1, n)
        if u != v:
            a, b = (min(u, v), max(u, v)) if i < 3 else (max(u, v), min(u, v))
            edges.append((a, b, rng.randint(1, 100)))
    return f"{n} {len(edges)}\n" + "\n".join(f"{u} {v} {w}" for u, v, w in edges) + "\n"


def gen_knap(rng, i):
    n = rng.randint(1, 12)
    if i < 2:
        items = [(rng.randint(1, 10), rng.randint(1, 100)) for _ in range(n)]
        cap = sum(w for w, _ in items) + rng.randint(0, 5)
    elif i == 2:
        # ratio greedy grabs the light item and then cannot fit both heavy ones
        items = [(1, 2), (10, 15), (10, 15)]
        cap = 20
    else:
        items = [(rng.randint(1, 30), rng.randint(1, 100)) for _ in range(n)]
        cap = rng.randint(1, 60)
    return f"{len(items)} {cap}\n" + "\n".join(f"{w} {v}" for w, v in items) + "\n"


def gen_rmq(rng, i):
    n = rng.randint(2, 20 if i < 2 else 1000)
    q = rng.randint(1, 20 if i < 2 else 1000)
    a = [rng.randint(-10**6, 10**6) for _ in range(n)]
    ops = []
    for _ in range(q):
        if i >= 2 and rng.random() < 0.4:
            ops.append(f"1 {rng.randint(1, n)} {rng.randint(-10**7, 10**7)}")
        else:
            l = rng.randint(1, n)
            ops.append(f"2 {l} {rng.randint(l, n)}")
    return f"{n} {q}\n{' '.join(map(str, a))}\n" + "\n".join(ops) + "\n"


def gen_inv(rng, i):
    n = rng.randint(1, 40 if i < 3 else 300)
    a = rng.sample(range(1, 10**6), n) if i < 3 else [rng.randint(1, 50) for _ in range(n)]
    return f"{n}\n{' '.join(map(str, a))}\n"


def gen_lca(rng, i):
    n = rng.randint(2, 15 if i < 2 else 500)
    if i < 2:
        parents = [v - 1 for v in range(2, n + 1)]
    else:
        parents = [rng.randint(max(1, v - 5), v - 1) for v in range(2, n + 1)]
    q = rng.randint(1, 30 if i < 2 else 500)
    qs = [f"{rng.randint(1, n)} {rng.randint(1, n)}" for _ in range(q)]
    return f"{n}\n{' '.join(map(str, parents))}\n{q}\n" + "\n".join(qs) + "\n"


PROBLEMS = [
    # id, level, title, statement, generator, ref, brute, wrong, hidden count, samples
    ("b1", "Bronze", "Sum of Two",
     "Read two integers a and b (|a|, |b| <= 10^9) and print their sum.\n\n"
     "Be careful: the sum may not fit in a 32-bit integer.",
     gen_add, add_ref, None, add_wrong, 6, ["1 2\n"]),
    ("b2", "Bronze", "Tallest Cow",
     "Farmer John lines up n cows (1 <= n <= 2000) and measures each cow's height "
     "relative to the barn floor, which may be negative. Print the largest value in "
     "the array. A simple complete search over the list is enough.",
     gen_max, max_ref, None, max_wrong, 6, ["3\n4 9 2\n"]),
    ("b3", "Bronze", "Vowel Count",
     "Bessie writes a single line of lowercase words separated by spaces. Count the "
     "vowels (a, e, i, o, u) in the string and print the count.",
     gen_vowels, vowels_ref, None, vowels_wrong, 6, ["moo cow\n"]),
    ("s1", "Silver", "Fence Segments",
     "Given an array of n integers and q queries (l, r), print the sum of the "
     "elements from position l to position r inclusive (1-indexed). Use prefix sums "
     "so each range query takes constant time.",
     gen_prefix, prefix_ref, prefix_brute, prefix_wrong, 6, ["3 2\n1 2 3\n1 2\n2 3\n"]),
    ("s2", "Silver", "Hay Bales Below",
     "The positions of n hay bales are given in sorted order. For each of q queries x, "
     "print how many bales are at positions less than or equal to x. Binary search on "
     "the sorted array answers each query quickly.",
     gen_count, count_ref, count_brute, count_wrong, 6, ["3 2\n2 4 6\n4 5\n"]),
    ("s3", "Silver", "Pasture Maze",
     "The pasture is an R x C grid of '.' (grass), '#' (rock), one 'S' and one 'T'. "
     "Moving up, down, left or right costs one step. Print the minimum number of steps "
     "from S to T, or -1 if T cannot be reached. Breadth-first search on the grid graph "
     "finds the shortest path.",
     gen_grid, grid_ref, None, grid_wrong, 6, ["2 3\nS.#\n..T\n"]),
    ("g1", "Gold", "Rising Heights",
     "Given a sequence of n integers, print the length of its longest strictly "
     "increasing subsequence. Equal values never extend a subsequence. Dynamic "
     "programming with binary search runs in O(n log n).",
     gen_lis, lis_ref, lis_brute, lis_wrong, 18, ["5\n3 1 2 2 4\n"]),
    ("g2", "Gold", "Milk Routes",
     "The farm has n fields and m undirected roads, each with a positive length. Print "
     "the length of the shortest path from field 1 to field n in the weighted graph, "
     "or -1 if there is none. Dijkstra's algorithm with a priority queue is fast enough.",
     gen_graph, dijkstra_ref, dijkstra_brute, dijkstra_wrong, 6, ["3 2\n1 2 5\n3 2 1\n"]),
    ("g3", "Gold", "Cart Packing",
     "Each of n items has a weight and a value. Choose items with total weight at most "
     "W to maximize the total value; each item is used at most once. This is the 0/1 "
     "knapsack problem and dynamic programming over capacities solves it.",
     gen_knap, knap_ref, knap_brute, knap_wrong, 6, ["3 5\n2 3\n3 4\n4 5\n"]),
    ("p1", "Platinum", "Changing Fences",
     "Maintain an array of n integers under q operations: '1 i x' sets a[i] = x and "
     "'2 l r' asks for the minimum of a[l..r]. A segment tree supports both operations "
     "in logarithmic time.",
     gen_rmq, rmq_brute, None, rmq_wrong, 6, ["3 3\n5 2 7\n2 1 3\n1 2 9\n2 1 3\n"]),
    ("p2", "Platinum", "Out of Order",
     "Count the pairs i < j with a[i] > a[j] (inversions) in an array of n integers. "
     "A Fenwick tree (binary indexed tree) over compressed values counts them in "
     "O(n log n).",
     gen_inv, inv_ref, inv_brute, inv_wrong, 6, ["4\n3 1 2 2\n"]),
    ("p3", "Platinum", "Family Tree",
     "A rooted tree has n nodes with root 1; node i > 1 has parent p_i < i. Answer q "
     "queries asking for the lowest common ancestor of u and v. Binary lifting on the "
     "tree answers each query in O(log n).",
     gen_lca, lca_brute, None, lca_wrong, 6, ["4\n1 1 2\n2\n4 3\n4 2\n"]),
]


def first_failure(cases, wrong):
    for i, (inp, out) in enumerate(cases):
        if wrong(inp) != out:
            return i
    return len(cases)


def main():
    rng = random.Random(SEED)
    expectations = {}
    for pid, level, title, statement, gen, ref, brute, wrong, count, samples in PROBLEMS:
        pdir = ROOT / "problems" / pid
        for sub in ("samples", "tests"):
            (pdir / sub).mkdir(parents=True, exist_ok=True)
            for old in (pdir / sub).iterdir():
                old.unlink()
        (pdir / "statement.md").write_text(f"# {title}\n\n{statement}\n")
        (pdir / "meta").write_text(f'level = "{level}"\ntime_limit_ms = 1000\nmemory_limit_mib = 128\n')
        for k, inp in enumerate(samples, 1):
            (pdir / "samples" / f"{k:02}.in").write_text(inp)
            (pdir / "samples" / f"{k:02}.out").write_text(ref(inp))
        cases = []
        for k in range(count):
            inp = gen(rng, k)
            out = ref(inp)
            if brute is not None:
                assert brute(inp) == out, (pid, k)
            cases.append((inp, out))
            (pdir / "tests" / f"{k + 1:02}.in").write_text(inp)
            (pdir / "tests" / f"{k + 1:02}.out").write_text(out)
        passed = first_failure(cases, wrong)
        assert passed < count, f"wrong variant of {pid} passes everything"
        expectations[pid] = {"wrong_passed": passed, "total": count}
    (ROOT / "solutions").mkdir(exist_ok=True)
    (ROOT / "solutions" / "expectations.json").write_text(json.dumps(expectations, indent=2, sort_keys=True) + "\n")
    print(json.dumps(expectations, sort_keys=True))


if __name__ == "__main__":
    main()
