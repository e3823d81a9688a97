import sys

data = list(map(int, sys.stdin.read().split()))
n, cap = data[0], data[1]
items = [(data[2 + 2 * i], data[3 + 2 * i]) for i in range(n)]
total = 0
for w, v in sorted(items, key=lambda it: -it[1] / it[0]):
    if w <= cap:
        cap -= w
        total += v
print(total)
