import sys

data = list(map(int, sys.stdin.read().split()))
n, q = data[0], data[1]
a = data[2:2 + n]
out = []
pos = 2 + n
for _ in range(q):
    kind, x, y = data[pos:pos + 3]
    pos += 3
    if kind == 2:
        out.append(min(a[x - 1:y]))
print("\n".join(map(str, out)))
