import sys

data = list(map(int, sys.stdin.read().split()))
n, q = data[0], data[1]
pre = [0]
for x in data[2:2 + n]:
    pre.append(pre[-1] + x)
out = []
for i in range(q):
    l, r = data[2 + n + 2 * i], data[3 + n + 2 * i]
    out.append(pre[r] - pre[l - 1])
print("\n".join(map(str, out)))
