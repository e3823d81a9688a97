import sys

data = list(map(int, sys.stdin.read().split()))
a = data[1:1 + data[0]]
print(sum(a[i] >= a[j] for i in range(len(a)) for j in range(i + 1, len(a))))
