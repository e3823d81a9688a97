a, b = map(int, input().split())
s = a + b
if s > 10**9:
    s %= 10**9
print(s)
