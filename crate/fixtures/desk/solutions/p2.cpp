#include <algorithm>
#include <cstdio>
#include <vector>

int main() {
    int n;
    if (std::scanf("%d", &n) != 1) return 0;
    std::vector<int> a(n);
    for (auto& x : a) std::scanf("%d", &x);
    std::vector<int> sorted = a;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> fenwick(sorted.size() + 1, 0);
    long long inversions = 0;
    for (int seen = 0; seen < n; ++seen) {
        int r = std::lower_bound(sorted.begin(), sorted.end(), a[seen]) - sorted.begin() + 1;
        long long at_most = 0;
        for (int i = r; i > 0; i -= i & -i) at_most += fenwick[i];
        inversions += seen - at_most;
        for (int i = r; i < (int)fenwick.size(); i += i & -i) fenwick[i]++;
    }
    std::printf("%lld\n", inversions);
}
