#!/usr/bin/env python3
"""Writes the synthetic desk hint corpora as line-delimited JSON."""

import json
from pathlib import Path

HERE = Path(__file__).resolve().parent

STRATEGY = [
    {
        "doc_id": "strategy-guide",
        "kind": "strategy",
        "title": "Contest Strategy",
        "body": (
            "Read every problem before coding. Solve the easiest problems first and bank the points.\n\n"
            "Debugging checklist: check integer overflow, off-by-one errors in loops and ranges, "
            "uninitialized variables, the case n = 1, negative values, and whether the output format "
            "matches the samples exactly.\n\n"
            "Time management: if a problem resists for too long, move on and come back later. "
            "Test on your own edge cases before submitting, since wrong submissions cost penalties."
        ),
        "tags": {"knowledge": []},
    }
]

TEXTBOOK = [
    ("tb-complete-search", "Complete Search",
     "Complete search tries every candidate answer. When the input is small, enumerating all "
     "subsets or all pairs is simple and correct. Estimate the number of operations first: about "
     "10^8 simple operations fit in a second."),
    ("tb-prefix-sums", "Prefix Sums",
     "Prefix sums answer range sum queries in constant time. Let pre[0] = 0 and pre[i] = pre[i-1] + a[i]. "
     "The sum of a[l..r] is pre[r] - pre[l-1]. Building the prefix array takes linear time. Prefix sums "
     "extend to two dimensions and to difference arrays for range updates."),
    ("tb-binary-search", "Binary Search",
     "Binary search finds a position in a sorted array in logarithmic time. upper_bound returns the first "
     "element greater than x, so its index counts the elements less than or equal to x; lower_bound counts "
     "the elements strictly less than x. Binary search on the answer applies to any monotone predicate."),
    ("tb-bfs", "Breadth-First Search",
     "Breadth-first search explores a graph in layers using a queue and finds shortest paths when every "
     "edge has the same length. On a grid, neighbours are the four adjacent cells. Mark cells visited when "
     "they are pushed, and report -1 when the target is never reached."),
    ("tb-dfs", "Depth-First Search",
     "Depth-first search visits a graph recursively or with an explicit stack. It finds connected "
     "components, detects cycles, and computes subtree sizes on a tree. Deep recursion may overflow the "
     "stack; prefer an iterative version on long paths."),
    ("tb-dijkstra", "Dijkstra's Algorithm",
     "Dijkstra's algorithm computes shortest path distances from one source in a weighted graph with "
     "non-negative edge lengths. Keep a priority queue of (distance, vertex) pairs and skip stale entries. "
     "With a binary heap the running time is O((n + m) log n). For undirected roads, add each edge in both "
     "directions."),
    ("tb-dp", "Dynamic Programming",
     "Dynamic programming breaks a problem into overlapping subproblems and stores their answers. Define a "
     "state, a transition and a base case, then fill the table in an order where every dependency is ready."),
    ("tb-knapsack", "Knapsack",
     "The 0/1 knapsack problem picks a subset of items with total weight at most W and maximum value. "
     "best[c] is the best value with capacity c; iterate capacities downward so each item is used once. "
     "Greedy by value per weight is not optimal for 0/1 knapsack."),
    ("tb-lis", "Longest Increasing Subsequence",
     "The longest increasing subsequence can be found in O(n log n) with dynamic programming and binary "
     "search. Keep tails[k], the smallest tail of an increasing subsequence of length k + 1. For a strictly "
     "increasing subsequence use lower_bound; upper_bound computes the non-decreasing variant."),
    ("tb-segment-tree", "Segment Tree",
     "A segment tree stores aggregates such as the minimum or sum of array segments in a binary tree. "
     "Point update and range query both take O(log n). An iterative bottom-up segment tree uses an array "
     "of size 2n. Lazy propagation adds range updates."),
    ("tb-fenwick", "Fenwick Tree",
     "A Fenwick tree, also called a binary indexed tree, supports prefix sums with point updates in "
     "O(log n) using the lowest set bit. Counting inversions: compress values, scan the array, and for "
     "each element count earlier elements greater than it."),
    ("tb-lca", "Lowest Common Ancestor",
     "The lowest common ancestor of two tree nodes is their deepest shared ancestor. Binary lifting stores "
     "up[k][v], the 2^k-th ancestor of v. Lift the deeper node to the same depth, then lift both while their "
     "ancestors differ. Preprocessing is O(n log n) and each query O(log n)."),
    ("tb-sorting", "Sorting",
     "Sorting puts elements in order in O(n log n). Many problems become easy after sorting: duplicates "
     "become adjacent, and greedy choices can be made left to right."),
    ("tb-greedy", "Greedy Algorithms",
     "A greedy algorithm makes the locally best choice at each step. It needs an exchange argument to be "
     "correct; many natural greedy rules fail on small counterexamples."),
    ("tb-union-find", "Union-Find",
     "A disjoint set union structure merges sets and answers whether two elements share a set in near "
     "constant amortized time using path compression and union by size."),
]

LIBRARY = [
    # live-contest copies: must never be returned while contest "desk" is running
    ("desk-p1", "Changing Fences", "Platinum", ["segment tree"], "desk",
     "Maintain an array of n integers under q operations: '1 i x' sets a[i] = x and '2 l r' asks for the "
     "minimum of a[l..r]. A segment tree supports both operations in logarithmic time.",
     "Build a minimum segment tree; update a leaf and recompute its ancestors, query by walking up from both ends."),
    ("desk-g1", "Rising Heights", "Gold", ["longest increasing subsequence", "binary search"], "desk",
     "Given a sequence of n integers, print the length of its longest strictly increasing subsequence.",
     "Patience sorting with lower_bound on the tails array."),
    # old-contest twins
    ("old-fence-painting", "Fence Minimums", "Platinum", ["segment tree"], "usaco-2019-open",
     "Farmer John maintains fence heights. Operations either set the height at position i to x or ask for "
     "the minimum height between positions l and r. Answer every query with a segment tree.",
     "Use an iterative segment tree storing minimums. Updates change one leaf and walk to the root; range "
     "minimum queries combine O(log n) nodes."),
    ("old-cow-heights", "Cow Height Climb", "Gold", ["longest increasing subsequence", "dynamic programming"],
     "usaco-2018-dec",
     "Cows stand in a row with given heights. Find the longest strictly increasing subsequence of heights.",
     "Keep tails[k] and place each height with lower_bound; the answer is the number of tails."),
    ("old-pair-search", "Lucky Pairs", "Bronze", ["complete search"], "usaco-2017-jan",
     "Given n <= 100 numbers, count the pairs whose sum is divisible by seven. Try every pair.",
     "Two nested loops over all pairs, O(n^2), is fast enough for n <= 100."),
    ("old-max-milk", "Best Milker", "Bronze", ["simulation"], "usaco-2016-dec",
     "Given the milk output of each cow, print the largest output and the cow that produced it.",
     "Scan once, keeping the running maximum. Initialize with the first value, not zero."),
    ("old-range-hay", "Hay Ranges", "Silver", ["prefix sums"], "usaco-2016-dec",
     "Hay bales have weights. Answer many queries for the total weight between positions l and r.",
     "Precompute prefix sums and answer each query with one subtraction."),
    ("old-sorted-count", "Counting Haybales", "Silver", ["binary search", "sorting"], "usaco-2016-dec",
     "Given bale positions and queries [a, b], count the bales inside each interval.",
     "Sort the positions, then upper_bound(b) - lower_bound(a) answers each query."),
    ("old-maze", "Barn Maze", "Silver", ["bfs", "graph"], "usaco-2018-jan",
     "A barn is a grid with walls. Find the fewest moves from the entrance to the exit, or report -1.",
     "Breadth-first search from the entrance over open cells."),
    ("old-roads", "Milk Pumping", "Gold", ["dijkstra", "shortest path", "graph"], "usaco-2019-dec",
     "Fields are joined by weighted two-way pipes. Find the cheapest route from field 1 to field n.",
     "Run Dijkstra's algorithm with a binary heap over an adjacency list holding both edge directions."),
    ("old-cart", "Talent Show", "Gold", ["knapsack", "dynamic programming"], "usaco-2018-open",
     "Choose cows with total weight at most W maximizing total talent; each cow at most once.",
     "0/1 knapsack over capacities, iterating capacity downward."),
    ("old-inversions", "Out of Sorts", "Platinum", ["fenwick tree", "sorting"], "usaco-2018-open",
     "Count how many pairs of cows stand out of order in a line.",
     "Compress heights and sweep with a Fenwick tree counting earlier larger elements."),
    ("old-family", "Cow Family Tree", "Platinum", ["lowest common ancestor", "binary lifting"],
     "usaco-2018-open",
     "Given parent links in a family tree, answer queries for the nearest common ancestor of two cows.",
     "Binary lifting: equalize depths, then lift both nodes while ancestors differ."),
    ("old-scan-rows", "Row Scanner", "Silver", ["complete search"], "usaco-2019-jan",
     "Try all row and column choices on a small grid to find the best score.",
     "Enumerate every combination; the grid is tiny."),
]

LEXICON = """\
complete search
simulation
prefix sums
binary search
sorting
greedy
two pointers
bfs
breadth-first search
dfs
depth-first search
graph
weighted graph
grid graph
shortest path
dijkstra
tree
dynamic programming
knapsack
longest increasing subsequence
segment tree
fenwick tree
binary indexed tree
lowest common ancestor
binary lifting
union-find
inversions
"""


def main():
    with open(HERE / "strategy.jsonl", "w") as f:
        for doc in STRATEGY:
            f.write(json.dumps(doc) + "\n")
    with open(HERE / "textbook.jsonl", "w") as f:
        for doc_id, title, body in TEXTBOOK:
            doc = {"doc_id": doc_id, "kind": "textbook_section", "title": title, "body": body,
                   "tags": {"knowledge": [title.lower()]}}
            f.write(json.dumps(doc) + "\n")
    with open(HERE / "library.jsonl", "w") as f:
        for doc_id, title, level, knowledge, contest, body, solution in LIBRARY:
            doc = {"doc_id": doc_id, "kind": "library_problem", "title": title, "body": body,
                   "tags": {"difficulty": level, "knowledge": knowledge}, "contest_id": contest,
                   "solution": solution}
            f.write(json.dumps(doc) + "\n")
    (HERE / "lexicon.txt").write_text(LEXICON)


if __name__ == "__main__":
    main()
