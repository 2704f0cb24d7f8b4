"""
Verify the spanning tree counts used by the tests by brute-force enumeration.

This script:
1. Loads each unit-length graph fixture (k4.json, banana3.json)
2. INDEPENDENTLY enumerates every set of |V| - 1 edges and keeps those that
   form a spanning tree (union-find, no library code)
3. Compares the count with the value the tests expect

The count is also the order of the discrete Jacobian and det of the period
matrix, so this pins down three expected values at once.
"""

import json
from itertools import combinations
from pathlib import Path

EXPECTED = {
    'k4.json': 16,
    'banana3.json': 3,
}


def is_spanning_tree(vertices, edges):
    """Union-find over the chosen edges; a tree joins |V| - 1 distinct pairs."""
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for src, dst in edges:
        a, b = find(src), find(dst)
        if a == b:
            return False
        parent[a] = b
    return True


def count_spanning_trees(graph):
    vertices = graph['vertices']
    edges = [(e['src'], e['dst']) for e in graph['edges']]
    return sum(
        1 for chosen in combinations(edges, len(vertices) - 1)
        if is_spanning_tree(vertices, chosen)
    )


def main():
    """Main verification function."""
    fixtures_dir = Path(__file__).parent.parent

    print("=" * 80)
    print("Spanning tree counts by enumeration")
    print("=" * 80)

    errors = []
    for name, expected in EXPECTED.items():
        with open(fixtures_dir / name, encoding='utf-8') as handle:
            graph = json.load(handle)
        count = count_spanning_trees(graph)
        status = "OK" if count == expected else "MISMATCH"
        print(f"{name}: enumerated {count}, expected {expected}  {status}")
        if count != expected:
            errors.append(name)

    print("=" * 80)
    if errors:
        print(f"FAILED: {len(errors)} fixture(s) disagree")
        return 1
    print("PASSED: All verifications successful!")
    return 0


if __name__ == '__main__':
    exit(main())
