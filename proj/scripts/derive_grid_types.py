#!/usr/bin/env python3
"""Regenerates src/core/grid_types.inc.

A vertex type is (degree, number of parents, degree of the left sibling).
Around a ring vertex v the neighbours in counter-clockwise order are

    v-1, c_0, ..., c_R, v+1, p_R, [p_L]

so once the degree of v-1 is known, the degree rules of the tiling fix the
degree of every child. The leftmost child has two parents (v-1 and v); all
other non-rightmost children have one. The rightmost child is shared with
v+1 and is typed by v+1's rule.

Degree rules:
  g7   every vertex has degree 7.
  g67  a degree-7 vertex has only degree-6 neighbours; the neighbours of a
       degree-6 vertex alternate between degree 6 and 7.
"""

import sys
from pathlib import Path

import numpy as np


def next_degree(grid, center, prev):
    """Degree of the neighbour following one of degree `prev` around a vertex of degree `center`."""
    if grid == "g7":
        return 7
    if center == 7:
        return 6
    return 13 - prev


def child_types(grid, t):
    deg, parents, left = t
    nchildren = deg - 2 - parents
    seq = [left]
    for _ in range(deg - 1):
        seq.append(next_degree(grid, deg, seq[-1]))
    # the cyclic sequence must close up
    assert next_degree(grid, deg, seq[-1]) == seq[0], (grid, t)
    child_deg = seq[1 : 1 + nchildren]
    out = []
    for i in range(nchildren - 1):
        if i == 0:
            # around c_0 the neighbour after v-1 is c_0's left sibling
            out.append((child_deg[0], 2, next_degree(grid, child_deg[0], left)))
        else:
            out.append((child_deg[i], 1, child_deg[i - 1]))
    return out


def derive(grid):
    root_deg = 7
    ring1 = 6 if grid == "g67" else 7
    first = (ring1, 1, ring1)
    root_children = [first] * root_deg
    order = [first]
    table = {}
    i = 0
    while i < len(order):
        t = order[i]
        table[t] = child_types(grid, t)
        for c in table[t]:
            if c not in order:
                order.append(c)
        i += 1
    index = {t: k + 1 for k, t in enumerate(order)}
    return root_deg, root_children, order, table, index


def growth(order, table, index):
    n = len(order)
    m = np.zeros((n, n))
    for t in order:
        for c in table[t]:
            m[index[c] - 1, index[t] - 1] += 1
    return max(abs(np.linalg.eigvals(m)))


def emit(grid, out):
    root_deg, root_children, order, table, index = derive(grid)
    name = grid.upper()
    out.append(f"// {name}: {len(order) + 1} types including the root, growth rate {growth(order, table, index):.9f}")
    out.append(f"inline const std::vector<VertexTypeInfo> k{name}Types = {{")
    rc = ", ".join(str(index[c]) for c in root_children)
    out.append(f'    {{"root", {root_deg}, 0, {{{rc}}}}},')
    for t in order:
        deg, parents, left = t
        cs = ", ".join(str(index[c]) for c in table[t])
        out.append(f'    {{"d{deg}p{parents}l{left}", {deg}, {parents}, {{{cs}}}}},')
    out.append("};")
    out.append("")


def main():
    target = Path(__file__).resolve().parent.parent / "src" / "core" / "grid_types.inc"
    out = ["// Generated by scripts/derive_grid_types.py; do not edit.", "// clang-format off", ""]
    emit("g7", out)
    emit("g67", out)
    text = "\n".join(out)
    if len(sys.argv) > 1 and sys.argv[1] == "--stdout":
        print(text)
    else:
        target.write_text(text)
        print(f"wrote {target}")


if __name__ == "__main__":
    main()
