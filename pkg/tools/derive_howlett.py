"""Derivation helper: Levi classes of exceptional groups and their
normalizer quotients, computed from scratch.

Used during development to build (and in tests to re-verify) the embedded
dataset in mgsc.levis.  For G2/F4/E6/E7 it prints the full class-stat
multiset of every quotient N_W(W_J)/W_J; for E8 only the quotient orders
(full enumeration of W(E8) is out of budget by design).
"""

import sys
from collections import defaultdict
from itertools import combinations
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import numpy as np

from mgsc.rootsys import CartanType, build_root_system, classify_subset
from mgsc.weylgrp import (
    group_from_type,
    normalizer_quotient_classes,
    normalizer_quotient_order,
)


def subsystem_orbit(group, sub_indices):
    """All W-images of a root-index set, as frozensets."""
    gens = group.gen_arrays()
    start = frozenset(int(i) for i in sub_indices)
    seen = {start}
    frontier = [np.array(sorted(start), dtype=np.int64)]
    while frontier:
        new = []
        for arr in frontier:
            for p in gens:
                img = frozenset(int(x) for x in p[arr])
                if img not in seen:
                    seen.add(img)
                    new.append(np.array(sorted(img), dtype=np.int64))
        frontier = new
    return seen


def levi_classes_of(ambient: str):
    """Subsets of simple roots grouped into W-conjugacy classes.

    Returns a list of (cartan_type, [subsets], canonical_subset).
    """
    t = CartanType.parse(ambient)
    rs = build_root_system(t)
    group = group_from_type(t)
    by_type = defaultdict(list)
    for r in range(rs.rank + 1):
        for J in combinations(range(rs.rank), r):
            by_type[str(classify_subset(rs, J))].append(J)

    out = []
    for type_name in sorted(by_type):
        subsets = by_type[type_name]
        remaining = list(subsets)
        while remaining:
            J0 = remaining[0]
            orbit = subsystem_orbit(group, sorted(rs.subsystem_indices(J0)))
            cls = [J for J in remaining if rs.subsystem_indices(J) in orbit]
            remaining = [J for J in remaining if rs.subsystem_indices(J) not in orbit]
            out.append((type_name, cls, min(cls)))
    return out


def main():
    ambient = sys.argv[1] if len(sys.argv) > 1 else "F4"
    t = CartanType.parse(ambient)
    rs = build_root_system(t)
    group = group_from_type(t)
    full_stats = ambient in ("G2", "F4", "E6", "E7")

    classes = levi_classes_of(ambient)
    print(f"{ambient}: {len(classes)} Levi classes")
    for type_name, subsets, J in sorted(classes, key=lambda c: (len(c[2]), c[0])):
        lens = sorted(
            {
                min(
                    rs.root_length_sq(rs.simple_root_index(j))
                    for j in comp_subset
                )
                for comp_subset in [J]
                if J
            }
        )
        lengths = [rs.root_length_sq(rs.simple_root_index(j)) for j in J]
        if full_stats and len(J) < rs.rank:
            table = normalizer_quotient_classes(group, J)
            print(
                f"  {type_name:12s} J={J} lens={lengths} "
                f"#subsets={len(subsets)} q_order={table.group_order} "
                f"classes={table.n_classes()}"
            )
            print(f"      stats={table.stats()}")
        else:
            q = (
                group.order() // group.order()
                if len(J) == rs.rank
                else normalizer_quotient_order(group, J)
            )
            if len(J) == rs.rank:
                q = 1
            print(
                f"  {type_name:12s} J={J} lens={lengths} "
                f"#subsets={len(subsets)} q_order={q}"
            )


if __name__ == "__main__":
    main()
