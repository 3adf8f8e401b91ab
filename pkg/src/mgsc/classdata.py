"""Symbolic class statistics for normalizer quotients and component groups.

A GroupSpec is a small tree of named finite groups (symmetric groups, Weyl
groups, products, the doubled wreath H^2 x| S2).  class_stats turns a spec
into the multiset of (element order, class size): classical Weyl types via
partition combinatorics, small exceptional types by brute force, W(E8)
from a curated dataset.
"""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .rootsys import CartanType, weyl_order
from . import weylgrp


@dataclass(frozen=True, order=True)
class GroupSpec:
    kind: str
    n: int = 0
    cartan: CartanType | None = None
    parts: tuple["GroupSpec", ...] = ()
    gens: tuple[tuple[int, ...], ...] = ()

    def __str__(self) -> str:
        return render_spec(self)


def Trivial() -> GroupSpec:
    return GroupSpec("trivial")


def Sym(n: int) -> GroupSpec:
    if n < 1:
        raise ValueError("Sym(n) needs n >= 1")
    return GroupSpec("sym", n=n) if n > 1 else Trivial()


def Cyclic(n: int) -> GroupSpec:
    if n < 1:
        raise ValueError("Cyclic(n) needs n >= 1")
    return GroupSpec("cyclic", n=n) if n > 1 else Trivial()


def Weyl(t: CartanType | str) -> GroupSpec:
    if isinstance(t, str):
        t = CartanType.parse(t)
    if not t.factors:
        return Trivial()
    return GroupSpec("weyl", cartan=t)


def Product(factors) -> GroupSpec:
    flat: list[GroupSpec] = []
    for f in factors:
        if f.kind == "product":
            flat.extend(f.parts)
        elif f.kind != "trivial":
            flat.append(f)
    if not flat:
        return Trivial()
    if len(flat) == 1:
        return flat[0]
    return GroupSpec("product", parts=tuple(sorted(flat)))


def WreathDouble(inner: GroupSpec) -> GroupSpec:
    return GroupSpec("wreath2", parts=(inner,))


def ExplicitPerm(gens) -> GroupSpec:
    return GroupSpec("explicit", gens=tuple(tuple(g) for g in gens))


# ---------------------------------------------------------------------------
# Grammar: "1", "S6", "Z3", "W(F4)", "Wr2(W(G2))", products with " x ".


def render_spec(spec: GroupSpec) -> str:
    if spec.kind == "trivial":
        return "1"
    if spec.kind == "sym":
        return f"S{spec.n}"
    if spec.kind == "cyclic":
        return f"Z{spec.n}"
    if spec.kind == "weyl":
        return f"W({spec.cartan})"
    if spec.kind == "wreath2":
        return f"Wr2({render_spec(spec.parts[0])})"
    if spec.kind == "product":
        return " x ".join(render_spec(p) for p in spec.parts)
    if spec.kind == "explicit":
        return f"ExplicitPerm<{len(spec.gens)} gens>"
    raise ValueError(spec.kind)


def parse_spec(text: str) -> GroupSpec:
    parts = []
    depth = 0
    token = ""
    for chunk in text.split(" x "):
        token = token + (" x " if token else "") + chunk
        depth = token.count("(") - token.count(")")
        if depth == 0:
            parts.append(token.strip())
            token = ""
    if token:
        raise ValueError(f"unbalanced parentheses in {text!r}")
    return Product([_parse_atom(p) for p in parts])


def _parse_atom(text: str) -> GroupSpec:
    if text == "1":
        return Trivial()
    m = re.fullmatch(r"S(\d+)", text)
    if m:
        return Sym(int(m.group(1)))
    m = re.fullmatch(r"Z(\d+)", text)
    if m:
        return Cyclic(int(m.group(1)))
    m = re.fullmatch(r"W\((.+)\)", text)
    if m:
        return Weyl(CartanType.parse(m.group(1)))
    m = re.fullmatch(r"Wr2\((.+)\)", text)
    if m:
        return WreathDouble(_parse_atom(m.group(1)))
    raise ValueError(f"cannot parse group spec {text!r}")


# ---------------------------------------------------------------------------
# Class statistics.


@dataclass(frozen=True)
class ClassStats:
    """Multiset of (element_order, class_size) with the group order."""

    entries: tuple[tuple[int, int], ...]
    group_order: int

    def __post_init__(self):
        if sum(s for _, s in self.entries) != self.group_order:
            raise ValueError("class sizes do not sum to the group order")
        for o, _ in self.entries:
            if self.group_order % o:
                raise ValueError("element order does not divide group order")

    def n_classes(self) -> int:
        return len(self.entries)

    def count_regular(self, l: int) -> int:
        return sum(1 for o, _ in self.entries if o % l)


def spec_order(spec: GroupSpec) -> int:
    if spec.kind == "trivial":
        return 1
    if spec.kind == "sym":
        return math.factorial(spec.n)
    if spec.kind == "cyclic":
        return spec.n
    if spec.kind == "weyl":
        return weyl_order(spec.cartan)
    if spec.kind == "product":
        n = 1
        for p in spec.parts:
            n *= spec_order(p)
        return n
    if spec.kind == "wreath2":
        return 2 * spec_order(spec.parts[0]) ** 2
    if spec.kind == "explicit":
        return weylgrp.subgroup_from_perms(list(spec.gens)).order()
    raise ValueError(spec.kind)


def partitions(n: int, cap: int | None = None):
    """Partitions of n as weakly decreasing tuples."""
    if n == 0:
        yield ()
        return
    cap = n if cap is None else min(cap, n)
    for first in range(cap, 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def _multiplicities(part) -> dict[int, int]:
    m: dict[int, int] = {}
    for p in part:
        m[p] = m.get(p, 0) + 1
    return m


def _sym_centralizer(part) -> int:
    c = 1
    for i, m in _multiplicities(part).items():
        c *= i**m * math.factorial(m)
    return c


def _hyp_centralizer(part) -> int:
    c = 1
    for i, m in _multiplicities(part).items():
        c *= (2 * i) ** m * math.factorial(m)
    return c


def _sym_stats(n: int) -> list[tuple[int, int]]:
    order = math.factorial(n)
    out = []
    for lam in partitions(n):
        out.append((math.lcm(*lam) if lam else 1, order // _sym_centralizer(lam)))
    return out


def _bc_stats(n: int) -> list[tuple[int, int]]:
    """Type B_n = C_n: classes <-> bipartitions (lambda, mu) of n."""
    order = 2**n * math.factorial(n)
    out = []
    for k in range(n + 1):
        for lam in partitions(k):
            for mu in partitions(n - k):
                o = math.lcm(*(list(lam) + [2 * m for m in mu]), 1)
                c = _hyp_centralizer(lam) * _hyp_centralizer(mu)
                out.append((o, order // c))
    return out


def _d_stats(n: int) -> list[tuple[int, int]]:
    """Type D_n: bipartitions with an even number of negative parts.

    Classes (lambda, {}) with all parts of lambda even split into two
    classes of half size and unchanged element order.
    """
    order_b = 2**n * math.factorial(n)
    out = []
    for k in range(n + 1):
        for lam in partitions(k):
            for mu in partitions(n - k):
                if len(mu) % 2:
                    continue
                o = math.lcm(*(list(lam) + [2 * m for m in mu]), 1)
                size_b = order_b // (_hyp_centralizer(lam) * _hyp_centralizer(mu))
                if not mu and lam and all(p % 2 == 0 for p in lam):
                    out.append((o, size_b // 2))
                    out.append((o, size_b // 2))
                else:
                    out.append((o, size_b))
    return out


def _convolve(a: list[tuple[int, int]], b: list[tuple[int, int]]):
    return [(math.lcm(o1, o2), s1 * s2) for o1, s1 in a for o2, s2 in b]


def _wreath_double(inner: list[tuple[int, int]], inner_order: int):
    """Classes of H^2 x| S2 from the classes of H.

    Non-swap part: unordered pairs of H-classes.  Swap part: one class per
    H-class c, of size |H| * |c|; the square of ((g,h),swap) is (gh,hg), so
    its element order is twice the order of gh.
    """
    out = []
    for i, (o1, s1) in enumerate(inner):
        for j, (o2, s2) in enumerate(inner[i:], start=i):
            if i == j:
                out.append((math.lcm(o1, o2), s1 * s2))
            else:
                out.append((math.lcm(o1, o2), 2 * s1 * s2))
    for o, s in inner:
        out.append((2 * o, inner_order * s))
    return out


def _weyl_factor_stats(family: str, rank: int) -> list[tuple[int, int]]:
    if family == "A":
        return _sym_stats(rank + 1)
    if family in ("B", "C"):
        return _bc_stats(rank)
    if family == "D":
        return _d_stats(rank)
    if (family, rank) == ("E", 8):
        return list(curated_e8_classes())
    # small exceptional types: brute force
    table = weylgrp.conjugacy_classes_bruteforce(
        weylgrp.group_from_type(CartanType.of((family, rank)))
    )
    return [(c.element_order, c.size) for c in table.classes]


@lru_cache(maxsize=None)
def class_stats(spec: GroupSpec) -> ClassStats:
    """The (element order, class size) multiset of the spec'd group."""
    if spec.kind == "trivial":
        entries = [(1, 1)]
    elif spec.kind == "cyclic":
        entries = [(spec.n // math.gcd(spec.n, k), 1) for k in range(spec.n)]
    elif spec.kind == "sym":
        entries = _sym_stats(spec.n)
    elif spec.kind == "weyl":
        entries = [(1, 1)]
        for family, rank in spec.cartan.factors:
            entries = _convolve(entries, _weyl_factor_stats(family, rank))
    elif spec.kind == "product":
        entries = [(1, 1)]
        for p in spec.parts:
            entries = _convolve(entries, list(class_stats(p).entries))
    elif spec.kind == "wreath2":
        inner = class_stats(spec.parts[0])
        entries = _wreath_double(list(inner.entries), inner.group_order)
    elif spec.kind == "explicit":
        table = weylgrp.conjugacy_classes_bruteforce(
            weylgrp.subgroup_from_perms(list(spec.gens))
        )
        entries = [(c.element_order, c.size) for c in table.classes]
    else:
        raise ValueError(f"unsupported group spec {spec.kind!r}")
    return ClassStats(tuple(sorted(entries)), spec_order(spec))


def count_l_regular(spec: GroupSpec, l: int) -> int:
    """Number of classes of element order coprime to the prime l."""
    from .rootsys import is_prime

    if not is_prime(l):
        raise ValueError(f"{l} is not prime")
    return class_stats(spec).count_regular(l)


def count_l_singular(spec: GroupSpec, l: int) -> int:
    stats = class_stats(spec)
    return stats.n_classes() - count_l_regular(spec, l)


# ---------------------------------------------------------------------------
# Curated W(E8) dataset.

E8_ORDER = 696_729_600
E8_CLASS_COUNT = 112


def _load_dataset(name: str) -> tuple[dict, str]:
    text = resources.files("mgsc.data").joinpath(name).read_text()
    header: dict[str, str] = {}
    body_lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            m = re.match(r"#\s*([\w-]+):\s*(.*)$", line)
            if m:
                header[m.group(1)] = m.group(2).strip()
        elif line.strip() and not line.startswith("order,"):
            body_lines.append(line.strip())
    body = "\n".join(body_lines) + "\n"
    digest = hashlib.sha256(body.encode()).hexdigest()
    if header.get("sha256") and header["sha256"] != digest:
        raise ValueError(f"checksum mismatch in {name}")
    return header, body


@lru_cache(maxsize=1)
def curated_e8_classes() -> tuple[tuple[int, int], ...]:
    """The 112 (element order, class size) pairs of W(E8), from the
    quarantined dataset file."""
    header, body = _load_dataset("e8_classes.txt")
    entries = []
    for line in body.strip().splitlines():
        o, s = line.split(",")
        entries.append((int(o), int(s)))
    if int(header.get("group_order", -1)) != E8_ORDER:
        raise ValueError("unexpected group order in E8 dataset")
    if len(entries) != E8_CLASS_COUNT:
        raise ValueError("unexpected class count in E8 dataset")
    if sum(s for _, s in entries) != E8_ORDER:
        raise ValueError("E8 class sizes do not sum to |W(E8)|")
    return tuple(sorted(entries))
