"""Root systems and reflection actions for Cartan types of rank <= 8.

All coordinates are kept as exact integers.  Types whose standard
realization uses half-integers (E-series, F4) are scaled by 2, which
changes no reflection arithmetic: the Cartan pairing 2(v,a)/(a,a) is
scale invariant.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

FAMILIES = ("A", "B", "C", "D", "E", "F", "G")

# Rank bounds per family (B2 is allowed, C starts at 3; D starts at 4).
_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 4, "E": 6, "F": 4, "G": 2}
_MAX_RANK = {"A": None, "B": None, "C": None, "D": None, "E": 8, "F": 4, "G": 2}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True, order=True)
class CartanType:
    """A product of irreducible Cartan types, order-normalized."""

    factors: tuple[tuple[str, int], ...]

    def __post_init__(self):
        for family, rank in self.factors:
            if family not in FAMILIES:
                raise ValueError(f"unknown family {family!r}")
            lo = _MIN_RANK[family]
            hi = _MAX_RANK[family]
            if rank < lo or (hi is not None and rank > hi):
                raise ValueError(f"invalid rank {rank} for family {family}")
        if tuple(sorted(self.factors)) != self.factors:
            raise ValueError("factors must be sorted (use CartanType.of)")

    @staticmethod
    def of(*factors: tuple[str, int]) -> "CartanType":
        return CartanType(tuple(sorted(factors)))

    @staticmethod
    def parse(name: str) -> "CartanType":
        """Parse names like ``E8``, ``A4+A1`` or ``2A2+A1``."""
        factors = []
        for part in name.split("+"):
            m = re.fullmatch(r"(\d*)([A-G])(\d+)", part.strip())
            if not m:
                raise ValueError(f"cannot parse Cartan type {name!r}")
            mult = int(m.group(1)) if m.group(1) else 1
            factors.extend([(m.group(2), int(m.group(3)))] * mult)
        return CartanType.of(*factors)

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.factors)

    @property
    def is_irreducible(self) -> bool:
        return len(self.factors) == 1

    def __str__(self) -> str:
        if not self.factors:
            return "T"
        parts = []
        for (fam, rank), group in itertools.groupby(self.factors):
            n = len(list(group))
            parts.append((f"{n}" if n > 1 else "") + f"{fam}{rank}")
        return "+".join(parts)


def simple_type(name: str) -> CartanType:
    return CartanType.parse(name)


# ---------------------------------------------------------------------------
# Fundamental degrees and Weyl group orders.

_EXC_DEGREES = {
    ("G", 2): (2, 6),
    ("F", 4): (2, 6, 8, 12),
    ("E", 6): (2, 5, 6, 8, 9, 12),
    ("E", 7): (2, 6, 8, 10, 12, 14, 18),
    ("E", 8): (2, 8, 12, 14, 18, 20, 24, 30),
}


def degrees(family: str, rank: int) -> tuple[int, ...]:
    """Fundamental degrees of the reflection representation."""
    if family == "A":
        return tuple(range(2, rank + 2))
    if family in ("B", "C"):
        return tuple(range(2, 2 * rank + 1, 2))
    if family == "D":
        return tuple(range(2, 2 * rank - 1, 2)) + (rank,)
    return _EXC_DEGREES[(family, rank)]


def weyl_order(t: CartanType) -> int:
    """Order of the Weyl group, as the product of fundamental degrees."""
    order = 1
    for family, rank in t.factors:
        for d in degrees(family, rank):
            order *= d
    return order


def padic_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def base_l_digits(n: int, l: int) -> list[int]:
    """Digits b_i with n = sum b_i * l**i, least significant first."""
    if n < 1:
        raise ValueError("n must be positive")
    if not is_prime(l):
        raise ValueError(f"{l} is not prime")
    digits = []
    while n:
        n, d = divmod(n, l)
        digits.append(d)
    return digits


# ---------------------------------------------------------------------------
# Simple roots in exact integer ambient coordinates.


def _unit(dim: int, i: int, value: int = 1) -> tuple[int, ...]:
    v = [0] * dim
    v[i] = value
    return tuple(v)


def _simple_roots_irreducible(family: str, rank: int) -> list[tuple[int, ...]]:
    n = rank
    if family == "A":
        dim = n + 1
        return [
            tuple(a - b for a, b in zip(_unit(dim, i), _unit(dim, i + 1)))
            for i in range(n)
        ]
    if family == "B":
        roots = [
            tuple(a - b for a, b in zip(_unit(n, i), _unit(n, i + 1)))
            for i in range(n - 1)
        ]
        roots.append(_unit(n, n - 1))
        return roots
    if family == "C":
        roots = [
            tuple(a - b for a, b in zip(_unit(n, i), _unit(n, i + 1)))
            for i in range(n - 1)
        ]
        roots.append(_unit(n, n - 1, 2))
        return roots
    if family == "D":
        roots = [
            tuple(a - b for a, b in zip(_unit(n, i), _unit(n, i + 1)))
            for i in range(n - 1)
        ]
        last = [0] * n
        last[n - 2] = 1
        last[n - 1] = 1
        roots.append(tuple(last))
        return roots
    if family == "G":
        # alpha1 short, alpha2 long, realized in the sum-zero plane of Z^3.
        return [(1, -1, 0), (-2, 1, 1)]
    if family == "F":
        # Bourbaki realization scaled by 2.
        return [
            (0, 2, -2, 0),
            (0, 0, 2, -2),
            (0, 0, 0, 2),
            (1, -1, -1, -1),
        ]
    if family == "E":
        # Bourbaki E8 simple roots scaled by 2; E6/E7 take the first 6/7.
        alpha = [
            (1, -1, -1, -1, -1, -1, -1, 1),
            (2, 2, 0, 0, 0, 0, 0, 0),
            (-2, 2, 0, 0, 0, 0, 0, 0),
            (0, -2, 2, 0, 0, 0, 0, 0),
            (0, 0, -2, 2, 0, 0, 0, 0),
            (0, 0, 0, -2, 2, 0, 0, 0),
            (0, 0, 0, 0, -2, 2, 0, 0),
            (0, 0, 0, 0, 0, -2, 2, 0),
        ]
        return alpha[:rank]
    raise ValueError(f"unsupported family {family}")


def dot(u: tuple[int, ...], v: tuple[int, ...]) -> int:
    return sum(a * b for a, b in zip(u, v))


def pairing(v: tuple[int, ...], alpha: tuple[int, ...]) -> int:
    """Cartan pairing <v, alpha-check> = 2(v,alpha)/(alpha,alpha)."""
    num = 2 * dot(v, alpha)
    den = dot(alpha, alpha)
    if num % den:
        raise ValueError("non-integral Cartan pairing")
    return num // den


def reflect(v: tuple[int, ...], alpha: tuple[int, ...]) -> tuple[int, ...]:
    c = pairing(v, alpha)
    return tuple(x - c * a for x, a in zip(v, alpha))


@dataclass(frozen=True)
class RootSystem:
    """Concrete root datum: roots, Cartan matrix, reflection permutations.

    ``all_roots`` is sorted lexicographically so every derived object is
    deterministic.  ``simple_coords[r]`` expresses root r in the basis of
    simple roots (always integral).
    """

    cartan_type: CartanType
    simple_roots: tuple[tuple[int, ...], ...]
    all_roots: tuple[tuple[int, ...], ...]
    cartan_matrix: tuple[tuple[int, ...], ...]
    simple_reflection_perms: tuple[tuple[int, ...], ...]
    simple_coords: tuple[tuple[int, ...], ...]
    index: dict = field(repr=False, hash=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    @property
    def n_roots(self) -> int:
        return len(self.all_roots)

    def root_length_sq(self, i: int) -> int:
        return dot(self.all_roots[i], self.all_roots[i])

    def is_positive(self, i: int) -> bool:
        coeffs = self.simple_coords[i]
        return all(c >= 0 for c in coeffs)

    def simple_root_index(self, j: int) -> int:
        """Index of the j-th simple root inside ``all_roots``."""
        return self.index[self.simple_roots[j]]

    def subsystem_indices(self, J) -> frozenset[int]:
        """Indices of roots supported on the simple-root subset J."""
        J = set(J)
        out = []
        for i, coeffs in enumerate(self.simple_coords):
            if all(c == 0 for k, c in enumerate(coeffs) if k not in J):
                out.append(i)
        return frozenset(out)


def _solve_in_simple_basis(
    simples: list[tuple[int, ...]], roots: list[tuple[int, ...]]
) -> list[tuple[int, ...]]:
    """Express each root as an integer combination of the simple roots."""
    k = len(simples)
    # Gram-matrix solve keeps everything rational and small.
    gram = [[Fraction(dot(simples[i], simples[j])) for j in range(k)] for i in range(k)]
    out = []
    for root in roots:
        rhs = [Fraction(dot(root, s)) for s in simples]
        coeffs = _gauss_solve(gram, rhs)
        ints = []
        for c in coeffs:
            if c.denominator != 1:
                raise ValueError("root not in the simple-root lattice")
            ints.append(int(c))
        out.append(tuple(ints))
    return out


def _gauss_solve(matrix, rhs):
    n = len(matrix)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


@lru_cache(maxsize=None)
def build_root_system(t: CartanType) -> RootSystem:
    """Construct the root system of t by reflection closure of the simples.

    Products are realized on the orthogonal direct sum of the factors'
    ambient spaces, giving one permutation domain (the disjoint union of
    the factors' root sets).
    """
    blocks = [_simple_roots_irreducible(f, r) for f, r in t.factors]
    dims = [len(b[0]) for b in blocks]
    total = sum(dims)
    simples: list[tuple[int, ...]] = []
    off = 0
    for block, d in zip(blocks, dims):
        for root in block:
            simples.append((0,) * off + root + (0,) * (total - off - d))
        off += d

    roots = set(simples) | {tuple(-x for x in v) for v in simples}
    frontier = list(roots)
    while frontier:
        new = []
        for v in frontier:
            for alpha in simples:
                w = reflect(v, alpha)
                if w not in roots:
                    roots.add(w)
                    new.append(w)
        frontier = new

    all_roots = tuple(sorted(roots))
    index = {v: i for i, v in enumerate(all_roots)}
    perms = tuple(
        tuple(index[reflect(v, alpha)] for v in all_roots) for alpha in simples
    )
    cartan = tuple(
        tuple(pairing(b, a) for b in simples) for a in simples
    )
    coords = tuple(_solve_in_simple_basis(simples, list(all_roots)))
    return RootSystem(
        cartan_type=t,
        simple_roots=tuple(simples),
        all_roots=all_roots,
        cartan_matrix=cartan,
        simple_reflection_perms=perms,
        simple_coords=coords,
        index=index,
    )


# ---------------------------------------------------------------------------
# Classification of simple-root subsets.


def classify_subset(rs: RootSystem, J) -> CartanType:
    """Cartan type of the standard parabolic subsystem spanned by J.

    B and C components are told apart by root lengths (the terminal root
    at the multiple bond is short in type B, long in type C); a rank-2
    double-bond component is canonicalized as B2.
    """
    J = sorted(J)
    if not J:
        return CartanType(())
    cm = rs.cartan_matrix
    adj = {j: [] for j in J}
    for a, b in itertools.combinations(J, 2):
        if cm[a][b] != 0:
            adj[a].append(b)
            adj[b].append(a)

    factors = []
    seen = set()
    for j in J:
        if j in seen:
            continue
        comp = [j]
        seen.add(j)
        queue = [j]
        while queue:
            x = queue.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        factors.append(_classify_component(rs, sorted(comp), adj))
    return CartanType.of(*factors)


def _classify_component(rs: RootSystem, comp, adj) -> tuple[str, int]:
    n = len(comp)
    cm = rs.cartan_matrix
    lensq = {
        j: dot(rs.simple_roots[j], rs.simple_roots[j]) for j in comp
    }
    bond = {}
    for a in comp:
        for b in adj[a]:
            if b in lensq and b > a:
                bond[(a, b)] = cm[a][b] * cm[b][a]
    max_bond = max(bond.values(), default=1)

    if max_bond == 3:
        return ("G", 2)
    if max_bond == 2:
        (u, v) = next(k for k, w in bond.items() if w == 2)
        if n == 2:
            return ("B", 2)
        deg = {j: len([x for x in adj[j] if x in comp]) for j in comp}
        if deg[u] > 1 and deg[v] > 1:
            return ("F", 4)
        end = u if deg[u] == 1 else v
        short = min(lensq.values())
        return ("B" if lensq[end] == short else "C", n)
    deg = {j: len([x for x in adj[j] if x in comp]) for j in comp}
    branch = [j for j in comp if deg[j] == 3]
    if not branch:
        return ("A", n)
    legs = sorted(_leg_lengths(branch[0], adj, comp))
    if legs[0] == 1 and legs[1] == 1:
        return ("D", n)
    if legs == [1, 2, 2]:
        return ("E", 6)
    if legs == [1, 2, 3]:
        return ("E", 7)
    if legs == [1, 2, 4]:
        return ("E", 8)
    raise ValueError(f"unrecognized diagram component {comp}")


def _leg_lengths(branch, adj, comp):
    lengths = []
    compset = set(comp)
    for start in adj[branch]:
        if start not in compset:
            continue
        length = 1
        prev, cur = branch, start
        while True:
            nxt = [x for x in adj[cur] if x != prev and x in compset]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        lengths.append(length)
    return lengths
