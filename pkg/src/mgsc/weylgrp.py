"""Concrete finite-group engine for Weyl groups acting on root indices.

Groups are stored through a deterministic Schreier-Sims stabilizer chain
(numpy-backed).  The chain doubles as a perfect ranking of group elements,
which lets the brute-force conjugacy partition keep just one bit per
element instead of a hash table of permutations.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .rootsys import CartanType, RootSystem, build_root_system, weyl_order

DEFAULT_ENUM_BUDGET = 4_000_000


def enumeration_budget() -> int:
    raw = os.environ.get("SPRINGER_ENUM_BUDGET")
    if raw is None:
        return DEFAULT_ENUM_BUDGET
    value = int(raw)
    if value <= 0:
        raise ValueError("SPRINGER_ENUM_BUDGET must be positive")
    return value


class TooLargeForBruteForce(RuntimeError):
    def __init__(self, order: int, budget: int):
        super().__init__(
            f"group of order {order} is too large for brute force "
            f"(budget {budget}; raise SPRINGER_ENUM_BUDGET to override)"
        )
        self.order = order
        self.budget = budget


@dataclass(frozen=True)
class GroupElement:
    """A permutation of the domain, with an optional reflection word."""

    perm: tuple[int, ...]
    word: tuple[int, ...] | None = None

    @property
    def degree(self) -> int:
        return len(self.perm)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.perm))

    def order(self) -> int:
        p = np.asarray(self.perm)
        q = p.copy()
        n = 1
        ident = np.arange(len(p))
        while not np.array_equal(q, ident):
            q = p[q]
            n += 1
        return n


def _compose(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """(p o q)(x) = p[q[x]]."""
    return p[q]


def _inverse(p: np.ndarray) -> np.ndarray:
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p), dtype=p.dtype)
    return inv


class _Chain:
    """Deterministic stabilizer chain with transversal tables.

    Each level stores the base point, the sorted orbit, a position table,
    and transversal arrays U / Uinv with U[k] mapping the base point to
    orbit[k].
    """

    def __init__(self, degree: int):
        self.degree = degree
        self.dtype = np.uint8 if degree <= 255 else np.int16
        self.identity = np.arange(degree, dtype=self.dtype)
        # strong generators with the number of leading base points they fix
        self.strong: list[tuple[np.ndarray, int]] = []
        self.bases: list[int] = []
        self.orbits: list[np.ndarray] = []
        self.pos: list[np.ndarray] = []
        self.U: list[np.ndarray] = []
        self.Uinv: list[np.ndarray] = []

    # -- construction -------------------------------------------------

    def add_generator(self, gen: np.ndarray) -> None:
        residue, depth = self._sift(gen.astype(self.dtype))
        if residue is None:
            return
        self._insert(residue, depth)
        self._schreier_sims(min(depth, len(self.bases) - 1))

    def _insert(self, residue: np.ndarray, depth: int) -> None:
        if depth == len(self.bases):
            moved = int(np.nonzero(residue != self.identity)[0][0])
            self.bases.append(moved)
            self.orbits.append(np.array([moved], dtype=np.int32))
            p = np.full(self.degree, -1, dtype=np.int32)
            p[moved] = 0
            self.pos.append(p)
            self.U.append(self.identity[None, :].copy())
            self.Uinv.append(self.identity[None, :].copy())
        self.strong.append((residue, depth))

    def _level_gens(self, level: int) -> list[np.ndarray]:
        return [g for g, d in self.strong if d >= level]

    def _schreier_sims(self, start_level: int) -> None:
        i = start_level
        while i >= 0:
            self._rebuild_orbit(i)
            gens = self._level_gens(i)
            added = None
            for k in range(len(self.orbits[i])):
                u = self.U[i][k]
                for g in gens:
                    gu = _compose(g, u)
                    j = self.pos[i][gu[self.bases[i]]]
                    schreier = _compose(self.Uinv[i][j], gu)
                    residue, depth = self._sift(schreier, from_level=i + 1)
                    if residue is not None:
                        self._insert(residue, depth)
                        added = min(depth, len(self.bases) - 1)
                        break
                if added is not None:
                    break
            if added is not None:
                i = added
            else:
                i -= 1

    def _rebuild_orbit(self, level: int) -> None:
        b = self.bases[level]
        gens = self._level_gens(level)
        trans = {b: self.identity}
        frontier = [b]
        while frontier:
            new = []
            for point in frontier:
                u = trans[point]
                for g in gens:
                    q = int(g[point])
                    if q not in trans:
                        trans[q] = _compose(g, u)
                        new.append(q)
            frontier = new
        orbit = np.array(sorted(trans), dtype=np.int32)
        pos = np.full(self.degree, -1, dtype=np.int32)
        pos[orbit] = np.arange(len(orbit))
        U = np.stack([trans[int(p)] for p in orbit])
        Uinv = np.stack([_inverse(u) for u in U])
        self.orbits[level] = orbit
        self.pos[level] = pos
        self.U[level] = U
        self.Uinv[level] = Uinv

    def _sift(self, p: np.ndarray, from_level: int = 0):
        """Return (residue, depth); residue None if p is in the group."""
        for level in range(from_level, len(self.bases)):
            img = int(p[self.bases[level]])
            j = self.pos[level][img]
            if j < 0:
                return p, level
            p = _compose(self.Uinv[level][j], p)
        if np.array_equal(p, self.identity):
            return None, len(self.bases)
        return p, len(self.bases)

    # -- queries ------------------------------------------------------

    def order(self) -> int:
        n = 1
        for orbit in self.orbits:
            n *= len(orbit)
        return n

    def contains(self, p: np.ndarray) -> bool:
        residue, _ = self._sift(p.astype(self.dtype))
        return residue is None

    @property
    def strides(self) -> list[int]:
        strides = []
        acc = 1
        for orbit in reversed(self.orbits):
            strides.append(acc)
            acc *= len(orbit)
        return strides[::-1]

    def rank_many(self, perms: np.ndarray) -> np.ndarray:
        """Rank a batch of group elements (shape (n, degree))."""
        n = len(perms)
        ranks = np.zeros(n, dtype=np.int64)
        bases = np.array(self.bases, dtype=np.int64)
        img = perms[:, bases].astype(np.int64)
        strides = self.strides
        for level in range(len(bases)):
            j = self.pos[level][img[:, level]]
            if np.any(j < 0):
                raise ValueError("permutation not in group")
            ranks += j.astype(np.int64) * strides[level]
            if level + 1 < len(bases):
                rest = img[:, level + 1 :]
                img[:, level + 1 :] = self.Uinv[level][j[:, None], rest]
        return ranks

    def unrank_many(self, ranks: np.ndarray) -> np.ndarray:
        """Inverse of rank_many; returns an (n, degree) array."""
        n = len(ranks)
        rem = np.asarray(ranks, dtype=np.int64).copy()
        strides = self.strides
        digits = []
        for level in range(len(self.bases)):
            j, rem = np.divmod(rem, strides[level])
            digits.append(j)
        out = np.tile(self.identity, (n, 1))
        for level in reversed(range(len(self.bases))):
            out = np.take_along_axis(
                self.U[level][digits[level]].astype(self.dtype), out, axis=1
            )
        return out


class PermGroup:
    """A permutation group with stabilizer chain and cached order.

    When built from a Cartan type, the group remembers its root system and
    the simple-reflection permutations so subgroup and normalizer
    computations can reason about roots.
    """

    def __init__(
        self,
        degree: int,
        generators: list[GroupElement],
        root_system: RootSystem | None = None,
        label: str = "",
    ):
        self.degree = degree
        self.generators = list(generators)
        self.root_system = root_system
        self.label = label
        self.chain = _Chain(degree)
        for g in generators:
            self.chain.add_generator(np.array(g.perm))
        self._order = self.chain.order()

    def order(self) -> int:
        return self._order

    def identity(self) -> GroupElement:
        return GroupElement(tuple(range(self.degree)))

    def contains(self, perm) -> bool:
        return self.chain.contains(np.asarray(perm))

    def gen_arrays(self) -> list[np.ndarray]:
        return [np.array(g.perm, dtype=self.chain.dtype) for g in self.generators]

    def __repr__(self):
        return f"PermGroup({self.label or 'degree %d' % self.degree}, order={self._order})"


@dataclass(frozen=True)
class ClassInfo:
    representative: GroupElement
    size: int
    element_order: int


@dataclass(frozen=True)
class RawClassTable:
    classes: tuple[ClassInfo, ...]
    group_order: int

    def __post_init__(self):
        if sum(c.size for c in self.classes) != self.group_order:
            raise ValueError("class sizes do not sum to group order")

    def n_classes(self) -> int:
        return len(self.classes)

    def stats(self) -> tuple[tuple[int, int], ...]:
        """Sorted multiset of (element_order, class_size)."""
        return tuple(sorted((c.element_order, c.size) for c in self.classes))


# ---------------------------------------------------------------------------
# Construction from Cartan types.


@lru_cache(maxsize=None)
def group_from_type(t: CartanType) -> PermGroup:
    """Weyl group of t as permutations of the root index set."""
    rs = build_root_system(t)
    gens = [
        GroupElement(perm, word=(i,))
        for i, perm in enumerate(rs.simple_reflection_perms)
    ]
    g = PermGroup(rs.n_roots, gens, root_system=rs, label=f"W({t})")
    expected = weyl_order(t)
    if g.order() != expected:
        raise AssertionError(
            f"stabilizer chain order {g.order()} != degree product {expected}"
        )
    return g


def subgroup_from_perms(perms: list[tuple[int, ...]], label: str = "") -> PermGroup:
    degree = len(perms[0]) if perms else 1
    return PermGroup(degree, [GroupElement(tuple(p)) for p in perms], label=label)


def parabolic_subgroup(g: PermGroup, J) -> PermGroup:
    """Subgroup generated by the simple reflections indexed by J."""
    if g.root_system is None:
        raise ValueError("parabolic subgroups need a root system")
    J = sorted(J)
    gens = [g.generators[j] for j in J]
    if not gens:
        return PermGroup(g.degree, [], root_system=g.root_system, label=f"{g.label}_[]")
    return PermGroup(
        g.degree, gens, root_system=g.root_system, label=f"{g.label}_{J}"
    )


# ---------------------------------------------------------------------------
# Brute-force conjugacy classes.


def conjugacy_classes_bruteforce(g: PermGroup) -> RawClassTable:
    """Complete conjugacy partition by generator-conjugation orbits.

    Elements are identified with their chain ranks, so the visited set is
    a single boolean array of length |g|.
    """
    order = g.order()
    budget = enumeration_budget()
    if order > budget:
        raise TooLargeForBruteForce(order, budget)

    chain = g.chain
    if order == 1:
        ident = g.identity()
        return RawClassTable((ClassInfo(ident, 1, 1),), 1)

    gens = g.gen_arrays()
    ginvs = [_inverse(p) for p in gens]
    assigned = np.zeros(order, dtype=bool)
    classes = []
    scan_from = 0
    batch_cap = 1 << 17

    while scan_from < order:
        nz = np.nonzero(~assigned[scan_from:])[0]
        if len(nz) == 0:
            break
        start = scan_from + int(nz[0])
        scan_from = start + 1
        assigned[start] = True
        size = 0
        frontier_ranks = np.array([start], dtype=np.int64)
        while len(frontier_ranks):
            size += len(frontier_ranks)
            next_ranks = []
            for lo in range(0, len(frontier_ranks), batch_cap):
                perms = chain.unrank_many(frontier_ranks[lo : lo + batch_cap])
                for p, pinv in zip(gens, ginvs):
                    conj = pinv[perms[:, p]]
                    ranks = np.unique(chain.rank_many(conj))
                    fresh = ranks[~assigned[ranks]]
                    if len(fresh):
                        assigned[fresh] = True
                        next_ranks.append(fresh)
            frontier_ranks = (
                np.unique(np.concatenate(next_ranks))
                if next_ranks
                else np.array([], dtype=np.int64)
            )
        rep = GroupElement(tuple(int(x) for x in chain.unrank_many(np.array([start]))[0]))
        classes.append(ClassInfo(rep, size, rep.order()))

    classes.sort(key=lambda c: (c.element_order, c.size, c.representative.perm))
    return RawClassTable(tuple(classes), order)


# ---------------------------------------------------------------------------
# Normalizers of parabolic subgroups and their quotients.


def _subset_key(indices: np.ndarray) -> bytes:
    return np.sort(indices).astype(np.int32).tobytes()


def setwise_stabilizer_of_subsystem(g: PermGroup, J) -> tuple[PermGroup, int]:
    """Stabilizer N_W(W_J) = {w : w(Phi_J) = Phi_J}, plus the orbit size.

    Computed by orbit-stabilizer on the root subsystem with Schreier
    generators, so it never enumerates g itself.
    """
    rs = g.root_system
    if rs is None:
        raise ValueError("needs a root system")
    sub = np.array(sorted(rs.subsystem_indices(J)), dtype=np.int64)
    gens = g.gen_arrays()

    base_key = _subset_key(sub)
    transversal = {base_key: g.chain.identity}
    frontier = [(base_key, sub)]
    schreier: list[np.ndarray] = []
    seen_schreier = set()
    while frontier:
        new = []
        for key, indices in frontier:
            t = transversal[key]
            for p in gens:
                img = p[indices]
                k2 = _subset_key(img)
                if k2 not in transversal:
                    transversal[k2] = _compose(p, t)
                    new.append((k2, np.sort(img)))
        frontier = new

    orbit_size = len(transversal)
    order_N = g.order() // orbit_size
    stab = _Chain(g.degree)
    elements: list[GroupElement] = []
    done = False
    for key in sorted(transversal):
        if done:
            break
        t = transversal[key]
        for p in gens:
            pt = _compose(p, t)
            k2 = _subset_key(pt[sub])
            s = _compose(_inverse(transversal[k2]), pt)
            kb = s.tobytes()
            if kb in seen_schreier:
                continue
            seen_schreier.add(kb)
            before = stab.order()
            stab.add_generator(s)
            if stab.order() > before:
                elements.append(GroupElement(tuple(int(x) for x in s)))
            if stab.order() == order_N:
                done = True
                break
    if stab.order() != order_N:
        raise AssertionError("Schreier generation did not reach the full stabilizer")

    group = PermGroup.__new__(PermGroup)
    group.degree = g.degree
    group.generators = elements
    group.root_system = rs
    group.label = f"N_{g.label}(W_J)"
    group.chain = stab
    group._order = order_N
    return group, orbit_size


def _j_reduce_batch(perms: np.ndarray, simple_perms, simple_root_idx, pos_flags):
    """Canonical minimal coset representatives of perms * W_J.

    Repeatedly applies s_j on the right while the image of alpha_j is a
    negative root.  pos_flags[r] says whether root r is positive.
    """
    perms = perms.copy()
    while True:
        changed = False
        for j, s in zip(simple_root_idx, simple_perms):
            neg = ~pos_flags[perms[:, j]]
            if np.any(neg):
                changed = True
                perms[neg] = perms[neg][:, s]
            # loop until no j applies
        if not changed:
            return perms


def normalizer_quotient_classes(g: PermGroup, J) -> RawClassTable:
    """Conjugacy-class table of N_W(W_J) / W_J.

    Cosets are labelled by their minimal-length representatives; the
    partition runs generator-conjugation orbits at the coset level.
    """
    rs = g.root_system
    if rs is None:
        raise ValueError("needs a root system")
    J = sorted(J)
    if not J:
        return conjugacy_classes_bruteforce(g)

    N, _ = setwise_stabilizer_of_subsystem(g, J)
    order_J = weyl_order(_subset_type(rs, J))
    n_elements = N.order()
    budget = enumeration_budget()
    if n_elements > budget:
        raise TooLargeForBruteForce(n_elements, budget)
    q_order = n_elements // order_J

    simple_root_idx = [rs.simple_root_index(j) for j in J]
    simple_perms = [np.array(rs.simple_reflection_perms[j]) for j in J]
    pos_flags = np.array([rs.is_positive(i) for i in range(rs.n_roots)])

    def canon(perms: np.ndarray) -> np.ndarray:
        return _j_reduce_batch(perms, simple_perms, simple_root_idx, pos_flags)

    all_elts = N.chain.unrank_many(np.arange(n_elements, dtype=np.int64))
    reps = canon(all_elts)
    rep_keys = {}
    for row in reps:
        rep_keys.setdefault(row.tobytes(), row)
    if len(rep_keys) != q_order:
        raise AssertionError("coset count mismatch in normalizer quotient")

    gen_reps = []
    seen = set()
    for p in N.gen_arrays():
        r = canon(p[None, :].astype(reps.dtype))[0]
        key = r.tobytes()
        if key not in seen:
            seen.add(key)
            gen_reps.append(r)

    ident = canon(np.arange(g.degree, dtype=reps.dtype)[None, :])[0].tobytes()
    remaining = dict(rep_keys)
    classes = []
    for key in sorted(rep_keys):
        if key not in remaining:
            continue
        rep = rep_keys[key]
        orbit = {key}
        frontier = [rep]
        while frontier:
            batch = np.stack(frontier)
            frontier = []
            for p in gen_reps:
                pinv = _inverse(p)
                conj = canon(pinv[batch[:, p]])
                for row in conj:
                    k2 = row.tobytes()
                    if k2 not in orbit:
                        orbit.add(k2)
                        frontier.append(row)
        for k2 in orbit:
            remaining.pop(k2, None)
        # order of the coset in the quotient
        power = rep
        n = 1
        while power.tobytes() != ident:
            power = canon(_compose(power, rep)[None, :])[0]
            n += 1
        classes.append(
            ClassInfo(GroupElement(tuple(int(x) for x in rep)), len(orbit), n)
        )

    classes.sort(key=lambda c: (c.element_order, c.size, c.representative.perm))
    return RawClassTable(tuple(classes), q_order)


def _subset_type(rs: RootSystem, J) -> CartanType:
    from .rootsys import classify_subset

    return classify_subset(rs, J)


def normalizer_quotient_order(g: PermGroup, J) -> int:
    """|N_W(W_J)/W_J| via orbit-stabilizer only (no element enumeration)."""
    rs = g.root_system
    J = sorted(J)
    if not J:
        return g.order()
    N, _ = setwise_stabilizer_of_subsystem(g, J)
    return N.order() // weyl_order(_subset_type(rs, J))
