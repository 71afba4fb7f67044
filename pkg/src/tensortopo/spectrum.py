"""Finite lattices, prime filters, the spectral base space, and germs.

Filters are bitsets over the lattice's element order.  Every filter of a
finite lattice is principal (nonempty + downward-directed gives a minimum),
so enumeration ranges over up-sets of single elements; each candidate is then
verified against the full definition.  Points are ordered by the numeric
value of their bitsets for determinism.
"""

import random
from dataclasses import dataclass

from .errors import NotAFilter, NotAFrame, NotDistributive


@dataclass
class LatticeModel:
    """A finite lattice with explicit order, meet, and join tables."""

    elements: tuple
    leq: frozenset  # pairs (a, b) with a <= b
    meet: dict
    join: dict
    bottom: object
    top: object

    def __post_init__(self):
        self.elements = tuple(self.elements)
        self.index = {a: i for i, a in enumerate(self.elements)}

    def le(self, a, b):
        return (a, b) in self.leq

    def meet_many(self, xs):
        xs = list(xs)
        acc = xs[0]
        for x in xs[1:]:
            acc = self.meet[acc, x]
        return acc

    def join_many(self, xs):
        acc = self.bottom
        for x in xs:
            acc = self.join[acc, x]
        return acc


def lattice_from_leq(elements, leq_pairs):
    """Build a LatticeModel from an order relation; raises if glb/lub missing."""
    elements = tuple(elements)
    leq = frozenset(leq_pairs)
    meet, join = {}, {}
    for a in elements:
        for b in elements:
            lbs = [x for x in elements if (x, a) in leq and (x, b) in leq]
            glb = [x for x in lbs if all((y, x) in leq for y in lbs)]
            ubs = [x for x in elements if (a, x) in leq and (b, x) in leq]
            lub = [x for x in ubs if all((x, y) in leq for y in ubs)]
            if len(glb) != 1 or len(lub) != 1:
                raise ValueError(f"not a lattice at ({a!r}, {b!r})")
            meet[a, b] = glb[0]
            join[a, b] = lub[0]
    bottom = next(x for x in elements if all((x, y) in leq for y in elements))
    top = next(x for x in elements if all((y, x) in leq for y in elements))
    return LatticeModel(elements, leq, meet, join, bottom, top)


def is_distributive(L):
    return all(L.meet[a, L.join[b, c]] == L.join[L.meet[a, b], L.meet[a, c]]
               for a in L.elements for b in L.elements for c in L.elements)


def hasse_edges(L):
    """Covering pairs (a, b): a < b with nothing strictly between."""
    edges = []
    for a in L.elements:
        for b in L.elements:
            if a == b or not L.le(a, b):
                continue
            if any(x not in (a, b) and L.le(a, x) and L.le(x, b) for x in L.elements):
                continue
            edges.append((a, b))
    return edges


@dataclass(frozen=True)
class FilterSet:
    """A filter as a bitset over the lattice's element order."""

    mask: int
    kind: str = "plain"

    def members(self, L):
        return tuple(a for i, a in enumerate(L.elements) if self.mask >> i & 1)

    def contains(self, L, a):
        return bool(self.mask >> L.index[a] & 1)


def filter_of(L, carrier, kind="plain"):
    mask = 0
    for a in carrier:
        mask |= 1 << L.index[a]
    return FilterSet(mask, kind)


def check_filter(L, P):
    """Nonempty, upward-closed, downward-directed; returns the carrier."""
    carrier = P.members(L)
    if not carrier:
        raise NotAFilter("empty")
    for a in carrier:
        for b in L.elements:
            if L.le(a, b) and not P.contains(L, b):
                raise NotAFilter(f"not upward closed at ({a!r}, {b!r})")
    for a in carrier:
        for b in carrier:
            if not any(L.le(c, a) and L.le(c, b) for c in carrier):
                raise NotAFilter(f"not downward directed at ({a!r}, {b!r})")
    return carrier


def _definition_holds(L, carrier, prime_pairs=True):
    """The prime-filter definition, checked clause by clause."""
    P = set(carrier)
    if not P or len(P) == len(L.elements):
        return False
    for a in P:
        for b in L.elements:
            if L.le(a, b) and b not in P:
                return False
    for a in P:
        for b in P:
            if not any(L.le(c, a) and L.le(c, b) for c in P):
                return False
    if prime_pairs:
        for u in L.elements:
            for v in L.elements:
                if L.join[u, v] in P and u not in P and v not in P:
                    return False
    return True


def enumerate_prime_filters(L):
    """All prime filters, each verified against the definition.

    Candidates are the principal up-sets of non-bottom elements; no other
    filters exist on a finite carrier.
    """
    if not is_distributive(L):
        raise NotDistributive("prime spectrum requires a distributive lattice")
    out = []
    for g in L.elements:
        if g == L.bottom:
            continue
        carrier = tuple(a for a in L.elements if L.le(g, a))
        if _definition_holds(L, carrier):
            out.append(filter_of(L, carrier, "prime"))
    return sorted(out, key=lambda P: P.mask)


def enumerate_completely_prime_filters(L):
    """Completely prime filters: the prime condition strengthened to all joins.

    On a finite carrier the subset quantifier reduces to one test per
    candidate: the generator must not sit below the join of the elements not
    above it.
    """
    if not is_distributive(L):
        raise NotAFrame("a finite frame must be distributive")
    out = []
    for g in L.elements:
        if g == L.bottom:
            continue
        carrier = tuple(a for a in L.elements if L.le(g, a))
        if not _definition_holds(L, carrier):
            continue
        w = L.join_many([s for s in L.elements if not L.le(g, s)])
        if not L.le(g, w):
            out.append(filter_of(L, carrier, "completely_prime"))
    return sorted(out, key=lambda P: P.mask)


@dataclass
class SpectrumSpace:
    """Points, basic opens B_u (as point bitsets), and all opens."""

    lattice: LatticeModel
    points: tuple
    basis: dict  # element -> bitset over points
    opens: tuple  # every union of basic opens, sorted


def spectrum(L, completely_prime=False):
    points = (enumerate_completely_prime_filters(L) if completely_prime
              else enumerate_prime_filters(L))
    basis = {}
    for u in L.elements:
        mask = 0
        for i, P in enumerate(points):
            if P.contains(L, u):
                mask |= 1 << i
        basis[u] = mask
    opens = {0}
    frontier = True
    while frontier:
        frontier = False
        for b in basis.values():
            for o in list(opens):
                if (o | b) not in opens:
                    opens.add(o | b)
                    frontier = True
    return SpectrumSpace(L, tuple(points), basis, tuple(sorted(opens)))


def check_basis_compact(S, family_limit=12):
    """Every cover of a basic open by basic opens has a finite subcover.

    Exhaustive over families of distinct basic opens while there are at most
    family_limit of them; beyond that only the canonical maximal cover is
    checked and the verdict notes the finiteness reduction.
    """
    from .zi import Verdict
    distinct = sorted(set(S.basis.values()))
    exhaustive = len(distinct) <= family_limit
    for u, B in sorted(S.basis.items(), key=lambda kv: str(kv[0])):
        if exhaustive:
            families = []
            for fam_mask in range(1 << len(distinct)):
                fam = [distinct[i] for i in range(len(distinct)) if fam_mask >> i & 1]
                union = 0
                for b in fam:
                    union |= b
                if union | B == union:  # family covers B_u
                    families.append(fam)
        else:
            families = [[b for b in distinct if b | B == B]]
        for fam in families:
            sub = _greedy_subcover(fam)
            union = 0
            for b in fam:
                union |= b
            sub_union = 0
            for b in sub:
                sub_union |= b
            if sub_union != union or len(sub) > len(S.points) + 1:
                return Verdict("basis_compact", False, witness={"basic_open": u})
    note = "" if exhaustive else "canonical cover only (basis too large to enumerate families)"
    return Verdict("basis_compact", True, note=note)


def _greedy_subcover(fam):
    """A minimal subfamily with the same union: drop redundant sets."""
    sub = list(fam)
    changed = True
    while changed:
        changed = False
        for b in list(sub):
            rest = 0
            for x in sub:
                if x is not b:
                    rest |= x
            if b | rest == rest:
                sub.remove(b)
                changed = True
                break
    return sub


def is_spatial(L):
    """u |-> B_u is a frame isomorphism onto the opens of the completely
    prime spectrum; always true on finite carriers but computed, not assumed."""
    from .zi import Verdict
    S = spectrum(L, completely_prime=True)
    image = {u: S.basis[u] for u in L.elements}
    if len(set(image.values())) != len(L.elements):
        return Verdict("spatial", False, note="u -> B_u is not injective")
    if set(image.values()) != set(S.opens):
        return Verdict("spatial", False, note="u -> B_u is not onto the opens")
    for u in L.elements:
        for v in L.elements:
            if image[L.meet[u, v]] != image[u] & image[v]:
                return Verdict("spatial", False, witness={"meet": (u, v)})
            if image[L.join[u, v]] != image[u] | image[v]:
                return Verdict("spatial", False, witness={"join": (u, v)})
    if image[L.bottom] != 0:
        return Verdict("spatial", False, note="B_bottom nonempty")
    return Verdict("spatial", True, witness={str(u): image[u] for u in L.elements})


def germ_congruence(L, x):
    """The quotient of L by v ~ w iff u ^ v = u ^ w for some u in x.

    On a finite carrier the filter x is principal at its minimum m, so the
    congruence is meet-with-m; returns the quotient lattice and projection.
    """
    if not isinstance(x, FilterSet):
        x = filter_of(L, x)
    carrier = check_filter(L, x)
    m = L.meet_many(carrier)
    if not x.contains(L, m):
        raise NotAFilter("filter does not contain its minimum")
    proj = {a: L.meet[a, m] for a in L.elements}
    quotient_elems = []
    for a in L.elements:
        if proj[a] not in quotient_elems:
            quotient_elems.append(proj[a])
    for a in L.elements:
        for b in L.elements:
            if proj[L.join[a, b]] != L.join[proj[a], proj[b]]:
                raise NotDistributive("join does not descend to the quotient")
    leq = frozenset((a, b) for a in quotient_elems for b in quotient_elems
                    if L.le(a, b))
    meet = {(a, b): L.meet[a, b] for a in quotient_elems for b in quotient_elems}
    join = {(a, b): L.join[a, b] for a in quotient_elems for b in quotient_elems}
    quotient = LatticeModel(tuple(quotient_elems), leq, meet, join, L.bottom, m)
    return quotient, proj


def is_boolean(L):
    """Every element has a complement."""
    for a in L.elements:
        if not any(L.meet[a, b] == L.bottom and L.join[a, b] == L.top
                   for b in L.elements):
            return False
    return True


def join_irreducibles(L):
    """Non-bottom elements that are not proper joins (Birkhoff test oracle)."""
    out = []
    for a in L.elements:
        if a == L.bottom:
            continue
        proper = [(b, c) for b in L.elements for c in L.elements
                  if L.join[b, c] == a and b != a and c != a]
        if not proper:
            out.append(a)
    return out


def random_lattice(seed, universe=4, max_size=6):
    """A random sublattice of the powerset of `universe` points.

    Elements are int masks; the closure of a few sampled subsets under union
    and intersection, resampled until it has at most max_size elements.
    Seed protocol: pass any hashable; suites use f"{master_seed}:{index}".
    """
    rng = random.Random(seed)
    full = list(range(1 << universe))
    while True:
        gens = rng.sample(full, rng.randint(1, 3))
        closure = set(gens)
        grew = True
        while grew:
            grew = False
            for a in list(closure):
                for b in list(closure):
                    for x in (a & b, a | b):
                        if x not in closure:
                            closure.add(x)
                            grew = True
        if len(closure) <= max_size:
            elems = tuple(sorted(closure))
            leq = frozenset((a, b) for a in elems for b in elems if a & b == a)
            return lattice_from_leq(elems, leq)


def random_lattices(count, master_seed=0, universe=4, max_size=6):
    return [random_lattice(f"{master_seed}:{i}", universe, max_size)
            for i in range(count)]
