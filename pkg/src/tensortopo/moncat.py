"""Strict monoidal structure on a CategoryTable, plus builders.

Everything is strict: the tensor of objects is associative and unital on the
nose, and unitors/associators are carried as identity morphisms.  Builders
cover the example classes the engine ships with: meet-semilattices,
quantales, topologies (frames of opens), and commutative monoids.
"""

from dataclasses import dataclass, field
from itertools import product

from . import catcore
from .catcore import (CategoryTable, FunctorTable, ValidationReport,
                      Violation, inverse_of, is_posetal, validate_functor)
from .errors import (MalformedTable, NotAMonoid, NotAQuantale,
                     NotASemilattice, NotATopology)


@dataclass
class MonoidalTable:
    """Strict tensor data layered on a CategoryTable.

    tensor_obj[(A, B)] = A tensor B; tensor_mor[(f, g)] = f tensor g;
    symmetry, when present, holds the braiding components (A, B) -> sigma.
    """

    base: CategoryTable
    unit: object
    tensor_obj: dict
    tensor_mor: dict
    symmetry: dict = None

    def ten_o(self, a, b):
        return self.tensor_obj[a, b]

    def ten_m(self, f, g):
        return self.tensor_mor[f, g]

    def id_(self, a):
        return self.base.identity[a]

    def lwhisk(self, a, f):
        """a tensor f, i.e. id_a tensor f."""
        return self.tensor_mor[self.base.identity[a], f]

    def rwhisk(self, f, a):
        """f tensor a."""
        return self.tensor_mor[f, self.base.identity[a]]


def validate_monoidal(m):
    """Check strictness, functoriality of the tensor, and symmetry laws.

    Raises MalformedTable for partial tensor tables; law violations are
    reported, not thrown.  Posetal tables skip law enumeration: once the
    tables are total and well-typed, all two-sided laws compare parallel
    morphisms in subsingleton hom-sets.
    """
    c = m.base
    violations = []
    if m.unit not in c.obj_index:
        raise MalformedTable(f"unit {m.unit!r} is not an object")
    for a in c.objects:
        for b in c.objects:
            if (a, b) not in m.tensor_obj:
                raise MalformedTable(f"tensor_obj partial at ({a!r}, {b!r})")
            if m.tensor_obj[a, b] not in c.obj_index:
                raise MalformedTable(f"tensor_obj({a!r}, {b!r}) unknown")
    for f in c.morphisms:
        for g in c.morphisms:
            if (f, g) not in m.tensor_mor:
                raise MalformedTable(f"tensor_mor partial at ({f!r}, {g!r})")
            r = m.tensor_mor[f, g]
            if r not in c.mor_index:
                raise MalformedTable(f"tensor_mor({f!r}, {g!r}) unknown")
            if (c.src[r] != m.ten_o(c.src[f], c.src[g])
                    or c.dst[r] != m.ten_o(c.dst[f], c.dst[g])):
                violations.append(Violation("tensor-typing", (f, g)))
    for a in c.objects:
        if m.ten_o(m.unit, a) != a or m.ten_o(a, m.unit) != a:
            violations.append(Violation("strict-unit", (a,)))
        for b in c.objects:
            for d in c.objects:
                if m.ten_o(m.ten_o(a, b), d) != m.ten_o(a, m.ten_o(b, d)):
                    violations.append(Violation("strict-assoc", (a, b, d)))
    if m.symmetry is not None:
        for a in c.objects:
            for b in c.objects:
                s = m.symmetry.get((a, b))
                if s is None:
                    raise MalformedTable(f"symmetry partial at ({a!r}, {b!r})")
                if c.src[s] != m.ten_o(a, b) or c.dst[s] != m.ten_o(b, a):
                    violations.append(Violation("symmetry-typing", (a, b)))
    if violations or is_posetal(c):
        return ValidationReport(violations)

    id_unit = c.identity[m.unit]
    for a in c.objects:
        for b in c.objects:
            if m.ten_m(c.identity[a], c.identity[b]) != c.identity[m.ten_o(a, b)]:
                violations.append(Violation("tensor-identity", (a, b)))
    for f in c.morphisms:
        if m.ten_m(f, id_unit) != f or m.ten_m(id_unit, f) != f:
            violations.append(Violation("strict-unit-mor", (f,)))
    for f in c.morphisms:
        for g in c.morphisms:
            for h in c.morphisms:
                if m.ten_m(m.ten_m(f, g), h) != m.ten_m(f, m.ten_m(g, h)):
                    violations.append(Violation("strict-assoc-mor", (f, g, h)))
    for (g, f), gf in c.compose.items():
        for (k, h), kh in c.compose.items():
            if m.ten_m(gf, kh) != c.comp(m.ten_m(g, k), m.ten_m(f, h)):
                violations.append(Violation("tensor-interchange", (g, f, k, h)))
    if m.symmetry is not None:
        for a in c.objects:
            for b in c.objects:
                s, s_back = m.symmetry[a, b], m.symmetry[b, a]
                if c.comp(s_back, s) != c.identity[m.ten_o(a, b)]:
                    violations.append(Violation("symmetry-inverse", (a, b)))
                for d in c.objects:
                    lhs = m.symmetry[m.ten_o(a, b), d]
                    rhs = c.comp(m.rwhisk(m.symmetry[a, d], b),
                                 m.lwhisk(a, m.symmetry[b, d]))
                    if lhs != rhs:
                        violations.append(Violation("symmetry-hexagon", (a, b, d)))
        for f in c.morphisms:
            for g in c.morphisms:
                lhs = c.comp(m.symmetry[c.dst[f], c.dst[g]], m.ten_m(f, g))
                rhs = c.comp(m.ten_m(g, f), m.symmetry[c.src[f], c.src[g]])
                if lhs != rhs:
                    violations.append(Violation("symmetry-naturality", (f, g)))
    return ValidationReport(violations)


def posetal_table(elements, leq, tensor_elem, unit, symmetric):
    """The posetal strict monoidal category of a preordered tensor carrier.

    Unique morphism ("le", a, b) exactly when leq(a, b); the caller
    guarantees leq is a partial order and tensor_elem is monotone.
    """
    elements = tuple(elements)
    homs, compose = {}, {}
    for a in elements:
        for b in elements:
            if leq(a, b):
                homs[a, b] = (("le", a, b),)
    for (a, b) in homs:
        for c2 in elements:
            if (b, c2) in homs:
                compose[("le", b, c2), ("le", a, b)] = ("le", a, c2)
    identity = {a: ("le", a, a) for a in elements}
    base = CategoryTable(elements, homs, identity, compose)
    tensor_obj = {(a, b): tensor_elem(a, b) for a in elements for b in elements}
    tensor_mor = {}
    for f in base.morphisms:
        for g in base.morphisms:
            _, a, b = f
            _, c2, d = g
            tensor_mor[f, g] = ("le", tensor_elem(a, c2), tensor_elem(b, d))
    symmetry = None
    if symmetric:
        symmetry = {(a, b): ("le", tensor_elem(a, b), tensor_elem(b, a))
                    for a in elements for b in elements}
    return MonoidalTable(base, unit, tensor_obj, tensor_mor, symmetry)


def from_semilattice(elements, meet_table):
    """Posetal category of a meet-semilattice: tensor = meet, unit = top."""
    elements = tuple(elements)
    meet = _as_pair_table(elements, meet_table)
    for a in elements:
        if meet[a, a] != a:
            raise NotASemilattice(f"meet not idempotent at {a!r}")
        for b in elements:
            if meet[a, b] != meet[b, a]:
                raise NotASemilattice(f"meet not commutative at ({a!r}, {b!r})")
            for c2 in elements:
                if meet[meet[a, b], c2] != meet[a, meet[b, c2]]:
                    raise NotASemilattice(f"meet not associative at ({a!r}, {b!r}, {c2!r})")
    tops = [t for t in elements if all(meet[a, t] == a for a in elements)]
    if not tops:
        raise NotASemilattice("no top element")
    return posetal_table(elements, lambda a, b: meet[a, b] == a,
                         lambda a, b: meet[a, b], tops[0], symmetric=True)


def from_quantale(elements, leq_table, mul_table, unit):
    """Posetal monoidal category of a (finite) quantale: tensor = mul."""
    elements = tuple(elements)
    leq = _as_relation(elements, leq_table)
    mul = _as_pair_table(elements, mul_table)
    _check_partial_order(elements, leq, NotAQuantale)
    join = _lub_table(elements, leq)
    meet = _glb_table(elements, leq)
    if join is None or meet is None:
        raise NotAQuantale("order is not a (complete) lattice")
    bottom = next(b for b in elements if all(leq[b, a] for a in elements))
    for a in elements:
        if mul[a, unit] != a or mul[unit, a] != a:
            raise NotAQuantale(f"unit law fails at {a!r}")
        if mul[a, bottom] != bottom or mul[bottom, a] != bottom:
            raise NotAQuantale(f"multiplication does not preserve the empty join at {a!r}")
        for b in elements:
            for c2 in elements:
                if mul[mul[a, b], c2] != mul[a, mul[b, c2]]:
                    raise NotAQuantale(f"multiplication not associative at ({a!r}, {b!r}, {c2!r})")
                if mul[a, join[b, c2]] != join[mul[a, b], mul[a, c2]]:
                    raise NotAQuantale(f"left distributivity fails at ({a!r}, {b!r}, {c2!r})")
                if mul[join[b, c2], a] != join[mul[b, a], mul[c2, a]]:
                    raise NotAQuantale(f"right distributivity fails at ({a!r}, {b!r}, {c2!r})")
    commutative = all(mul[a, b] == mul[b, a] for a in elements for b in elements)
    return posetal_table(elements, lambda a, b: leq[a, b],
                         lambda a, b: mul[a, b], unit, symmetric=commutative)


def from_topology(points, opens):
    """The frame O(X) of a finite topological space, as a posetal category.

    Open sets are canonicalized to sorted tuples of point names.
    """
    points = tuple(points)
    canon = [tuple(sorted(set(o))) for o in opens]
    if len(set(canon)) != len(canon):
        raise NotATopology("duplicate open sets")
    open_set = set(canon)
    whole = tuple(sorted(points))
    if () not in open_set or whole not in open_set:
        raise NotATopology("opens must contain the empty set and the whole space")
    for o in canon:
        if not set(o) <= set(points):
            raise NotATopology(f"open {o!r} contains unknown points")
    for a in canon:
        for b in canon:
            if tuple(sorted(set(a) & set(b))) not in open_set:
                raise NotATopology(f"intersection of {a!r} and {b!r} is not open")
            if tuple(sorted(set(a) | set(b))) not in open_set:
                raise NotATopology(f"union of {a!r} and {b!r} is not open")
    return posetal_table(tuple(canon), lambda a, b: set(a) <= set(b),
                         lambda a, b: tuple(sorted(set(a) & set(b))),
                         whole, symmetric=True)


def from_monoid(elements, mul_table, unit):
    """One-object strict monoidal category of a commutative monoid.

    Composition and tensor both multiply; interchange forces commutativity,
    so noncommutative input is rejected.
    """
    elements = tuple(elements)
    mul = _as_pair_table(elements, mul_table)
    for a in elements:
        if mul[a, unit] != a or mul[unit, a] != a:
            raise NotAMonoid(f"unit law fails at {a!r}")
        for b in elements:
            if mul[a, b] != mul[b, a]:
                raise NotAMonoid(f"noncommutative: {a!r} and {b!r} do not commute")
            for c2 in elements:
                if mul[mul[a, b], c2] != mul[a, mul[b, c2]]:
                    raise NotAMonoid(f"not associative at ({a!r}, {b!r}, {c2!r})")
    star = "*"
    base = CategoryTable((star,), {(star, star): elements}, {star: unit},
                         {(g, f): mul[g, f] for g in elements for f in elements})
    tensor_mor = {(f, g): mul[f, g] for f in elements for g in elements}
    symmetry = {(star, star): unit}
    return MonoidalTable(base, star, {(star, star): star}, tensor_mor, symmetry)


@dataclass
class MonoidalFunctorTable:
    """A lax monoidal functor with invertible unit coherence.

    theta_unit : I_D -> F(I_C); theta[(A, B)] : F(A) ten F(B) -> F(A ten B).
    """

    f: FunctorTable
    source: MonoidalTable
    target: MonoidalTable
    theta_unit: object
    theta: dict


def validate_monoidal_functor(F):
    """Empty report iff the functor laws, coherence squares, and the
    invertibility of theta_unit all hold."""
    violations = list(validate_functor(F.f).violations)
    c, d = F.source, F.target
    dc = d.base
    fo, fm = F.f.obj_map, F.f.mor_map
    if dc.src.get(F.theta_unit) != d.unit or dc.dst.get(F.theta_unit) != fo[c.unit]:
        violations.append(Violation("theta-unit-typing", ()))
    elif inverse_of(dc, F.theta_unit) is None:
        violations.append(Violation("theta-unit-not-invertible", ()))
    for a in c.base.objects:
        for b in c.base.objects:
            t = F.theta.get((a, b))
            if t is None or dc.src.get(t) != d.ten_o(fo[a], fo[b]) \
                    or dc.dst.get(t) != fo[c.ten_o(a, b)]:
                violations.append(Violation("theta-typing", (a, b)))
    if violations or is_posetal(dc):
        return ValidationReport(violations)
    for f in c.base.morphisms:
        for g in c.base.morphisms:
            a, b = c.base.src[f], c.base.src[g]
            a2, b2 = c.base.dst[f], c.base.dst[g]
            lhs = dc.comp(fm[c.ten_m(f, g)], F.theta[a, b])
            rhs = dc.comp(F.theta[a2, b2], d.ten_m(fm[f], fm[g]))
            if lhs != rhs:
                violations.append(Violation("theta-naturality", (f, g)))
    for a in c.base.objects:
        left = dc.comp(F.theta[a, c.unit], d.lwhisk(fo[a], F.theta_unit))
        right = dc.comp(F.theta[c.unit, a], d.rwhisk(F.theta_unit, fo[a]))
        if left != dc.identity[fo[a]] or right != dc.identity[fo[a]]:
            violations.append(Violation("theta-unitality", (a,)))
        for b in c.base.objects:
            for e in c.base.objects:
                lhs = dc.comp(F.theta[c.ten_o(a, b), e],
                              d.rwhisk(F.theta[a, b], fo[e]))
                rhs = dc.comp(F.theta[a, c.ten_o(b, e)],
                              d.lwhisk(fo[a], F.theta[b, e]))
                if lhs != rhs:
                    violations.append(Violation("theta-associativity", (a, b, e)))
    return ValidationReport(violations)


def identity_monoidal_functor(m):
    c = m.base
    f = FunctorTable(c, c, {a: a for a in c.objects},
                     {g: g for g in c.morphisms})
    theta = {(a, b): c.identity[m.ten_o(a, b)]
             for a in c.objects for b in c.objects}
    return MonoidalFunctorTable(f, m, m, c.identity[m.unit], theta)


def posetal_monoidal_functor(src, tgt, obj_map):
    """Monoidal functor between posetal tables, derived from an object map.

    Morphism action and coherence cells are the unique morphisms; raises
    MalformedTable when a required hom-set is empty (map not monotone or not
    lax monoidal).
    """
    sc, tc = src.base, tgt.base
    mor_map = {}
    for f in sc.morphisms:
        a, b = obj_map[sc.src[f]], obj_map[sc.dst[f]]
        hom = tc.hom(a, b)
        if not hom:
            raise MalformedTable(f"object map not monotone at {f!r}")
        mor_map[f] = hom[0]
    theta = {}
    for a in sc.objects:
        for b in sc.objects:
            hom = tc.hom(tgt.ten_o(obj_map[a], obj_map[b]), obj_map[src.ten_o(a, b)])
            if not hom:
                raise MalformedTable(f"no lax coherence cell at ({a!r}, {b!r})")
            theta[a, b] = hom[0]
    hom_unit = tc.hom(tgt.unit, obj_map[src.unit])
    if not hom_unit:
        raise MalformedTable("no unit coherence cell")
    f = FunctorTable(sc, tc, dict(obj_map), mor_map)
    return MonoidalFunctorTable(f, src, tgt, hom_unit[0], theta)


def _as_pair_table(elements, table):
    """Accept a dict keyed by pairs, a nested list (row-major), or a callable."""
    if callable(table):
        return {(a, b): table(a, b) for a in elements for b in elements}
    if isinstance(table, dict):
        return {(a, b): table[a, b] for a in elements for b in elements}
    idx = {a: i for i, a in enumerate(elements)}
    return {(a, b): table[idx[a]][idx[b]] for a in elements for b in elements}


def _as_relation(elements, rel):
    if callable(rel):
        return {(a, b): bool(rel(a, b)) for a in elements for b in elements}
    if isinstance(rel, dict):
        return {(a, b): bool(rel[a, b]) for a in elements for b in elements}
    if isinstance(rel, (set, frozenset)):
        return {(a, b): (a, b) in rel for a in elements for b in elements}
    idx = {a: i for i, a in enumerate(elements)}
    return {(a, b): bool(rel[idx[a]][idx[b]]) for a in elements for b in elements}


def _check_partial_order(elements, leq, err):
    for a in elements:
        if not leq[a, a]:
            raise err(f"order not reflexive at {a!r}")
        for b in elements:
            if leq[a, b] and leq[b, a] and a != b:
                raise err(f"order not antisymmetric at ({a!r}, {b!r})")
            for c2 in elements:
                if leq[a, b] and leq[b, c2] and not leq[a, c2]:
                    raise err(f"order not transitive at ({a!r}, {b!r}, {c2!r})")


def _lub_table(elements, leq):
    out = {}
    for a in elements:
        for b in elements:
            ubs = [x for x in elements if leq[a, x] and leq[b, x]]
            least = [x for x in ubs if all(leq[x, y] for y in ubs)]
            if len(least) != 1:
                return None
            out[a, b] = least[0]
    return out


def _glb_table(elements, leq):
    out = {}
    for a in elements:
        for b in elements:
            lbs = [x for x in elements if leq[x, a] and leq[x, b]]
            greatest = [x for x in lbs if all(leq[y, x] for y in lbs)]
            if len(greatest) != 1:
                return None
            out[a, b] = greatest[0]
    return out
