"""Finite categories and functors as explicit tables.

Objects and morphisms are hashable ids (strings in hand-written fixtures,
tuples in derived categories).  Hom-sets are ordered lists and every
enumeration below iterates in id order, so all outputs are deterministic.
Tables are immutable after construction by convention; nothing here mutates
its inputs.
"""

from dataclasses import dataclass, field

from .errors import MalformedTable


@dataclass
class Violation:
    """One violated axiom instance."""

    law: str
    detail: tuple

    def __str__(self):
        return f"{self.law}{self.detail!r}"


@dataclass
class ValidationReport:
    violations: list

    @property
    def ok(self):
        return not self.violations

    def __str__(self):
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations)


@dataclass
class CategoryTable:
    """A finite category: indexed objects, hom-lists, and a total composition table.

    compose[(g, f)] = g after f, defined exactly when dst(f) == src(g).
    """

    objects: tuple
    homs: dict  # (src, dst) -> tuple of morphism ids
    identity: dict  # object -> morphism id
    compose: dict  # (g, f) -> morphism id

    src: dict = field(init=False, repr=False)
    dst: dict = field(init=False, repr=False)
    morphisms: tuple = field(init=False, repr=False)
    obj_index: dict = field(init=False, repr=False)
    mor_index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.objects = tuple(self.objects)
        self.homs = {k: tuple(v) for k, v in self.homs.items()}
        self.obj_index = {a: i for i, a in enumerate(self.objects)}
        src, dst, morphisms = {}, {}, []
        for a, b in sorted(self.homs, key=self._hom_key):
            for f in self.homs[a, b]:
                if f in src:
                    raise MalformedTable(f"morphism {f!r} appears in two hom-sets")
                src[f], dst[f] = a, b
                morphisms.append(f)
        self.src, self.dst = src, dst
        self.morphisms = tuple(morphisms)
        self.mor_index = {f: i for i, f in enumerate(self.morphisms)}

    def _hom_key(self, ab):
        a, b = ab
        return (self.obj_index[a], self.obj_index[b])

    def hom(self, a, b):
        return self.homs.get((a, b), ())

    def comp(self, g, f):
        """g after f; KeyError if the pair is not composable or not tabled."""
        return self.compose[g, f]

    def parallel_pairs(self):
        """All ordered pairs (f, g) with same src and dst, in id order."""
        for fs in self.homs.values():
            for f in fs:
                for g in fs:
                    yield f, g


def is_posetal(c):
    """True iff every hom-set has at most one element.

    In a posetal table any two parallel morphisms are equal, so every law
    whose two sides are parallel and defined holds as soon as the structural
    checks pass; validators use this to skip law enumeration.
    """
    return all(len(fs) <= 1 for fs in c.homs.values())


def validate_category(c):
    """Check well-formedness (raises MalformedTable) and the category laws.

    Returns a report listing every violated associativity triple and unit law
    pair; the report is empty iff c is a category.
    """
    _check_structure(c)
    violations = []
    if is_posetal(c):
        return ValidationReport(violations)
    for f in c.morphisms:
        if c.comp(f, c.identity[c.src[f]]) != f:
            violations.append(Violation("unit-right", (f,)))
        if c.comp(c.identity[c.dst[f]], f) != f:
            violations.append(Violation("unit-left", (f,)))
    for f in c.morphisms:
        for b2 in c.objects:
            for g in c.hom(c.dst[f], b2):
                for h_dst in c.objects:
                    for h in c.hom(b2, h_dst):
                        if c.comp(h, c.comp(g, f)) != c.comp(c.comp(h, g), f):
                            violations.append(Violation("associativity", (h, g, f)))
    return ValidationReport(violations)


def _check_structure(c):
    known_obj = set(c.objects)
    for (a, b), fs in c.homs.items():
        if a not in known_obj or b not in known_obj:
            raise MalformedTable(f"hom-set key ({a!r}, {b!r}) names unknown objects")
    for a in c.objects:
        i = c.identity.get(a)
        if i is None or c.src.get(i) != a or c.dst.get(i) != a:
            raise MalformedTable(f"identity of {a!r} missing or not an endomorphism")
    for (a, b), fs in c.homs.items():
        for c2 in c.objects:
            for g in c.hom(b, c2):
                for f in fs:
                    if (g, f) not in c.compose:
                        raise MalformedTable(
                            f"compose undefined on composable pair ({g!r}, {f!r})")
    for (g, f), r in c.compose.items():
        if f not in c.mor_index or g not in c.mor_index:
            raise MalformedTable(f"compose key ({g!r}, {f!r}) names unknown morphisms")
        if c.dst[f] != c.src[g]:
            raise MalformedTable(f"compose defined on non-composable pair ({g!r}, {f!r})")
        if r not in c.mor_index:
            raise MalformedTable(f"compose({g!r}, {f!r}) = {r!r} is not a morphism")
        if c.src[r] != c.src[f] or c.dst[r] != c.dst[g]:
            raise MalformedTable(f"compose({g!r}, {f!r}) = {r!r} has wrong src/dst")


def is_mono(c, f):
    """Brute force over all parallel pairs into src(f)."""
    a = c.src[f]
    for x in c.objects:
        for g in c.hom(x, a):
            for h in c.hom(x, a):
                if g != h and c.comp(f, g) == c.comp(f, h):
                    return False
    return True


def is_epi(c, f):
    b = c.dst[f]
    for x in c.objects:
        for g in c.hom(b, x):
            for h in c.hom(b, x):
                if g != h and c.comp(g, f) == c.comp(h, f):
                    return False
    return True


def inverse_of(c, f):
    """The two-sided inverse of f, or None."""
    a, b = c.src[f], c.dst[f]
    for g in c.hom(b, a):
        if c.comp(g, f) == c.identity[a] and c.comp(f, g) == c.identity[b]:
            return g
    return None


def is_iso(c, f):
    return inverse_of(c, f) is not None


def isos_between(c, a, b):
    return [f for f in c.hom(a, b) if is_iso(c, f)]


def is_initial(c, z):
    return all(len(c.hom(z, x)) == 1 for x in c.objects)


def is_terminal(c, t):
    return all(len(c.hom(x, t)) == 1 for x in c.objects)


def find_initial(c):
    for z in c.objects:
        if is_initial(c, z):
            return z
    return None


@dataclass
class FunctorTable:
    """A functor between CategoryTables, as explicit object and morphism maps."""

    source: CategoryTable
    target: CategoryTable
    obj_map: dict
    mor_map: dict


def validate_functor(F):
    """Report every src/dst, identity, or composition preservation failure."""
    c, d = F.source, F.target
    violations = []
    for f in c.morphisms:
        g = F.mor_map.get(f)
        if g is None or g not in d.mor_index:
            violations.append(Violation("mor-map-dangling", (f,)))
            continue
        if d.src[g] != F.obj_map[c.src[f]] or d.dst[g] != F.obj_map[c.dst[f]]:
            violations.append(Violation("src-dst", (f,)))
    for a in c.objects:
        if F.mor_map.get(c.identity[a]) != d.identity[F.obj_map[a]]:
            violations.append(Violation("identity", (a,)))
    for (g, f), r in c.compose.items():
        fg, ff = F.mor_map.get(g), F.mor_map.get(f)
        if fg is None or ff is None:
            continue
        if d.compose.get((fg, ff)) != F.mor_map.get(r):
            violations.append(Violation("composition", (g, f)))
    return ValidationReport(violations)
