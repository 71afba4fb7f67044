"""Shared fixture builders for the test suite."""

from tensortopo import from_monoid, from_quantale, from_semilattice, from_topology
from tensortopo.catcore import CategoryTable
from tensortopo.cli import boolean_algebra
from tensortopo.moncat import MonoidalTable

CHAIN3 = ("0", "m", "1")
CHAIN3_RANK = {"0": 0, "m": 1, "1": 2}


def chain3_meet(a, b):
    return a if CHAIN3_RANK[a] <= CHAIN3_RANK[b] else b


def chain3():
    return from_semilattice(CHAIN3, chain3_meet)


def boolean2():
    return boolean_algebra(2)


TOPO3_OPENS = ((), ("p",), ("p", "q"), ("p", "r"), ("p", "q", "r"))


def topo3():
    return from_topology(("p", "q", "r"), TOPO3_OPENS)


Q3 = ("0", "u", "1")
Q3_RANK = {"0": 0, "u": 1, "1": 2}


def q3_leq(a, b):
    return Q3_RANK[a] <= Q3_RANK[b]


def q3_mul(a, b):
    return a if Q3_RANK[a] <= Q3_RANK[b] else b


def q3():
    return from_quantale(Q3, q3_leq, q3_mul, "1")


def monoid_e_mul(a, b):
    return "1" if a == b == "1" else "e"


def monoid_e():
    return from_monoid(("1", "e"), monoid_e_mul, "1")


def lattice_as_category(L):
    """A LatticeModel (meets as tensor) viewed as a posetal monoidal category."""
    return from_semilattice(L.elements, lambda a, b: L.meet[a, b])


def halfbraiding_gap():
    """Three objects I, U, A with U ten A = A but A ten U = U, so
    hom(U ten A, A ten U) = hom(A, U) is empty: the left idempotent
    u : U -> I admits no half-braiding."""
    objs = ("I", "U", "A")
    ten = {("I", "I"): "I", ("I", "U"): "U", ("I", "A"): "A",
           ("U", "I"): "U", ("U", "U"): "U", ("U", "A"): "A",
           ("A", "I"): "A", ("A", "U"): "U", ("A", "A"): "A"}
    homs = {("I", "I"): ("iI",), ("U", "U"): ("iU",), ("A", "A"): ("iA",),
            ("U", "I"): ("u",), ("U", "A"): ("t",)}
    ident = {"I": "iI", "U": "iU", "A": "iA"}
    src = {"iI": "I", "iU": "U", "iA": "A", "u": "U", "t": "U"}
    dst = {"iI": "I", "iU": "U", "iA": "A", "u": "I", "t": "A"}
    compose = {}
    for f in src:
        for g in src:
            if dst[f] == src[g]:
                if g == ident[src[g]]:
                    compose[g, f] = f
                elif f == ident[src[f]]:
                    compose[g, f] = g
    base = CategoryTable(objs, homs, ident, compose)
    ids = {"I": "iI", "U": "iU", "A": "iA"}
    tm = {}
    for f in src:
        for g in src:
            s = ten[src[f], src[g]]
            d = ten[dst[f], dst[g]]
            if s == d:
                tm[f, g] = ids[s]
            elif (s, d) == ("U", "I"):
                tm[f, g] = "u"
            elif (s, d) == ("U", "A"):
                tm[f, g] = "t"
            else:
                raise AssertionError((f, g, s, d))
    return MonoidalTable(base, "I", ten, tm, None)


def doubled_bottom():
    """The Boolean algebra 2^2 with an extra idempotent endomorphism e on
    the bottom object.  Valid monoidal table (no symmetry declared), but the
    stiffness pullbacks fail: cones into the bottom have two mediators.
    Tensor entries landing in hom(0,0) collapse to e whenever e or one of
    the marked whiskerings is involved."""
    els = ((), ("a",), ("b",), ("a", "b"))
    meet = {(x, y): tuple(sorted(set(x) & set(y))) for x in els for y in els}
    leq = {(x, y): set(x) <= set(y) for x in els for y in els}
    bot, top = (), ("a", "b")
    homs, src, dst = {}, {}, {}
    for x in els:
        for y in els:
            if leq[x, y]:
                f = ("le", x, y)
                homs.setdefault((x, y), []).append(f)
                src[f], dst[f] = x, y
    homs[bot, bot].append("e")
    src["e"], dst["e"] = bot, bot
    ident = {x: ("le", x, x) for x in els}
    compose = {}
    for f in list(src):
        for g in list(src):
            if dst[f] != src[g]:
                continue
            if f == "e" and g == "e":
                compose[g, f] = "e"
            elif f == "e":
                compose[g, f] = g if g != ident[bot] else "e"
            elif g == "e":
                compose[g, f] = f if f != ident[bot] else "e"
            else:
                compose[g, f] = ("le", src[f], dst[g])
    base = CategoryTable(els, {k: tuple(v) for k, v in homs.items()},
                         ident, compose)
    ten = dict(meet)
    special = {(("le", bot, bot), ("le", ("a",), top)),
               (("le", bot, bot), ("le", ("b",), top)),
               (("le", ("a",), top), ("le", bot, bot)),
               (("le", ("b",), top), ("le", bot, bot))}
    tm = {}
    for f in src:
        for g in src:
            s = meet[src[f], src[g]]
            d = meet[dst[f], dst[g]]
            if s == bot and d == bot:
                if f == "e" or g == "e" or (f, g) in special:
                    tm[f, g] = "e"
                else:
                    tm[f, g] = ("le", bot, bot)
            else:
                tm[f, g] = ("le", s, d)
    return MonoidalTable(base, top, ten, tm, None)
