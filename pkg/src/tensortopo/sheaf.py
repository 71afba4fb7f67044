"""Restriction categories C|u, stalks, the sheaf condition, and the
end-to-end representation pipeline.

C|u is the co-Kleisli category of the comonad - ten U: objects are those of
the base, morphisms A -> B are base morphisms A ten U -> B, and composition
splits the U wire with the inverse of u ten U.  A stalk C|x is realized as
C|min(x): every filter of a finite lattice is principal, and the germ
description of the colimit is kept as a checked invariant rather than as the
data structure.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .catcore import CategoryTable, FunctorTable, find_initial, inverse_of, is_epi, isos_between
from .errors import HypothesisNotMet, NotAFilter, NotComparable, NotSymmetric, SearchBudgetExceeded
from .moncat import (MonoidalFunctorTable, MonoidalTable, validate_monoidal,
                     validate_monoidal_functor)
from .zi import (CentralIdempotentRecord, Verdict, ZILattice, central_idempotents,
                 classify, has_universal_finite_joins, has_universal_joins,
                 is_stiff, to_lattice_model, witness_leq)
from .spectrum import (LatticeModel, SpectrumSpace, germ_congruence,
                       is_spatial, spectrum as spectrum_of)


def crossing(m, rec, A):
    """The wire crossing A ten U -> U ten A used by derived tensors.

    Taken from the symmetry when present, else by inverting the recorded
    half-braiding component sigma_A : U ten A -> A ten U.
    """
    if m.symmetry is not None:
        return m.symmetry[A, rec.obj]
    inv = inverse_of(m.base, rec.half_braidings[0][A])
    if inv is None:
        raise NotSymmetric(
            f"derived tensor at {A!r} needs an invertible half-braiding")
    return inv


@dataclass
class RestrictionCategory:
    """Handle for C|u; the full monoidal table is built and validated lazily.

    Derived morphism ids are ("r", A, f) for f : A ten U -> B in the base,
    so |C|u(A, B)| = |C(A ten U, B)| by construction.
    """

    base_mon: MonoidalTable
    zi: ZILattice
    cls: int
    _table: MonoidalTable = field(default=None, repr=False)

    @property
    def rec(self):
        return self.zi.classes[self.cls]

    def hom_mors(self, A, B):
        m = self.base_mon
        AU = m.ten_o(A, self.rec.obj)
        return tuple(("r", A, f) for f in m.base.hom(AU, B))

    def underlying(self, rf):
        return rf[2]

    def quotient_of(self, f):
        """The image of a base morphism under C -> C|u: f maps to f ten u."""
        m = self.base_mon
        return ("r", m.base.src[f], m.ten_m(f, self.rec.mor))

    @property
    def table(self):
        if self._table is None:
            self._table = self._build()
        return self._table

    def _build(self):
        m, rec = self.base_mon, self.rec
        c = m.base
        U, u, delta = rec.obj, rec.mor, rec.inverse
        homs, derived = {}, []
        for A in c.objects:
            AU = m.ten_o(A, U)
            for B in c.objects:
                fs = c.hom(AU, B)
                if fs:
                    homs[A, B] = tuple(("r", A, f) for f in fs)
                    derived.extend((A, f) for f in fs)
        identity = {A: ("r", A, m.lwhisk(A, u)) for A in c.objects}
        compose = {}
        for A in c.objects:
            AU = m.ten_o(A, U)
            split = m.lwhisk(A, delta)  # A ten U -> A ten U ten U
            for B in c.objects:
                for f in c.hom(AU, B):
                    pre = c.comp(m.rwhisk(f, U), split)  # A ten U -> B ten U
                    BU = m.ten_o(B, U)
                    for C2 in c.objects:
                        for g in c.hom(BU, C2):
                            compose[("r", B, g), ("r", A, f)] = ("r", A, c.comp(g, pre))
        tensor_mor = {}
        for A, f in derived:
            for C2, g in derived:
                AC = m.ten_o(A, C2)
                pre = m.lwhisk(AC, delta)
                mid = m.rwhisk(m.lwhisk(A, crossing(m, rec, C2)), U)
                tensor_mor[("r", A, f), ("r", C2, g)] = \
                    ("r", AC, c.comp(m.ten_m(f, g), c.comp(mid, pre)))
        symmetry = None
        if m.symmetry is not None:
            symmetry = {(A, B): ("r", m.ten_o(A, B), m.ten_m(m.symmetry[A, B], u))
                        for A in c.objects for B in c.objects}
        base = CategoryTable(c.objects, homs, identity, compose)
        table = MonoidalTable(base, m.unit, m.tensor_obj, tensor_mor, symmetry)
        rep = validate_monoidal(table)
        if not rep.ok:
            raise RuntimeError(f"derived restriction table invalid: {rep}")
        return table


def restrict(m, zi, cls):
    """The fully materialized, validated restriction category C|u."""
    sec = RestrictionCategory(m, zi, cls)
    sec.table
    return sec


def restriction_functor(sec_v, sec_u):
    """The strict monoidal functor C|v -> C|u for u <= v: identity on
    objects, post-whiskering with the mediating U -> V on morphisms."""
    m, zi = sec_v.base_mon, sec_v.zi
    if not zi.le(sec_u.cls, sec_v.cls):
        raise NotComparable(f"class {sec_u.cls} is not below {sec_v.cls}")
    med = witness_leq(m, sec_u.rec, sec_v.rec)
    c = m.base
    tv, tu = sec_v.table, sec_u.table
    mor_map = {}
    for rf in tv.base.morphisms:
        _, A, f = rf
        mor_map[rf] = ("r", A, c.comp(f, m.lwhisk(A, med)))
    f_table = FunctorTable(tv.base, tu.base,
                           {A: A for A in c.objects}, mor_map)
    theta = {(A, B): tu.base.identity[m.ten_o(A, B)]
             for A in c.objects for B in c.objects}
    F = MonoidalFunctorTable(f_table, tv, tu, tu.base.identity[m.unit], theta)
    rep = validate_monoidal_functor(F)
    if not rep.ok:
        raise RuntimeError(f"restriction functor invalid: {rep}")
    return F


@dataclass
class AdjunctionResult:
    """The left adjoint A |-> A ten U of a restriction functor, with its
    oplax coherence cells and unit/counit, plus the verification verdict."""

    functor: FunctorTable
    theta_unit: object
    theta: dict  # oplax: L(A ten B) -> L(A) ten L(B)
    unit: dict
    unit_inverse: dict
    counit: dict
    verdict: Verdict


def left_adjoint_functor(sec_u, sec_v):
    """Left adjoint C|u -> C|v of C|{u <= v}, with invertible unit.

    Verifies the triangle identities and the natural hom-bijection
    |C|v(A ten U, B)| = |C|u(A, B)| exhaustively.
    """
    m, zi = sec_u.base_mon, sec_u.zi
    if not zi.le(sec_u.cls, sec_v.cls):
        raise NotComparable(f"class {sec_u.cls} is not below {sec_v.cls}")
    c = m.base
    ru, rv = sec_u.rec, sec_v.rec
    U, u, delta = ru.obj, ru.mor, ru.inverse
    v = rv.mor
    tu, tv = sec_u.table, sec_v.table
    obj_map = {A: m.ten_o(A, U) for A in c.objects}
    mor_map = {}
    for rf in tu.base.morphisms:
        _, A, f = rf
        inner = c.comp(m.rwhisk(f, U), m.lwhisk(A, delta))  # A ten U -> B ten U
        mor_map[rf] = ("r", obj_map[A], m.ten_m(inner, v))
    functor = FunctorTable(tu.base, tv.base, obj_map, mor_map)
    theta_unit = ("r", U, m.ten_m(u, v))  # L(I) = U -> I in C|v
    theta = {}
    for A in c.objects:
        for B in c.objects:
            AB = m.ten_o(A, B)
            inner = c.comp(m.rwhisk(m.lwhisk(A, crossing(m, ru, B)), U),
                           m.lwhisk(AB, delta))  # A ten B ten U -> A ten U ten B ten U
            theta[A, B] = ("r", obj_map[AB], m.ten_m(inner, v))
    unit = {A: ("r", A, c.identity[m.ten_o(A, U)]) for A in c.objects}
    unit_inverse = {A: ("r", m.ten_o(A, U), m.ten_m(m.lwhisk(A, u), u))
                    for A in c.objects}
    counit = {B: ("r", m.ten_o(B, U), m.ten_m(m.lwhisk(B, u), v))
              for B in c.objects}
    verdict = _verify_adjunction(sec_u, sec_v, functor, unit, unit_inverse, counit)
    return AdjunctionResult(functor, theta_unit, theta, unit, unit_inverse,
                            counit, verdict)


def _verify_adjunction(sec_u, sec_v, L, unit, unit_inverse, counit):
    m = sec_u.base_mon
    c = m.base
    tu, tv = sec_u.table, sec_v.table
    R = restriction_functor(sec_v, sec_u)
    for A in c.objects:
        if tu.base.comp(unit_inverse[A], unit[A]) != tu.base.identity[A]:
            return Verdict("adjunction", False, witness={"unit-not-split": A})
        if tu.base.comp(unit[A], unit_inverse[A]) != tu.base.identity[m.ten_o(A, sec_u.rec.obj)]:
            return Verdict("adjunction", False, witness={"unit-not-invertible": A})
    for B in c.objects:
        lhs = tu.base.comp(R.f.mor_map[counit[B]], unit[B])
        if lhs != tu.base.identity[B]:
            return Verdict("adjunction", False, witness={"triangle-R": B})
    for A in c.objects:
        lhs = tv.base.comp(counit[m.ten_o(A, sec_u.rec.obj)], L.mor_map[unit[A]])
        if lhs != tv.base.identity[m.ten_o(A, sec_u.rec.obj)]:
            return Verdict("adjunction", False, witness={"triangle-L": A})
    for A in c.objects:
        LA = m.ten_o(A, sec_u.rec.obj)
        for B in c.objects:
            image = set()
            for rf in sec_u.hom_mors(A, B):
                image.add(tv.base.comp(counit[B], L.mor_map[rf]))
            if len(image) != len(sec_u.hom_mors(A, B)) \
                    or len(image) != len(sec_v.hom_mors(LA, B)):
                return Verdict("adjunction", False,
                               witness={"hom-bijection": (A, B)})
            for rf in sec_u.hom_mors(A, B):
                for rh in tu.base.morphisms:
                    if tu.base.dst[rh] != A:
                        continue
                    lhs = tv.base.comp(counit[B], L.mor_map[tu.base.comp(rf, rh)])
                    rhs = tv.base.comp(tv.base.comp(counit[B], L.mor_map[rf]),
                                       L.mor_map[rh])
                    if lhs != rhs:
                        return Verdict("adjunction", False,
                                       witness={"naturality-src": (rf, rh)})
                for rk in tv.base.morphisms:
                    if tv.base.src[rk] != B:
                        continue
                    lhs = tv.base.comp(counit[tv.base.dst[rk]],
                                       L.mor_map[tu.base.comp(R.f.mor_map[rk], rf)])
                    rhs = tv.base.comp(rk, tv.base.comp(counit[B], L.mor_map[rf]))
                    if lhs != rhs:
                        return Verdict("adjunction", False,
                                       witness={"naturality-dst": (rf, rk)})
    return Verdict("adjunction", True)


def check_zi_of_restriction(m, zi, sec):
    """ZI(C|u) is the down-set of u in ZI(C), as semilattices."""
    zs = central_idempotents(sec.table)
    down = zi.down_set(sec.cls)
    mapping = {}
    for k in down:
        rk = zi.classes[k]
        induced = CentralIdempotentRecord(
            rk.obj, ("r", rk.obj, m.ten_m(rk.mor, sec.rec.mor)), None, ())
        img = classify(sec.table, zs, induced)
        if img is None:
            return Verdict("zi_of_restriction", False,
                           witness={"class": zi.class_name(k)},
                           note="induced idempotent not found in C|u")
        mapping[k] = img
    if len(set(mapping.values())) != zs.n:
        return Verdict("zi_of_restriction", False,
                       witness={"down_set": len(down), "zi_Cu": zs.n},
                       note="not a bijection")
    for k1 in down:
        for k2 in down:
            if mapping[zi.meet[k1, k2]] != zs.meet[mapping[k1], mapping[k2]]:
                return Verdict("zi_of_restriction", False,
                               witness={"meet": (k1, k2)})
            if zi.le(k1, k2) != zs.le(mapping[k1], mapping[k2]):
                return Verdict("zi_of_restriction", False,
                               witness={"order": (k1, k2)})
    if mapping[sec.cls] != zs.top:
        return Verdict("zi_of_restriction", False, note="top not preserved")
    return Verdict("zi_of_restriction", True,
                   witness={"classes": len(down)})


@dataclass
class StalkCategory:
    """C|x realized as C|min(x), with the germ correspondence kept around.

    filter_classes are the ZI class indices of x, sorted; min_cls = meet(x).
    """

    base_mon: MonoidalTable
    zi: ZILattice
    filter_classes: tuple
    min_cls: int
    section: RestrictionCategory
    meds: dict = field(repr=False, default=None)  # k -> mediating M -> U_k
    _wit: dict = field(repr=False, default_factory=dict)

    def inject_at(self, k, A, f):
        """Realize the germ pair (u_k, f : A ten U_k -> B) at the minimum."""
        m = self.base_mon
        return ("r", A, m.base.comp(f, m.lwhisk(A, self.meds[k])))

    def _witness(self, k, k1):
        if (k, k1) not in self._wit:
            self._wit[k, k1] = witness_leq(
                self.base_mon, self.zi.classes[k], self.zi.classes[k1])
        return self._wit[k, k1]

    def germ_related(self, A, k1, f1, k2, f2):
        """Def-of-germs identification: equal after restricting to some u in x."""
        m, zi = self.base_mon, self.zi
        for k in self.filter_classes:
            if not (zi.le(k, k1) and zi.le(k, k2)):
                continue
            m1 = self._witness(k, k1)
            m2 = self._witness(k, k2)
            if m.base.comp(f1, m.lwhisk(A, m1)) == m.base.comp(f2, m.lwhisk(A, m2)):
                return True
        return False


def stalk(m, zi, filter_classes, sections=None):
    """The stalk at a filter of ZI classes, realized at its minimum.

    Checks that the carrier is a filter, and asserts the germ identification
    law of the realization: two pairs are identified iff their realizations
    at the minimum agree.
    """
    xs = tuple(sorted(set(filter_classes)))
    if not xs:
        raise NotAFilter("empty carrier")
    for k in xs:
        for j in range(zi.n):
            if zi.le(k, j) and j not in xs:
                raise NotAFilter(f"not upward closed at class {k}")
    min_cls = zi.meet_many(xs)
    if min_cls not in xs:
        raise NotAFilter("carrier does not contain its meet")
    if sections is not None and min_cls in sections:
        section = sections[min_cls]
    else:
        section = RestrictionCategory(m, zi, min_cls)
    meds = {k: witness_leq(m, zi.classes[min_cls], zi.classes[k]) for k in xs}
    st = StalkCategory(m, zi, xs, min_cls, section, meds)
    _assert_identification(st)
    return st


def _assert_identification(st):
    m, zi = st.base_mon, st.zi
    c = m.base
    for A in c.objects:
        for B in c.objects:
            pairs = [(k, f) for k in st.filter_classes
                     for f in c.hom(m.ten_o(A, zi.classes[k].obj), B)]
            for k1, f1 in pairs:
                r1 = st.inject_at(k1, A, f1)
                for k2, f2 in pairs:
                    r2 = st.inject_at(k2, A, f2)
                    related = st.germ_related(A, k1, f1, k2, f2)
                    if related != (r1 == r2):
                        raise RuntimeError(
                            f"germ identification mismatch at {(A, B, k1, k2)}")


def verify_stalk_colimit(m, zi, st):
    """The realization is the colimit of the restriction diagram over x.

    Builds the literal germ category (classes of pairs (u, f) under the
    identification) and checks the realization map is a bijection on
    hom-sets that respects composition and identities; the cocone maps are
    jointly surjective by construction, which pins the mediating functor.
    """
    c = m.base
    sec = st.section
    for A in c.objects:
        for B in c.objects:
            pairs = [(k, f) for k in st.filter_classes
                     for f in c.hom(m.ten_o(A, zi.classes[k].obj), B)]
            classes = []
            for k, f in pairs:
                for cl in classes:
                    k0, f0 = cl[0]
                    if st.germ_related(A, k, f, k0, f0):
                        cl.append((k, f))
                        break
                else:
                    classes.append([(k, f)])
            realized = [st.inject_at(k, A, f) for k, f in
                        (cl[0] for cl in classes)]
            if len(set(realized)) != len(classes) \
                    or len(classes) != len(sec.hom_mors(A, B)):
                return Verdict("stalk_colimit", False,
                               witness={"hom": (A, B),
                                        "germ_classes": len(classes),
                                        "section_homs": len(sec.hom_mors(A, B))})
    t = sec.table
    for A in c.objects:
        for B in c.objects:
            for k1 in st.filter_classes:
                U1 = zi.classes[k1].obj
                for f in c.hom(m.ten_o(A, U1), B):
                    for C2 in c.objects:
                        for k2 in st.filter_classes:
                            U2 = zi.classes[k2].obj
                            for g in c.hom(m.ten_o(B, U2), C2):
                                km, h = _germ_compose(m, zi, A, k1, f, k2, g)
                                lhs = st.inject_at(km, A, h)
                                rhs = t.base.comp(st.inject_at(k2, B, g),
                                                  st.inject_at(k1, A, f))
                                if lhs != rhs:
                                    return Verdict(
                                        "stalk_colimit", False,
                                        witness={"compose": (A, B, C2, k1, k2)})
    for A in c.objects:
        # the top class lies in every filter; its identity germ must realize
        # to the section identity
        ident = st.inject_at(zi.top, A, m.lwhisk(A, zi.classes[zi.top].mor))
        if ident != t.base.identity[A]:
            return Verdict("stalk_colimit", False, witness={"identity": A})
    return Verdict("stalk_colimit", True)


def _germ_compose(m, zi, A, k1, f, k2, g):
    """Composition of germ pairs: meet the indices, then convert the raw
    domain U1 ten U2 to the representative of the meet class."""
    c = m.base
    r1, r2 = zi.classes[k1], zi.classes[k2]
    km = zi.meet[k1, k2]
    raw = CentralIdempotentRecord(m.ten_o(r1.obj, r2.obj),
                                  m.ten_m(r1.mor, r2.mor), None, ())
    t = witness_leq(m, zi.classes[km], raw)
    composite = c.comp(g, m.rwhisk(f, r2.obj))  # A ten U1 ten U2 -> C
    return km, c.comp(composite, m.lwhisk(A, t))


def check_zi_of_stalk(m, zi, st):
    """ZI(C|x) is the germ quotient ZI(C)/~x; needs a braided (here:
    symmetric) base, otherwise the hypothesis gap is reported by raising."""
    if m.symmetry is None:
        raise NotSymmetric("ZI(C|x) ~ ZI(C)/~x requires a braided base")
    zs = central_idempotents(st.section.table)
    lat = to_lattice_model(zi) if zi.joins is not None else None
    if lat is None:
        raise HypothesisNotMet("germ congruence needs the computed ZI lattice")
    name_to_idx = {zi.class_name(i): i for i in range(zi.n)}
    carrier = [zi.class_name(k) for k in st.filter_classes]
    quotient, proj = germ_congruence(lat, carrier)
    down = [name_to_idx[e] for e in quotient.elements]
    mapping = {}
    for k in down:
        rk = zi.classes[k]
        induced = CentralIdempotentRecord(
            rk.obj, ("r", rk.obj, m.ten_m(rk.mor, st.section.rec.mor)), None, ())
        img = classify(st.section.table, zs, induced)
        if img is None:
            return Verdict("zi_of_stalk", False, witness={"class": zi.class_name(k)})
        mapping[k] = img
    ok = len(set(mapping.values())) == zs.n == len(down)
    if ok:
        for k1 in down:
            for k2 in down:
                km = name_to_idx[quotient.meet[zi.class_name(k1), zi.class_name(k2)]]
                if mapping[km] != zs.meet[mapping[k1], mapping[k2]]:
                    ok = False
    return Verdict("zi_of_stalk", ok,
                   witness={"quotient_size": len(down), "stalk_zi": zs.n})


def _poset_view(lat):
    if isinstance(lat, ZILattice):
        return (list(range(lat.n)), lat.le, lat.lub, lat.top)
    return (list(lat.elements), lat.le,
            lambda a, b: lat.join[a, b], lat.top)


def is_vee_local(lat):
    """At least two elements, and u v w = 1 only when u = 1 or w = 1."""
    els, le, lub, top = _poset_view(lat)
    if len(els) < 2:
        return False
    for u in els:
        for w in els:
            if lub(u, w) == top and u != top and w != top:
                return False
    return True


def is_bigvee_local(lat, subset_limit=4096):
    """The arbitrary-join version; on finite carriers it reduces to the
    binary case, checked exhaustively over subsets while small."""
    els, le, lub, top = _poset_view(lat)
    if len(els) < 2:
        return False
    if (1 << len(els)) <= subset_limit:
        for mask in range(1, 1 << len(els)):
            sub = [els[i] for i in range(len(els)) if mask >> i & 1]
            acc = sub[0]
            for x in sub[1:]:
                acc = lub(acc, x)
                if acc is None:
                    break
            if acc == top and top not in sub:
                return False
        return True
    return is_vee_local(lat)


def check_sheaf_equalizer(m, zi, i, j):
    """C|{u v v} is the pullback of C|u and C|v over C|{u ^ v}: every
    matching pair of morphisms glues along a unique morphism at the join."""
    if zi.joins is None:
        raise HypothesisNotMet("equalizer check needs universal finite joins")
    c = m.base
    k, w = zi.meet[i, j], zi.joins[i, j]
    ri, rj, rk, rw = (zi.classes[x] for x in (i, j, k, w))
    med_ki = witness_leq(m, rk, ri)
    med_kj = witness_leq(m, rk, rj)
    med_iw = witness_leq(m, ri, rw)
    med_jw = witness_leq(m, rj, rw)
    for A in c.objects:
        AUi = m.ten_o(A, ri.obj)
        AUj = m.ten_o(A, rj.obj)
        AW = m.ten_o(A, rw.obj)
        ri_map = m.lwhisk(A, med_ki)
        rj_map = m.lwhisk(A, med_kj)
        iw_map = m.lwhisk(A, med_iw)
        jw_map = m.lwhisk(A, med_jw)
        for B in c.objects:
            for f in c.hom(AUi, B):
                for g in c.hom(AUj, B):
                    if c.comp(f, ri_map) != c.comp(g, rj_map):
                        continue
                    hs = [h for h in c.hom(AW, B)
                          if c.comp(h, iw_map) == f and c.comp(h, jw_map) == g]
                    if len(hs) != 1:
                        return Verdict("sheaf_equalizer", False,
                                       witness={"u": ri.obj, "v": rj.obj,
                                                "hom": (A, B), "gluings": len(hs)})
    return Verdict("sheaf_equalizer", True, witness={"u": ri.obj, "v": rj.obj})


def check_zero_section(m):
    """C|0 is monoidally equivalent to the terminal category: all hom-sets
    of C|0 are singletons."""
    c = m.base
    zero = find_initial(c)
    if zero is None:
        raise HypothesisNotMet("no initial object")
    for A in c.objects:
        if not isos_between(c, m.ten_o(A, zero), zero):
            raise HypothesisNotMet("tensor does not absorb the initial object")
    for A in c.objects:
        A0 = m.ten_o(A, zero)
        for B in c.objects:
            if len(c.hom(A0, B)) != 1:
                return Verdict("zero_section", False, witness={"hom": (A, B)})
    return Verdict("zero_section", True)


def check_global_sections(m, sec_top):
    """Under strictness C|1 = C as tables (modulo the id wrapper)."""
    c = m.base
    t = sec_top.table
    for A in c.objects:
        for B in c.objects:
            if [rf[2] for rf in sec_top.hom_mors(A, B)] != list(c.hom(A, B)):
                return Verdict("global_sections", False, witness={"hom": (A, B)})
    for A in c.objects:
        if t.base.identity[A][2] != c.identity[A]:
            return Verdict("global_sections", False, witness={"identity": A})
    for (rg, rf), rr in t.base.compose.items():
        if rr[2] != c.comp(rg[2], rf[2]):
            return Verdict("global_sections", False, witness={"compose": (rg, rf)})
    for (rf, rg), rr in t.tensor_mor.items():
        if rr[2] != m.ten_m(rf[2], rg[2]):
            return Verdict("global_sections", False, witness={"tensor": (rf, rg)})
    return Verdict("global_sections", True)


def embed_into_product_of_stalks(m, zi, stalks):
    """The tuple functor into the product of all stalks: identity on
    objects; faithfulness checked by exhaustive comparison of germs."""
    c = m.base
    if zi.joins is None:
        raise HypothesisNotMet("product embedding needs universal finite joins")
    mins = {p: st.min_cls for p, st in stalks.items()}
    for A in c.objects:
        for B in c.objects:
            for f in c.hom(A, B):
                for g in c.hom(A, B):
                    if f == g:
                        continue
                    if all(m.ten_m(f, zi.classes[k].mor) ==
                           m.ten_m(g, zi.classes[k].mor) for k in mins.values()):
                        return None, Verdict("product_embedding", False,
                                             witness={"f": f, "g": g})
    maps = {p: {f: m.ten_m(f, zi.classes[k].mor) for f in c.morphisms}
            for p, k in mins.items()}
    return maps, Verdict("product_embedding", True,
                         note=f"faithful into {len(stalks)} stalks")


def all_epis_split(c):
    for f in c.morphisms:
        if is_epi(c, f):
            b = c.dst[f]
            if not any(c.comp(f, s) == c.identity[b]
                       for s in c.hom(b, c.src[f])):
                return False
    return True


def check_stalk_inherits(m, zi, st):
    """Stiffness, universal finite joins, and epi-splitting survive passage
    to the stalk realization."""
    t = st.section.table
    zs = central_idempotents(t)
    parts = {}
    parts["stiff"] = is_stiff(t, zs).ok
    parts["universal_finite_joins"] = has_universal_finite_joins(t, zs).ok
    if all_epis_split(m.base):
        parts["epis_split"] = all_epis_split(t.base)
    else:
        parts["epis_split"] = "not applicable (base has non-split epis)"
    ok = all(v is True or isinstance(v, str) for v in parts.values())
    return Verdict("stalk_inherits", ok, witness=parts)


@dataclass
class SheafReport:
    """The assembled representation: spectrum, sections, stalks, verdicts."""

    zi: ZILattice = None
    lattice: LatticeModel = None
    space: SpectrumSpace = None
    cp_space: SpectrumSpace = None
    sections: dict = field(default_factory=dict)
    stalks: dict = field(default_factory=dict)
    stalk_info: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    global_sections_count: int = None
    half_braiding_counts: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(v.ok for v in self.verdicts.values() if not v.skipped)


def represent(m, halfbraiding_budget=None, jobs=1):
    """The full pipeline: ZI, stiffness, universal joins, spectrum, sections,
    stalks, locality, equalizers, zero section, global sections, product
    embedding, spatiality.  Individual verdict failures are recorded and the
    pipeline never aborts midway."""
    from .zi import DEFAULT_HALFBRAIDING_BUDGET
    budget = halfbraiding_budget or DEFAULT_HALFBRAIDING_BUDGET
    report = SheafReport()
    v = report.verdicts
    try:
        zi = central_idempotents(m, budget)
    except SearchBudgetExceeded as e:
        v["zi"] = Verdict("zi", False, note=str(e))
        _skip_rest(v, "central idempotents not computed")
        return report
    report.zi = zi
    report.half_braiding_counts = {
        str(zi.class_name(i)): len(zi.classes[i].half_braidings)
        for i in range(zi.n)}
    v["zi"] = Verdict("zi", True, note=f"{zi.n} classes")
    v["stiff"] = is_stiff(m, zi)
    v["universal_finite_joins"] = has_universal_finite_joins(m, zi)
    v["universal_joins"] = has_universal_joins(m, zi)
    if not v["universal_finite_joins"].ok:
        _skip_rest(v, "hypothesis unmet: universal finite joins failed")
        return report
    lat = to_lattice_model(zi)
    report.lattice = lat
    report.space = spectrum_of(lat)
    report.cp_space = spectrum_of(lat, completely_prime=True)
    v["prime_equals_completely_prime"] = Verdict(
        "prime_equals_completely_prime",
        [P.mask for P in report.space.points] ==
        [P.mask for P in report.cp_space.points])
    name_to_idx = {zi.class_name(i): i for i in range(zi.n)}
    report.sections = {k: RestrictionCategory(m, zi, k) for k in range(zi.n)}
    local, biglocal, two_valued = True, True, True
    for p, P in enumerate(report.space.points):
        xs = [name_to_idx[e] for e in P.members(lat)]
        st = stalk(m, zi, xs, report.sections)
        report.stalks[p] = st
        zs = central_idempotents(st.section.table)
        info = {"zi": [str(zs.class_name(i)) for i in range(zs.n)],
                "local": is_vee_local(zs),
                "bigvee_local": is_bigvee_local(zs),
                "two_valued": zs.n == 2}
        report.stalk_info[p] = info
        local &= info["local"]
        biglocal &= info["bigvee_local"]
        two_valued &= info["two_valued"]
    v["stalks_vee_local"] = Verdict("stalks_vee_local", local,
                                    note=f"{len(report.stalks)} stalks")
    v["stalks_bigvee_local"] = Verdict("stalks_bigvee_local", biglocal)
    pairs = [(i, j) for i in range(zi.n) for j in range(i, zi.n)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(
                lambda ij: check_sheaf_equalizer(m, zi, *ij), pairs))
    else:
        results = [check_sheaf_equalizer(m, zi, i, j) for i, j in pairs]
    bad = [r for r in results if not r.ok]
    v["sheaf_equalizers"] = bad[0] if bad else Verdict(
        "sheaf_equalizers", True, note=f"{len(pairs)} pairs")
    v["zero_section"] = check_zero_section(m)
    v["global_sections"] = check_global_sections(m, report.sections[zi.top])
    report.global_sections_count = len(m.base.objects)
    _, v["product_embedding"] = embed_into_product_of_stalks(m, zi, report.stalks)
    v["spatial"] = is_spatial(lat)
    return report


def _skip_rest(v, note):
    for name in ("prime_equals_completely_prime", "stalks_vee_local",
                 "stalks_bigvee_local", "sheaf_equalizers", "zero_section",
                 "global_sections", "product_embedding", "spatial"):
        if name not in v:
            v[name] = Verdict(name, False, skipped=True, note=note)
