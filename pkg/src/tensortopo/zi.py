"""Central idempotents: detection, the ZI semilattice, stiffness, and
universal (finite) joins.

A central idempotent is a morphism u : U -> I such that u ten U is invertible
and equals U ten u, together with a half-braiding sigma_A : U ten A -> A ten U
that is natural, compatible with the tensor, and absorbs u.  Under strictness
all unitors are identities, so the defining equations become plain table
identities.
"""

from dataclasses import dataclass, field
from itertools import product

from .catcore import (find_initial, inverse_of, is_epi, is_iso, is_mono,
                      isos_between, is_terminal)
from .errors import CoherenceNotInvertible, CoverNotTotal, NotCartesian, SearchBudgetExceeded

DEFAULT_HALFBRAIDING_BUDGET = 10 ** 6


@dataclass
class Verdict:
    """A stored pass/fail/skipped outcome with its witness."""

    name: str
    ok: bool
    witness: object = None
    note: str = ""
    skipped: bool = False

    @property
    def status(self):
        if self.skipped:
            return "skipped"
        return "pass" if self.ok else "fail"

    def __str__(self):
        tail = f" [{self.note}]" if self.note else ""
        return f"{self.name}: {self.status}{tail}"


@dataclass
class CentralIdempotentRecord:
    """A witness (U, u, inverse of u ten U) plus every half-braiding found."""

    obj: object
    mor: object
    inverse: object
    half_braidings: tuple
    class_id: int = None


@dataclass
class ZILattice:
    """Central-idempotent classes with their order and meet tables.

    joins and bottom stay None until has_universal_finite_joins succeeds.
    members[i] lists every record in class i; classes[i] is the canonical
    representative (smallest (object, morphism) table position).
    """

    classes: tuple
    members: tuple
    leq: frozenset
    meet: dict
    top: int
    joins: dict = None
    bottom: int = None

    @property
    def n(self):
        return len(self.classes)

    def le(self, i, j):
        return (i, j) in self.leq

    def lub(self, i, j):
        """Least upper bound inside the computed poset, or None."""
        ubs = [k for k in range(self.n) if self.le(i, k) and self.le(j, k)]
        least = [k for k in ubs if all(self.le(k, l) for l in ubs)]
        return least[0] if len(least) == 1 else None

    def lub_many(self, idxs):
        idxs = list(idxs)
        if not idxs:
            return self.bottom
        acc = idxs[0]
        for k in idxs[1:]:
            acc = self.lub(acc, k) if acc is not None else None
            if acc is None:
                return None
        return acc

    def meet_many(self, idxs):
        idxs = list(idxs)
        acc = idxs[0]
        for k in idxs[1:]:
            acc = self.meet[acc, k]
        return acc

    def down_set(self, i):
        return [k for k in range(self.n) if self.le(k, i)]

    def class_name(self, i):
        return self.classes[i].obj


def find_left_idempotents(m):
    """All (U, u, inverse) with u ten U invertible and equal to U ten u."""
    c = m.base
    out = []
    for U in c.objects:
        idU = c.identity[U]
        for u in c.hom(U, m.unit):
            if m.ten_m(u, idU) != m.ten_m(idU, u):
                continue
            inv = inverse_of(c, m.ten_m(u, idU))
            if inv is not None:
                out.append((U, u, inv))
    return out


def is_half_braiding(m, U, u, sigma):
    """Naturality, the tensor law, and the u-absorption equation."""
    c = m.base
    idU = c.identity[U]
    for f in c.morphisms:
        a, b = c.src[f], c.dst[f]
        if c.comp(m.ten_m(f, idU), sigma[a]) != c.comp(sigma[b], m.ten_m(idU, f)):
            return False
    for a in c.objects:
        for b in c.objects:
            lhs = sigma[m.ten_o(a, b)]
            rhs = c.comp(m.lwhisk(a, sigma[b]), m.rwhisk(sigma[a], b))
            if lhs != rhs:
                return False
    for a in c.objects:
        if c.comp(m.lwhisk(a, u), sigma[a]) != m.rwhisk(u, a):
            return False
    return True


def find_half_braidings(m, U, u, budget=DEFAULT_HALFBRAIDING_BUDGET):
    """Half-braidings making the left idempotent (U, u) central.

    With a symmetry table the braiding components are the only candidate
    (and the returned list is a singleton or empty).  Without one the search
    is exhaustive over assignments sigma_A in hom(U ten A, A ten U), aborting
    with SearchBudgetExceeded above `budget` candidates.
    """
    c = m.base
    if m.symmetry is not None:
        sigma = {a: m.symmetry[U, a] for a in c.objects}
        return [sigma] if is_half_braiding(m, U, u, sigma) else []
    pools = []
    size = 1
    for a in c.objects:
        pool = c.hom(m.ten_o(U, a), m.ten_o(a, U))
        if not pool:
            return []
        pools.append(pool)
        size *= len(pool)
    if size > budget:
        raise SearchBudgetExceeded(budget, size)
    found = []
    for choice in product(*pools):
        sigma = dict(zip(c.objects, choice))
        if is_half_braiding(m, U, u, sigma):
            found.append(sigma)
    return found


def leq_raw(m, rec_a, rec_b):
    """u <= v iff U ten v : U ten V -> U is invertible (ordering criterion)."""
    c = m.base
    return inverse_of(c, m.lwhisk(rec_a.obj, rec_b.mor)) is not None


def witness_leq(m, rec_a, rec_b):
    """The mediating morphism U -> V with u = v . m, unique when u <= v."""
    c = m.base
    for g in c.hom(rec_a.obj, rec_b.obj):
        if c.comp(rec_b.mor, g) == rec_a.mor:
            return g
    return None


def central_idempotents(m, budget=DEFAULT_HALFBRAIDING_BUDGET):
    """The ZI semilattice: classes of central idempotents under mutual <=.

    Class representatives are canonical (smallest object/morphism table
    position); meets are located by classifying the tensor composite.
    """
    c = m.base
    records = []
    for U, u, inv in find_left_idempotents(m):
        braidings = find_half_braidings(m, U, u, budget)
        if braidings:
            records.append(CentralIdempotentRecord(U, u, inv, tuple(braidings)))
    order = {(i, j): leq_raw(m, a, b)
             for i, a in enumerate(records) for j, b in enumerate(records)}
    first_of_class, member_idxs = [], []
    for i in range(len(records)):
        for k, j in enumerate(first_of_class):
            if order[i, j] and order[j, i]:
                member_idxs[k].append(i)
                break
        else:
            first_of_class.append(i)
            member_idxs.append([i])
    reps, members, rep_pos = [], [], []
    for k, idxs in enumerate(member_idxs):
        best = min(idxs, key=lambda i: (c.obj_index[records[i].obj],
                                        c.mor_index[records[i].mor]))
        for i in idxs:
            records[i].class_id = k
        reps.append(records[best])
        members.append(tuple(records[i] for i in idxs))
        rep_pos.append(best)
    leq = frozenset((i, j) for i in range(len(reps)) for j in range(len(reps))
                    if order[rep_pos[i], rep_pos[j]])
    zi = ZILattice(tuple(reps), tuple(members), leq, {}, 0)
    top = [k for k, r in enumerate(reps)
           if r.obj == m.unit and r.mor == c.identity[m.unit]]
    if not top:
        top = [k for k in range(zi.n) if all(zi.le(l, k) for l in range(zi.n))]
    zi.top = top[0]
    meet = {}
    for i in range(zi.n):
        for j in range(zi.n):
            cand = CentralIdempotentRecord(
                m.ten_o(reps[i].obj, reps[j].obj),
                m.ten_m(reps[i].mor, reps[j].mor), None, ())
            k = classify(m, zi, cand)
            if k is None:
                raise RuntimeError(
                    f"meet of classes {i} and {j} is not a recognised central idempotent")
            meet[i, j] = k
    zi.meet = meet
    return zi


def classify(m, zi, rec):
    """The class of an arbitrary central-idempotent witness, or None."""
    for k, rep in enumerate(zi.classes):
        if leq_raw(m, rec, rep) and leq_raw(m, rep, rec):
            return k
    return None


def square_legs(m, A, rec_u, rec_v):
    """The stiffness/join square at A: corner maps out of A ten U ten V."""
    c = m.base
    AU = m.ten_o(A, rec_u.obj)
    AV = m.ten_o(A, rec_v.obj)
    AUV = m.ten_o(AU, rec_v.obj)
    to_left = m.lwhisk(AU, rec_v.mor)              # A ten U ten v : AUV -> AU
    to_right = m.rwhisk(m.lwhisk(A, rec_u.mor), rec_v.obj)  # A ten u ten V
    left_down = m.lwhisk(A, rec_u.mor)             # A ten u : AU -> A
    right_down = m.lwhisk(A, rec_v.mor)            # A ten v : AV -> A
    return AU, AV, AUV, to_left, to_right, left_down, right_down


def is_stiff(m, zi):
    """Brute-force pullback check of the u,v squares against every object."""
    c = m.base
    for i in range(zi.n):
        for j in range(i, zi.n):
            ru, rv = zi.classes[i], zi.classes[j]
            for A in c.objects:
                AU, AV, AUV, to_left, to_right, ld, rd = square_legs(m, A, ru, rv)
                for X in c.objects:
                    for f in c.hom(X, AU):
                        for g in c.hom(X, AV):
                            if c.comp(ld, f) != c.comp(rd, g):
                                continue
                            meds = [h for h in c.hom(X, AUV)
                                    if c.comp(to_left, h) == f and c.comp(to_right, h) == g]
                            if len(meds) != 1:
                                return Verdict(
                                    "stiff", False,
                                    witness={"A": A, "u": ru.obj, "v": rv.obj,
                                             "cone": (X, f, g), "mediators": len(meds)})
    return Verdict("stiff", True)


def has_universal_finite_joins(m, zi):
    """Clause (a): tensor-absorbing initial object; (b): binary joins in ZI;
    (c): each join square is simultaneously a pullback and a pushout.

    On success populates zi.joins and zi.bottom.
    """
    c = m.base
    zero = find_initial(c)
    if zero is None:
        return Verdict("universal_finite_joins", False,
                       note="clause (a): no initial object")
    for A in c.objects:
        if not isos_between(c, m.ten_o(A, zero), zero):
            return Verdict("universal_finite_joins", False,
                           witness={"A": A},
                           note="clause (a): A ten 0 not isomorphic to 0")
    bottom_rec = CentralIdempotentRecord(zero, c.hom(zero, m.unit)[0], None, ())
    bottom = classify(m, zi, bottom_rec)
    if bottom is None:
        return Verdict("universal_finite_joins", False,
                       note="clause (a): the initial object is not a central idempotent")
    joins = {}
    for i in range(zi.n):
        for j in range(zi.n):
            k = zi.lub(i, j)
            if k is None:
                return Verdict("universal_finite_joins", False,
                               witness={"pair": (zi.class_name(i), zi.class_name(j))},
                               note="clause (b): ZI lacks a binary join")
            joins[i, j] = k
    for i in range(zi.n):
        for j in range(i, zi.n):
            ru, rv, rw = zi.classes[i], zi.classes[j], zi.classes[joins[i, j]]
            med_u = witness_leq(m, ru, rw)
            med_v = witness_leq(m, rv, rw)
            for A in c.objects:
                bad = _join_square_fails(m, A, ru, rv, rw, med_u, med_v)
                if bad is not None:
                    return Verdict("universal_finite_joins", False,
                                   witness={"A": A, "u": ru.obj, "v": rv.obj, **bad},
                                   note="clause (c)")
    zi.joins = joins
    zi.bottom = bottom
    return Verdict("universal_finite_joins", True)


def _join_square_fails(m, A, ru, rv, rw, med_u, med_v):
    c = m.base
    AU, AV, AUV, to_left, to_right, _, _ = square_legs(m, A, ru, rv)
    AW = m.ten_o(A, rw.obj)
    bl_to_corner = m.lwhisk(A, med_u)   # A ten (U -> W) : AU -> AW
    tr_to_corner = m.lwhisk(A, med_v)
    for X in c.objects:
        for f in c.hom(X, AU):
            for g in c.hom(X, AV):
                if c.comp(bl_to_corner, f) != c.comp(tr_to_corner, g):
                    continue
                meds = [h for h in c.hom(X, AUV)
                        if c.comp(to_left, h) == f and c.comp(to_right, h) == g]
                if len(meds) != 1:
                    return {"kind": "pullback", "cone": (X, f, g), "mediators": len(meds)}
        for p in c.hom(AU, X):
            for q in c.hom(AV, X):
                if c.comp(p, to_left) != c.comp(q, to_right):
                    continue
                meds = [r for r in c.hom(AW, X)
                        if c.comp(r, bl_to_corner) == p and c.comp(r, tr_to_corner) == q]
                if len(meds) != 1:
                    return {"kind": "pushout", "cocone": (X, p, q), "mediators": len(meds)}
    return None


def has_universal_joins(m, zi, family_limit=4096):
    """Arbitrary joins via wide-cocone colimit checks over meet-closed families.

    On a finite carrier arbitrary joins reduce to the finite case, so the
    verdict always records that reduction; families are enumerated
    exhaustively only while 2^|ZI| stays within family_limit.
    """
    if zi.joins is None:
        fj = has_universal_finite_joins(m, zi)
        if not fj.ok:
            return Verdict("universal_joins", False, witness=fj.witness,
                           note=f"inherited from finite joins: {fj.note}")
    c = m.base
    note = "finite carrier: arbitrary joins reduce to finite joins"
    if (1 << zi.n) > family_limit:
        return Verdict("universal_joins", True,
                       note=note + f"; families not enumerated (2^{zi.n} > {family_limit})")
    checked = 0
    for mask in range(1, 1 << zi.n):
        fam = [k for k in range(zi.n) if mask >> k & 1]
        if any(zi.meet[i, j] not in fam for i in fam for j in fam):
            continue
        checked += 1
        w = zi.lub_many(fam)
        bad = _wide_cocone_fails(m, zi, fam, w)
        if bad is not None:
            return Verdict("universal_joins", False, witness=bad,
                           note="wide cocone not a colimit")
    return Verdict("universal_joins", True,
                   note=note + f"; {checked} meet-closed families checked exhaustively")


def _wide_cocone_fails(m, zi, fam, w):
    c = m.base
    rw = zi.classes[w]
    meds = {i: witness_leq(m, zi.classes[i], rw) for i in fam}
    diag = {(i, j): witness_leq(m, zi.classes[i], zi.classes[j])
            for i in fam for j in fam if zi.le(i, j)}
    for A in c.objects:
        legs = {i: m.lwhisk(A, meds[i]) for i in fam}
        arrows = {(i, j): m.lwhisk(A, d) for (i, j), d in diag.items()}
        for (i, j), a in arrows.items():
            if c.comp(legs[j], a) != legs[i]:
                return {"A": A, "cocone-leg-mismatch": (i, j)}
        for X in c.objects:
            for p in _commuting_cocones(c, m, A, zi, fam, arrows, X):
                AW = m.ten_o(A, rw.obj)
                rs = [r for r in c.hom(AW, X)
                      if all(c.comp(r, legs[i]) == p[i] for i in fam)]
                if len(rs) != 1:
                    return {"A": A, "X": X, "cocone": p, "mediators": len(rs)}
    return None


def _commuting_cocones(c, m, A, zi, fam, arrows, X):
    """Backtracking enumeration of cocones over the family diagram into X."""
    fam = sorted(fam)
    pools = [c.hom(m.ten_o(A, zi.classes[i].obj), X) for i in fam]
    out = {}

    def rec(pos):
        if pos == len(fam):
            yield dict(out)
            return
        i = fam[pos]
        for cand in pools[pos]:
            out[i] = cand
            ok = True
            for j in fam[:pos + 1]:
                if (j, i) in arrows and j in out and c.comp(cand, arrows[j, i]) != out[j]:
                    ok = False
                    break
                if (i, j) in arrows and j in out and c.comp(out[j], arrows[i, j]) != cand:
                    ok = False
                    break
            if ok:
                yield from rec(pos + 1)
        out.pop(i, None)

    yield from rec(0)


def check_local_properties(m, zi, cover, f, g):
    """The four locality clauses (equality, epi, mono, iso) for given f, g."""
    c = m.base
    total = zi.lub_many(cover)
    if total != zi.top:
        raise CoverNotTotal(f"join of cover is class {total}, not the top class")
    reps = [zi.classes[i] for i in cover]
    clauses = {}
    locally_equal = all(m.ten_m(f, r.mor) == m.ten_m(g, r.mor) for r in reps)
    clauses["equality"] = (f == g) == locally_equal
    epi_premise = all(is_epi(c, m.ten_m(f, r.mor)) or is_epi(c, m.rwhisk(f, r.obj))
                      for r in reps)
    clauses["epi"] = (not epi_premise) or is_epi(c, f)
    if not epi_premise:
        clauses["epi_note"] = "vacuous"
    mono_premise = all(is_mono(c, m.ten_m(f, r.mor)) for r in reps)
    clauses["mono"] = (not mono_premise) or is_mono(c, f)
    if not mono_premise:
        clauses["mono_note"] = "vacuous"
    locally_iso = all(is_iso(c, m.rwhisk(f, r.obj)) for r in reps)
    clauses["iso"] = is_iso(c, f) == locally_iso
    ok = all(v for k, v in clauses.items() if not k.endswith("_note"))
    return Verdict("local_properties", ok, witness=clauses)


def is_subunit(m, rec):
    """Subunits are the central idempotents whose morphism is monic."""
    return is_mono(m.base, rec.mor)


def is_bilinear(m, zi):
    """f ten U = g ten U forces f = g, for parallel maps into B ten U."""
    c = m.base
    for rep in zi.classes:
        U = rep.obj
        for A in c.objects:
            for B in c.objects:
                hom = c.hom(A, m.ten_o(B, U))
                for f in hom:
                    for g in hom:
                        if f != g and m.rwhisk(f, U) == m.rwhisk(g, U):
                            return Verdict("bilinear", False,
                                           witness={"U": U, "f": f, "g": g})
    return Verdict("bilinear", True)


def is_cartesian(m):
    """Tensor is the categorical product and the unit is terminal."""
    c = m.base
    if not is_terminal(c, m.unit):
        return False
    bang = {A: c.hom(A, m.unit)[0] for A in c.objects}
    for A in c.objects:
        for B in c.objects:
            AB = m.ten_o(A, B)
            p1 = m.ten_m(c.identity[A], bang[B])
            p2 = m.ten_m(bang[A], c.identity[B])
            for X in c.objects:
                for f in c.hom(X, A):
                    for g in c.hom(X, B):
                        meds = [h for h in c.hom(X, AB)
                                if c.comp(p1, h) == f and c.comp(p2, h) == g]
                        if len(meds) != 1:
                            return False
    return True


def cartesian_subterminal_check(m, zi):
    """In a cartesian table, central idempotent domains = subterminal objects."""
    c = m.base
    if not is_cartesian(m):
        raise NotCartesian("tensor is not a categorical product with terminal unit")
    subterminal = {X for X in c.objects
                   if all(len(c.hom(Y, X)) <= 1 for Y in c.objects)}
    domains = {rec.obj for group in zi.members for rec in group}
    ok = subterminal == domains
    return Verdict("cartesian_subterminal", ok,
                   witness={"subterminal": sorted(map(str, subterminal)),
                            "central_domains": sorted(map(str, domains))})


@dataclass
class ZiFunctorImage:
    """The semilattice morphism ZI(C) -> ZI(D) induced by a functor, plus the
    continuous map between prime spectra it induces by filter preimage."""

    class_map: dict
    spectrum_map: dict
    verdict: Verdict


def zi_map_of_functor(F, zi_c, zi_d):
    """u |-> [theta_I^{-1} . F(u)], checked to preserve meets and top.

    Raises CoherenceNotInvertible when theta_I or some theta_{A,U} has no
    inverse; the spectrum map is computed when both ZI lattices carry joins.
    """
    dc = F.target.base
    theta_inv = inverse_of(dc, F.theta_unit)
    if theta_inv is None:
        raise CoherenceNotInvertible("I")
    for group in zi_c.members:
        for rec in group:
            for A in F.source.base.objects:
                if inverse_of(dc, F.theta[A, rec.obj]) is None:
                    raise CoherenceNotInvertible((A, rec.obj))
    class_map = {}
    for i, rep in enumerate(zi_c.classes):
        v_mor = dc.comp(theta_inv, F.f.mor_map[rep.mor])
        image = CentralIdempotentRecord(F.f.obj_map[rep.obj], v_mor, None, ())
        k = classify(F.target, zi_d, image)
        if k is None:
            return ZiFunctorImage({}, {}, Verdict(
                "zi_map", False,
                witness={"class": zi_c.class_name(i)},
                note="image is not a central idempotent of the target"))
        class_map[i] = k
    failures = []
    if class_map[zi_c.top] != zi_d.top:
        failures.append("top not preserved")
    for i in range(zi_c.n):
        for j in range(zi_c.n):
            if class_map[zi_c.meet[i, j]] != zi_d.meet[class_map[i], class_map[j]]:
                failures.append(f"meet not preserved at ({i}, {j})")
    spectrum_map = {}
    note = ""
    if zi_c.joins is not None and zi_d.joins is not None and not failures:
        from .spectrum import enumerate_prime_filters
        lat_c = to_lattice_model(zi_c)
        lat_d = to_lattice_model(zi_d)
        pts_c = enumerate_prime_filters(lat_c)
        pts_d = enumerate_prime_filters(lat_d)
        for pd_idx, pd in enumerate(pts_d):
            pre = frozenset(i for i in range(zi_c.n)
                            if pd.mask >> class_map[i] & 1)
            matches = [pc_idx for pc_idx, pc in enumerate(pts_c)
                       if frozenset(k for k in range(zi_c.n) if pc.mask >> k & 1) == pre]
            if len(matches) != 1:
                failures.append(f"filter preimage of point {pd_idx} is not a prime filter")
                break
            spectrum_map[pd_idx] = matches[0]
    elif not failures:
        note = "spectrum map skipped: joins not computed on both sides"
    ok = not failures
    return ZiFunctorImage(class_map, spectrum_map,
                          Verdict("zi_map", ok, witness=failures or None, note=note))


def to_lattice_model(zi):
    """The ZI lattice as a LatticeModel; requires joins to have been computed."""
    from .spectrum import LatticeModel
    if zi.joins is None:
        raise ValueError("ZI joins not computed; run has_universal_finite_joins first")
    names = [zi.class_name(i) for i in range(zi.n)]
    leq = frozenset((names[i], names[j]) for (i, j) in zi.leq)
    meet = {(names[i], names[j]): names[zi.meet[i, j]]
            for i in range(zi.n) for j in range(zi.n)}
    join = {(names[i], names[j]): names[zi.joins[i, j]]
            for i in range(zi.n) for j in range(zi.n)}
    return LatticeModel(tuple(names), leq, meet, join,
                        names[zi.bottom], names[zi.top])
