"""The free completion D[C] under universal joins, built from downsets.

Objects pair a down-closed set of central-idempotent classes with a base
object; morphisms are compatible families indexed by the downset, each
component restricting into the target downset.  The embedding sends A to the
pair with the full downset, and ZI of the completion is the downset lattice.
"""

from dataclasses import dataclass, field
from itertools import product

from .catcore import CategoryTable, FunctorTable
from .errors import BudgetExceeded, HypothesisNotMet, NotStiff
from .moncat import MonoidalFunctorTable, MonoidalTable, validate_monoidal
from .sheaf import crossing
from .spectrum import LatticeModel
from .zi import (CentralIdempotentRecord, Verdict, central_idempotents,
                 classify, has_universal_finite_joins, has_universal_joins,
                 is_stiff, witness_leq, zi_map_of_functor)

DEFAULT_COMPLETION_BUDGET = 10 ** 4


def downset_lattice(zi):
    """The lattice of down-closed subsets of ZI under inclusion (the free
    frame on the semilattice); elements are sorted index tuples."""
    downsets = []
    for mask in range(1 << zi.n):
        ks = [k for k in range(zi.n) if mask >> k & 1]
        closed = all(j in ks
                     for k in ks for j in range(zi.n) if zi.le(j, k))
        if closed:
            downsets.append(tuple(ks))
    downsets.sort(key=lambda d: (len(d), d))
    sets = [frozenset(d) for d in downsets]
    leq = frozenset((a, b) for a, sa in zip(downsets, sets)
                    for b, sb in zip(downsets, sets) if sa <= sb)
    meet = {(a, b): tuple(sorted(sa & sb))
            for a, sa in zip(downsets, sets) for b, sb in zip(downsets, sets)}
    join = {(a, b): tuple(sorted(sa | sb))
            for a, sa in zip(downsets, sets) for b, sb in zip(downsets, sets)}
    return LatticeModel(tuple(downsets), leq, meet, join,
                        (), tuple(range(zi.n)))


def restricts_to(m, f, rec):
    """A witness g with f = (B ten u) . g, or None; exhaustive search."""
    c = m.base
    A, B = c.src[f], c.dst[f]
    for g in c.hom(A, m.ten_o(B, rec.obj)):
        if c.comp(m.lwhisk(B, rec.mor), g) == f:
            return g
    return None


@dataclass
class CompletionResult:
    """The materialized D[C] with its object and morphism conventions.

    Objects are (downset_tuple, base_object); morphisms are
    ("cm", src, dst, family) with family a tuple of (class_index, component).
    """

    base_mon: MonoidalTable
    zi: object
    table: MonoidalTable
    downsets: tuple
    full: tuple


def build_completion(m, zi, budget=DEFAULT_COMPLETION_BUDGET, stiff=None):
    """Materialize D[C]; raises NotStiff / BudgetExceeded.

    Families are enumerated by assigning components at the maximal elements
    of the downset and propagating downwards; the compatibility and
    restricts-to conditions are then re-checked in full.
    """
    if stiff is None:
        stiff = is_stiff(m, zi)
    if not stiff.ok:
        raise NotStiff(f"completion requires a stiff base: {stiff.witness}")
    c = m.base
    dl = downset_lattice(zi)
    downsets = dl.elements
    full = dl.top
    objects = tuple((D, A) for D in downsets for A in c.objects)
    meds = {(j, k): witness_leq(m, zi.classes[j], zi.classes[k])
            for j in range(zi.n) for k in range(zi.n) if zi.le(j, k)}
    homs, total = {}, 0
    for X in objects:
        for Y in objects:
            fams = _families(m, zi, meds, X, Y)
            if fams:
                homs[X, Y] = tuple(("cm", X, Y, fam) for fam in fams)
                total += len(fams)
                if total > budget:
                    raise BudgetExceeded(
                        f"completion exceeds {budget} morphisms")
    identity = {}
    for D, A in objects:
        fam = tuple((k, m.lwhisk(A, zi.classes[k].mor)) for k in D)
        identity[D, A] = ("cm", (D, A), (D, A), fam)
    compose = {}
    for (X, Y), fs in homs.items():
        for (Y2, Z), gs in homs.items():
            if Y2 != Y:
                continue
            for eta in fs:
                for zeta in gs:
                    compose[zeta, eta] = _compose(m, zi, eta, zeta)
    base = CategoryTable(objects, homs, identity, compose)
    tensor_obj = {(X, Y): (dl.meet[X[0], Y[0]], m.ten_o(X[1], Y[1]))
                  for X in objects for Y in objects}
    tensor_mor = {}
    for eta in base.morphisms:
        for zeta in base.morphisms:
            tensor_mor[eta, zeta] = _tensor(m, zi, dl, eta, zeta)
    symmetry = None
    if m.symmetry is not None:
        symmetry = {}
        for X in objects:
            for Y in objects:
                D = dl.meet[X[0], Y[0]]
                fam = tuple((k, m.ten_m(m.symmetry[X[1], Y[1]],
                                        zi.classes[k].mor)) for k in D)
                symmetry[X, Y] = ("cm", tensor_obj[X, Y],
                                  tensor_obj[Y, X], fam)
    table = MonoidalTable(base, (full, m.unit), tensor_obj, tensor_mor, symmetry)
    rep = validate_monoidal(table)
    if not rep.ok:
        raise RuntimeError(f"completion table invalid: {rep}")
    return CompletionResult(m, zi, table, downsets, full)


def _families(m, zi, meds, X, Y):
    """All compatible families (D, A) -> (E, B), as sorted component tuples."""
    c = m.base
    (D, A), (E, B) = X, Y
    if not D:
        return [()]
    maximal = [k for k in D if not any(k != k2 and zi.le(k, k2) for k2 in D)]
    pools = [c.hom(m.ten_o(A, zi.classes[k].obj), B) for k in maximal]
    out = []
    for choice in product(*pools):
        assigned = dict(zip(maximal, choice))
        fam, ok = {}, True
        for k in D:
            vals = {c.comp(assigned[k2], m.lwhisk(A, meds[k, k2]))
                    for k2 in maximal if zi.le(k, k2)}
            if len(vals) != 1:
                ok = False
                break
            fam[k] = vals.pop()
        if not ok:
            continue
        for k in D:
            for k2 in D:
                if zi.le(k, k2) and \
                        fam[k] != c.comp(fam[k2], m.lwhisk(A, meds[k, k2])):
                    ok = False
        if not ok:
            continue
        if any(all(restricts_to(m, fam[k], zi.classes[j]) is None for j in E)
               for k in D):
            continue
        out.append(tuple((k, fam[k]) for k in sorted(fam)))
    return out


def _compose(m, zi, eta, zeta):
    """(zeta . eta)_u = zeta_v . witness, for the first v in the target
    downset admitting a restriction witness; independence of the choice is
    re-verified by tests, not assumed."""
    c = m.base
    _, X, Y, fam_eta = eta
    _, _, Z, fam_zeta = zeta
    E = Y[0]
    zeta_map = dict(fam_zeta)
    out = []
    for k, comp_k in fam_eta:
        for j in E:
            g = restricts_to(m, comp_k, zi.classes[j])
            if g is not None:
                out.append((k, c.comp(zeta_map[j], g)))
                break
        else:
            raise RuntimeError("composition lost its restriction witness")
    return ("cm", X, Z, tuple(out))


def _tensor(m, zi, dl, eta, zeta):
    c = m.base
    _, X1, Y1, fam1 = eta
    _, X2, Y2, fam2 = zeta
    f1, f2 = dict(fam1), dict(fam2)
    D = dl.meet[X1[0], X2[0]]
    A1, A2 = X1[1], X2[1]
    A12 = m.ten_o(A1, A2)
    out = []
    for k in D:
        rec = zi.classes[k]
        pre = m.lwhisk(A12, rec.inverse)
        mid = m.rwhisk(m.lwhisk(A1, crossing(m, rec, A2)), rec.obj)
        out.append((k, c.comp(m.ten_m(f1[k], f2[k]), c.comp(mid, pre))))
    src = (D, A12)
    dst = (dl.meet[Y1[0], Y2[0]], m.ten_o(Y1[1], Y2[1]))
    return ("cm", src, dst, tuple(out))


def embed(m, zi, comp):
    """The strictly monoidal full embedding C -> D[C]."""
    c = m.base
    t = comp.table
    obj_map = {A: (comp.full, A) for A in c.objects}
    mor_map = {}
    for f in c.morphisms:
        fam = tuple((k, m.ten_m(f, zi.classes[k].mor)) for k in comp.full)
        mor_map[f] = ("cm", obj_map[c.src[f]], obj_map[c.dst[f]], fam)
    f_table = FunctorTable(c, t.base, obj_map, mor_map)
    theta = {(A, B): t.base.identity[obj_map[m.ten_o(A, B)]]
             for A in c.objects for B in c.objects}
    return MonoidalFunctorTable(f_table, m, t, t.base.identity[t.unit], theta)


def check_embedding(m, zi, comp, F):
    """Injective on objects, full and faithful (hom-count equality), and
    strictly monoidal on all pairs."""
    c = m.base
    t = comp.table
    if len(set(F.f.obj_map.values())) != len(c.objects):
        return Verdict("embedding", False, note="not injective on objects")
    for A in c.objects:
        for B in c.objects:
            image = {F.f.mor_map[f] for f in c.hom(A, B)}
            target = t.base.hom(F.f.obj_map[A], F.f.obj_map[B])
            if len(image) != len(c.hom(A, B)) or len(image) != len(target):
                return Verdict("embedding", False,
                               witness={"hom": (A, B),
                                        "source": len(c.hom(A, B)),
                                        "image": len(image),
                                        "target": len(target)})
    for f in c.morphisms:
        for g in c.morphisms:
            if F.f.mor_map[m.ten_m(f, g)] != t.ten_m(F.f.mor_map[f], F.f.mor_map[g]):
                return Verdict("embedding", False, witness={"tensor": (f, g)})
    return Verdict("embedding", True)


def check_zi_completion(m, zi, comp):
    """ZI(D[C]) is the downset lattice, via D -> class of <D, I> -> unit."""
    t = comp.table
    zc = central_idempotents(t)
    if zc.n != len(comp.downsets):
        return Verdict("zi_completion", False,
                       witness={"classes": zc.n, "downsets": len(comp.downsets)})
    mapping = {}
    for D in comp.downsets:
        fam = tuple((k, zi.classes[k].mor) for k in D)
        mor = ("cm", (D, m.unit), (comp.full, m.unit), fam)
        rec = CentralIdempotentRecord((D, m.unit), mor, None, ())
        img = classify(t, zc, rec)
        if img is None:
            return Verdict("zi_completion", False, witness={"downset": D})
        mapping[D] = img
    if len(set(mapping.values())) != zc.n:
        return Verdict("zi_completion", False, note="not a bijection")
    for D1 in comp.downsets:
        for D2 in comp.downsets:
            inter = tuple(sorted(frozenset(D1) & frozenset(D2)))
            if zc.meet[mapping[D1], mapping[D2]] != mapping[inter]:
                return Verdict("zi_completion", False,
                               witness={"meet": (D1, D2)})
            if (frozenset(D1) <= frozenset(D2)) != zc.le(mapping[D1], mapping[D2]):
                return Verdict("zi_completion", False,
                               witness={"order": (D1, D2)})
    return Verdict("zi_completion", True,
                   witness={"downsets": len(comp.downsets)})


def check_completion_joins(m, zi, comp):
    """D[C] has universal joins: the finite-joins clauses plus the wide
    cocone checks over meet-closed families of downsets."""
    t = comp.table
    zc = central_idempotents(t)
    fj = has_universal_finite_joins(t, zc)
    if not fj.ok:
        return Verdict("completion_joins", False, witness=fj.witness, note=fj.note)
    uj = has_universal_joins(t, zc)
    return Verdict("completion_joins", uj.ok, witness=uj.witness,
                   note=f"joins of downset unions; {uj.note}")


@dataclass
class ExtensionResult:
    obj_map: dict
    mor_map: dict
    verdict: Verdict


def extend_functor(F, comp, zi_c, zi_d):
    """The unique join-preserving extension of F along the embedding.

    F-hat sends <D, A> to F(A) tensored with the join of the image classes of
    D; the morphism action is the unique mediating morphism of the defining
    colimit.  Uniqueness is verified by exhaustive enumeration of candidate
    object maps when the target is posetal, and skipped (with a note)
    otherwise.
    """
    m = comp.base_mon
    target = F.target
    tc = target.base
    image = zi_map_of_functor(F, zi_c, zi_d)
    if not image.verdict.ok:
        raise HypothesisNotMet(
            f"functor does not preserve central idempotents: {image.verdict.witness}")
    if zi_d.joins is None:
        fj = has_universal_finite_joins(target, zi_d)
        if not fj.ok:
            raise HypothesisNotMet(f"target lacks universal joins: {fj.note}")
    theta_inv_cache = {}

    def theta_inv(A, U):
        if (A, U) not in theta_inv_cache:
            theta_inv_cache[A, U] = _inverse(tc, F.theta[A, U])
        return theta_inv_cache[A, U]

    img_rec = {}
    for k in range(zi_c.n):
        rep = zi_c.classes[k]
        v_mor = tc.comp(_inverse(tc, F.theta_unit), F.f.mor_map[rep.mor])
        img_rec[k] = CentralIdempotentRecord(F.f.obj_map[rep.obj], v_mor, None, ())
    obj_map = {}
    join_cls = {}
    for (D, A) in comp.table.base.objects:
        j = zi_d.lub_many([image.class_map[k] for k in D])
        join_cls[D] = j
        obj_map[D, A] = target.ten_o(F.f.obj_map[A], zi_d.classes[j].obj)
    mor_map = {}
    for eta in comp.table.base.morphisms:
        _, X, Y, fam = eta
        g = _mediate(F, comp, zi_c, zi_d, image, img_rec, theta_inv,
                     obj_map, join_cls, X, Y, fam)
        if g is None:
            return ExtensionResult(obj_map, {}, Verdict(
                "extension", False, witness={"morphism": (X, Y)},
                note="no unique mediating morphism"))
        mor_map[eta] = g
    parts = {}
    emb = embed(m, zi_c, comp)
    parts["triangle_objects"] = all(
        obj_map[emb.f.obj_map[A]] == F.f.obj_map[A] for A in m.base.objects)
    parts["triangle_morphisms"] = all(
        mor_map[emb.f.mor_map[f]] == F.f.mor_map[f] for f in m.base.morphisms)
    parts["functorial"] = all(
        mor_map[comp.table.base.comp(z, e)] == tc.comp(mor_map[z], mor_map[e])
        for (z, e) in comp.table.base.compose)
    from .catcore import is_posetal
    if is_posetal(tc):
        count, space = _count_extensions(F, comp, zi_d)
        parts["unique"] = count == 1
        note = f"uniqueness checked over {space} candidate object maps"
    else:
        note = "uniqueness not enumerable: target not posetal"
    ok = all(v is True for v in parts.values())
    return ExtensionResult(obj_map, mor_map, Verdict("extension", ok,
                                                     witness=parts, note=note))


def _inverse(c, f):
    from .catcore import inverse_of
    inv = inverse_of(c, f)
    if inv is None:
        raise HypothesisNotMet(f"coherence cell {f!r} not invertible")
    return inv


def _mediate(F, comp, zi_c, zi_d, image, img_rec, theta_inv, obj_map,
             join_cls, X, Y, fam):
    """The unique morphism F(A) ten W_D -> F(B) ten W_E commuting with the
    colimit legs; for the empty downset the source is initial-like and the
    condition list is empty, leaving uniqueness to the hom search."""
    m = comp.base_mon
    target, tc = F.target, F.target.base
    (D, A), (E, B) = X, Y
    FA, FB = F.f.obj_map[A], F.f.obj_map[B]
    wD, wE = zi_d.classes[join_cls[D]], zi_d.classes[join_cls[E]]
    conditions = []
    for k, comp_k in fam:
        med_in = witness_leq(target, img_rec[k], wD)
        iota = target.lwhisk(FA, med_in)
        j = g = None
        for j2 in E:
            g2 = restricts_to(m, comp_k, zi_c.classes[j2])
            if g2 is not None:
                j, g = j2, g2
                break
        med_out = witness_leq(target, img_rec[j], wE)
        U_k = zi_c.classes[k].obj
        U_j = zi_c.classes[j].obj
        zeta = tc.comp(target.lwhisk(FB, med_out),
                       tc.comp(theta_inv(B, U_j),
                               tc.comp(F.f.mor_map[g], F.theta[A, U_k])))
        conditions.append((iota, zeta))
    cands = [g for g in tc.hom(obj_map[X], obj_map[Y])
             if all(tc.comp(g, iota) == zeta for iota, zeta in conditions)]
    return cands[0] if len(cands) == 1 else None


def _count_extensions(F, comp, zi_d):
    """Exhaustively count join-preserving lax monoidal functors extending F
    (posetal target): candidate object maps pruned by hom preservation, lax
    coherence, and join preservation on central idempotents."""
    m = comp.base_mon
    t = comp.table
    target, tc = F.target, F.target.base
    zc = central_idempotents(t)
    if zc.joins is None and not has_universal_finite_joins(t, zc).ok:
        raise HypothesisNotMet("completion lost its joins")
    fixed = {(comp.full, A): F.f.obj_map[A] for A in m.base.objects}
    free = [X for X in t.base.objects if X not in fixed]
    hom_pairs = [(X, Y) for X in t.base.objects for Y in t.base.objects
                 if t.base.hom(X, Y)]
    rep_obj = {i: zc.classes[i].obj for i in range(zc.n)}
    space = len(tc.objects) ** len(free)
    count = 0

    def zi_image(assign, i):
        X = rep_obj[i]
        GX = assign.get(X, fixed.get(X))
        for kd in range(zi_d.n):
            if zi_d.classes[kd].obj == GX:
                return kd
        # posetal targets built by this engine have every object central
        return None

    def ok_full(assign):
        for X, Y in hom_pairs:
            GX = assign.get(X, fixed.get(X))
            GY = assign.get(Y, fixed.get(Y))
            if not tc.hom(GX, GY):
                return False
        for X in t.base.objects:
            for Y in t.base.objects:
                GX = assign.get(X, fixed.get(X))
                GY = assign.get(Y, fixed.get(Y))
                GXY = assign.get(t.ten_o(X, Y), fixed.get(t.ten_o(X, Y)))
                if not tc.hom(target.ten_o(GX, GY), GXY):
                    return False
        if zi_image(assign, zc.bottom) != zi_d.bottom:
            return False
        for i in range(zc.n):
            for j in range(zc.n):
                gi, gj = zi_image(assign, i), zi_image(assign, j)
                gk = zi_image(assign, zc.joins[i, j])
                if gi is None or gj is None or gk is None \
                        or gk != zi_d.joins[gi, gj]:
                    return False
        return True

    def rec(pos, assign):
        nonlocal count
        if pos == len(free):
            if ok_full(assign):
                count += 1
            return
        X = free[pos]
        for cand in tc.objects:
            assign[X] = cand
            ok = True
            for Y, GY in list(assign.items()) + list(fixed.items()):
                if Y == X:
                    continue
                if t.base.hom(X, Y) and not tc.hom(cand, GY):
                    ok = False
                    break
                if t.base.hom(Y, X) and not tc.hom(GY, cand):
                    ok = False
                    break
            if ok:
                rec(pos + 1, assign)
        assign.pop(X, None)

    rec(0, {})
    return count, space
