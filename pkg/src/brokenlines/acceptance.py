"""The acceptance suite: one callable per criterion, shared by the test
module and the `accept` CLI subcommand.

Every criterion returns {"name", "ok", "detail", "seconds"}; the combinatorial
criteria are exact, the Morse criterion carries its tolerances.
"""

from __future__ import annotations

import itertools
import random
import time
from .extreal import INF, ExtReal
from .families import build_family, extract_alpha
from .lines import fiber_over, find_marked_iso, translation_distance
from .configurations import verify_join_identity
from .orders import (
    LinOrder,
    enumerate_convex_equivalences,
    enumerate_surjections,
    preimage_equiv,
)
from .rep import stratum_of, stratum_samples, chart_coordinates
from .sheaves import GlobalSheaf, evaluate_on_family, global_to_constructible
from .twisted import (
    algebra_to_functor,
    day_assoc_check,
    day_convolution,
    flat,
    functor_to_algebra,
    point,
    roundtrip_natural_iso,
    sharp,
)
from .vect import matrix_algebra_2x2, nilpotent_upper3, zero_algebra
from . import morse as morse_mod


def _run(name, body):
    start = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as exc:  # a crash is a failure, not an abort
        ok, detail = False, f"exception: {exc!r}"
    return {
        "name": name,
        "ok": bool(ok),
        "detail": detail,
        "seconds": round(time.perf_counter() - start, 3),
    }


def criterion_mainc_roundtrip():
    """Criterion 1: algebra -> functor -> algebra is the identity on
    structure constants, and the reverse roundtrip has an exact natural
    isomorphism at truncation 4, for the three reference algebras."""

    def body():
        notes = []
        for name, make in (
            ("zero1", zero_algebra),
            ("nilpotent3", nilpotent_upper3),
            ("mat2", matrix_algebra_2x2),
        ):
            algebra = make()
            functor = algebra_to_functor(algebra, 4)
            back = functor_to_algebra(functor)
            if back != algebra:
                return False, f"{name}: structure constants changed"
            roundtrip_natural_iso(functor)  # raises on failure
            notes.append(name)
        return True, f"exact roundtrips for {', '.join(notes)}"

    return _run("factorization roundtrip", body)


def criterion_pullback_squares():
    """Criterion 2: pullback squares of global_to_constructible commute
    exactly for all monotone surjections between orders of sizes <= 4 and
    all convex relations on the target; exchange relations validate."""

    def body():
        sheaves = [
            GlobalSheaf.from_algebra(zero_algebra(), 3),
            GlobalSheaf.from_algebra(nilpotent_upper3(), 3),
        ]
        squares = 0
        for sheaf in sheaves:
            for n_src in range(1, 5):
                for n_tgt in range(1, n_src + 1):
                    src = LinOrder.standard(n_src)
                    tgt = LinOrder.standard(n_tgt)
                    for f in enumerate_surjections(src, tgt):
                        g_src = global_to_constructible(sheaf, src)
                        g_tgt = global_to_constructible(sheaf, tgt)
                        rels = enumerate_convex_equivalences(tgt)
                        for e in rels:
                            for e2 in rels:
                                if not e.refines(e2):
                                    continue
                                eb = preimage_equiv(f, e)
                                eb2 = preimage_equiv(f, e2)
                                if (
                                    g_src.restriction[(eb, eb2)]
                                    != g_tgt.restriction[(e, e2)]
                                ):
                                    return False, f"square fails at {f}, {e}"
                                squares += 1
        return True, f"{squares} pullback squares commute exactly"

    return _run("sheaf pullback squares", body)


def criterion_fiber_product_covering():
    """Criterion 3: join identity, covering, and least-upper-bound-ness
    over Amal(I, J) for |I|, |J| <= 3 with grid-sampled configurations."""

    def body():
        worst = None
        for nl, nr in itertools.product((1, 2, 3), repeat=2):
            report = verify_join_identity(
                LinOrder.standard(nl), LinOrder.standard(nr)
            )
            if report["violations"]:
                return False, f"({nl},{nr}): {report['violations'][:3]}"
            worst = report
        return True, (
            f"exhaustive up to 3x3; last report: {worst['amalgams']} amalgams, "
            f"{worst['configs_checked']} configurations, zero violations"
        )

    return _run("fiber-product covering", body)


def criterion_classification():
    """Criterion 4: component count equals finite-distance class count and
    all distance cocycle identities hold, over 200 grid-sampled points."""

    def body():
        rng = random.Random(20240229)
        count = 0
        while count < 200:
            n = rng.randint(1, 5)
            base = LinOrder.standard(n)
            rels = enumerate_convex_equivalences(base)
            rel = rels[rng.randrange(len(rels))]
            for pt in stratum_samples(base, rel, 1):
                line, marks = fiber_over(pt)
                if line.m != len(stratum_of(pt).classes):
                    return False, "component count mismatch"
                labels = list(marks)
                for x in labels:
                    for y in labels:
                        for z in labels:
                            dxy = translation_distance(line, marks[x], marks[y])
                            dyz = translation_distance(line, marks[y], marks[z])
                            dxz = translation_distance(line, marks[x], marks[z])
                            try:
                                if dxy + dyz != dxz:
                                    return False, f"cocycle fails at {(x,y,z)}"
                            except ArithmeticError:
                                continue  # inf + (-inf): undefined case split
                count += 1
        return True, f"{count} sampled fibers classified consistently"

    return _run("classification", body)


def criterion_stratification():
    """Criterion 5: |Conv(I)| = 2^(n-1) against the brute-force oracle for
    n <= 6, and finite-coordinate counts match stratum dimensions."""

    def body():
        for n in range(1, 7):
            base = LinOrder.standard(n)
            rels = enumerate_convex_equivalences(base)
            if len(rels) != 2 ** (n - 1):
                return False, f"|Conv| wrong at n={n}"
            if len(rels) != len(_oracle_convex_count(n)):
                return False, f"oracle disagrees at n={n}"
            for rel in rels:
                for pt in stratum_samples(base, rel, 1):
                    gaps, _ = chart_coordinates(pt)
                    finite = sum(1 for g in gaps if g.is_finite)
                    if finite != n - len(rel.classes):
                        return False, f"dimension wrong at n={n}, {rel}"
        return True, "Conv counts and stratum dimensions match for n <= 6"

    return _run("stratification", body)


def _oracle_convex_count(n):
    """Independent oracle: filter all set partitions by interval-ness."""
    out = []
    for partition in _set_partitions(list(range(n))):
        if all(max(b) - min(b) + 1 == len(b) for b in partition):
            out.append(partition)
    return out


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def criterion_day_convolution():
    """Criterion 6: worked dimension formulas, associativity reindexing
    for constant and algebra-generated functors at N=4, zero objects on
    indiscrete inputs of size >= 2."""

    def body():
        from .vect import rational_algebra

        const = algebra_to_functor(rational_algebra(), 4)
        conv = day_convolution(const, const, 4)
        if conv.value[flat(3)].dim != 2:
            return False, "constant functor: dim on discrete 3 should be 2"
        if conv.value[point()].dim != 0:
            return False, "singleton should be the zero object"
        for n in (2, 3, 4):
            if conv.value[sharp(n)].dim != 0:
                return False, f"indiscrete size {n} should be the zero object"
        nil = algebra_to_functor(nilpotent_upper3(), 4)
        for trip in (
            (const, const, const),
            (nil, nil, nil),
        ):
            report = day_assoc_check(*trip, 4)
            if not report["ok"]:
                return False, f"associativity reindexing: {report['mismatches'][:3]}"
        return True, "dimension formulas and associativity reindexing pass at N=4"

    return _run("day convolution", body)


def criterion_representability_roundtrip():
    """Criterion 7: extract_alpha o build_family is the identity on 100
    random sampled families, and the reverse roundtrip's connecting
    isomorphism exists and is unique."""

    def body():
        rng = random.Random(7)
        for trial in range(100):
            n = rng.randint(1, 4)
            base = LinOrder.standard(n)
            rels = enumerate_convex_equivalences(base)
            points = []
            for _ in range(rng.randint(1, 4)):
                rel = rels[rng.randrange(len(rels))]
                pts = stratum_samples(base, rel, rng.randint(1, 3))
                points.append(pts[rng.randrange(len(pts))])
            family, sections = build_family(base, points)
            recovered = extract_alpha(family, sections)
            for sid, original in family.samples:
                if recovered[sid] != original:
                    return False, f"trial {trial}: alpha changed on {sid}"
                # reverse roundtrip: rebuild the fiber and connect it
                line, marks = fiber_over(recovered[sid])
                fiber = sections[sid]
                iso = find_marked_iso(line, marks, fiber.line, fiber.marks)
                if iso is None:
                    return False, f"trial {trial}: no connecting iso on {sid}"
                # uniqueness: every component carries a mark, so shifts are
                # pinned; a second distinct iso cannot match the marks
                hit = {p.component for p in marks.values()}
                if hit != set(range(1, line.m + 1)):
                    return False, f"trial {trial}: a component has no mark"
        return True, "100 random families roundtrip exactly with unique isos"

    return _run("representability roundtrip", body)


def criterion_cospecialization_demo():
    """Criterion 8: the algebra-generated sheaf on the degenerating path
    has stalks A, ..., A, A(x)A with the multiplication as edge map."""

    def body():
        algebra = nilpotent_upper3()
        sheaf = GlobalSheaf.from_algebra(algebra, 1)
        base = LinOrder.standard(2)
        gaps = [ExtReal(0), ExtReal(1), ExtReal(2), INF]
        points = [rep_from_gaps_on(base, [g]) for g in gaps]
        family, _sections = build_family(
            base,
            points,
            ids=["t1", "t1/2", "t1/4", "t0"],
            edges=[("t1", "t1/2"), ("t1/2", "t1/4"), ("t1/4", "t0")],
            limits=["t0"],
        )
        ev = evaluate_on_family(sheaf, family)
        dims = [ev.stalks[sid].dim for sid, _ in family.samples]
        d = algebra.dim
        if dims != [d, d, d, d * d]:
            return False, f"stalk dims {dims}"
        edge = ev.edge_maps[("t1/4", "t0")]
        if edge != algebra.multiplication():
            return False, "degeneration edge map is not the multiplication"
        return True, "stalks A, A, A, A(x)A with multiplication at the edge"

    return _run("cospecialization demo", body)


def rep_from_gaps_on(base, gaps):
    from .rep import RepPoint

    return RepPoint.from_gaps(base, gaps)


def criterion_morse_demo():
    """Criterion 9: sphere has 2 criticals with index sum 2, torus 4 with
    sum 0 (gradient norms < 1e-8); at least one validated broken min->max
    trajectory on the torus with reparametrization residual < 1e-5 and
    all-infinite extracted gaps; < 60 s."""

    def body():
        tol = morse_mod.Tolerances()
        start = time.perf_counter()
        sphere = morse_mod.Sphere()
        crits_s = morse_mod.find_critical_points(sphere, tol)
        if len(crits_s) != 2 or morse_mod.euler_characteristic(crits_s) != 2:
            return False, f"sphere criticals: {[(c.h, c.index) for c in crits_s]}"
        torus = morse_mod.Torus()
        crits_t = morse_mod.find_critical_points(torus, tol)
        if len(crits_t) != 4 or morse_mod.euler_characteristic(crits_t) != 0:
            return False, f"torus criticals: {[(c.h, c.index) for c in crits_t]}"
        if any(c.grad_norm >= tol.tol_crit for c in crits_s + crits_t):
            return False, "a critical point has gradient norm >= 1e-8"
        segments = morse_mod.find_connections(torus, crits_t, tol)
        trajectories = morse_mod.find_broken_trajectories(
            torus, crits_t[0], crits_t[-1], tol,
            criticals=crits_t, segments=segments,
        )
        broken_ok = 0
        for traj in trajectories:
            if traj.component_count < 2:
                continue
            report = morse_mod.validate_trajectory(traj, tol)
            if not report.ok:
                continue
            if report.reparam_residual >= tol.tol_reparam:
                continue
            _line, rep, _marks = morse_mod.trajectory_to_line(traj)
            if all(not g.is_finite for g in rep.gaps()):
                broken_ok += 1
        elapsed = time.perf_counter() - start
        if broken_ok == 0:
            return False, "no validated broken trajectory with all-inf gaps"
        if elapsed >= 60.0:
            return False, f"runtime {elapsed:.1f}s exceeds 60s"
        return True, (
            f"sphere 2 criticals (chi 2), torus 4 (chi 0), "
            f"{broken_ok} validated broken trajectories in {elapsed:.1f}s"
        )

    return _run("morse demo", body)


CRITERIA = [
    criterion_mainc_roundtrip,
    criterion_pullback_squares,
    criterion_fiber_product_covering,
    criterion_classification,
    criterion_stratification,
    criterion_day_convolution,
    criterion_representability_roundtrip,
    criterion_cospecialization_demo,
    criterion_morse_demo,
]


def run_all():
    return [c() for c in CRITERIA]
