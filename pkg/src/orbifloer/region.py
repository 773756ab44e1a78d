"""Bulk-deformation scenarios and the certified non-displaceable region.

A scenario is one shape the leading part of a bulk-deformed potential can
take: an ordered partition of generators into energy levels, each level
pinned by at least one facet.  Placing sector nu at level l means giving
its bulk parameter the exponent S_l - ell_nu(u), legal exactly when that
number is positive, so every published hand-tuning of bulk exponents
becomes one linear feasibility problem in u.  The leading term system of
a scenario does not depend on u; a single solvability verdict covers the
whole feasible piece.

nondisplaceable_region glues the halves together: enumerate scenarios,
keep those whose feasible region is nonempty and whose system is
certified solvable, and return the union of pieces, each remembering the
scenario that produced it.  Pieces overlap freely; certificates are
per-scenario and merging them would lose the audit trail.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import TooManyScenarios
from .lattice import rank_rational
from .ltsolver import (
    SolvabilityVerdict,
    Solvability,
    build_lts,
    lts_signature,
    scenario_stratification,
    solve,
)
from .series import QC, SymLin
from .stacky import StackyModel, enumerate_box, sector_ell_form


@dataclass(frozen=True)
class Constraint:
    """Affine condition coeffs.u + const REL 0, tagged with its origin.

    kind is one of "interior", "level", "order", "sector", "above"; only
    "interior" constraints stay strict when a region is read in closure
    mode (the limit argument never leaves the open moment polytope).
    """

    coeffs: tuple
    const: Fraction
    rel: str  # ">" or "=="
    kind: str
    label: str

    def value(self, u) -> Fraction:
        return sum(c * Fraction(x) for c, x in zip(self.coeffs, u)) + self.const

    def holds(self, u, closed: bool = False) -> bool:
        v = self.value(u)
        if self.rel == "==":
            return v == 0
        if closed and self.kind != "interior":
            return v >= 0
        return v > 0


@dataclass(frozen=True)
class Scenario:
    serial: int
    levels: tuple  # per level: tags ("facet", j) then ("sector", i), each ascending
    excluded: tuple  # sector tags with bulk switched off
    span_dims: tuple  # cumulative span dimension after each level

    @property
    def K(self) -> int:
        return len(self.levels)

    def describe(self) -> str:
        parts = []
        for l, tags in enumerate(self.levels):
            names = ",".join(f"{k}{i}" for k, i in tags)
            parts.append(f"S{l + 1}={{{names}}}")
        return " ".join(parts)


@dataclass(frozen=True)
class ScenarioPolyhedron:
    equalities: tuple  # Constraint, rel "=="
    inequalities: tuple  # Constraint, rel ">"
    witness: tuple  # Fractions, strictly feasible

    def contains(self, u, closed: bool = False) -> bool:
        return all(c.holds(u, closed) for c in self.equalities + self.inequalities)


@dataclass(frozen=True)
class RegionPiece:
    scenario: Scenario
    polyhedron: ScenarioPolyhedron
    verdict: SolvabilityVerdict


@dataclass(frozen=True)
class FiberRegion:
    model: StackyModel
    pieces: tuple
    closure: bool
    max_levels: int


@dataclass(frozen=True)
class QueryReport:
    u: tuple
    member: bool
    matches: tuple  # RegionPiece entries containing u
    interior: bool = True


def enumerate_scenarios(m: StackyModel, max_levels: int = 2, limit: int = 10**6) -> list:
    """All level assignments with a facet pinning every level.

    Facets may be left out (they must then end up above the last level),
    sectors may be left out (bulk zero) or placed anywhere.  Each level
    must add span dimension and the span must be full at the last level;
    assignments violating that are dropped here, feasibility in u is a
    separate question.  Enumeration order, and hence the serial numbers,
    is deterministic.
    """
    box = enumerate_box(m)
    nf, ns = len(m.facets), len(box)
    fdirs = [f.stacky_vector for f in m.facets]
    sdirs = [s.nu for s in box]
    rank_cache: dict = {}

    def rank_of(dirset):
        r = rank_cache.get(dirset)
        if r is None:
            r = rank_cache[dirset] = rank_rational(list(dirset))
        return r

    out: list = []
    examined = 0
    for K in range(1, max_levels + 1):
        for fassign in itertools.product(range(K + 1), repeat=nf):
            if any(l not in fassign for l in range(1, K + 1)):
                continue  # some level has no facet pin
            fsets = [
                frozenset(fdirs[j] for j in range(nf) if fassign[j] == l)
                for l in range(K + 1)
            ]
            for sassign in itertools.product(range(K + 1), repeat=ns):
                examined += 1
                if examined > limit:
                    raise TooManyScenarios(f"more than {limit} scenario candidates")
                dirs: frozenset = frozenset()
                dims = []
                prev = 0
                ok = True
                for l in range(1, K + 1):
                    dirs = dirs | fsets[l]
                    for i in range(ns):
                        if sassign[i] == l:
                            dirs = dirs | {sdirs[i]}
                    r = rank_of(dirs)
                    if r - prev < 1:
                        ok = False
                        break
                    dims.append(r)
                    prev = r
                if not ok or prev != m.dim:
                    continue
                levels = tuple(
                    tuple(
                        [("facet", j) for j in range(nf) if fassign[j] == l]
                        + [("sector", i) for i in range(ns) if sassign[i] == l]
                    )
                    for l in range(1, K + 1)
                )
                excluded = tuple(("sector", i) for i in range(ns) if sassign[i] == 0)
                out.append(Scenario(len(out), levels, excluded, tuple(dims)))
    return out


def _form_difference(a, b):
    # (grad, const) of a - b for two affine forms
    ga, ca = a
    gb, cb = b
    return tuple(Fraction(x) - Fraction(y) for x, y in zip(ga, gb)), Fraction(ca) - Fraction(cb)


def scenario_constraints(m: StackyModel, s: Scenario) -> list:
    """The scenario's defining conditions on u, each tagged with its origin."""
    box = enumerate_box(m)
    cons = []
    for j in range(len(m.facets)):
        g, c = m.ell_form(j)
        cons.append(
            Constraint(tuple(Fraction(x) for x in g), Fraction(c), ">", "interior", f"ell_{j} > 0")
        )
    anchors = []
    for l, tags in enumerate(s.levels):
        facets = [i for k, i in tags if k == "facet"]
        anchors.append(facets[0])
        af = m.ell_form(facets[0])
        for j in facets[1:]:
            g, c = _form_difference(af, m.ell_form(j))
            cons.append(Constraint(g, c, "==", "level", f"ell_{anchors[l]} = ell_{j}"))
        for k, i in tags:
            if k != "sector":
                continue
            g, c = _form_difference(af, sector_ell_form(m, box[i]))
            cons.append(
                Constraint(g, c, ">", "sector", f"ell_nu{box[i].nu} < S{l + 1}")
            )
    for l in range(len(anchors) - 1):
        g, c = _form_difference(m.ell_form(anchors[l + 1]), m.ell_form(anchors[l]))
        cons.append(Constraint(g, c, ">", "order", f"S{l + 2} > S{l + 1}"))
    assigned = {i for tags in s.levels for k, i in tags if k == "facet"}
    top = m.ell_form(anchors[-1])
    for j in range(len(m.facets)):
        if j not in assigned:
            g, c = _form_difference(m.ell_form(j), top)
            cons.append(Constraint(g, c, ">", "above", f"ell_{j} > S{s.K}"))
    return cons


def _reduce(vec, subs):
    # substitute pivot rows (in creation order) into an (n+1)-vector
    vec = list(vec)
    for k, row in subs:
        c = vec[k]
        if c != 0:
            vec[k] = Fraction(0)
            for j in range(len(vec)):
                if j != k:
                    vec[j] -= c * row[j]
    return vec


def _fm_witness(ineqs, var_order):
    """Fourier-Motzkin with witness reconstruction.

    Every input is strict (coeffs.u + const > 0); strictness survives the
    pairwise combinations, so a feasible system always has interior
    points and the midpoint reconstruction below is safe.  Returns a dict
    var -> Fraction or None.
    """
    if not var_order:
        return {} if all(c > 0 for v, c in ineqs) else None
    k = var_order[-1]
    lowers, uppers, rest = [], [], []
    for vec, c in ineqs:
        a = vec[k]
        if a == 0:
            rest.append((vec, c))
        elif a > 0:
            lowers.append((vec, c))
        else:
            uppers.append((vec, c))
    combined = list(rest)
    for lvec, lc in lowers:
        for uvec, uc in uppers:
            al, au = lvec[k], uvec[k]
            nvec = [al * uv - au * lv for lv, uv in zip(lvec, uvec)]
            nvec[k] = Fraction(0)
            combined.append((nvec, al * uc - au * lc))
    sol = _fm_witness(combined, var_order[:-1])
    if sol is None:
        return None

    def residue(vec, c):
        return c + sum(vec[j] * sol.get(j, Fraction(0)) for j in range(len(vec)) if j != k)

    lo = max((-residue(v, c) / v[k] for v, c in lowers), default=None)
    hi = min((-residue(v, c) / v[k] for v, c in uppers), default=None)
    if lo is not None and hi is not None:
        sol[k] = (lo + hi) / 2
    elif lo is not None:
        sol[k] = lo + 1
    elif hi is not None:
        sol[k] = hi - 1
    else:
        sol[k] = Fraction(0)
    return sol


def feasible_witness(cons, n):
    """Exact feasibility of a mixed equality/strict system; witness or None."""
    subs: list = []
    for c in cons:
        if c.rel != "==":
            continue
        row = _reduce(list(c.coeffs) + [c.const], subs)
        pivot = next((k for k in range(n) if row[k] != 0), None)
        if pivot is None:
            if row[n] != 0:
                return None
            continue
        p = row[pivot]
        row = [x / p for x in row]
        row[pivot] = Fraction(1)
        subs.append((pivot, row))
    # normalize and keep only the binding inequality per direction: FM cost
    # is quadratic in the row count, duplicates are common here
    best: dict = {}
    for c in cons:
        if c.rel == "==":
            continue
        vec = _reduce(list(c.coeffs) + [c.const], subs)
        piv = next((x for x in vec[:n] if x), None)
        if piv is None:
            if vec[n] <= 0:
                return None
            continue
        scale = abs(piv)
        key = tuple(x / scale for x in vec[:n])
        const = vec[n] / scale
        if key not in best or const < best[key]:
            best[key] = const
    ineqs = [(list(g), c) for g, c in best.items()]
    free = [k for k in range(n) if k not in {p for p, _ in subs}]
    sol = _fm_witness(ineqs, free)
    if sol is None:
        return None
    for pivot, row in reversed(subs):
        sol[pivot] = -(row[n] + sum(row[j] * sol[j] for j in range(n) if j != pivot and row[j]))
    return tuple(sol[k] for k in range(n))


def scenario_region(m: StackyModel, s: Scenario) -> ScenarioPolyhedron | None:
    """Feasible u-set of a scenario, or None when empty."""
    cons = scenario_constraints(m, s)
    w = feasible_witness(cons, m.dim)
    if w is None:
        return None
    eqs = tuple(c for c in cons if c.rel == "==")
    ineqs = tuple(c for c in cons if c.rel == ">")
    assert all(c.holds(w) for c in cons), "witness must satisfy its own system"
    return ScenarioPolyhedron(eqs, ineqs, w)


def scenario_lts(m: StackyModel, s: Scenario):
    """The u-independent leading term system of a scenario.

    Facet terms carry coefficient 1; each placed sector gets its own free
    symbol (named by box index, stable across scenarios so structurally
    equal systems share a signature).
    """
    coeffs = {}
    for tags in s.levels:
        for tag in tags:
            kind, i = tag
            coeffs[tag] = QC.of(1) if kind == "facet" else SymLin.symbol(f"c{i}")
    return build_lts(scenario_stratification(m, s.levels, coeffs))


def nondisplaceable_region(
    m: StackyModel,
    max_levels: int = 2,
    closure: bool = True,
    seed: int = 0,
    starts: int = 64,
) -> FiberRegion:
    """Union of feasible scenario pieces whose systems are certified.

    Verdicts are cached by structural signature: scenarios producing the
    same level polynomials up to symbol renaming share one solve.
    """
    pieces = []
    cache: dict = {}
    for s in enumerate_scenarios(m, max_levels):
        poly = scenario_region(m, s)
        if poly is None:
            continue
        lts = scenario_lts(m, s)
        sig = lts_signature(lts)
        verdict = cache.get(sig)
        if verdict is None:
            verdict = solve(lts, seed=seed, starts=starts)
            cache[sig] = verdict
        if verdict.status is Solvability.SolvableCertified:
            pieces.append(RegionPiece(s, poly, verdict))
    return FiberRegion(m, tuple(pieces), closure, max_levels)


def query_point(r: FiberRegion, u) -> QueryReport:
    """Membership report for a rational point.

    Points outside the open moment polytope carry no torus fiber, so they
    are reported as non-members rather than rejected.
    """
    uu = tuple(Fraction(x) for x in u)
    if not r.model.is_interior(uu):
        return QueryReport(uu, False, (), interior=False)
    matches = tuple(p for p in r.pieces if p.polyhedron.contains(uu, closed=r.closure))
    return QueryReport(uu, bool(matches), matches)


def _tighten(bound, closed, v, cl, is_lower):
    # fold one endpoint candidate into the running (bound, closed) pair
    if bound is None or (v > bound if is_lower else v < bound):
        return v, cl
    if v == bound:
        return bound, closed and cl
    return bound, closed


def _piece_interval(p: RegionPiece, closed: bool):
    # exact endpoint data (lo, lo_closed, hi, hi_closed) of a 1-d piece
    lo = hi = None
    lo_c = hi_c = False
    for c in p.polyhedron.equalities + p.polyhedron.inequalities:
        a = c.coeffs[0]
        if a == 0:
            continue  # constant condition, already feasible
        v = -c.const / a
        if c.rel == "==":
            lo, lo_c = _tighten(lo, lo_c, v, True, True)
            hi, hi_c = _tighten(hi, hi_c, v, True, False)
            continue
        cl = closed and c.kind != "interior"
        if a > 0:
            lo, lo_c = _tighten(lo, lo_c, v, cl, True)
        else:
            hi, hi_c = _tighten(hi, hi_c, v, cl, False)
    return lo, lo_c, hi, hi_c


def interval_union(r: FiberRegion) -> list:
    """Merged 1-d picture of the region: [(lo, lo_closed, hi, hi_closed)].

    Only for 1-dimensional models.  Endpoint openness follows the
    region's closure flag.  None endpoints cannot occur (the polytope is
    compact and interiority is part of every piece).
    """
    if r.model.dim != 1:
        raise ValueError("interval_union needs a 1-dimensional model")
    ivs = sorted(
        (_piece_interval(p, r.closure) for p in r.pieces),
        key=lambda iv: (iv[0], not iv[1]),
    )
    merged: list = []
    for lo, lo_c, hi, hi_c in ivs:
        if hi < lo or (hi == lo and not (lo_c and hi_c)):
            continue  # closure-off degenerate piece, empty as an interval
        if merged:
            plo, plo_c, phi, phi_c = merged[-1]
            if lo < phi or (lo == phi and (lo_c or phi_c)):
                if hi > phi:
                    phi, phi_c = hi, hi_c
                elif hi == phi:
                    phi_c = phi_c or hi_c
                merged[-1] = (plo, plo_c, phi, phi_c)
                continue
        merged.append((lo, lo_c, hi, hi_c))
    return merged


def _equality_rank(eqs, n):
    return rank_rational([list(c.coeffs) for c in eqs]) if eqs else 0


def piece_geometry(p: RegionPiece, dim: int):
    """Closed-piece drawing data for 2-d models.

    Returns ("polygon", pts), ("segment", (a, b)) or ("point", (w,)) with
    exact rational coordinates; rendering decides how to scale.  Closure
    is always used here, drawing the boundary of an open piece is the
    honest picture at pixel scale.
    """
    if dim != 2:
        raise ValueError("piece_geometry needs a 2-dimensional model")
    eqs = p.polyhedron.equalities
    ineqs = p.polyhedron.inequalities
    w = p.polyhedron.witness
    rank = _equality_rank(eqs, 2)
    if rank >= 2:
        return ("point", (w,))
    if rank == 1:
        g = next(c.coeffs for c in eqs if any(c.coeffs))
        d = (-g[1], g[0])  # direction along the equality line
        tmin, tmax = None, None
        for c in ineqs:
            a = sum(ci * di for ci, di in zip(c.coeffs, d))
            rhs = -c.value(w)
            if a == 0:
                continue
            t = rhs / a
            if a > 0:
                tmin = t if tmin is None else max(tmin, t)
            else:
                tmax = t if tmax is None else min(tmax, t)
        assert tmin is not None and tmax is not None, "piece line must be clipped by P"
        a_pt = tuple(wi + tmin * di for wi, di in zip(w, d))
        b_pt = tuple(wi + tmax * di for wi, di in zip(w, d))
        if a_pt == b_pt:
            return ("point", (a_pt,))
        return ("segment", (a_pt, b_pt))
    lines = [(c.coeffs, c.const) for c in ineqs if any(c.coeffs)]
    pts = set()
    for (g1, c1), (g2, c2) in itertools.combinations(lines, 2):
        det = g1[0] * g2[1] - g1[1] * g2[0]
        if det == 0:
            continue
        x = (-c1 * g2[1] + c2 * g1[1]) / det
        y = (-c2 * g1[0] + c1 * g2[0]) / det
        cand = (x, y)
        if all(c.value(cand) >= 0 for c in ineqs):
            pts.add(cand)
    pts = sorted(pts)
    if len(pts) < 3:
        if len(pts) == 2:
            return ("segment", tuple(pts))
        return ("point", (pts[0] if pts else w,))
    cx = sum(x for x, _ in pts) / len(pts)
    cy = sum(y for _, y in pts) / len(pts)
    ordered = sorted(pts, key=lambda q: math.atan2(float(q[1] - cy), float(q[0] - cx)))
    return ("polygon", tuple(ordered))
