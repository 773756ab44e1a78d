"""Leading-order potentials at a torus fiber and critical-point residuals.

A fiber point u contributes one term T^{area} y^{boundary} per facet, and a
bulk deformation adds one term per activated twisted sector.  Only the
leading order is built here: higher corrections have no closed formula, and
the downstream solvability pipeline never needs them.

Residuals are measured with the logarithmic gradient (y_i d/dy_i), which is
the coordinate-free notion in the y = e^x chart.
"""

from __future__ import annotations

import cmath
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InputError,
    NoConvergence,
    NonPositiveBulkExponent,
    ZeroCoordinate,
)
from .series import (
    QC,
    LaurentPoly,
    NovikovScalar,
    SymLin,
    c_is_zero,
    render_coeff,
)
from .stacky import StackyModel, build_model, enumerate_box, sector_ell


@dataclass(frozen=True)
class BulkEntry:
    """One activated sector: coefficient times T^exponent."""

    nu: tuple  # lattice vector of a Box' element
    coeff: object  # QC or SymLin
    exponent: Fraction

    def __post_init__(self):
        if self.exponent <= 0:
            raise NonPositiveBulkExponent(
                f"bulk exponent {self.exponent} at {self.nu} must be positive"
            )


@dataclass(frozen=True)
class BulkParam:
    """Bulk deformation data keyed by sector.

    Sectors absent from ``entries`` carry the zero deformation.  Divisor
    entries are accepted for interface completeness but do not enter the
    leading-order formulas, so they are stored and otherwise ignored.
    """

    entries: tuple = ()
    divisors: tuple = ()  # (facet index, coeff, exponent), unused here

    @staticmethod
    def zero() -> "BulkParam":
        return BulkParam()

    @staticmethod
    def of(entries) -> "BulkParam":
        out = []
        for nu, coeff, exponent in entries:
            out.append(BulkEntry(tuple(int(x) for x in nu), coeff, Fraction(exponent)))
        return BulkParam(tuple(out))

    def is_zero(self) -> bool:
        return all(c_is_zero(e.coeff) for e in self.entries)


@dataclass(frozen=True)
class PotentialTerm:
    kind: str  # "facet" or "sector"
    index: int  # facet index, or position in the sector list
    exponent: tuple  # y-exponent vector
    t_exponent: Fraction
    coeff: object

    def __str__(self):
        n = len(self.exponent)
        body = "*".join(
            f"y{i + 1}^{e}" for i, e in enumerate(self.exponent) if e
        )
        c = render_coeff(self.coeff)
        head = f"T^{{{self.t_exponent}}}"
        if c != "1":
            head = f"{c}*{head}"
        return f"{head}*{body}" if body else head


@dataclass(frozen=True)
class PotentialAtFiber:
    """Leading-order potential at a fixed interior fiber point."""

    u: tuple
    poly: LaurentPoly
    terms: tuple  # PotentialTerm provenance, facets first

    def __str__(self):
        return " + ".join(str(t) for t in self.terms) if self.terms else "0"


def smooth_leading_potential(m: StackyModel, u) -> PotentialAtFiber:
    """One term T^{ell_j(u)} y^{b_j} per facet.

    >>> str(smooth_leading_potential(build_model("teardrop:3"), (0,)))
    'T^{1}*y1^3 + T^{1}*y1^-1'
    """
    m.require_interior(u)
    uu = tuple(Fraction(x) for x in u)
    poly = LaurentPoly.zero(m.dim)
    terms = []
    for j, f in enumerate(m.facets):
        b = f.stacky_vector
        a = m.ell(j, uu)
        poly = poly + LaurentPoly.monomial(b, NovikovScalar.of(QC.of(1), a))
        terms.append(PotentialTerm("facet", j, b, a, QC.of(1)))
    return PotentialAtFiber(uu, poly, tuple(terms))


def bulk_leading_potential(m: StackyModel, u, bp: BulkParam) -> PotentialAtFiber:
    """Smooth potential plus c_nu T^{exponent + ell_nu(u)} y^nu per entry.

    Entries with zero coefficient are dropped.  Every entry's lattice vector
    must name an actual twisted sector of the model.
    """
    base = smooth_leading_potential(m, u)
    sectors = enumerate_box(m)
    by_nu = {s.nu: (i, s) for i, s in enumerate(sectors)}
    poly = base.poly
    terms = list(base.terms)
    for e in bp.entries:
        if e.nu not in by_nu:
            raise InputError(f"{e.nu} is not a twisted sector of this model")
        if c_is_zero(e.coeff):
            continue
        i, s = by_nu[e.nu]
        a = e.exponent + sector_ell(m, s, base.u)
        poly = poly + LaurentPoly.monomial(e.nu, NovikovScalar.of(e.coeff, a))
        terms.append(PotentialTerm("sector", i, e.nu, a, e.coeff))
    return PotentialAtFiber(base.u, poly, tuple(terms))


def log_gradient(p: LaurentPoly) -> tuple:
    """Tuple of y_i * d/dy_i applied to p, one entry per variable."""
    return tuple(p.log_derivative(i) for i in range(p.n))


def critical_residual(p, y, t_value: float = 0.5, env: dict | None = None) -> float:
    """max_i |y_i dp/dy_i| at the point (y, T = t_value).

    Accepts a PotentialAtFiber or a bare LaurentPoly.  Symbolic coefficients
    need values in ``env``.
    """
    poly = p.poly if isinstance(p, PotentialAtFiber) else p
    yy = tuple(complex(c) for c in y)
    if any(c == 0 for c in yy):
        raise ZeroCoordinate("residual undefined on a coordinate hyperplane")
    worst = 0.0
    for g in log_gradient(poly):
        worst = max(worst, abs(g.eval_complex(yy, float(t_value), env)))
    return worst


def shared_t_exponent(p) -> Fraction | None:
    """The single T-exponent carried by every term, or None if they differ.

    The zero polynomial shares vacuously and reports 0.
    """
    poly = p.poly if isinstance(p, PotentialAtFiber) else p
    seen = set()
    for _, s in poly.terms():
        for q, _ in s.terms:
            seen.add(q)
    if len(seen) > 1:
        return None
    return seen.pop() if seen else Fraction(0)


def strip_shared_t(p: LaurentPoly) -> tuple:
    """Split p = T^rho * q with q free of T; requires one shared exponent."""
    rho = shared_t_exponent(p)
    if rho is None:
        raise InputError("terms carry more than one T-exponent")
    out = LaurentPoly.zero(p.n)
    for e, s in p.terms():
        c = s.leading_coefficient()
        out = out + LaurentPoly.monomial(e, NovikovScalar.of(c))
    return rho, out


def critical_residual_sq_exact(p, y, env: dict | None = None) -> Fraction:
    """Exact squared residual max_i |y_i dp/dy_i|^2 with T stripped.

    Only defined when all terms share one T-exponent (the leading-term
    situation), so the common power of T scales every gradient entry alike
    and certifying residual zero needs no numeric T at all.  Coordinates
    must be exact Gaussian rationals.
    """
    poly = p.poly if isinstance(p, PotentialAtFiber) else p
    _, tfree = strip_shared_t(poly)
    yy = tuple(c if isinstance(c, QC) else QC.of(c) for c in y)
    worst = Fraction(0)
    for g in log_gradient(tfree):
        worst = max(worst, g.eval_exact(yy, env).abs2())
    return worst


# ---------------------------------------------------------------------------
# critical points of a potential at fixed numeric T


@dataclass(frozen=True)
class CriticalPoint:
    y: tuple  # complex coordinates
    residual: float


def _newton_polish(grads, jac, y, t, env, iters=60):
    """Newton in log coordinates x = log y; returns (y, residual).

    The Jacobian entries are y_k d/dy_k of the equations, so the linear
    solve yields a step in x and the update is multiplicative.  That keeps
    every coordinate off zero without any projection step.
    """
    import numpy as np

    yy = np.array(y, dtype=complex)
    for _ in range(iters):
        fv = np.array([g.eval_complex(tuple(yy), t, env) for g in grads])
        res = max(abs(v) for v in fv)
        if res < 1e-14:
            break
        jm = np.array(
            [[jac[i][k].eval_complex(tuple(yy), t, env) for k in range(len(yy))] for i in range(len(fv))]
        )
        try:
            dx = np.linalg.solve(jm, -fv)
        except np.linalg.LinAlgError:
            break
        norm = float(np.linalg.norm(dx))
        if norm > 3.0:  # trust region in log scale
            dx *= 3.0 / norm
        yy = yy * np.exp(dx)
        if any(abs(c) > 1e9 or abs(c) < 1e-9 for c in yy):
            break
    fv = [g.eval_complex(tuple(yy), t, env) for g in grads]
    return tuple(complex(c) for c in yy), max(abs(v) for v in fv)


def _log_jacobian(grads):
    """jac[i][k] = y_k d/dy_k of gradient entry i (log-coordinates)."""
    return [[g.log_derivative(k) for k in range(g.n)] for g in grads]


def _univariate_critical(poly, t, env):
    """All nonzero roots of the single log-gradient entry, via companion matrix."""
    import numpy as np

    g = poly.log_derivative(0)
    if g.is_zero():
        return []
    exps = [e[0] for e, _ in g.terms()]
    lo = min(exps)
    coeffs = {}
    for e, s in g.terms():
        coeffs[e[0] - lo] = s.eval_complex(t, env)
    deg = max(coeffs)
    vec = [coeffs.get(d, 0j) for d in range(deg, -1, -1)]
    roots = [complex(r) for r in np.roots(vec)]
    grads = log_gradient(poly)
    jac = _log_jacobian(grads)
    out = []
    for r in roots:
        if abs(r) < 1e-8:
            continue
        y, res = _newton_polish(grads, jac, (r,), t, env)
        out.append(CriticalPoint(y, res))
    return out


def _sort_key(y):
    return tuple((round(c.real, 9), round(c.imag, 9)) for c in y)


def critical_points(
    p,
    t_value: float = 0.5,
    env: dict | None = None,
    seed: int = 0,
    starts: int = 64,
    residual_tol: float = 1e-10,
) -> list:
    """Search for critical points of p at T = t_value.

    One variable: exact-degree companion-matrix roots, then a Newton polish.
    Several variables: deterministic multistart Newton; the returned list
    holds the distinct converged points.  Either way the list is sorted by
    rounded coordinates, so reruns with one seed agree.
    """
    poly = p.poly if isinstance(p, PotentialAtFiber) else p
    t = float(t_value)
    if poly.n == 1:
        found = _univariate_critical(poly, t, env)
    else:
        grads = log_gradient(poly)
        jac = _log_jacobian(grads)
        rng = random.Random(seed)
        found = []
        for _ in range(starts):
            y0 = tuple(
                cmath.rect(rng.uniform(0.2, 2.0), rng.uniform(0.0, 2 * cmath.pi))
                for _ in range(poly.n)
            )
            y, res = _newton_polish(grads, jac, y0, t, env)
            if res < residual_tol and all(abs(c) > 1e-8 for c in y):
                if all(max(abs(a - b) for a, b in zip(y, q.y)) > 1e-6 for q in found):
                    found.append(CriticalPoint(y, res))
    return sorted(found, key=lambda c: _sort_key(c.y))


# ---------------------------------------------------------------------------
# central fiber of a weighted projective model


@dataclass(frozen=True)
class CentralFiberCritical:
    weights: tuple  # the tail (a_1..a_n); the model is P(1, a_1..a_n)
    u: tuple
    y: tuple
    lam: float
    residual: float


def wp_central_critical(weights) -> CentralFiberCritical:
    """Positive critical point of the P(1, a_1..a_n) potential at u = 0.

    The gradient system there reads y_i = a_i * lam with
    lam = prod_j y_j^{-a_j}; Newton runs on that form starting from the
    positive real branch.  Restarts rescale the seed; a residual above
    1e-10 after all of them raises NoConvergence.

    The one-variable elimination gives lam^{1 + sum a_j} = prod a_j^{-a_j},
    e.g. lam = 2^{-1/2} for weights (1, 2).  Closed-form expressions for
    lam floating around elsewhere disagree with this; the result here is
    certified by its residual, not by any printed formula.
    """
    tail = tuple(int(a) for a in weights)
    if not tail or any(a < 1 for a in tail):
        raise InputError("weights must be positive integers (the tail a_1..a_n)")
    import numpy as np

    n = len(tail)
    a = np.array(tail, dtype=float)
    best = None
    for scale in (1.0, 0.5, 2.0, 0.25, 4.0):
        lam0 = scale
        y = a * lam0
        ok = True
        for _ in range(80):
            lam = float(np.prod(y ** (-a)))
            f = y - a * lam
            res = float(max(abs(f)))
            if res < 1e-14:
                break
            # d lam / d y_k = -a_k lam / y_k
            jm = np.eye(n) + np.outer(a, a * lam / y)
            try:
                step = np.linalg.solve(jm, -f)
            except np.linalg.LinAlgError:
                ok = False
                break
            damp = 1.0
            moved = False
            for _ in range(20):
                cand = y + damp * step
                if all(cand > 1e-9):
                    lam_c = float(np.prod(cand ** (-a)))
                    if float(max(abs(cand - a * lam_c))) < res:
                        y = cand
                        moved = True
                        break
                damp *= 0.5
            if not moved:
                break
        if not ok:
            continue
        lam = float(np.prod(y ** (-a)))
        res = float(max(abs(y - a * lam)))
        if best is None or res < best[2]:
            best = (tuple(float(c) for c in y), lam, res)
        if res < 1e-12:
            break
    if best is None or best[2] > 1e-10:
        raise NoConvergence(f"no positive critical point for weights {tail}")
    m = build_model({"preset": "weighted_projective", "weights": (1,) + tail})
    u0 = tuple(Fraction(0) for _ in range(n))
    pot = smooth_leading_potential(m, u0)
    resid = critical_residual(pot, [complex(c) for c in best[0]], 0.5)
    return CentralFiberCritical(tail, u0, tuple(complex(c) for c in best[0]), best[1], resid)
