"""Energy stratification, leading term equations, and solvability verdicts.

At a fiber point the generators (facets, plus bulk-activated sectors) sort
by energy; the adapted lattice basis turns each energy level into a Laurent
polynomial whose own-variable critical equations make up the leading term
system.  Solvability of that system over (C*)^n certifies the fiber.

Everything up to the verdict is exact.  The numeric search only ever
produces SolvableCertified (re-verified residuals) or gives up; proven
unsolvability comes from the single structural special case, a level
polynomial that is one monomial, whose derivative is again a monomial
and therefore never zero on the torus.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import InputError, SpanNeverFull
from .lattice import invert_unimodular, rank_rational, saturate_flag
from .potential import BulkParam
from .series import QC, LaurentPoly, NovikovScalar, SymLin, monomial_rewrite
from .stacky import StackyModel, enumerate_box, sector_ell


# member tags are ("facet", j) or ("sector", box_index)


@dataclass(frozen=True)
class StratumLevel:
    energy: Fraction | None  # None when built from a scenario, not a point
    members: tuple
    directions: tuple
    coeffs: tuple
    d: int  # span dimension added by this level
    span_dim: int  # cumulative span dimension


@dataclass(frozen=True)
class EnergyStratification:
    model: StackyModel
    u: tuple | None
    levels: tuple  # StratumLevel, lowest energy first, cut at full span
    adapted_basis: tuple  # rows; prefix of length span_dim spans each stage

    @property
    def member_count(self) -> int:
        return sum(len(lv.members) for lv in self.levels)


def stratify(m: StackyModel, u, bp: BulkParam | None = None) -> EnergyStratification:
    """Sort generators by energy at u and cut at the first full-span level.

    Facet j sits at energy ell_j(u); an activated sector at
    ell_nu(u) + lambda_nu.  Bulk exponents must be concrete rationals
    (scenario machinery never calls this).  Levels that add no span
    dimension still appear: their members are part of the partition below
    the cut, they just own no variables.
    """
    m.require_interior(u)
    uu = tuple(Fraction(x) for x in u)
    bp = bp or BulkParam.zero()
    box = enumerate_box(m)
    by_nu = {s.nu: (i, s) for i, s in enumerate(box)}
    entries = []
    for j, f in enumerate(m.facets):
        entries.append((m.ell(j, uu), ("facet", j), f.stacky_vector, QC.of(1)))
    for e in bp.entries:
        if e.nu not in by_nu:
            raise InputError(f"{e.nu} is not a twisted sector of this model")
        if isinstance(e.coeff, QC) and e.coeff.is_zero():
            continue
        i, s = by_nu[e.nu]
        entries.append((sector_ell(m, s, uu) + e.exponent, ("sector", i), e.nu, e.coeff))

    by_energy: dict = {}
    for en, tag, direction, coeff in entries:
        by_energy.setdefault(en, []).append((tag, direction, coeff))

    levels = []
    seen_dirs: list = []
    prev_rank = 0
    for en in sorted(by_energy):
        group = sorted(by_energy[en], key=lambda g: g[0])
        dirs = tuple(g[1] for g in group)
        seen_dirs.extend(dirs)
        r = rank_rational(seen_dirs)
        levels.append(
            StratumLevel(
                en,
                tuple(g[0] for g in group),
                dirs,
                tuple(g[2] for g in group),
                r - prev_rank,
                r,
            )
        )
        prev_rank = r
        if r == m.dim:
            break
    else:
        raise SpanNeverFull("finite-energy generators never span; model is inconsistent")

    basis = _adapted_basis(levels)
    return EnergyStratification(m, uu, tuple(levels), basis)


def _adapted_basis(levels) -> tuple:
    chain = []
    acc: list = []
    for lv in levels:
        acc = acc + list(lv.directions)
        chain.append(list(acc))
    return tuple(saturate_flag(chain))


def scenario_stratification(m: StackyModel, groups, coeffs) -> EnergyStratification:
    """Stratification-shaped data from an abstract level assignment.

    ``groups`` lists the member tags per level, lowest first; ``coeffs``
    maps tags to coefficients.  No energies are involved: the caller is
    responsible for the feasibility of the assignment, this only rebuilds
    the span bookkeeping so build_lts can run on it.
    """
    box = enumerate_box(m)
    levels = []
    seen: list = []
    prev_rank = 0
    for group in groups:
        dirs = []
        for tag in group:
            kind, i = tag
            dirs.append(m.facets[i].stacky_vector if kind == "facet" else box[i].nu)
        seen.extend(dirs)
        r = rank_rational(seen)
        levels.append(
            StratumLevel(
                None,
                tuple(group),
                tuple(dirs),
                tuple(coeffs[tag] for tag in group),
                r - prev_rank,
                r,
            )
        )
        prev_rank = r
    if prev_rank != m.dim:
        raise SpanNeverFull("scenario levels do not span")
    return EnergyStratification(m, None, tuple(levels), _adapted_basis(levels))


@dataclass(frozen=True)
class LtsLevel:
    energy: Fraction | None
    poly: LaurentPoly  # in adapted coordinates, T-free
    var_indices: tuple  # adapted coordinates owned by this level
    equations: tuple  # partial derivatives wrt the owned coordinates


@dataclass(frozen=True)
class LeadingTermSystem:
    n: int
    basis: tuple  # adapted basis rows
    levels: tuple  # LtsLevel
    symbols: tuple  # free coefficient names, sorted
    labels: tuple  # facet labels, for the special coefficient palette


def build_lts(strat: EnergyStratification) -> LeadingTermSystem:
    """Rewrite each level in adapted coordinates and differentiate.

    The change of basis is unimodular, so the rewrite is a bijection on
    (C*)^n and solvability is unaffected.  Level l may only involve
    coordinates of levels <= l; that drop-out is what the adapted basis
    buys and it is asserted here.
    """
    n = strat.model.dim
    change = invert_unimodular(strat.adapted_basis)
    out = []
    prev_dim = 0
    names = set()
    for lv in strat.levels:
        poly = LaurentPoly.zero(n)
        for direction, coeff in zip(lv.directions, lv.coeffs):
            poly = poly + LaurentPoly.monomial(direction, NovikovScalar.of(coeff))
            if isinstance(coeff, SymLin):
                names.update(name for name, _ in coeff.lin)
        poly = monomial_rewrite(poly, change)
        for e, _ in poly.terms():
            if any(e[k] for k in range(lv.span_dim, n)):
                raise AssertionError("adapted rewrite leaked a later-level variable")
        own = tuple(range(prev_dim, lv.span_dim))
        eqs = tuple(poly.partial_derivative(i) for i in own)
        out.append(LtsLevel(lv.energy, poly, own, eqs))
        prev_dim = lv.span_dim
    return LeadingTermSystem(
        n,
        strat.adapted_basis,
        tuple(out),
        tuple(sorted(names)),
        tuple(f.label for f in strat.model.facets),
    )


class Solvability(str, Enum):
    SolvableCertified = "SolvableCertified"
    UnknownLikelyUnsolvable = "UnknownLikelyUnsolvable"
    UnsolvableProven = "UnsolvableProven"


@dataclass(frozen=True)
class Certificate:
    symbol_values: tuple  # (name, complex), sorted by name
    y: tuple  # adapted coordinates, complex
    residual: float
    exact: bool  # residual is literally zero in exact arithmetic


@dataclass(frozen=True)
class SolvabilityVerdict:
    status: Solvability
    certificate: Certificate | None = None
    proof: str | None = None


def lts_signature(lts: LeadingTermSystem):
    """Hashable structural key: systems with equal keys get equal verdicts."""
    rename: dict = {}

    def ckey(c):
        if isinstance(c, QC):
            return ("q", str(c.re), str(c.im))
        parts = [("q", str(c.const.re), str(c.const.im))]
        for name, q in c.lin:
            rename.setdefault(name, f"s{len(rename)}")
            parts.append((rename[name], str(q.re), str(q.im)))
        return ("s", tuple(parts))

    sig = []
    for lv in lts.levels:
        terms = tuple(
            sorted((e, ckey(s.leading_coefficient())) for e, s in lv.poly.terms())
        )
        sig.append((terms, lv.var_indices))
    return tuple(sig)


# deterministic generic nonzero coefficients, spread in modulus and phase
GENERIC_COEFFS = tuple(
    complex((0.6 + 0.09 * k) * np.cos(2.39996 * k + 0.5), (0.6 + 0.09 * k) * np.sin(2.39996 * k + 0.5))
    for k in range(16)
)


def _never_zero(coeff) -> bool:
    # constants are nonzero by normalization; a pure symbol ranges over C*
    if isinstance(coeff, QC):
        return not coeff.is_zero()
    return (coeff.const.is_zero() and len(coeff.lin) == 1) or (
        coeff.is_constant() and not coeff.const.is_zero()
    )


def _symbol_assignments(lts: LeadingTermSystem, limit_exact: int = 64) -> list:
    names = lts.symbols
    if not names:
        return [{}]
    special = [QC.of(1), QC.of(-1)]
    for c in sorted(set(lts.labels)):
        q = QC.of(-c)
        if q not in special:
            special.append(q)
    out = []
    for combo in itertools.islice(itertools.product(special, repeat=len(names)), limit_exact):
        out.append(dict(zip(names, combo)))
    for k in range(16):
        out.append(
            {nm: GENERIC_COEFFS[(k + 3 * idx) % 16] for idx, nm in enumerate(names)}
        )
    return out


def _env_is_exact(env) -> bool:
    return all(isinstance(v, QC) for v in env.values())


class _EqData:
    """Numeric view of one level for the vectorized Newton search."""

    def __init__(self, equations, own, vals, env):
        self.own = own
        self.coeffs = []  # per equation: complex coefficient * fixed-part value
        self.exps = []  # per equation: own-variable exponent rows
        for eq in equations:
            cs, es = [], []
            for e, s in eq.terms():
                c = s.eval_complex(1.0, env)  # T-free by construction
                for k, val in enumerate(vals):
                    if val is not None and e[k]:
                        c *= complex(val) ** e[k]
                cs.append(c)
                es.append([e[i] for i in own])
            self.coeffs.append(np.array(cs, dtype=complex))
            self.exps.append(np.array(es, dtype=float))

    def f_and_jlog(self, ys):
        """Values and log-Jacobian at a batch of points ys: (S, d)."""
        s, d = ys.shape
        fv = np.empty((s, len(self.coeffs)), dtype=complex)
        jm = np.empty((s, len(self.coeffs), d), dtype=complex)
        for r, (c, e) in enumerate(zip(self.coeffs, self.exps)):
            mono = np.prod(ys[:, None, :] ** e[None, :, :], axis=2)
            fv[:, r] = mono @ c
            for i in range(d):
                jm[:, r, i] = mono @ (c * e[:, i])
        return fv, jm


def _newton_batch(data: _EqData, y0, iters: int = 60):
    """Log-coordinate Newton on a batch of starts; returns (points, residuals).

    Residuals are the scaled |y_r * eq_r| used by the certificate check:
    the raw equation values of all-negative-exponent systems vanish along
    escapes to infinity, and the scaled metric is what keeps those fake
    wells out of the candidate list.
    """
    ys = np.array(y0, dtype=complex)
    if ys.ndim == 1:
        ys = ys[:, None]
    alive = np.ones(len(ys), dtype=bool)
    for _ in range(iters):
        fv, jm = data.f_and_jlog(ys)
        res = (np.abs(fv) * np.abs(ys)).max(axis=1)
        work = alive & (res > 1e-14)
        if not work.any():
            break
        try:
            dx = np.linalg.solve(jm[work], -fv[work][..., None])[..., 0]
        except np.linalg.LinAlgError:
            dx = np.empty((int(work.sum()), ys.shape[1]), dtype=complex)
            for k, idx in enumerate(np.nonzero(work)[0]):
                try:
                    dx[k] = np.linalg.solve(jm[idx], -fv[idx])
                except np.linalg.LinAlgError:
                    dx[k] = 0
                    alive[idx] = False
        norms = np.linalg.norm(dx, axis=1)
        big = norms > 3.0
        dx[big] *= (3.0 / norms[big])[:, None]
        ys[work] *= np.exp(dx)
        bad = (np.abs(ys) > 1e9).any(axis=1) | (np.abs(ys) < 1e-9).any(axis=1)
        alive &= ~bad
    fv, _ = data.f_and_jlog(ys)
    return ys, (np.abs(fv) * np.abs(ys)).max(axis=1)


class _FreeEqData:
    """Level equations with the level's own symbols joined as unknowns.

    Unknown layout z = (y_own..., c_sym...); the c's live on the torus
    just like the y's (zero is never a legal coefficient), so the same
    multiplicative Newton applies.  Coefficients are affine in symbols by
    construction, giving every term a base value plus a symbol-matrix row.
    """

    def __init__(self, equations, own, vals, env, sym_names):
        self.own = own
        self.sym = tuple(sym_names)
        s = len(self.sym)
        pos = {nm: k for k, nm in enumerate(self.sym)}
        self.base = []
        self.amat = []
        self.exps = []
        for eq in equations:
            bs, rows, es = [], [], []
            for e, scal in eq.terms():
                coeff = scal.leading_coefficient()
                row = [0j] * s
                if isinstance(coeff, QC):
                    b = coeff.to_complex()
                else:
                    b = coeff.const.to_complex()
                    for nm, q in coeff.lin:
                        if nm in pos:
                            row[pos[nm]] = q.to_complex()
                        else:
                            b += q.to_complex() * complex(env[nm])
                for k, val in enumerate(vals):
                    if val is not None and e[k]:
                        scale = complex(val) ** e[k]
                        b *= scale
                        row = [x * scale for x in row]
                bs.append(b)
                rows.append(row)
                es.append([e[i] for i in own])
            self.base.append(np.array(bs, dtype=complex))
            self.amat.append(np.array(rows, dtype=complex))
            self.exps.append(np.array(es, dtype=float))

    def f_and_jlog(self, zs):
        """Values and log-Jacobian at a batch zs: (S, d + s)."""
        d = len(self.own)
        s = len(self.sym)
        y = zs[:, :d]
        c = zs[:, d:]
        fv = np.empty((len(zs), len(self.base)), dtype=complex)
        jm = np.empty((len(zs), len(self.base), d + s), dtype=complex)
        for r, (b, a, e) in enumerate(zip(self.base, self.amat, self.exps)):
            mono = np.prod(y[:, None, :] ** e[None, :, :], axis=2)
            coeff = b[None, :] + c @ a.T
            fv[:, r] = (coeff * mono).sum(axis=1)
            for i in range(d):
                jm[:, r, i] = (coeff * mono * e[None, :, i]).sum(axis=1)
            for k in range(s):
                jm[:, r, d + k] = c[:, k] * (mono @ a[:, k])
        return fv, jm


def _newton_free(data: _FreeEqData, z0, iters: int = 60):
    """Minimal-norm log-Newton for the underdetermined joint system."""
    zs = np.array(z0, dtype=complex)
    d = len(data.own)
    alive = np.ones(len(zs), dtype=bool)
    res = np.full(len(zs), np.inf)
    for _ in range(iters):
        fv, jm = data.f_and_jlog(zs)
        res = (np.abs(fv) * np.abs(zs[:, :d])).max(axis=1)
        work = alive & (res > 1e-14)
        if not work.any():
            break
        try:
            pin = np.linalg.pinv(jm[work])
        except np.linalg.LinAlgError:
            break
        dx = (pin @ (-fv[work][..., None]))[..., 0]
        norms = np.linalg.norm(dx, axis=1)
        big = norms > 3.0
        dx[big] *= (3.0 / norms[big])[:, None]
        zs[work] *= np.exp(dx)
        bad = (np.abs(zs) > 1e9).any(axis=1) | (np.abs(zs) < 1e-9).any(axis=1)
        alive &= ~bad
    fv, _ = data.f_and_jlog(zs)
    return zs, (np.abs(fv) * np.abs(zs[:, :d])).max(axis=1)


def _distinct_roots(ys, res, tol=1e-12):
    found = []
    for y, r in sorted(
        zip(ys, res), key=lambda p: tuple((round(c.real, 9), round(c.imag, 9)) for c in p[0])
    ):
        if r > tol:
            continue
        if all(max(abs(a - b) for a, b in zip(y, f)) > 1e-6 for f in found):
            found.append(tuple(complex(c) for c in y))
    return found


def _univariate_candidates(eq, own_i, vals, env):
    """Complete root set of a one-variable level via closed form or companion."""
    bucket: dict = {}
    for e, s in eq.terms():
        c = s.eval_complex(1.0, env)
        for k, val in enumerate(vals):
            if val is not None and e[k]:
                c *= complex(val) ** e[k]
        bucket[e[own_i]] = bucket.get(e[own_i], 0j) + c
    ks = sorted(k for k, c in bucket.items() if abs(c) > 1e-13)
    if not ks:
        return []  # equation vanished numerically; nothing trustworthy to branch on
    if len(ks) == 1:
        return []  # monomial: no torus roots (structural scan reports the proven case)
    if len(ks) == 2:
        # binomial c_hi y^hi + c_lo y^lo = 0 in closed form
        lo, hi = ks
        gap = hi - lo
        ratio = -bucket[lo] / bucket[hi]
        r = abs(ratio) ** (1.0 / gap)
        theta = np.angle(ratio) / gap
        return [
            (complex(r * np.cos(theta + 2 * np.pi * k / gap), r * np.sin(theta + 2 * np.pi * k / gap)),)
            for k in range(gap)
        ]
    lo = ks[0]
    deg = ks[-1] - lo
    coeff_vec = [bucket.get(ks[-1] - d, 0j) for d in range(deg + 1)]
    return [(complex(r),) for r in np.roots(coeff_vec) if abs(r) > 1e-8]


class _Search:
    """One solve attempt under a fixed symbol assignment."""

    def __init__(self, lts, env, seed, starts, exact_only=False):
        self.lts = lts
        self.env = env
        self.exact_env = _env_is_exact(env)
        self.exact_only = exact_only
        self.seed = seed
        self.starts = starts
        self.calls = 0

    def run(self):
        vals = [None] * self.lts.n
        evals = [None] * self.lts.n if self.exact_env else None
        return self._level(0, vals, evals)

    def _level(self, li, vals, evals):
        if li == len(self.lts.levels):
            return self._finish(vals, evals)
        lv = self.lts.levels[li]
        if not lv.var_indices:
            return self._level(li + 1, vals, evals)
        for cand, exact in self._candidates(lv, vals, evals):
            for i, idx in enumerate(lv.var_indices):
                vals[idx] = cand[i]
                if evals is not None:
                    evals[idx] = exact[i] if exact else None
            hit = self._level(li + 1, vals, evals if exact or evals is None else None)
            if hit:
                return hit
            for idx in lv.var_indices:
                vals[idx] = None
                if evals is not None:
                    evals[idx] = None
        return None

    def _candidates(self, lv, vals, evals):
        d = len(lv.var_indices)
        out = []
        seen = set()
        if evals is not None and all(v is not None for v in evals[: lv.var_indices[0]]) and d <= 6:
            exact_eqs = [eq.substitute_symbols(self.env) for eq in lv.equations]
            for combo in itertools.product((QC.of(1), QC.of(-1)), repeat=d):
                yfull = [QC.of(1)] * self.lts.n
                for k, v in enumerate(evals):
                    if v is not None:
                        yfull[k] = v
                for i, idx in enumerate(lv.var_indices):
                    yfull[idx] = combo[i]
                if all(eq.eval_exact(yfull).is_zero() for eq in exact_eqs):
                    cvec = tuple(c.to_complex() for c in combo)
                    out.append((cvec, combo))
                    seen.add(tuple((round(c.real, 6), round(c.imag, 6)) for c in cvec))
        if self.exact_only:
            return out
        data = _EqData(lv.equations, lv.var_indices, vals, self.env)
        if d == 1:
            numeric = _univariate_candidates(lv.equations[0], lv.var_indices[0], vals, self.env)
        else:
            rng = np.random.default_rng((self.seed, self.calls))
            self.calls += 1
            radii = rng.uniform(0.3, 1.8, size=(self.starts, d))
            angles = rng.uniform(0.0, 2 * np.pi, size=(self.starts, d))
            ys, res = _newton_batch(data, radii * np.exp(1j * angles))
            numeric = _distinct_roots(ys, res)
        if numeric:
            ys, res = _newton_batch(data, np.array(numeric, dtype=complex), iters=20)
            for y, r in zip(ys, res):
                # magnitude window rejects drift toward 0 or infinity, where
                # scaled residuals of monomial-heavy equations go quiet
                if r > 1e-11 or any(not 1e-8 < abs(c) < 1e8 for c in y):
                    continue
                key = tuple((round(c.real, 6), round(c.imag, 6)) for c in y)
                if key not in seen:
                    seen.add(key)
                    out.append((tuple(complex(c) for c in y), None))
        return out[:16]

    def _finish(self, vals, evals):
        if any(v is None for v in vals):
            return None
        if evals is not None and all(v is not None for v in evals):
            for lv in self.lts.levels:
                yfull = list(evals)
                for eq in lv.equations:
                    if not eq.substitute_symbols(self.env).eval_exact(yfull).is_zero():
                        return None
            return Certificate(
                tuple((nm, self.env[nm].to_complex()) for nm in self.lts.symbols),
                tuple(QC.of(v).to_complex() for v in evals),
                0.0,
                True,
            )
        y = tuple(complex(v) for v in vals)
        if any(not 1e-8 < abs(c) < 1e8 for c in y):
            return None
        worst = 0.0
        for lv in self.lts.levels:
            for i, eq in zip(lv.var_indices, lv.equations):
                worst = max(worst, abs(y[i] * eq.eval_complex(y, 1.0, self.env)))
        if worst >= 1e-10:
            return None
        sym = tuple(
            (nm, self.env[nm].to_complex() if isinstance(self.env[nm], QC) else complex(self.env[nm]))
            for nm in self.lts.symbols
        )
        return Certificate(sym, y, worst, False)


def _level_symbols(lv) -> list:
    names = set()
    for _, scal in lv.poly.terms():
        c = scal.leading_coefficient()
        if isinstance(c, SymLin):
            names.update(nm for nm, _ in c.lin)
    return sorted(names)


class _FreeSearch:
    """Joint Newton over y and the free coefficients, after palettes fail.

    Some systems are solvable precisely because the coefficients can be
    tuned to an algebraic relation no finite palette hits (two sectors
    sharing one level can demand c0^2 = 4*c1).  Each level solves for its
    own variables together with its first-seen symbols; underdetermined
    steps take the minimal-norm direction.  Anything found is re-verified
    the same way as palette certificates.
    """

    def __init__(self, lts, seed, starts):
        self.lts = lts
        self.seed = seed
        self.starts = starts
        self.calls = 0

    def run(self):
        return self._level(0, [None] * self.lts.n, {})

    def _level(self, li, vals, env):
        if li == len(self.lts.levels):
            return self._finish(vals, env)
        lv = self.lts.levels[li]
        if not lv.var_indices:
            return self._level(li + 1, vals, env)
        new_syms = [nm for nm in _level_symbols(lv) if nm not in env]
        for ycand, ccand in self._candidates(lv, vals, env, new_syms):
            for i, idx in enumerate(lv.var_indices):
                vals[idx] = ycand[i]
            env.update(zip(new_syms, ccand))
            hit = self._level(li + 1, vals, env)
            if hit:
                return hit
            for idx in lv.var_indices:
                vals[idx] = None
            for nm in new_syms:
                del env[nm]
        return None

    def _candidates(self, lv, vals, env, new_syms):
        d = len(lv.var_indices)
        s = len(new_syms)
        rng = np.random.default_rng((self.seed, 991, self.calls))
        self.calls += 1
        if s == 0:
            data = _EqData(lv.equations, lv.var_indices, vals, env)
            if d == 1:
                starts0 = _univariate_candidates(lv.equations[0], lv.var_indices[0], vals, env)
                if not starts0:
                    return []
                zs, res = _newton_batch(data, np.array(starts0, dtype=complex), iters=20)
            else:
                radii = rng.uniform(0.3, 1.8, size=(self.starts, d))
                angles = rng.uniform(0.0, 2 * np.pi, size=(self.starts, d))
                zs, res = _newton_batch(data, radii * np.exp(1j * angles))
        else:
            data = _FreeEqData(lv.equations, lv.var_indices, vals, env, new_syms)
            radii = rng.uniform(0.3, 1.8, size=(self.starts, d + s))
            angles = rng.uniform(0.0, 2 * np.pi, size=(self.starts, d + s))
            zs, res = _newton_free(data, radii * np.exp(1j * angles))
        out = []
        seen = set()
        order = sorted(
            range(len(zs)),
            key=lambda k: tuple((round(c.real, 9), round(c.imag, 9)) for c in zs[k]),
        )
        for k in order:
            z, r = zs[k], res[k]
            if r > 1e-11 or any(not 1e-8 < abs(c) < 1e8 for c in z):
                continue
            key = tuple((round(c.real, 6), round(c.imag, 6)) for c in z)
            if key in seen:
                continue
            seen.add(key)
            out.append((tuple(complex(c) for c in z[:d]), tuple(complex(c) for c in z[d:])))
            if len(out) >= 16:
                break
        return out

    def _finish(self, vals, env):
        y = tuple(complex(v) for v in vals)
        if any(not 1e-8 < abs(c) < 1e8 for c in y):
            return None
        full = dict(env)
        for nm in self.lts.symbols:
            # only levels without own variables can leave a symbol unseen,
            # and those levels contribute no equations: any value works
            full.setdefault(nm, 1.0)
        worst = 0.0
        for lv in self.lts.levels:
            for i, eq in zip(lv.var_indices, lv.equations):
                worst = max(worst, abs(y[i] * eq.eval_complex(y, 1.0, full)))
        if worst >= 1e-10:
            return None
        sym = tuple((nm, complex(full[nm])) for nm in self.lts.symbols)
        return Certificate(sym, y, worst, False)


def solve(lts: LeadingTermSystem, seed: int = 0, starts: int = 64) -> SolvabilityVerdict:
    """Verdict for a leading term system.

    Levels are solved in energy order, each branch substituted into the
    next.  Free coefficients run through the special palette (1, -1, minus
    each facet label) exactly, then through the generic complex table.
    Exact certificates are searched first across the whole palette: a
    literal residual-0 witness beats any float one, and the structured
    models (labels all >= 2, Clifford-type centers) are certified that way.
    If every palette fails and free coefficients remain, a last pass solves
    for them jointly with y, catching systems whose solvability hinges on a
    coefficient relation.  A certificate must re-verify across every level
    equation before it is believed; failure of the search is reported as
    unknown, never as a proof.
    """
    # The one structural proof: a level that is a single monomial in its own
    # variable(s).  Wider monomial patterns inside derivatives are left to the
    # search, which then reports unknown, not proven.
    for li, lv in enumerate(lts.levels):
        if not lv.var_indices:
            continue
        terms = lv.poly.terms()
        if (
            len(terms) == 1
            and _never_zero(terms[0][1].leading_coefficient())
            and any(terms[0][0][k] for k in lv.var_indices)
        ):
            return SolvabilityVerdict(
                Solvability.UnsolvableProven,
                proof=f"level {li + 1} is a single monomial; its derivative never vanishes on (C*)^n",
            )
    envs = _symbol_assignments(lts)
    for env in envs:
        if not _env_is_exact(env):
            continue
        cert = _Search(lts, env, seed, starts, exact_only=True).run()
        if cert is not None:
            return SolvabilityVerdict(Solvability.SolvableCertified, certificate=cert)
    for env in envs:
        cert = _Search(lts, env, seed, starts).run()
        if cert is not None:
            return SolvabilityVerdict(Solvability.SolvableCertified, certificate=cert)
    if lts.symbols:
        cert = _FreeSearch(lts, seed, starts).run()
        if cert is not None:
            return SolvabilityVerdict(Solvability.SolvableCertified, certificate=cert)
    return SolvabilityVerdict(Solvability.UnknownLikelyUnsolvable)
