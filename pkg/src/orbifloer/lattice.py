"""Exact integer and rational linear algebra over lattices.

Smith normal form with transform matrices, determinants, dual bases,
simplicial-cone multiplicities, a unimodular-basis-inside-a-cone subdivision
algorithm, and flag-adapted lattice bases.  Everything is computed with
arbitrary-precision integers and ``fractions.Fraction``; no floating point
enters this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DegenerateCone, FlagNotIncreasing

# Vectors are tuples of ints (lattice) or Fractions (rational); matrices are
# tuples of row tuples.  Helpers below keep everything immutable.

Vec = tuple  # tuple[int, ...]
QVec = tuple  # tuple[Fraction, ...]
Mat = tuple  # tuple[tuple[int, ...], ...]


def vec(coords) -> Vec:
    return tuple(int(c) for c in coords)


def qvec(coords) -> QVec:
    return tuple(Fraction(c) for c in coords)


def mat(rows) -> Mat:
    rows = tuple(tuple(int(e) for e in row) for row in rows)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return rows


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m)) if m else ()


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a: Mat, v) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def content(v: Vec) -> int:
    """gcd of the entries (0 for the zero vector)."""
    g = 0
    for c in v:
        g = gcd(g, abs(int(c)))
    return g


def is_primitive(v: Vec) -> bool:
    return content(v) == 1


def lcm(a: int, b: int) -> int:
    return abs(a * b) // gcd(a, b) if a and b else 0


def det_int(m: Mat) -> int:
    """Determinant of a square integer matrix, exact (Bareiss elimination).

    Examples
    --------
    >>> det_int(((1, 0), (1, 2)))
    2
    >>> det_int(((3, 0), (0, 5)))
    15
    """
    n = len(m)
    if n == 0:
        return 1
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # Bareiss: exact division keeps entries integral
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve_rational(a: Mat, b) -> QVec | None:
    """Solve a*x = b exactly; None if the square system is singular."""
    n = len(a)
    rows = [[Fraction(e) for e in row] + [Fraction(bi)] for row, bi in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        pv = rows[col][col]
        rows[col] = [e / pv for e in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [e - f * p for e, p in zip(rows[r], rows[col])]
    return tuple(rows[i][n] for i in range(n))


def rank_rational(rows) -> int:
    """Rank of a list of rational/integer row vectors."""
    work = [[Fraction(e) for e in row] for row in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(work)) if work[r][col] != 0), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        pv = work[rank][col]
        work[rank] = [e / pv for e in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col] != 0:
                f = work[r][col]
                work[r] = [e - f * p for e, p in zip(work[r], work[rank])]
        rank += 1
    return rank


def invert_unimodular(m: Mat) -> Mat:
    """Inverse of an integer matrix with det +-1, as an integer matrix."""
    n = len(m)
    inv = solve_many(m, identity(n))
    return tuple(tuple(int(e) for e in row) for row in inv)


def solve_many(a: Mat, rhs: Mat) -> Mat:
    """Solve a*X = rhs column by column, exact; raises on singular a."""
    cols = []
    for col in transpose(rhs):
        x = solve_rational(a, col)
        if x is None:
            raise DegenerateCone("singular matrix")
        cols.append(x)
    return transpose(tuple(cols))


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(m: Mat) -> tuple[Mat, Mat, Mat]:
    """Smith normal form with transforms: U * m * V = D.

    U and V are unimodular; D is (rectangular) diagonal with nonnegative
    entries satisfying d1 | d2 | ... .  Total on all integer matrices.

    Examples
    --------
    >>> U, D, V = smith_normal_form(((2, 0), (0, 3)))
    >>> [D[i][i] for i in range(2)]
    [1, 6]
    """
    m = mat(m)
    nr = len(m)
    nc = len(m[0]) if nr else 0
    a = [list(row) for row in m]
    u = [list(row) for row in identity(nr)]
    v = [list(row) for row in identity(nc)]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def row_add(dst, src, q):
        # R_dst += q * R_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def col_add(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def near_q(x, p):
        # quotient with minimal remainder; floor quotients let the transform
        # entries snowball on alternating signs
        q, r = divmod(x, p)
        if 2 * abs(r) > abs(p):
            q += 1
        return q

    t = 0
    while t < min(nr, nc):
        # pick the absolutely smallest nonzero entry of the trailing block
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t] != 0:
                    q = near_q(a[i][t], a[t][t])
                    row_add(i, t, -q)
                    if a[i][t] != 0:
                        # remainder is smaller than the pivot; promote it
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j] != 0:
                    q = near_q(a[t][j], a[t][t])
                    col_add(j, t, -q)
                    if a[t][j] != 0:
                        col_swap(t, j)
                        dirty = True
            if dirty:
                continue
            # pivot must divide the whole trailing block
            offender = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i][j] % a[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_add(t, offender, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return (
        tuple(tuple(r) for r in u),
        tuple(tuple(r) for r in a),
        tuple(tuple(r) for r in v),
    )


def snf_diagonal(m: Mat) -> tuple:
    _, d, _ = smith_normal_form(m)
    return tuple(d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)))


# ---------------------------------------------------------------------------
# Simplicial cones


@dataclass(frozen=True)
class SimplicialCone:
    """Full-dimensional simplicial cone spanned by n independent lattice vectors.

    ``facet_indices`` optionally records which polytope facets contributed the
    generators (used by the moment-polytope layer).
    """

    generators: tuple
    facet_indices: tuple | None = None

    def __post_init__(self):
        gens = tuple(vec(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens or any(len(g) != len(gens[0]) for g in gens):
            raise DegenerateCone("generators must share one ambient dimension")

    @property
    def dim(self) -> int:
        return len(self.generators[0])

    def generator_matrix(self) -> Mat:
        """Generators as columns."""
        return transpose(self.generators)

    def coordinates_of(self, x) -> QVec:
        """Barycentric coordinates t with x = sum t_i * g_i, exact."""
        t = solve_rational(self.generator_matrix(), x)
        if t is None:
            raise DegenerateCone("generators are linearly dependent")
        return t

    def contains(self, x) -> bool:
        return all(c >= 0 for c in self.coordinates_of(x))


def cone_multiplicity(c: SimplicialCone) -> int:
    """|det| of the generator matrix; DegenerateCone if the generators are dependent."""
    if len(c.generators) != c.dim:
        raise DegenerateCone("cone is not full-dimensional")
    d = det_int(c.generator_matrix())
    if d == 0:
        raise DegenerateCone("generators are linearly dependent")
    return abs(d)


def dual_rational_basis(gens) -> list:
    """Rational vectors u_1..u_n with <g_i, u_j> exactly delta_ij.

    Examples
    --------
    >>> dual_rational_basis([(2, 0), (0, 2)])
    [(Fraction(1, 2), Fraction(0, 1)), (Fraction(0, 1), Fraction(1, 2))]
    """
    gens = [vec(g) for g in gens]
    n = len(gens)
    if n == 0 or any(len(g) != n for g in gens):
        raise DegenerateCone("need n independent generators in dimension n")
    cols = solve_many(tuple(gens), identity(n))
    # column j of G^-1 pairs to delta with row i of G
    return [tuple(cols[i][j] for i in range(n)) for j in range(n)]


def box_points(c: SimplicialCone) -> list[tuple]:
    """All nonzero lattice points v = sum t_i g_i with every t_i in [0, 1).

    Returns (v, t) pairs; there are exactly multiplicity-1 of them.  The
    enumeration walks coset representatives of the quotient of the ambient
    lattice by the sublattice the generators span (via Smith normal form),
    so it never scans a search box.
    """
    b = c.generator_matrix()
    mult = cone_multiplicity(c)
    if mult == 1:
        return []
    u, d, _ = smith_normal_form(b)
    n = c.dim
    uinv = invert_unimodular(u)
    diag = [d[i][i] for i in range(n)]
    reps = [()]
    for di in diag:
        reps = [r + (k,) for r in reps for k in range(max(di, 1))]
    out = []
    for r in reps:
        if all(k == 0 for k in r):
            continue
        x = mat_vec(uinv, r)
        t = solve_rational(b, x)
        tfrac = tuple(ti - (ti.numerator // ti.denominator) for ti in t)
        v = []
        for k in range(n):
            coord = sum(Fraction(g[k]) * ti for g, ti in zip(c.generators, tfrac))
            assert coord.denominator == 1
            v.append(coord.numerator)
        out.append((tuple(v), tfrac))
    out.sort(key=lambda p: p[0])
    return out


def integral_basis_in_cone(c: SimplicialCone, trace: list | None = None) -> list:
    """A Z-basis of the ambient lattice whose vectors all lie inside the cone.

    Iterative subdivision: pick a fractional lattice point v = sum t_i g_i
    with t_i in [0,1), make v/content primitive, swap it for one generator,
    and recurse into the subdivided cone of smallest multiplicity.  The
    multiplicity strictly decreases each round (append the trail to ``trace``
    to observe it), so the loop stops at a unimodular cone whose generators
    are the answer.

    Ties between subdivisions are broken by lexicographic minimality of the
    sorted generator matrix.
    """
    gens = list(c.generators)
    n = c.dim
    if len(gens) != n:
        raise DegenerateCone("cone is not full-dimensional")
    while True:
        cur = SimplicialCone(tuple(gens))
        mult = cone_multiplicity(cur)
        if trace is not None:
            trace.append(mult)
        if mult == 1:
            return sorted(vec(g) for g in gens)
        best = None
        for v, t in box_points(cur):
            d = content(v)
            w = tuple(x // d for x in v)
            for i, ti in enumerate(t):
                if ti == 0:
                    continue
                sub = gens[:i] + [w] + gens[i + 1 :]
                submult = abs(det_int(transpose(tuple(sub))))
                key = (submult, tuple(sorted(sub)))
                if best is None or key < best[0]:
                    best = (key, sub)
        # a nonzero box point always exists when mult > 1
        gens = best[1]


# ---------------------------------------------------------------------------
# Flag-adapted bases


def saturated_span_basis(vecs) -> list:
    """Z-basis of (Q-span of vecs) intersected with Z^n.

    The first r rows of V^-1, where U*M*V = D is the Smith form of the
    stacked vectors and r is the rank: V^-1 is a basis of Z^n and its
    leading rows span the saturation of the row space.
    """
    m = mat(vecs)
    if not m:
        return []
    _, d, v = smith_normal_form(m)
    r = sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i] != 0)
    # M = U^-1 D V^-1, so the Q-row-space of M is spanned by the first r rows
    # of V^-1, which generate a saturated sublattice (V^-1 is a basis of Z^n).
    vinv = invert_unimodular(v)
    return [tuple(vinv[i]) for i in range(r)]


def saturate_flag(chain) -> list:
    """Ordered Z-basis of Z^n adapted to an increasing chain of spans.

    ``chain`` is a list of lists of lattice vectors A_1, ..., A_L with
    span(A_l) nested increasingly and span(A_L) = R^n.  The first
    dim(span(A_l)) output vectors form a Z-basis of span(A_l) /\\ Z^n for
    every l.  Raises FlagNotIncreasing when the spans fail to nest or the
    last one is not full.
    """
    levels = [[vec(w) for w in grp] for grp in chain]
    if not levels or any(not grp for grp in levels):
        raise FlagNotIncreasing("chain must be a nonempty list of nonempty groups")
    n = len(levels[0][0])
    # spans must nest
    for prev, nxt in zip(levels, levels[1:]):
        r = rank_rational(nxt)
        if rank_rational(nxt + prev) != r:
            raise FlagNotIncreasing("span chain does not nest")
    if rank_rational(levels[-1]) != n:
        raise FlagNotIncreasing("final span is not all of R^n")

    basis: list = []
    seen: list = []
    for grp in levels:
        seen = seen + grp
        sat = saturated_span_basis(seen)
        r = len(sat)
        if r == len(basis):
            continue
        # write the current partial basis in coordinates of the saturated one
        xrows = []
        for p in basis:
            coeffs = _solve_in_rows(sat, p)
            xrows.append(coeffs)
        newrows = _complete_unimodular(xrows, r)
        for row in newrows:
            w = tuple(sum(q * s[k] for q, s in zip(row, sat)) for k in range(n))
            for x in w:
                if x != 0:
                    if x < 0:
                        w = tuple(-y for y in w)
                    break
            basis.append(w)
    return basis


def _solve_in_rows(rows, target) -> tuple:
    # coefficients x with x . rows = target; must come out integral here
    a = transpose(tuple(rows))
    sol = _solve_rect(a, target)
    out = []
    for f in sol:
        if f.denominator != 1:
            raise FlagNotIncreasing("prefix vector not integral over the saturation")
        out.append(f.numerator)
    return tuple(out)


def _solve_rect(a: Mat, b) -> QVec:
    """Least structured exact solve of a (possibly tall) consistent system."""
    nr = len(a)
    nc = len(a[0])
    rows = [[Fraction(e) for e in row] + [Fraction(bi)] for row, bi in zip(a, b)]
    pivots = []
    rank = 0
    for col in range(nc):
        piv = next((r for r in range(rank, nr) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [e / pv for e in rows[rank]]
        for r in range(nr):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [e - f * p for e, p in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, nr):
        if rows[r][nc] != 0:
            raise FlagNotIncreasing("inconsistent system")
    sol = [Fraction(0)] * nc
    for r, col in enumerate(pivots):
        sol[col] = rows[r][nc]
    return tuple(sol)


def _complete_unimodular(xrows, r) -> list:
    """Rows completing the primitive row set ``xrows`` to a unimodular r x r matrix."""
    k = len(xrows)
    if k == 0:
        return [tuple(identity(r)[i]) for i in range(r)]
    u, d, v = smith_normal_form(tuple(xrows))
    for i in range(k):
        if d[i][i] != 1:
            raise FlagNotIncreasing("prefix is not saturated in the next level")
    vinv = invert_unimodular(v)
    return [tuple(vinv[i]) for i in range(k, r)]


if __name__ == "__main__":
    import doctest

    doctest.testmod()
