"""Dense constant-matrix helpers over a :class:`~wavemat.field.Field`.

Matrices are lists of row lists.  Pivoting picks the entry of largest
magnitude on the float backend and the first nonzero entry on the exact
backend, so a single elimination routine serves both.
"""

from .errors import DimensionMismatch, SingularMatrix


def eye(n, field):
    one, zero = field.one, field.zero
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def zeros(r, c, field):
    zero = field.zero
    return [[zero] * c for _ in range(r)]


def shape(M):
    return len(M), (len(M[0]) if M else 0)


def matmul(A, B):
    if shape(A)[1] != shape(B)[0]:
        raise DimensionMismatch(f"cannot multiply {shape(A)} by {shape(B)}")
    cols = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col)), start=0 * row[0]) for col in cols] for row in A]


def matvec(A, x):
    return [sum((a * b for a, b in zip(row, x)), start=0 * x[0]) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def adjoint(A):
    """Conjugate transpose."""
    return [[a.conjugate() for a in col] for col in zip(*A)]


def conj_entries(A):
    return [[a.conjugate() for a in row] for row in A]


def add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def max_abs(A):
    return max((abs(complex(a)) for row in A for a in row), default=0.0)


def max_abs_diff(A, B):
    """Max-norm of ``A - B``; exact zero for identical exact matrices."""
    if shape(A) != shape(B):
        raise DimensionMismatch(f"shapes {shape(A)} and {shape(B)} differ")
    return max((abs(complex(a - b)) for ra, rb in zip(A, B) for a, b in zip(ra, rb)), default=0.0)


def equal(A, B, field):
    """Matrix equality under the field's residual policy."""
    return field.residual_ok(max_abs_diff(A, B))


def _pick_pivot(M, rows, col, field):
    best, best_mag = None, 0.0
    for r in rows:
        a = M[r][col]
        if field.is_zero(a):
            continue
        if field.exact:
            return r
        mag = abs(a)
        if mag > best_mag:
            best, best_mag = r, mag
    return best


def row_echelon(M, field):
    """Reduced row echelon form of a copy of ``M``.

    Returns ``(R, pivots)`` where ``pivots`` lists the pivot columns.
    Entries that fall under ``zero_eps`` are treated as zero.
    """
    R = [list(row) for row in M]
    nrows, ncols = shape(R)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = _pick_pivot(R, range(r, nrows), c, field)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = field.one / R[r][c]
        R[r] = [a * inv for a in R[r]]
        for i in range(nrows):
            if i != r and not field.is_zero(R[i][c]):
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M, field):
    return len(row_echelon(M, field)[1])


def nullspace(M, field):
    """Basis of ``{x : M x = 0}`` (one vector per free column)."""
    R, pivots = row_echelon(M, field)
    ncols = shape(M)[1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [field.zero] * ncols
        x[f] = field.one
        for i, p in enumerate(pivots):
            x[p] = -R[i][f]
        basis.append(x)
    return basis


def inverse(M, field, error=SingularMatrix):
    n, c = shape(M)
    if n != c:
        raise DimensionMismatch(f"cannot invert a {n}x{c} matrix")
    aug = [list(row) + e for row, e in zip(M, eye(n, field))]
    R, pivots = row_echelon(aug, field)
    if pivots[:n] != list(range(n)):
        raise error("matrix is singular under the active tolerance")
    return [row[n:] for row in R]


def solve(M, b, field):
    inv = inverse(M, field)
    return matvec(inv, b)


def coerce_matrix(M, field):
    return [[field.coerce(a) for a in row] for row in M]
