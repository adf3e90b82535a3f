"""Exact linear algebra over the integers.

Everything here works on dense lists of Python ints, so there is no
overflow: intermediate entries of Hermite/Smith eliminations can grow
well past 64 bits even for the small matrices this package produces.
"""

from __future__ import annotations

from fractions import Fraction


def zeros(rows, cols):
    return [[0] * cols for _ in range(rows)]


def identity(n):
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for t in range(inner):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(cols):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)] if a else []


def is_zero_matrix(a):
    return all(all(x == 0 for x in row) for row in a)


def hermite_normal_form(rows, width=None, transform=False):
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero HNF rows (pivots positive, entries above a pivot
    reduced into [0, pivot)).  With ``transform=True`` also returns a
    unimodular ``U`` (as list of rows over the input rows) with
    ``U * rows = hnf`` padded by the kernel rows of the input family.
    """
    if width is None:
        width = len(rows[0]) if rows else 0
    work = [list(r) for r in rows]
    n = len(work)
    u = identity(n) if transform else None

    def swap(i, j):
        work[i], work[j] = work[j], work[i]
        if transform:
            u[i], u[j] = u[j], u[i]

    def addmul(i, j, q):
        # row_i += q * row_j
        wi, wj = work[i], work[j]
        for t in range(width):
            wi[t] += q * wj[t]
        if transform:
            ui, uj = u[i], u[j]
            for t in range(n):
                ui[t] += q * uj[t]

    def negate(i):
        work[i] = [-x for x in work[i]]
        if transform:
            u[i] = [-x for x in u[i]]

    r = 0
    for col in range(width):
        # find a pivot row for this column
        piv = None
        for i in range(r, n):
            if work[i][col]:
                piv = i
                break
        if piv is None:
            continue
        swap(r, piv)
        # clear the column below using gcd steps
        for i in range(r + 1, n):
            while work[i][col]:
                q = work[r][col] // work[i][col]
                if q:
                    addmul(r, i, -q)
                swap(r, i)
        if work[r][col] < 0:
            negate(r)
        # reduce entries above the pivot
        for i in range(r):
            q = work[i][col] // work[r][col]
            if q:
                addmul(i, r, -q)
        r += 1
    hnf = work[:r]
    if transform:
        return hnf, u, r
    return hnf


def hnf_reduce(vec, hnf_rows):
    """Reduce ``vec`` modulo the lattice spanned by HNF rows.

    Returns (residue, coefficients); residue = vec - coeffs * hnf_rows.
    The residue is the canonical coset representative whenever all
    pivots are 1; in general leading entries are reduced mod pivot.
    """
    res = list(vec)
    coeffs = []
    for row in hnf_rows:
        col = next((j for j, x in enumerate(row) if x), None)
        if col is None:
            coeffs.append(0)
            continue
        q = res[col] // row[col]
        if q:
            for t in range(len(res)):
                res[t] -= q * row[t]
        coeffs.append(q)
    return res, coeffs


def in_lattice(vec, hnf_rows):
    res, _ = hnf_reduce(vec, hnf_rows)
    return all(x == 0 for x in res)


def kernel(mat, cols=None):
    """Basis of the integer kernel {v : mat @ v = 0}, as a list of vectors.

    Computed from a unimodular transform of the transpose, so the basis
    spans the full (automatically saturated) kernel lattice.
    """
    rows = len(mat)
    if cols is None:
        cols = len(mat[0]) if rows else 0
    if cols == 0:
        return []
    if rows == 0:
        return [[1 if j == i else 0 for j in range(cols)] for i in range(cols)]
    hnf, u, r = hermite_normal_form(transpose(mat), width=rows, transform=True)
    # rows r.. of u multiply mat^T to zero, i.e. they span the kernel
    return [u[i] for i in range(r, cols)]


def rank(mat):
    if not mat or not mat[0]:
        return 0
    return len(hermite_normal_form(mat))


def rank_fraction(mat):
    """Rank over Q by fraction-based Gaussian elimination (oracle use)."""
    work = [[Fraction(x) for x in row] for row in mat]
    rows = len(work)
    cols = len(work[0]) if rows else 0
    r = 0
    for col in range(cols):
        piv = next((i for i in range(r, rows) if work[i][col]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = 1 / work[r][col]
        work[r] = [x * inv for x in work[r]]
        for i in range(rows):
            if i != r and work[i][col]:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        r += 1
        if r == rows:
            break
    return r


def smith_normal_form(mat, transform=False):
    """Smith normal form of ``mat``.

    Returns the list of nonzero invariant factors d_1 | d_2 | ... and,
    with ``transform=True``, matrices (S, T) with S * mat * T diagonal.
    """
    a = [list(row) for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    s = identity(rows) if transform else None
    t = identity(cols) if transform else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if transform:
            s[i], s[j] = s[j], s[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if transform:
            for row in t:
                row[i], row[j] = row[j], row[i]

    def add_row(i, j, q):
        for c in range(cols):
            a[i][c] += q * a[j][c]
        if transform:
            for c in range(rows):
                s[i][c] += q * s[j][c]

    def add_col(i, j, q):
        for row in a:
            row[i] += q * row[j]
        if transform:
            for row in t:
                row[i] += q * row[j]

    factors = []
    top = 0
    while top < min(rows, cols):
        # locate a nonzero entry with minimal absolute value
        best = None
        for i in range(top, rows):
            for j in range(top, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(top, best[0])
        swap_cols(top, best[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(top + 1, rows):
                if a[i][top]:
                    q = a[i][top] // a[top][top]
                    add_row(i, top, -q)
                    if a[i][top]:
                        swap_rows(top, i)
                        dirty = True
            for j in range(top + 1, cols):
                if a[top][j]:
                    q = a[top][j] // a[top][top]
                    add_col(j, top, -q)
                    if a[top][j]:
                        swap_cols(top, j)
                        dirty = True
        # enforce divisibility of the remaining block by the pivot
        piv = a[top][top]
        fix = None
        for i in range(top + 1, rows):
            for j in range(top + 1, cols):
                if a[i][j] % piv:
                    fix = i
                    break
            if fix is not None:
                break
        if fix is not None:
            add_row(top, fix, 1)
            continue
        if piv < 0:
            for j in range(cols):
                a[top][j] = -a[top][j]
            if transform:
                for j in range(rows):
                    s[top][j] = -s[top][j]
        factors.append(a[top][top])
        top += 1
    if transform:
        return factors, s, t
    return factors


def cokernel(mat):
    """Cokernel of Z^cols --mat--> Z^rows as (free basis, torsion, project).

    ``free_basis`` are vectors in Z^rows mapping to a basis of the free
    part, ``torsion`` lists the invariant factors > 1, and ``project``
    writes any vector of Z^rows as coordinates on the free basis modulo
    the image (raising if the vector has a nonzero torsion coordinate).
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    if rows == 0:
        return [], [], lambda v: []
    if cols == 0:
        basis = [[1 if j == i else 0 for j in range(rows)] for i in range(rows)]
        return basis, [], lambda v: list(v)
    factors, s, _t = smith_normal_form(mat, transform=True)
    r = len(factors)
    torsion = [d for d in factors if d != 1]
    # s * mat * t = diag; coordinates of v on the SNF basis are s @ v
    sinv_cols = _invert_unimodular(s)
    free_basis = [[sinv_cols[i][j] for i in range(rows)] for j in range(r, rows)]

    def project(v):
        coords = mat_vec(s, v)
        for i, d in enumerate(factors):
            if coords[i] % d:
                raise ValueError("vector has a torsion component in the cokernel")
        return coords[r:]

    return free_basis, torsion, project


def _invert_unimodular(u):
    """Inverse of a unimodular integer matrix via HNF transform."""
    n = len(u)
    hnf, v, r = hermite_normal_form(u, width=n, transform=True)
    if r != n or any(hnf[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is not unimodular")
    # hnf == identity, so v is the inverse
    return v
