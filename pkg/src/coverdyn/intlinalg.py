"""Exact integer linear algebra: Smith normal form, characteristic
polynomials, and quotient presentations of chain groups.

Everything here works over Python ints, so there is no overflow and no
rounding; floats only appear downstream when eigenvalue moduli are needed.
Matrices are represented by the small IntMatrix wrapper because empty
shapes (0 rows or 0 columns) occur constantly in boundary operators and
bare lists of lists cannot carry them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class IntMatrix:
    """Dense integer matrix with explicit shape (rows may be empty)."""

    __slots__ = ("m", "n", "rows")

    def __init__(self, m: int, n: int, rows: Sequence[Sequence[int]] | None = None):
        self.m = m
        self.n = n
        if rows is None:
            self.rows = [[0] * n for _ in range(m)]
        else:
            self.rows = [list(r) for r in rows]
            if len(self.rows) != m or any(len(r) != n for r in self.rows):
                raise ValueError(f"shape mismatch: expected {m}x{n}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], n: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        m = len(rows)
        if n is None:
            if m == 0:
                raise ValueError("column count required for empty matrix")
            n = len(rows[0])
        return cls(m, n, rows)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        mat = cls(n, n)
        for i in range(n):
            mat.rows[i][i] = 1
        return mat

    def copy(self) -> "IntMatrix":
        return IntMatrix(self.m, self.n, self.rows)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.n, self.m, [[self.rows[i][j] for i in range(self.m)] for j in range(self.n)])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.m == other.m
            and self.n == other.n
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"IntMatrix({self.m}x{self.n}, {self.rows})"

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.rows for v in row)

    def col(self, j: int) -> list[int]:
        return [self.rows[i][j] for i in range(self.m)]

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.n != other.m:
            raise ValueError(f"cannot multiply {self.m}x{self.n} by {other.m}x{other.n}")
        out = IntMatrix(self.m, other.n)
        for i in range(self.m):
            arow = self.rows[i]
            orow = out.rows[i]
            for k, a in enumerate(arow):
                if a:
                    brow = other.rows[k]
                    for j in range(other.n):
                        orow[j] += a * brow[j]
        return out

    def mul_vec(self, vec: Sequence[int]) -> list[int]:
        if len(vec) != self.n:
            raise ValueError("vector length mismatch")
        return [sum(a * v for a, v in zip(row, vec)) for row in self.rows]

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(min(self.m, self.n)))


@dataclass(frozen=True)
class SmithForm:
    """U * A * V = D with U, V unimodular and D diagonal, d1 | d2 | ...

    Uinv and Vinv are tracked alongside so that change-of-basis both ways
    stays exact. `diagonal` lists the nonnegative invariant factors
    (including any trailing zeros up to min(m, n)).
    """

    matrix: IntMatrix
    D: IntMatrix
    U: IntMatrix
    V: IntMatrix
    Uinv: IntMatrix
    Vinv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        k = min(self.D.m, self.D.n)
        return tuple(self.D.rows[i][i] for i in range(k))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d != 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d > 1)


def _find_pivot(A: IntMatrix, t: int) -> tuple[int, int] | None:
    # smallest nonzero absolute value, ties broken row-major
    best = None
    best_val = None
    for i in range(t, A.m):
        row = A.rows[i]
        for j in range(t, A.n):
            v = row[j]
            if v != 0:
                a = abs(v)
                if best_val is None or a < best_val:
                    best, best_val = (i, j), a
                    if a == 1:
                        return best
    return best


def smith_normal_form(A: IntMatrix) -> SmithForm:
    """Deterministic Smith normal form with full transform tracking.

    Pivot choice: smallest nonzero |entry|, then row-major position.
    """
    orig = A.copy()
    D = A.copy()
    U = IntMatrix.identity(D.m)
    Uinv = IntMatrix.identity(D.m)
    V = IntMatrix.identity(D.n)
    Vinv = IntMatrix.identity(D.n)

    def swap_rows(i, j):
        if i == j:
            return
        D.rows[i], D.rows[j] = D.rows[j], D.rows[i]
        U.rows[i], U.rows[j] = U.rows[j], U.rows[i]
        for r in Uinv.rows:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        if i == j:
            return
        for r in D.rows:
            r[i], r[j] = r[j], r[i]
        for r in V.rows:
            r[i], r[j] = r[j], r[i]
        Vinv.rows[i], Vinv.rows[j] = Vinv.rows[j], Vinv.rows[i]

    def add_row(i, t, q):
        # row_i -= q * row_t
        if q == 0:
            return
        D.rows[i] = [a - q * b for a, b in zip(D.rows[i], D.rows[t])]
        U.rows[i] = [a - q * b for a, b in zip(U.rows[i], U.rows[t])]
        for r in Uinv.rows:
            r[t] += q * r[i]

    def add_col(j, t, q):
        # col_j -= q * col_t
        if q == 0:
            return
        for r in D.rows:
            r[j] -= q * r[t]
        for r in V.rows:
            r[j] -= q * r[t]
        Vinv.rows[t] = [a + q * b for a, b in zip(Vinv.rows[t], Vinv.rows[j])]

    def negate_row(i):
        D.rows[i] = [-a for a in D.rows[i]]
        U.rows[i] = [-a for a in U.rows[i]]
        for r in Uinv.rows:
            r[i] = -r[i]

    t = 0
    limit = min(D.m, D.n)
    while t < limit:
        pos = _find_pivot(D, t)
        if pos is None:
            break
        swap_rows(t, pos[0])
        swap_cols(t, pos[1])
        if D.rows[t][t] < 0:
            negate_row(t)

        # clear column and row t; floor division keeps remainders small,
        # the outer loop re-picks a strictly smaller pivot until clean
        while True:
            pivot = D.rows[t][t]
            for i in range(t + 1, D.m):
                if D.rows[i][t]:
                    add_row(i, t, D.rows[i][t] // pivot)
            for j in range(t + 1, D.n):
                if D.rows[t][j]:
                    add_col(j, t, D.rows[t][j] // pivot)
            if all(D.rows[i][t] == 0 for i in range(t + 1, D.m)) and all(
                D.rows[t][j] == 0 for j in range(t + 1, D.n)
            ):
                break
            pos = _find_pivot(D, t)
            swap_rows(t, pos[0])
            swap_cols(t, pos[1])
            if D.rows[t][t] < 0:
                negate_row(t)

        # enforce the divisibility chain: fold any non-divisible entry
        # into row t and redo the elimination at this step
        pivot = D.rows[t][t]
        offender = None
        for i in range(t + 1, D.m):
            for j in range(t + 1, D.n):
                if D.rows[i][j] % pivot != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, -1)  # row_t += row_offender
            continue
        t += 1

    form = SmithForm(matrix=orig, D=D, U=U, V=V, Uinv=Uinv, Vinv=Vinv)
    # exactness is load-bearing; the check is cheap at desk scale
    if U.mul(orig).mul(V) != D:
        raise AssertionError("smith normal form verification failed")
    return form


def matrix_rank(A: IntMatrix) -> int:
    return smith_normal_form(A).rank


def det(A: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    if A.m != A.n:
        raise ValueError("determinant of a non-square matrix")
    n = A.m
    if n == 0:
        return 1
    M = [row[:] for row in A.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def unimodular_inverse(A: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix (via SNF = I)."""
    if A.m != A.n:
        raise ValueError("inverse of a non-square matrix")
    form = smith_normal_form(A)
    if any(d != 1 for d in form.diagonal):
        raise ValueError("matrix is not unimodular")
    return form.V.mul(form.U)


def char_poly(A: IntMatrix) -> tuple[int, ...]:
    """Exact characteristic polynomial det(xI - A), coefficients highest first.

    Faddeev-LeVerrier recursion; all divisions are exact over Z.
    """
    if A.m != A.n:
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = A.m
    coeffs = [1]
    M = IntMatrix(n, n)
    for k in range(1, n + 1):
        M = A.mul(M)
        c_prev = coeffs[-1]
        for i in range(n):
            M.rows[i][i] += c_prev
        tr = A.mul(M).trace()
        if tr % k != 0:
            raise AssertionError("Faddeev-LeVerrier division not exact")
        coeffs.append(-tr // k)
    return tuple(coeffs)


def poly_mul(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return tuple(out)


def poly_divides(p: Sequence[int], q: Sequence[int]) -> bool:
    """True when monic p divides monic q exactly over Z."""
    if len(p) > len(q):
        return False
    if p[0] != 1 or q[0] != 1:
        raise ValueError("polynomials must be monic")
    rem = list(q)
    dp = len(p) - 1
    while len(rem) - 1 >= dp and any(rem):
        lead = rem[0]
        for i in range(len(p)):
            rem[i] -= lead * p[i]
        if rem[0] != 0:
            raise AssertionError("monic division failed to cancel")
        rem.pop(0)
    return not any(rem)


@dataclass(frozen=True)
class QuotientPresentation:
    """Homology of one chain degree: ker(d_out) / im(d_in), over Z.

    Exposes Betti rank, torsion divisors, chain-level coordinates of
    homology classes, and explicit chain representatives of the free
    generators -- enough to push chains through chain maps and read the
    induced map on homology.
    """

    n_chains: int
    rank: int
    torsion: tuple[int, ...]
    _ker_rank: int
    _out_rank: int
    _vinv_out: IntMatrix
    _u_rel: IntMatrix
    _divisors: tuple[int, ...]
    _free_idx: tuple[int, ...]
    _tors_idx: tuple[int, ...]
    _gen: IntMatrix  # n_chains x ker_rank, columns = chain reps of U_rel-basis

    def coords(self, chain: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(free coords, torsion coords mod divisor) of a cycle's class."""
        if len(chain) != self.n_chains:
            raise ValueError("chain length mismatch")
        y = self._vinv_out.mul_vec(list(chain))
        if any(y[j] != 0 for j in range(self._out_rank)):
            raise ValueError("chain is not a cycle")
        k = y[self._out_rank:]
        h = self._u_rel.mul_vec(k)
        free = tuple(h[j] for j in self._free_idx)
        tors = tuple(h[j] % self._divisors[j] for j in self._tors_idx)
        return free, tors

    def free_generator(self, j: int) -> list[int]:
        """Chain representative of the j-th free generator."""
        return self._gen.col(self._free_idx[j])

    def torsion_generator(self, j: int) -> list[int]:
        return self._gen.col(self._tors_idx[j])

    @property
    def torsion_divisors(self) -> tuple[int, ...]:
        return tuple(self._divisors[j] for j in self._tors_idx)


def quotient_presentation(d_out: IntMatrix, d_in: IntMatrix) -> QuotientPresentation:
    """Present ker(d_out)/im(d_in) given consecutive boundary matrices.

    d_out : C_p -> C_{p-1} (shape prev x n), d_in : C_{p+1} -> C_p
    (shape n x next); requires d_out * d_in = 0.
    """
    n = d_out.n
    if d_in.m != n:
        raise ValueError("boundary shapes are inconsistent")
    if not d_out.mul(d_in).is_zero():
        raise ValueError("d_out * d_in != 0: not a chain complex")

    out_form = smith_normal_form(d_out)
    r = out_form.rank
    z = n - r

    # image of d_in in the kernel coordinates (rows r.. of Vinv * d_in)
    coords_full = out_form.Vinv.mul(d_in)
    rel = IntMatrix(z, d_in.n, coords_full.rows[r:])
    rel_form = smith_normal_form(rel)
    s = rel_form.rank
    divisors = list(rel_form.diagonal) + [0] * (z - len(rel_form.diagonal))

    free_idx = tuple(j for j in range(z) if divisors[j] == 0)
    tors_idx = tuple(j for j in range(z) if divisors[j] > 1)
    torsion = tuple(divisors[j] for j in tors_idx)

    # chain representatives: columns of V_out[:, r:] * Uinv_rel
    ker_basis = IntMatrix(n, z, [row[r:] for row in out_form.V.rows])
    gen = ker_basis.mul(rel_form.Uinv)

    return QuotientPresentation(
        n_chains=n,
        rank=len(free_idx),
        torsion=torsion,
        _ker_rank=z,
        _out_rank=r,
        _vinv_out=out_form.Vinv,
        _u_rel=rel_form.U,
        _divisors=tuple(divisors),
        _free_idx=free_idx,
        _tors_idx=tors_idx,
        _gen=gen,
    )


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a saturated basis of ker(A) as a sublattice of Z^n."""
    form = smith_normal_form(A)
    r = form.rank
    return IntMatrix(A.n, A.n - r, [row[r:] for row in form.V.rows])


def restrict_to_kernel(M: IntMatrix, A: IntMatrix) -> IntMatrix:
    """Matrix of M restricted to ker(A), in the SNF kernel basis.

    Requires M to map ker(A) into itself (true for chain self-maps that
    commute with the boundary).
    """
    form = smith_normal_form(A)
    r = form.rank
    z = A.n - r
    ker = IntMatrix(A.n, z, [row[r:] for row in form.V.rows])
    image = form.Vinv.mul(M.mul(ker))
    for j in range(z):
        for i in range(r):
            if image.rows[i][j] != 0:
                raise ValueError("map does not preserve the kernel")
    return IntMatrix(z, z, image.rows[r:])
