"""Exact arithmetic over F_{p^k} (k = 1 or 2) and dense linear algebra.

Field elements are coefficient vectors of length k over F_p relative to a
fixed monic irreducible modulus; matrices are dense numpy int64 arrays of
shape (rows, cols, k).  All arithmetic is exact (reduced mod p and mod the
modulus); there is no floating point anywhere.

Gaussian elimination uses the first nonzero pivot, which makes every
reduced basis deterministic and therefore serializable for golden tests.
"""

from __future__ import annotations

import numpy as np


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _find_modulus(p: int) -> tuple[int, int]:
    """Smallest-coefficient monic irreducible quadratic x^2 + c1*x + c0 over F_p.

    For p = 3 mod 4 this is always x^2 + 1; otherwise scan (c1, c0) in
    lexicographic order.  The choice is recorded in every report.
    """
    if p % 4 == 3:
        return (0, 1)
    squares = {(x * x) % p for x in range(p)}
    for c1 in range(p):
        for c0 in range(1, p):
            # x^2 + c1 x + c0 irreducible iff discriminant is a non-square
            disc = (c1 * c1 - 4 * c0) % p
            if disc not in squares:
                return (c1, c0)
    raise ValueError(f"no irreducible quadratic over F_{p}")  # unreachable


class FieldCtx:
    """The field F_{p^k} with a fixed modulus, plus scalar lookup tables.

    Elements are encoded as int64 coefficient vectors of length k (entries
    in [0, p)); an element a0 + a1*x is also indexed by a0 + p*a1 for the
    scalar inverse/frobenius tables.
    """

    def __init__(self, p: int, k: int = 1, modulus: tuple[int, int] | None = None):
        if not _is_prime(p) or p < 3:
            raise ValueError(f"p must be an odd prime, got {p}")
        if k not in (1, 2):
            raise ValueError(f"extension degree must be 1 or 2, got {k}")
        self.p = p
        self.k = k
        self.q = p**k
        if k == 1:
            self.modulus = (0, 0)
        else:
            self.modulus = modulus if modulus is not None else _find_modulus(p)
            c1, c0 = self.modulus
            squares = {(x * x) % p for x in range(p)}
            if (c1 * c1 - 4 * c0) % p in squares:
                raise ValueError(f"modulus x^2+{c1}x+{c0} is reducible over F_{p}")
        self._inv_table = None
        self._frob_table = None

    # -- scalar encoding -------------------------------------------------

    def el(self, a0: int, a1: int = 0) -> "FieldElement":
        return FieldElement(self, (a0 % self.p, a1 % self.p) if self.k == 2 else (a0 % self.p,))

    def zero(self) -> "FieldElement":
        return self.el(0)

    def one(self) -> "FieldElement":
        return self.el(1)

    def gen(self) -> "FieldElement":
        """The class of x (only meaningful for k = 2)."""
        if self.k != 2:
            raise ValueError("gen() requires k = 2")
        return self.el(0, 1)

    def from_index(self, idx: int) -> "FieldElement":
        return self.el(idx % self.p, idx // self.p)

    def elements(self):
        """All q field elements, in index order."""
        return [self.from_index(i) for i in range(self.q)]

    def index(self, coeffs) -> int:
        c = np.asarray(coeffs)
        return int(c[0]) + (self.p * int(c[1]) if self.k == 2 else 0)

    # -- vectorized coefficient-array arithmetic --------------------------

    def arr_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise field product of coefficient arrays (broadcasting)."""
        p = self.p
        if self.k == 1:
            return (a * b) % p
        c1, c0 = self.modulus
        a0, a1 = a[..., 0], a[..., 1]
        b0, b1 = b[..., 0], b[..., 1]
        cross = a1 * b1
        r0 = (a0 * b0 - c0 * cross) % p
        r1 = (a0 * b1 + a1 * b0 - c1 * cross) % p
        return np.stack([r0, r1], axis=-1)

    def arr_matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product of coefficient arrays, shapes (n,m,k) x (m,l,k)."""
        p = self.p
        if self.k == 1:
            return (a[..., 0] @ b[..., 0] % p)[..., None]
        c1, c0 = self.modulus
        a0, a1 = a[..., 0], a[..., 1]
        b0, b1 = b[..., 0], b[..., 1]
        cross = a1 @ b1
        r0 = (a0 @ b0 - c0 * cross) % p
        r1 = (a0 @ b1 + a1 @ b0 - c1 * cross) % p
        return np.stack([r0, r1], axis=-1)

    def _tables(self):
        if self._inv_table is None:
            q, p = self.q, self.p
            mul = np.zeros((q, q), dtype=np.int64)
            idx = np.arange(q)
            coeffs = np.stack([idx % p, idx // p], axis=-1) if self.k == 2 else idx[:, None]
            for i in range(q):
                row = self.arr_mul(np.broadcast_to(coeffs[i], coeffs.shape), coeffs)
                mul[i] = row[:, 0] + (p * row[:, 1] if self.k == 2 else 0)
            inv = np.zeros(q, dtype=np.int64)
            for i in range(1, q):
                js = np.where(mul[i] == 1)[0]
                inv[i] = js[0]
            frob = np.zeros(q, dtype=np.int64)
            for i in range(q):
                acc = i
                for _ in range(p - 1):
                    acc = mul[acc][i]
                frob[i] = acc
            self._inv_table = inv
            self._frob_table = frob
        return self._inv_table, self._frob_table

    def arr_inv(self, a: np.ndarray) -> np.ndarray:
        inv, _ = self._tables()
        idx = a[..., 0] + (self.p * a[..., 1] if self.k == 2 else 0)
        if np.any(idx == 0):
            raise ZeroDivisionError("division by zero in F_q")
        out = inv[idx]
        if self.k == 1:
            return out[..., None]
        return np.stack([out % self.p, out // self.p], axis=-1)

    def arr_frob(self, a: np.ndarray) -> np.ndarray:
        _, frob = self._tables()
        idx = a[..., 0] + (self.p * a[..., 1] if self.k == 2 else 0)
        out = frob[idx]
        if self.k == 1:
            return out[..., None]
        return np.stack([out % self.p, out // self.p], axis=-1)

    def __eq__(self, other):
        return (
            isinstance(other, FieldCtx)
            and self.p == other.p
            and self.k == other.k
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return f"F_{self.p}"
        c1, c0 = self.modulus
        return f"F_{self.p}^2[x^2+{c1}x+{c0}]"

    def describe(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus_c1_c0": list(self.modulus)}


class FieldElement:
    """An element of F_{p^k}: a length-k coefficient vector over F_p."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs):
        self.ctx = ctx
        c = tuple(int(v) % ctx.p for v in coeffs)
        if len(c) != ctx.k:
            raise ValueError(f"expected {ctx.k} coefficients, got {len(c)}")
        self.coeffs = c

    def _check(self, other: "FieldElement"):
        if self.ctx != other.ctx:
            raise ValueError("mixed field contexts")

    def _arr(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.ctx, (self._arr() + other._arr()) % self.ctx.p)

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.ctx, (self._arr() - other._arr()) % self.ctx.p)

    def __neg__(self):
        return FieldElement(self.ctx, (-self._arr()) % self.ctx.p)

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.ctx.el(other)
        self._check(other)
        return FieldElement(self.ctx, self.ctx.arr_mul(self._arr(), other._arr()))

    __rmul__ = __mul__

    def inv(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in F_q")
        return FieldElement(self.ctx, self.ctx.arr_inv(self._arr()))

    def __truediv__(self, other):
        return self * other.inv()

    def frobenius(self) -> "FieldElement":
        """x -> x^p, a ring automorphism fixing exactly F_p."""
        return FieldElement(self.ctx, self.ctx.arr_frob(self._arr()))

    def pow(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inv().pow(-n)
        out, base = self.ctx.one(), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def in_prime_field(self) -> bool:
        return self.ctx.k == 1 or self.coeffs[1] == 0

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and self.ctx == other.ctx
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ctx, self.coeffs))

    def __repr__(self):
        if self.ctx.k == 1 or self.coeffs[1] == 0:
            return str(self.coeffs[0])
        return f"({self.coeffs[0]}+{self.coeffs[1]}x)"


class Matrix:
    """Dense matrix over F_{p^k}, stored as an int64 array of shape (r, c, k)."""

    __slots__ = ("ctx", "arr")

    def __init__(self, ctx: FieldCtx, arr: np.ndarray):
        arr = np.asarray(arr, dtype=np.int64)
        if arr.ndim != 3 or arr.shape[2] != ctx.k:
            raise ValueError(f"bad matrix array shape {arr.shape}")
        self.ctx = ctx
        self.arr = arr % ctx.p

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, ctx: FieldCtx, rows: int, cols: int) -> "Matrix":
        return cls(ctx, np.zeros((rows, cols, ctx.k), dtype=np.int64))

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "Matrix":
        a = np.zeros((n, n, ctx.k), dtype=np.int64)
        a[np.arange(n), np.arange(n), 0] = 1
        return cls(ctx, a)

    @classmethod
    def from_int_rows(cls, ctx: FieldCtx, rows) -> "Matrix":
        """Build from nested lists of integers (embedded via F_p)."""
        base = np.asarray(rows, dtype=np.int64)
        a = np.zeros(base.shape + (ctx.k,), dtype=np.int64)
        a[..., 0] = base
        return cls(ctx, a)

    @classmethod
    def scalar(cls, ctx: FieldCtx, n: int, value: FieldElement) -> "Matrix":
        a = np.zeros((n, n, ctx.k), dtype=np.int64)
        a[np.arange(n), np.arange(n), :] = value._arr()
        return cls(ctx, a)

    # -- basic structure ----------------------------------------------------

    @property
    def rows(self) -> int:
        return self.arr.shape[0]

    @property
    def cols(self) -> int:
        return self.arr.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.arr.shape[0], self.arr.shape[1])

    def copy(self) -> "Matrix":
        return Matrix(self.ctx, self.arr.copy())

    def entry(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.ctx, self.arr[i, j])

    def set_entry(self, i: int, j: int, v: FieldElement):
        self.arr[i, j] = v._arr()

    def is_zero(self) -> bool:
        return not self.arr.any()

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ctx == other.ctx
            and self.shape == other.shape
            and np.array_equal(self.arr, other.arr)
        )

    def _check(self, other: "Matrix"):
        if self.ctx != other.ctx:
            raise ValueError("mixed field contexts")

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.ctx, (self.arr + other.arr) % self.ctx.p)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.ctx, (self.arr - other.arr) % self.ctx.p)

    def __neg__(self) -> "Matrix":
        return Matrix(self.ctx, (-self.arr) % self.ctx.p)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix(self.ctx, self.ctx.arr_matmul(self.arr, other.arr))

    def scale(self, v: FieldElement) -> "Matrix":
        return Matrix(self.ctx, self.ctx.arr_mul(self.arr, v._arr()))

    def transpose(self) -> "Matrix":
        return Matrix(self.ctx, np.swapaxes(self.arr, 0, 1))

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product; (A kron B)(u kron v) = Au kron Bv."""
        self._check(other)
        ctx = self.ctx
        ra, ca = self.shape
        rb, cb = other.shape
        a = self.arr[:, None, :, None, :]
        b = other.arr[None, :, None, :, :]
        prod = ctx.arr_mul(np.broadcast_to(a, (ra, rb, ca, cb, ctx.k)),
                           np.broadcast_to(b, (ra, rb, ca, cb, ctx.k)))
        return Matrix(ctx, prod.reshape(ra * rb, ca * cb, ctx.k))

    def pow_int(self, n: int) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("matrix power needs a square matrix")
        out = Matrix.identity(self.ctx, self.rows)
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def commutator(self, other: "Matrix") -> "Matrix":
        return self @ other - other @ self

    # -- slicing / stacking ----------------------------------------------------

    def take_rows(self, idx) -> "Matrix":
        return Matrix(self.ctx, self.arr[np.asarray(idx, dtype=np.int64)])

    def take_cols(self, idx) -> "Matrix":
        return Matrix(self.ctx, self.arr[:, np.asarray(idx, dtype=np.int64)])

    def block(self, row_idx, col_idx) -> "Matrix":
        return Matrix(self.ctx, self.arr[np.ix_(np.asarray(row_idx), np.asarray(col_idx))])

    @classmethod
    def hstack(cls, mats: list["Matrix"]) -> "Matrix":
        return cls(mats[0].ctx, np.concatenate([m.arr for m in mats], axis=1))

    @classmethod
    def vstack(cls, mats: list["Matrix"]) -> "Matrix":
        return cls(mats[0].ctx, np.concatenate([m.arr for m in mats], axis=0))

    # -- elimination ----------------------------------------------------------

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and pivot column list.

        Deterministic: always takes the first row with a nonzero entry in
        the current column (exact arithmetic needs no pivoting heuristics).
        """
        ctx = self.ctx
        A = self.arr.copy()
        r, c, _ = A.shape
        pivots: list[int] = []
        row = 0
        for col in range(c):
            if row >= r:
                break
            nz = np.nonzero(A[row:, col].any(axis=-1))[0]
            if nz.size == 0:
                continue
            pr = row + int(nz[0])
            if pr != row:
                A[[row, pr]] = A[[pr, row]]
            inv = ctx.arr_inv(A[row, col])
            A[row] = ctx.arr_mul(A[row], inv)
            mask = A[:, col].any(axis=-1)
            mask[row] = False
            if mask.any():
                factors = A[mask, col]
                A[mask] = (A[mask] - ctx.arr_mul(factors[:, None, :], A[row][None, :, :])) % ctx.p
            pivots.append(col)
            row += 1
        return Matrix(ctx, A), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> "Matrix":
        """Matrix whose columns are a basis of the right kernel (RREF-canonical)."""
        ctx = self.ctx
        R, pivots = self.rref()
        c = self.cols
        free = [j for j in range(c) if j not in pivots]
        K = np.zeros((c, len(free), ctx.k), dtype=np.int64)
        for t, j in enumerate(free):
            K[j, t, 0] = 1
            for i, pc in enumerate(pivots):
                K[pc, t] = (-R.arr[i, j]) % ctx.p
        return Matrix(ctx, K)

    def solve(self, B: "Matrix") -> "Matrix | None":
        """A particular solution X of self @ X = B, or None if inconsistent."""
        ctx = self.ctx
        self._check(B)
        if B.rows != self.rows:
            raise ValueError("incompatible right-hand side")
        aug = Matrix.hstack([self, B])
        R, pivots = aug.rref()
        n = self.cols
        if any(pc >= n for pc in pivots):
            return None
        X = np.zeros((n, B.cols, ctx.k), dtype=np.int64)
        for i, pc in enumerate(pivots):
            X[pc] = R.arr[i, n:]
        return Matrix(ctx, X)

    def column_space_contains(self, v: "Matrix") -> bool:
        return self.solve(v) is not None

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("inverse needs a square matrix")
        X = self.solve(Matrix.identity(self.ctx, self.rows))
        if X is None or self.rank() < self.rows:
            raise ValueError("matrix is singular")
        return X

    # -- serialization -----------------------------------------------------------

    def to_hex(self) -> str:
        """Row-major hex digits, coefficients innermost (canonical text form)."""
        flat = self.arr.reshape(-1)
        return "".join(format(int(v), "x") for v in flat)

    def __repr__(self):
        return f"Matrix({self.ctx}, {self.rows}x{self.cols})"


def vec(m: Matrix) -> Matrix:
    """Column-major vectorization as a (r*c) x 1 matrix."""
    a = np.transpose(m.arr, (1, 0, 2)).reshape(m.rows * m.cols, 1, m.ctx.k)
    return Matrix(m.ctx, a)


def unvec(v: Matrix, rows: int, cols: int) -> Matrix:
    a = v.arr.reshape(cols, rows, v.ctx.k).transpose(1, 0, 2)
    return Matrix(v.ctx, a)


def span_basis(vectors: list[Matrix]) -> list[Matrix]:
    """RREF-canonical basis of the span of the given column vectors."""
    if not vectors:
        return []
    ctx = vectors[0].ctx
    rows = Matrix.vstack([v.transpose() for v in vectors])
    R, pivots = rows.rref()
    out = []
    for i in range(len(pivots)):
        out.append(R.take_rows([i]).transpose())
    return out


def in_span(basis_rows: Matrix, v_row: Matrix) -> bool:
    """Whether the row vector lies in the row space of basis_rows."""
    combined = Matrix.vstack([basis_rows, v_row])
    return combined.rank() == basis_rows.rank()


def joint_eigenspaces(ops: list[Matrix]) -> list[tuple[tuple[FieldElement, ...], Matrix]]:
    """Split the ambient space into simultaneous eigenspaces of commuting operators.

    Each operator must be diagonalizable with all eigenvalues in the field
    ("split"); otherwise an "enlarge field" error is raised.  Returns a list
    of (eigenvalue tuple, column basis) pairs covering the whole space.
    """
    if not ops:
        raise ValueError("need at least one operator")
    ctx = ops[0].ctx
    n = ops[0].rows
    for a in ops:
        if a.shape != (n, n):
            raise ValueError("operators must be square of equal size")
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if not ops[i].commutator(ops[j]).is_zero():
                raise ValueError("operators do not commute")

    spaces: list[tuple[tuple[FieldElement, ...], Matrix]] = [((), Matrix.identity(ctx, n))]
    for a in ops:
        new_spaces = []
        for tag, basis in spaces:
            # restriction of a to the invariant subspace spanned by basis columns
            sub = basis.solve(a @ basis)
            if sub is None:
                raise ValueError("subspace not invariant (non-commuting input?)")
            m = basis.cols
            found = 0
            for lam in ctx.elements():
                shifted = sub - Matrix.scalar(ctx, m, lam)
                ker = shifted.kernel()
                if ker.cols:
                    if not (shifted @ ker).is_zero():
                        raise ValueError("kernel inconsistency")
                    new_spaces.append((tag + (lam,), basis @ ker))
                    found += ker.cols
            if found != m:
                raise ValueError(
                    "operator not diagonalizable over the field: enlarge field")
        spaces = new_spaces
    return spaces
