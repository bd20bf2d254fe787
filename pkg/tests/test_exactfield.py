import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sl2frob.exactfield import FieldCtx, FieldElement, Matrix, joint_eigenspaces, vec, unvec


F3 = FieldCtx(3)
F9 = FieldCtx(3, 2)
F25 = FieldCtx(5, 2)


def rand_matrix(ctx, rows, cols, rng):
    return Matrix(ctx, rng.integers(0, ctx.p, size=(rows, cols, ctx.k)))


def independent_rank(m: Matrix) -> int:
    """Row reduction with the *last* nonzero pivot: an independent rank oracle."""
    ctx = m.ctx
    A = m.arr.copy()
    r, c, _ = A.shape
    rank = 0
    row = 0
    for col in range(c):
        if row >= r:
            break
        nz = np.nonzero(A[row:, col].any(axis=-1))[0]
        if nz.size == 0:
            continue
        pr = row + int(nz[-1])
        A[[row, pr]] = A[[pr, row]]
        inv = ctx.arr_inv(A[row, col])
        A[row] = ctx.arr_mul(A[row], inv)
        below = np.arange(row + 1, r)
        mask = A[below, col].any(axis=-1)
        tgt = below[mask]
        if tgt.size:
            A[tgt] = (A[tgt] - ctx.arr_mul(A[tgt, col][:, None, :], A[row][None])) % ctx.p
        rank += 1
        row += 1
    return rank


def test_modulus_choices():
    assert F9.modulus == (0, 1)       # x^2 + 1 for p = 3 mod 4
    assert F25.modulus == (0, 2)      # smallest-coefficient scan for p = 5
    assert FieldCtx(7, 2).modulus == (0, 1)


def test_inverse_of_generator():
    x = F9.gen()
    assert x.inv() == F9.el(0, 2)     # x * 2x = 2x^2 = -2 = 1
    assert x * x.inv() == F9.one()


def test_frobenius_fixes_prime_field():
    for a in F3.elements():
        assert a.frobenius() == a
    fixed = [a for a in F9.elements() if a.frobenius() == a]
    assert len(fixed) == 3


def test_frobenius_involution_f25():
    for a in F25.elements():
        assert a.frobenius().frobenius() == a
    assert any(a.frobenius() != a for a in F25.elements())


def test_field_axioms_exhaustive_f9():
    els = F9.elements()
    for a in els:
        for b in els:
            assert a + b == b + a
            assert a * b == b * a
            for c in els:
                assert (a + b) + c == a + (b + c)
                assert (a * b) * c == a * (b * c)
                assert (a + b) * c == a * c + b * c


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 24), st.integers(0, 24), st.integers(0, 24))
def test_field_axioms_sampled_f25(i, j, k):
    a, b, c = F25.from_index(i), F25.from_index(j), F25.from_index(k)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert (a + b) * c == a * c + b * c


def test_division_errors():
    with pytest.raises(ZeroDivisionError):
        F9.zero().inv()
    with pytest.raises(ValueError):
        F9.one() + F3.one()


def test_kernel_trivial_cases():
    n = 5
    Z = Matrix.zeros(F3, n, n)
    assert Z.kernel().cols == n
    assert Matrix.identity(F3, n).kernel().cols == 0


def test_rank_nullity_random():
    rng = np.random.default_rng(7)
    A = rand_matrix(F9, 20, 30, rng)
    K = A.kernel()
    assert (A @ K).is_zero()
    assert A.rank() + K.cols == 30
    assert independent_rank(A) == A.rank()


def test_solve_round_trip():
    rng = np.random.default_rng(11)
    for _ in range(25):
        A = rand_matrix(F9, 6, 4, rng)
        X = rand_matrix(F9, 4, 2, rng)
        B = A @ X
        sol = A.solve(B)
        assert sol is not None
        assert A @ sol == B


def test_solve_inconsistent_returns_none():
    A = Matrix.from_int_rows(F3, [[1, 0], [1, 0]])
    B = Matrix.from_int_rows(F3, [[1], [2]])
    assert A.solve(B) is None


def test_kron_identities():
    assert Matrix.identity(F9, 2).kron(Matrix.identity(F9, 3)) == Matrix.identity(F9, 6)
    rng = np.random.default_rng(3)
    A = rand_matrix(F9, 2, 3, rng)
    B = rand_matrix(F9, 4, 5, rng)
    assert A.kron(B).shape == (8, 15)
    for _ in range(5):
        A, B, C, D = (rand_matrix(F9, 3, 3, rng) for _ in range(4))
        assert A.kron(B) @ C.kron(D) == (A @ C).kron(B @ D)


def test_vec_unvec():
    rng = np.random.default_rng(5)
    m = rand_matrix(F9, 3, 4, rng)
    assert unvec(vec(m), 3, 4) == m


def test_joint_eigenspaces_identity():
    sp = joint_eigenspaces([Matrix.identity(F3, 4)])
    assert len(sp) == 1
    (vals, basis), = sp
    assert vals[0] == F3.one() and basis.cols == 4


def test_joint_eigenspaces_weights_of_l2():
    # h acting on L_2 at p=3: eigenvalues 2, 0, -2 = 1
    H = Matrix.from_int_rows(F3, [[2, 0, 0], [0, 0, 0], [0, 0, 1]])
    sp = joint_eigenspaces([H])
    vals = sorted(v[0].coeffs[0] for v, _ in sp)
    assert vals == [0, 1, 2]
    assert all(b.cols == 1 for _, b in sp)


def test_joint_eigenspaces_tensor_weight_zero():
    # h on L_1 (x) L_1: the 0-eigenspace is 2-dimensional (weights 1-1 and -1+1)
    h1 = Matrix.from_int_rows(F3, [[1, 0], [0, 2]])
    H = h1.kron(Matrix.identity(F3, 2)) + Matrix.identity(F3, 2).kron(h1)
    sp = joint_eigenspaces([H])
    dims = {v[0].coeffs[0]: b.cols for v, b in sp}
    assert dims[0] == 2


def test_joint_eigenspaces_projectors_sum_to_identity():
    H = Matrix.from_int_rows(F3, [[2, 0, 0], [0, 0, 0], [0, 0, 1]])
    sp = joint_eigenspaces([H])
    assert sum(b.cols for _, b in sp) == 3
    C = Matrix.hstack([b for _, b in sp])
    assert C.rank() == 3


def test_joint_eigenspaces_errors():
    A = Matrix.from_int_rows(F3, [[0, 1], [0, 0]])
    B = Matrix.from_int_rows(F3, [[1, 0], [0, 2]])
    with pytest.raises(ValueError):
        joint_eigenspaces([A @ B, B @ A + Matrix.identity(F3, 2)])
    # companion matrix of an irreducible quadratic has no eigenvalues over F_3
    C = Matrix.from_int_rows(F3, [[0, 2], [1, 0]])
    with pytest.raises(ValueError, match="enlarge field"):
        joint_eigenspaces([C])


def test_rref_deterministic_golden():
    A = Matrix.from_int_rows(F3, [[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    R, piv = A.rref()
    assert piv == [0, 1]
    assert R.to_hex() == "102012000"
