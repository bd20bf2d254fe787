"""ModuleRep calculus: constructors, functors, validity checks, serialization.

A module over a central reduction of the divided-power algebra is stored as
matrices E_j, F_j for the actions of e^(p^j), f^(p^j) at levels j < cap,
together with an integer weight grading and one p-character scalar per
level.  The scalar at level j is the value of H_j^p - H_j where
H_j = [E_j, F_j]; it is zero below the top level for every module built
here and equals chi(h)^p (suitably Frobenius-twisted) at the top.
"""

from __future__ import annotations

import numpy as np

from .exactfield import FieldCtx, FieldElement, Matrix
from .smallalg import DividedPowerPlan

_FUSE_TAG_LEN = 40


class WeightLabel:
    """A character label: base-p digits, a top weight value, a graded shift.

    For the zero character the top value lies in the prime field and equals
    the last digit; a generic label carries a seed outside the prime field.
    """

    def __init__(self, digits: tuple[int, ...], seed: FieldElement | None = None,
                 shift: int = 0):
        self.digits = tuple(int(k) for k in digits)
        self.seed = seed
        self.shift = shift

    def validate(self, ctx: FieldCtx) -> None:
        for k in self.digits:
            if not 0 <= k <= ctx.p - 1:
                raise ValueError(f"digit {k} out of range for p={ctx.p}")
        if self.seed is not None and self.seed.in_prime_field():
            raise ValueError("generic label with a prime-field seed")
        if self.seed is None and self.digits:
            pass  # zero character: the top value is the last digit itself

    @property
    def generic(self) -> bool:
        return self.seed is not None

    def weight(self, p: int) -> int:
        return sum(k * p**j for j, k in enumerate(self.digits))

    def __repr__(self):
        tag = f";d={self.seed}" if self.seed is not None else ""
        return f"WeightLabel{self.digits}{tag}<{self.shift}>"


class ModuleRep:
    """A finite-dimensional module with divided-power level actions."""

    def __init__(self, ctx: FieldCtx, E: list[Matrix], F: list[Matrix],
                 grading, pchar_scalars: list[FieldElement] | None = None,
                 provenance: str = ""):
        if len(E) != len(F) or not E:
            raise ValueError("need matching nonempty E, F level lists")
        self.ctx = ctx
        self.E = list(E)
        self.F = list(F)
        self.grading = np.asarray(grading, dtype=np.int64)
        dim = self.grading.shape[0]
        for m in self.E + self.F:
            if m.shape != (dim, dim):
                raise ValueError("generator matrix shape does not match grading")
        self.pchar_scalars = list(pchar_scalars) if pchar_scalars is not None \
            else [ctx.zero()] * len(E)
        if len(self.pchar_scalars) != len(E):
            raise ValueError("one p-character scalar per level required")
        self.provenance = provenance
        self.aux = None

    @property
    def dim(self) -> int:
        return int(self.grading.shape[0])

    @property
    def cap(self) -> int:
        return len(self.E)

    def weights(self) -> list[int]:
        return sorted(set(int(w) for w in self.grading))

    def weight_indices(self) -> dict[int, np.ndarray]:
        return {w: np.nonzero(self.grading == w)[0] for w in self.weights()}

    def h_matrix(self, level: int = 0) -> Matrix:
        return self.E[level].commutator(self.F[level])

    def divided_power(self, kind: str, n: int) -> Matrix:
        """Matrix of e^(n) (kind 'e') or f^(n) (kind 'f') via digit factorization."""
        plan = DividedPowerPlan.build(n, self.ctx.p, self.cap)
        mats = self.E if kind == "e" else self.F
        out = Matrix.identity(self.ctx, self.dim)
        for j, dj in enumerate(plan.digit_list):
            if dj:
                out = out @ mats[j].pow_int(dj)
        corr = self.ctx.el(plan.correction)
        return out.scale(corr)

    def shift_grading(self, s: int) -> "ModuleRep":
        out = ModuleRep(self.ctx, self.E, self.F, self.grading + s,
                        self.pchar_scalars, provenance=self.provenance)
        out.aux = self.aux
        return out

    def __repr__(self):
        return f"ModuleRep(dim={self.dim}, cap={self.cap}, {self.provenance!r})"

    # -- canonical text serialization (for golden tests) -------------------

    def to_canonical_text(self) -> str:
        lines = [
            f"field p={self.ctx.p} k={self.ctx.k} modulus={self.ctx.modulus[0]},{self.ctx.modulus[1]}",
            f"dim {self.dim} cap {self.cap}",
            "grading " + ",".join(str(int(w)) for w in self.grading),
            "pchar " + ",".join("".join(format(c, "x") for c in s.coeffs)
                                for s in self.pchar_scalars),
        ]
        for j in range(self.cap):
            lines.append(f"E{j} " + self.E[j].to_hex())
            lines.append(f"F{j} " + self.F[j].to_hex())
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def simple_restricted(ctx: FieldCtx, i: int, cap: int = 1) -> ModuleRep:
    """The restricted simple L_i (0 <= i <= p-1), with zero higher-level actions.

    This is the canonical divided-power structure: e^(n) = 0 for n > i by
    the weight bound, so all levels j >= 1 act by zero.
    """
    p = ctx.p
    if not 0 <= i <= p - 1:
        raise ValueError(f"need 0 <= i <= p-1, got {i}")
    n = i + 1
    E0 = Matrix.zeros(ctx, n, n)
    F0 = Matrix.zeros(ctx, n, n)
    for k in range(1, n):
        E0.arr[k - 1, k, 0] = (k * (i - k + 1)) % p
        F0.arr[k, k - 1, 0] = 1
    grading = np.array([i - 2 * k for k in range(n)], dtype=np.int64)
    zeros = Matrix.zeros(ctx, n, n)
    E = [E0] + [zeros.copy() for _ in range(cap - 1)]
    F = [F0] + [zeros.copy() for _ in range(cap - 1)]
    return ModuleRep(ctx, E, F, grading, [ctx.zero()] * cap, provenance=f"L_{i}")


def baby_verma(ctx: FieldCtx, d: FieldElement, shift: int = 0, cap: int = 1) -> ModuleRep:
    """Baby Verma Z_d for u_chi(sl2): basis f^k v, h f^k v = (d-2k) f^k v.

    The integer grading is shift - 2k; for generic d the top h-eigenvalue d
    is not an integer and the grading is an independent datum.
    """
    p = ctx.p
    E0 = Matrix.zeros(ctx, p, p)
    F0 = Matrix.zeros(ctx, p, p)
    for k in range(1, p):
        coeff = ctx.el(k) * (d - ctx.el(k - 1))
        E0.arr[k - 1, k] = coeff._arr()
        F0.arr[k, k - 1, 0] = 1
    grading = np.array([shift - 2 * k for k in range(p)], dtype=np.int64)
    s = d.frobenius() - d
    zeros = Matrix.zeros(ctx, p, p)
    E = [E0] + [zeros.copy() for _ in range(cap - 1)]
    F = [F0] + [zeros.copy() for _ in range(cap - 1)]
    pch = [s] + [ctx.zero()] * (cap - 1)
    return ModuleRep(ctx, E, F, grading, pch, provenance=f"Z({d})")


def trivial_module(ctx: FieldCtx, cap: int = 1, shift: int = 0) -> ModuleRep:
    z = Matrix.zeros(ctx, 1, 1)
    return ModuleRep(ctx, [z.copy() for _ in range(cap)], [z.copy() for _ in range(cap)],
                     np.array([shift], dtype=np.int64), [ctx.zero()] * cap,
                     provenance=f"k<{shift}>")


# ---------------------------------------------------------------------------
# functors
# ---------------------------------------------------------------------------

def frobenius_twist(M: ModuleRep, j: int) -> ModuleRep:
    """Shift all level actions up by j; grading is scaled by p^j."""
    if j < 0:
        raise ValueError("twist exponent must be nonnegative")
    ctx = M.ctx
    zeros = Matrix.zeros(ctx, M.dim, M.dim)
    E = [zeros.copy() for _ in range(j)] + [m.copy() for m in M.E]
    F = [zeros.copy() for _ in range(j)] + [m.copy() for m in M.F]
    pch = [ctx.zero()] * j + list(M.pchar_scalars)
    out = ModuleRep(ctx, E, F, M.grading * (ctx.p**j), pch,
                    provenance=f"({M.provenance})^({j})")
    return out


def restrict_levels(M: ModuleRep, r: int) -> ModuleRep:
    """Forget the actions at levels >= r; the underlying space is unchanged."""
    if not 1 <= r <= M.cap:
        raise ValueError(f"cannot restrict cap {M.cap} to {r}")
    return ModuleRep(M.ctx, M.E[:r], M.F[:r], M.grading, M.pchar_scalars[:r],
                     provenance=f"res_{r}({M.provenance})")


def extend_levels(M: ModuleRep, cap: int) -> ModuleRep:
    """Add zero action at new top levels (valid when weight bounds force them)."""
    if cap < M.cap:
        raise ValueError("use restrict_levels to drop levels")
    ctx = M.ctx
    span = int(M.grading.max() - M.grading.min()) if M.dim else 0
    for j in range(M.cap, cap):
        if 2 * ctx.p**j <= span:
            raise ValueError("zero extension not forced by weights; build the action")
    zeros = Matrix.zeros(ctx, M.dim, M.dim)
    E = list(M.E) + [zeros.copy() for _ in range(cap - M.cap)]
    F = list(M.F) + [zeros.copy() for _ in range(cap - M.cap)]
    pch = list(M.pchar_scalars) + [ctx.zero()] * (cap - M.cap)
    out = ModuleRep(ctx, E, F, M.grading, pch, provenance=M.provenance)
    out.aux = M.aux
    return out


def tensor(M: ModuleRep, N: ModuleRep) -> ModuleRep:
    """Tensor product along the divided-power coproduct.

    E_j(M (x) N) = sum_{a+b=p^j} e^(a)_M (x) e^(b)_N, computed through digit
    factorization on each factor.  p-characters add levelwise and at most
    one factor may carry a nonzero scalar at any level.
    """
    if M.ctx != N.ctx:
        raise ValueError("mixed field contexts")
    if M.cap != N.cap:
        raise ValueError(f"level caps differ: {M.cap} vs {N.cap}")
    ctx = M.ctx
    p = ctx.p
    E, F = [], []
    for j in range(M.cap):
        n = p**j
        Ej = Matrix.zeros(ctx, M.dim * N.dim, M.dim * N.dim)
        Fj = Matrix.zeros(ctx, M.dim * N.dim, M.dim * N.dim)
        for a in range(n + 1):
            Ej = Ej + M.divided_power("e", a).kron(N.divided_power("e", n - a))
            Fj = Fj + M.divided_power("f", a).kron(N.divided_power("f", n - a))
        E.append(Ej)
        F.append(Fj)
    grading = (M.grading[:, None] + N.grading[None, :]).reshape(-1)
    pch = []
    for j in range(M.cap):
        a, b = M.pchar_scalars[j], N.pchar_scalars[j]
        s = a + b
        # characters add levelwise; a pair of opposite characters (dual
        # pairing) cancels and is fine, but an honestly composite nonzero
        # reduction is outside the modeled family
        if not a.is_zero() and not b.is_zero() and not s.is_zero():
            raise ValueError(f"two non-cancelling p-characters at level {j}")
        pch.append(s)
    pm, pn = M.provenance, N.provenance
    tag = f"{pm}*{pn}" if len(pm) + len(pn) < _FUSE_TAG_LEN else "tensor"
    return ModuleRep(ctx, E, F, grading, pch, provenance=tag)


def tensor_many(mods: list[ModuleRep]) -> ModuleRep:
    out = mods[0]
    for m in mods[1:]:
        out = tensor(out, m)
    return out


def dual(M: ModuleRep) -> ModuleRep:
    """Dual module with the antipode convention e^(n) -> (-1)^n e^(n).

    Since p is odd, every level action e^(p^j) picks up a single minus sign
    and transposes; the grading and p-character scalars are negated.
    """
    ctx = M.ctx
    E = [(-m.transpose()) for m in M.E]
    F = [(-m.transpose()) for m in M.F]
    pch = [-s for s in M.pchar_scalars]
    return ModuleRep(ctx, E, F, -M.grading, pch, provenance=f"dual({M.provenance})")


def direct_sum(mods: list[ModuleRep]) -> ModuleRep:
    ctx = mods[0].ctx
    cap = mods[0].cap
    for m in mods:
        if m.cap != cap or m.ctx != ctx:
            raise ValueError("direct sum needs equal caps and contexts")
    dim = sum(m.dim for m in mods)
    E = [Matrix.zeros(ctx, dim, dim) for _ in range(cap)]
    F = [Matrix.zeros(ctx, dim, dim) for _ in range(cap)]
    off = 0
    grading = np.zeros(dim, dtype=np.int64)
    for m in mods:
        for j in range(cap):
            E[j].arr[off:off + m.dim, off:off + m.dim] = m.E[j].arr
            F[j].arr[off:off + m.dim, off:off + m.dim] = m.F[j].arr
        grading[off:off + m.dim] = m.grading
        off += m.dim
    pch = []
    for j in range(cap):
        vals = {tuple(m.pchar_scalars[j].coeffs) for m in mods}
        if len(vals) != 1:
            raise ValueError("direct sum with inconsistent p-characters")
        pch.append(mods[0].pchar_scalars[j])
    return ModuleRep(ctx, E, F, grading, pch, provenance="sum")


def submodule(M: ModuleRep, basis: Matrix, provenance: str = "sub") -> ModuleRep:
    """Restrict M to the submodule spanned by the columns of basis.

    The columns must be weight-homogeneous and the span must be stable
    under all level actions (checked exactly via a solve).
    """
    ctx = M.ctx
    E, F = [], []
    for j in range(M.cap):
        for mats, acc in ((M.E, E), (M.F, F)):
            rhs = mats[j] @ basis
            sol = basis.solve(rhs)
            if sol is None or not (basis @ sol - rhs).is_zero():
                raise ValueError("basis does not span a submodule")
            acc.append(sol)
    grading = np.zeros(basis.cols, dtype=np.int64)
    for t in range(basis.cols):
        rows = np.nonzero(basis.arr[:, t].any(axis=-1))[0]
        ws = set(int(M.grading[r]) for r in rows)
        if len(ws) != 1:
            raise ValueError("submodule basis vector is not weight-homogeneous")
        grading[t] = ws.pop()
    return ModuleRep(ctx, E, F, grading, M.pchar_scalars, provenance=provenance)


# ---------------------------------------------------------------------------
# validation and canonical checks
# ---------------------------------------------------------------------------

def validate(M: ModuleRep, check_h_refinement: bool = False) -> dict:
    """Itemized invariant report; never raises on failures."""
    ctx = M.ctx
    p = ctx.p
    report: dict[str, bool] = {}
    ok_grade = True
    for j in range(M.cap):
        shift = 2 * p**j
        for mat, sgn in ((M.E[j], +1), (M.F[j], -1)):
            rows, cols = np.nonzero(mat.arr.any(axis=-1))
            if rows.size and not np.all(M.grading[rows] == M.grading[cols] + sgn * shift):
                ok_grade = False
    report["grading_shifts"] = ok_grade

    report["nilpotent_ef"] = all(
        M.E[j].pow_int(p).is_zero() and M.F[j].pow_int(p).is_zero()
        for j in range(M.cap))

    ok_comm = True
    for i in range(M.cap):
        for j in range(i + 1, M.cap):
            if not M.E[i].commutator(M.E[j]).is_zero():
                ok_comm = False
            if not M.F[i].commutator(M.F[j]).is_zero():
                ok_comm = False
    report["level_e_f_commute"] = ok_comm

    ok_h = True
    for j in range(M.cap):
        H = M.h_matrix(j)
        target = Matrix.scalar(ctx, M.dim, M.pchar_scalars[j])
        if not (H.pow_int(p) - H - target).is_zero():
            ok_h = False
    report["h_pth_power"] = ok_h

    if check_h_refinement:
        ok_ref = True
        widx = M.weight_indices()
        for j in range(M.cap):
            H = M.h_matrix(j)
            for w, idx in widx.items():
                blk = H.block(idx, idx)
                val = blk.entry(0, 0)
                if not (blk - Matrix.scalar(ctx, len(idx), val)).is_zero():
                    ok_ref = False
        report["h_eigen_refinement"] = ok_ref

    return report
