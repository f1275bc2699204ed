"""Double-row transfer matrices with open boundaries.

t(x) is assembled as an ordered sparse product on the (auxiliary (x) chain)
space of dimension 2^(L+1) and then traced over the auxiliary factor.  The
plain inhomogeneous form carries no prefactor; the homogeneous "trace"
form divides by tr Ktilde(identity) (which is 1 for every catalogued model,
so the two coincide -- both are kept so the convention stays auditable).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import models as m
from .markov import build_markov
from .models import ModelDescriptor
from .scalars import Dual, format_rational
from .tensor import Matrix, PoleError, SparseMatrix, embed_at_positions, \
    inverse, partial_trace_first
from .verifier import CheckReport, FAIL, PASS, SKIPPED, _fmt_points


@dataclass(frozen=True)
class TransferSpec:
    model: ModelDescriptor
    L: int
    thetas: tuple = None
    normalization: str = "plain"  # or "trace"

    def __post_init__(self):
        if self.L < 1:
            raise ValueError("L must be >= 1")
        idp = self.model.identity_point
        thetas = self.thetas if self.thetas is not None else (idp,) * self.L
        thetas = tuple(Fraction(t) for t in thetas)
        if len(thetas) != self.L:
            raise ValueError("need one inhomogeneity per site")
        object.__setattr__(self, "thetas", thetas)
        if self.normalization not in ("plain", "trace"):
            raise ValueError("normalization is 'plain' or 'trace'")

    @property
    def homogeneous(self) -> bool:
        return all(t == self.model.identity_point for t in self.thetas)


def _factor(what, thunk):
    try:
        return thunk()
    except (PoleError, ZeroDivisionError) as exc:
        raise PoleError(f"transfer factor {what}: {exc}") from exc


def build_transfer(spec: TransferSpec, x) -> SparseMatrix:
    """t(x) = [norm] tr_0( Ktilde_0(x) R_0L...R_01 K_0(x) R_10...R_L0 )."""
    model, L = spec.model, spec.L
    conv = model.convention
    n = L + 1  # tensor factor 0 is the auxiliary space
    acc = embed_at_positions(
        _factor("Ktilde_0", lambda: m.k_matrix(model, "Ktilde", x)), (0,), n)
    for j in range(L, 0, -1):
        arg = conv.compose(x, spec.thetas[j - 1])
        acc = acc * embed_at_positions(
            _factor(f"R_0{j}", lambda: m.r_matrix(model, arg)), (0, j), n)
    acc = acc * embed_at_positions(
        _factor("K_0", lambda: m.k_matrix(model, "K", x)), (0,), n)
    for j in range(1, L + 1):
        arg = conv.reflect_compose(x, spec.thetas[j - 1])
        acc = acc * embed_at_positions(
            _factor(f"R_{j}0", lambda: m.r_matrix(model, arg)), (j, 0), n)
    t = partial_trace_first(acc)
    if spec.normalization == "trace":
        trace = _factor("tr Ktilde(1)", lambda: m.k_matrix(
            model, "Ktilde", model.identity_point)).trace()
        t = t.scale(1 / trace)
    return t


def _sparse_match(model, check, points, lhs: SparseMatrix,
                  rhs: SparseMatrix) -> CheckReport:
    diff = lhs - rhs
    for r, c, v in diff.items():
        return CheckReport(model.name, check, _fmt_points(points), FAIL,
                           witness={"row": r, "col": c,
                                    "lhs": format_rational(lhs.get(r, c)),
                                    "rhs": format_rational(rhs.get(r, c))})
    return CheckReport(model.name, check, _fmt_points(points), PASS)


def _guard(model, check, points, thunk):
    try:
        return thunk()
    except (PoleError, ZeroDivisionError) as exc:
        return CheckReport(model.name, check, _fmt_points(points), SKIPPED,
                           reason=f"pole: {exc}")


def check_commutation(spec: TransferSpec, x, x2) -> CheckReport:
    def run():
        t1 = build_transfer(spec, x)
        t2 = build_transfer(spec, x2)
        return _sparse_match(spec.model, "transfer.commutation", (x, x2),
                             t1 * t2, t2 * t1)
    return _guard(spec.model, "transfer.commutation", (x, x2), run)


def markov_from_transfer(model: ModelDescriptor, L: int) -> CheckReport:
    """(1/2 rho) t'(identity) = M, with t the homogeneous trace-normalized
    transfer matrix, differentiated exactly over dual numbers."""
    spec = TransferSpec(model, L, normalization="trace")
    idp = model.identity_point

    def run():
        t = build_transfer(spec, Dual.variable(idp))
        tp = t.map(lambda e: e.deriv if isinstance(e, Dual) else Fraction(0))
        lhs = tp.scale(1 / (2 * model.rho))
        return _sparse_match(model, "transfer.markov_derivative", (idp,),
                             lhs, build_markov(model, L))
    return _guard(model, "transfer.markov_derivative", (idp,), run)


def lambda_eigenvalue(model: ModelDescriptor, x, thetas) -> Fraction:
    """Closed-form transfer eigenvalue on the matrix-ansatz eigenvector."""
    thetas = [Fraction(t) for t in thetas]
    if model.name == m.SSEP:
        al, be, ga, de = model.alpha, model.beta, model.gamma, model.delta
        f_r = ((x + 1) * (de + be) - 1) / (x * (de + be) + 1)
        f_l = ((x + 1) * (al + ga) - 1) / (x * (al + ga) + 1)
        prod = Fraction(1)
        for t in thetas:
            prod *= (x * x - t * t) / ((x + 1) ** 2 - t * t)
        return 1 + f_r * f_l * x / (x + 1) * prod
    if model.name == m.ASEP:
        q = model.q
        al, be, ga, de = model.alpha, model.beta, model.gamma, model.delta
        f_r = ((q * x - 1) * (de + q * x * be) + q * x * (1 - q)) / \
            ((x - 1) * (x * de + be) + x * (q - 1))
        f_l = ((q * x - 1) * (q * x * al + ga) + q * x * (1 - q)) / \
            ((x - 1) * (al + x * ga) + x * (q - 1))
        prod = Fraction(1)
        for t in thetas:
            prod *= (x - t) * (x * t - 1) / ((q * x - t) * (q * x * t - 1))
        L = len(thetas)
        return 1 + f_r * f_l * q ** (L - 1) * (x * x - 1) / (q * q * x * x - 1) * prod
    raise m.UnsupportedError(f"{model.name}: no closed-form eigenvalue known")


def check_eigenpair(spec: TransferSpec, x, vector, side: str = "right",
                    eigenvalue=None, tolerance: Fraction | None = None) -> CheckReport:
    """t(x) v = lambda v (right) or v^T t(x) = lambda v^T (left), exactly,
    or within a relative residual when a tolerance is given."""
    model = spec.model
    check = f"transfer.eigen_{side}"
    if not any(vector):
        raise ValueError("eigenvector must be nonzero")

    def run():
        lam = eigenvalue if eigenvalue is not None else \
            lambda_eigenvalue(model, x, spec.thetas)
        t = build_transfer(spec, x)
        got = t.apply(vector) if side == "right" else t.apply_left(vector)
        want = [lam * v for v in vector]
        if tolerance is None:
            lhs = Matrix([got])
            rhs = Matrix([want])
            for j in range(len(vector)):
                if lhs.a[0][j] != rhs.a[0][j]:
                    return CheckReport(model.name, check, _fmt_points((x,)), FAIL,
                                       witness={"row": 0, "col": j,
                                                "lhs": format_rational(lhs.a[0][j]),
                                                "rhs": format_rational(rhs.a[0][j])})
            return CheckReport(model.name, check, _fmt_points((x,)), PASS)
        scale = max(abs(v) for v in vector)
        for j in range(len(vector)):
            if abs(got[j] - want[j]) > tolerance * scale:
                return CheckReport(model.name, check, _fmt_points((x,)), FAIL,
                                   witness={"row": 0, "col": j,
                                            "lhs": format_rational(got[j]),
                                            "rhs": format_rational(want[j])})
        return CheckReport(model.name, check, _fmt_points((x,)), PASS)

    return _guard(model, check, (x,), run)


def left_eigen_ones(spec: TransferSpec, x) -> CheckReport:
    ones = [Fraction(1)] * (1 << spec.L)
    return check_eigenpair(spec, x, ones, side="left")


def eigenvector_from_nullspace(spec: TransferSpec, x0) -> list:
    """Exact right eigenvector of t at eigenvalue lambda(x0), via the kernel
    of t(x0) - lambda(x0) I.  Commutation makes it x-independent."""
    from .tensor import exact_nullspace
    lam = lambda_eigenvalue(spec.model, x0, spec.thetas)
    t = build_transfer(spec, x0)
    shift = SparseMatrix.identity(t.dim).scale(-lam)
    kernel = exact_nullspace(t + shift)
    if len(kernel) != 1:
        raise ValueError(f"eigen-kernel dimension {len(kernel)} != 1 at x={x0}")
    return kernel[0]


def check_crossing_symmetry_t(spec: TransferSpec, x) -> CheckReport:
    """SSEP: t(x) = (lambda(x)-1) t(-x-1); ASEP: t(x) = (lambda(x)-1) t(1/qx)."""
    model = spec.model
    if model.name not in (m.SSEP, m.ASEP):
        return CheckReport(model.name, "transfer.crossing", _fmt_points((x,)),
                           SKIPPED, reason="no crossing relation for this model")

    def run():
        lam = lambda_eigenvalue(model, x, spec.thetas)
        partner = -x - 1 if model.name == m.SSEP else 1 / (model.q * x)
        lhs = build_transfer(spec, x)
        rhs = build_transfer(spec, partner).scale(lam - 1)
        return _sparse_match(model, "transfer.crossing", (x,), lhs, rhs)

    return _guard(model, "transfer.crossing", (x,), run)


def ssep_conjugated(spec: TransferSpec, x) -> list:
    """Conjugation by Gamma = [[-1, beta], [1, delta]] per site: triangular
    D(x), diagonal Dtilde(x), and the all-down matrix element of the
    conjugated transfer matrix."""
    model = spec.model
    if model.name != m.SSEP:
        return [CheckReport(model.name, "conjugated.ssep", _fmt_points((x,)),
                            SKIPPED, reason="SSEP only")]
    al, be, ga, de = model.alpha, model.beta, model.gamma, model.delta
    if be + de == 0:
        raise ValueError("Gamma is singular: beta + delta = 0")
    Gam = Matrix([[Fraction(-1), be], [Fraction(1), de]])
    Gi = inverse(Gam)
    out = []

    def d_check():
        d = x * (al + ga) + 1
        want = Matrix([[-(x * (al + ga) - 1) / d, 2 * x * (al * be - de * ga) / d],
                       [Fraction(0), Fraction(1)]])
        got = Gi * m.k_matrix(model, "K", x) * Gam
        return _match_dense(model, "conjugated.D", (x,), got, want)
    out.append(_guard(model, "conjugated.D", (x,), d_check))

    def dtilde_check():
        pre = (2 * x + 1) / (2 * (x + 1) * (x * (de + be) + 1))
        want = Matrix([[pre * (-(x + 1) * (be + de) + 1), Fraction(0)],
                       [Fraction(0), pre * ((x + 1) * (be + de) + 1)]])
        got = Gi * m.k_matrix(model, "Ktilde", x) * Gam
        return _match_dense(model, "conjugated.Dtilde", (x,), got, want)
    out.append(_guard(model, "conjugated.Dtilde", (x,), dtilde_check))

    def scalar_check():
        # <-| ts(x) |-> with |-> the all-occupied basis vector: contract t
        # against the conjugated boundary vectors instead of conjugating t.
        t = build_transfer(spec, x)
        row = [Fraction(1)]
        col = [Fraction(1)]
        for _ in range(spec.L):
            row = [r * g for r in row for g in (Gi.a[1][0], Gi.a[1][1])]
            col = [c * g for c in col for g in (Gam.a[0][1], Gam.a[1][1])]
        tcol = t.apply(col)
        got = sum(r * v for r, v in zip(row, tcol))
        want = lambda_eigenvalue(model, x, spec.thetas)
        if got == want:
            return CheckReport(model.name, "conjugated.scalar",
                               _fmt_points((x,)), PASS)
        return CheckReport(model.name, "conjugated.scalar", _fmt_points((x,)),
                           FAIL, witness={"row": 0, "col": 0,
                                          "lhs": format_rational(got),
                                          "rhs": format_rational(want)})
    out.append(_guard(model, "conjugated.scalar", (x,), scalar_check))
    return out


def _match_dense(model, check, points, lhs: Matrix, rhs: Matrix) -> CheckReport:
    for i in range(lhs.rows):
        for j in range(lhs.cols):
            if lhs.a[i][j] != rhs.a[i][j]:
                return CheckReport(model.name, check, _fmt_points(points), FAIL,
                                   witness={"row": i, "col": j,
                                            "lhs": format_rational(lhs.a[i][j]),
                                            "rhs": format_rational(rhs.a[i][j])})
    return CheckReport(model.name, check, _fmt_points(points), PASS)
