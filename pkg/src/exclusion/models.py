"""Catalog of the four exclusion-process models.

For each of ASEP, TASEP, SSEP and the reaction-diffusion (RD) chain this
module provides the local jump operators (w, B, Bbar), the R-matrix, the
boundary matrices K / Kbar / Ktilde, crossing data, and the scalar vectors
of the bulk Markovian property.  All entries are exact rational functions
of the rates and the spectral parameter; constructors accept Fraction,
Dual or Jet arguments alike.

Spectral-parameter bookkeeping differs per model: ASEP, TASEP and RD
compose arguments multiplicatively (x1/x2, identity point 1) while SSEP is
additive (x1-x2, identity point 0).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .scalars import Dual, Jet, lift_like, rat
from .tensor import Matrix, PoleError, inverse, kron, partial_trace_first, \
    partial_transpose, permutation_op

ASEP = "asep"
TASEP = "tasep"
SSEP = "ssep"
RD = "rd"

MODEL_NAMES = (ASEP, TASEP, SSEP, RD)


class UnsupportedError(ValueError):
    """The requested object does not exist for this model."""


@dataclass(frozen=True)
class SpectralConvention:
    kind: str  # "multiplicative" | "additive"

    @property
    def identity_point(self) -> Fraction:
        return Fraction(1) if self.kind == "multiplicative" else Fraction(0)

    def compose(self, x1, x2):
        return x1 / x2 if self.kind == "multiplicative" else x1 - x2

    def invert(self, x):
        return 1 / x if self.kind == "multiplicative" else -x

    def reflect_compose(self, x1, x2):
        return x1 * x2 if self.kind == "multiplicative" else x1 + x2

    def cross_shift(self, x, Q=None):
        if self.kind == "multiplicative":
            return 1 / (x * Q)
        return -x - 2


MULTIPLICATIVE = SpectralConvention("multiplicative")
ADDITIVE = SpectralConvention("additive")


@dataclass(frozen=True)
class Crossing:
    U: Matrix
    Q: Fraction
    lam: Callable  # scalar function of the spectral parameter


@dataclass(frozen=True)
class ModelDescriptor:
    name: str
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction
    q: Optional[Fraction] = None        # ASEP only
    kappa: Optional[Fraction] = None    # RD only
    convention: SpectralConvention = MULTIPLICATIVE
    rho: Fraction = Fraction(1)
    crossing: Optional[Crossing] = None
    markov_a: Fraction = Fraction(1)    # gauge constants of v(x)
    markov_b: Fraction = Fraction(1)

    @property
    def identity_point(self) -> Fraction:
        return self.convention.identity_point

    def rates(self) -> dict:
        d = {"alpha": self.alpha, "beta": self.beta,
             "gamma": self.gamma, "delta": self.delta}
        if self.q is not None:
            d["q"] = self.q
        if self.kappa is not None:
            d["kappa"] = self.kappa
        return d


def _warn_negative(rates):
    for name, v in rates.items():
        if v < 0:
            warnings.warn(f"negative rate {name}={v}: not a stochastic model, "
                          "algebraic checks only", stacklevel=3)


def asep(q, alpha, beta, gamma, delta, markov_a=1, markov_b=1) -> ModelDescriptor:
    q, alpha, beta, gamma, delta = map(rat, (q, alpha, beta, gamma, delta))
    if q == 1:
        raise ValueError("q=1 is the SSEP model; use ssep()")
    if q == 0:
        raise ValueError("q=0 is the TASEP model; use tasep()")
    _warn_negative({"alpha": alpha, "beta": beta, "gamma": gamma, "delta": delta,
                    "q": q})
    crossing = Crossing(
        U=Matrix([[Fraction(1), Fraction(0)], [Fraction(0), q]]),
        Q=q * q,
        lam=lambda x: (x - 1) * (q * q * x - 1) / ((q * x - 1) ** 2),
    )
    return ModelDescriptor(ASEP, alpha, beta, gamma, delta, q=q,
                           convention=MULTIPLICATIVE, rho=1 / (q - 1),
                           crossing=crossing,
                           markov_a=rat(markov_a), markov_b=rat(markov_b))


def tasep(alpha, beta, markov_a=1, markov_b=1) -> ModelDescriptor:
    alpha, beta = rat(alpha), rat(beta)
    _warn_negative({"alpha": alpha, "beta": beta})
    # crossing data absent: the partial transpose of R is singular
    return ModelDescriptor(TASEP, alpha, beta, Fraction(0), Fraction(0),
                           convention=MULTIPLICATIVE, rho=Fraction(-1),
                           crossing=None,
                           markov_a=rat(markov_a), markov_b=rat(markov_b))


def ssep(alpha, beta, gamma, delta, markov_a=1, markov_b=1) -> ModelDescriptor:
    alpha, beta, gamma, delta = map(rat, (alpha, beta, gamma, delta))
    _warn_negative({"alpha": alpha, "beta": beta, "gamma": gamma, "delta": delta})
    crossing = Crossing(
        U=Matrix.identity(2),
        Q=Fraction(2),  # additive shift: x -> -x-2
        lam=lambda x: x * (x + 2) / ((x + 1) ** 2),
    )
    return ModelDescriptor(SSEP, alpha, beta, gamma, delta,
                           convention=ADDITIVE, rho=Fraction(1),
                           crossing=crossing,
                           markov_a=rat(markov_a), markov_b=rat(markov_b))


def rd(kappa, alpha, beta, gamma, delta) -> ModelDescriptor:
    kappa, alpha, beta, gamma, delta = map(rat, (kappa, alpha, beta, gamma, delta))
    if kappa in (0, 1, -1):
        raise ValueError("rd model requires kappa not in {0, 1, -1}")
    _warn_negative({"alpha": alpha, "beta": beta, "gamma": gamma, "delta": delta})
    kp1, km1 = kappa + 1, kappa - 1

    def lam(x):
        num = (x * x - 1) * (x * kp1 ** 2 + km1 ** 2) * (x * kp1 ** 2 - km1 ** 2)
        den = (x * kp1 + km1) ** 2 * (x * kp1 - km1) ** 2
        return num / den

    crossing = Crossing(U=Matrix.identity(2), Q=kp1 ** 2 / km1 ** 2, lam=lam)
    return ModelDescriptor(RD, alpha, beta, gamma, delta, kappa=kappa,
                           convention=MULTIPLICATIVE, rho=1 / (2 * kappa),
                           crossing=crossing)


# ---------------------------------------------------------------- local ops

def local_operators(model: ModelDescriptor):
    """(w, B, Bbar): bulk pair operator and the two boundary operators."""
    al, be, ga, de = model.alpha, model.beta, model.gamma, model.delta
    z = Fraction(0)
    if model.name == TASEP:
        B = Matrix([[-al, z], [al, z]])
        Bbar = Matrix([[z, be], [z, -be]])
    else:
        B = Matrix([[-al, ga], [al, -ga]])
        Bbar = Matrix([[-de, be], [de, -be]])
    if model.name == ASEP:
        q = model.q
        w = Matrix([[z, z, z, z], [z, -q, 1, z], [z, q, -1, z], [z, z, z, z]])
    elif model.name == TASEP:
        w = Matrix([[z, z, z, z], [z, z, 1, z], [z, z, -1, z], [z, z, z, z]])
    elif model.name == SSEP:
        w = Matrix([[z, z, z, z], [z, -1, 1, z], [z, 1, -1, z], [z, z, z, z]])
    else:
        k2 = model.kappa ** 2
        w = Matrix([[-1, z, z, 1], [z, -k2, k2, z], [z, k2, -k2, z], [1, z, z, -1]])
    return w, B, Bbar


# ---------------------------------------------------------------- R-matrix

def _nonzero(denom, what, x):
    # a Dual with vanishing value part is a pole at the evaluation point;
    # a Jet with vanishing constant term is not (valuation division applies)
    bad = (denom.value == 0) if isinstance(denom, Dual) else not denom
    if bad:
        raise PoleError(f"{what} vanishes at x={x}")
    return denom


def r_matrix(model: ModelDescriptor, x) -> Matrix:
    """The 4x4 R-matrix at spectral parameter x (exact; Dual/Jet-friendly)."""
    o = lift_like(1, x)
    z = lift_like(0, x)
    if model.name == ASEP:
        q = model.q
        d = _nonzero(q * x - 1, "q*x - 1", x)
        return Matrix([[o, z, z, z],
                       [z, (x - 1) * q / d, (q - 1) * x / d, z],
                       [z, (q - 1) / d, (x - 1) / d, z],
                       [z, z, z, o]])
    if model.name == TASEP:
        return Matrix([[o, z, z, z],
                       [z, z, x * o, z],
                       [z, o, 1 - x, z],
                       [z, z, z, o]])
    if model.name == SSEP:
        d = _nonzero(x + 1, "x + 1", x)
        return Matrix([[o, z, z, z],
                       [z, x / d, 1 / d, z],
                       [z, 1 / d, x / d, z],
                       [z, z, z, o]])
    k = model.kappa
    d1 = _nonzero(k * (x + 1) + x - 1, "kappa*(x+1) + x-1", x)
    d2 = _nonzero(k * (x - 1) + x + 1, "kappa*(x-1) + x+1", x)
    return Matrix([[k * (x + 1) / d1, z, z, (x - 1) / d1],
                   [z, k * (x - 1) / d2, (x + 1) / d2, z],
                   [z, (x + 1) / d2, k * (x - 1) / d2, z],
                   [(x - 1) / d1, z, z, k * (x + 1) / d1]])


def r_matrix_swapped(model: ModelDescriptor, x) -> Matrix:
    """R21(x) = P R12(x) P."""
    P = permutation_op()
    return P * r_matrix(model, x) * P


# ---------------------------------------------------------------- K-matrices

def k_matrix(model: ModelDescriptor, kind: str, x) -> Matrix:
    """Boundary matrix of the requested kind: 'K' (left), 'Kbar' (right)
    or 'Ktilde' (dual).  RD has no closed-form Ktilde; it is produced by the
    duality map, evaluated through its removable singularities."""
    if kind == "K":
        return _k_left(model, x)
    if kind == "Kbar":
        return _k_right(model, x)
    if kind == "Ktilde":
        return _k_dual(model, x)
    raise ValueError(f"unknown K-matrix kind {kind!r}")


def _k_left(model: ModelDescriptor, x) -> Matrix:
    al, ga = model.alpha, model.gamma
    if model.name == ASEP:
        q = model.q
        d = _nonzero(ga * x * x + (q + al - ga - 1) * x - al,
                     "gamma*x^2 + (q+alpha-gamma-1)*x - alpha", x)
        return Matrix([[x * (-al * x + ga * x + q + al - ga - 1) / d,
                        ga * (x * x - 1) / d],
                       [al * (x * x - 1) / d,
                        (q * x + al * x - ga * x - x - al + ga) / d]])
    if model.name == TASEP:
        d = _nonzero(al * x - x - al, "alpha*x - x - alpha", x)
        o = lift_like(1, x)
        return Matrix([[x * (-al * x + al - 1) / d, lift_like(0, x)],
                       [al * (x * x - 1) / d, o]])
    if model.name == SSEP:
        d = _nonzero(x * (al + ga) + 1, "x*(alpha+gamma) + 1", x)
        return Matrix([[(x * (ga - al) + 1) / d, 2 * x * ga / d],
                       [2 * x * al / d, (x * (al - ga) + 1) / d]])
    k = model.kappa
    x2 = x * x
    d = _nonzero(2 * x * ((x2 - 1) * (al + ga) + 2 * k * (x2 + 1)),
                 "2x*((x^2-1)(alpha+gamma) + 2kappa(x^2+1))", x)
    return Matrix([[(x2 + 1) * ((x2 - 1) * (ga - al) + 4 * x * k) / d,
                    (x2 - 1) * ((x2 + 1) * (ga - al) + 2 * x * (al + ga)) / d],
                   [-(x2 - 1) * ((x2 + 1) * (ga - al) - 2 * x * (al + ga)) / d,
                    -(x2 + 1) * ((x2 - 1) * (ga - al) - 4 * x * k) / d]])


def _k_right(model: ModelDescriptor, x) -> Matrix:
    be, de = model.beta, model.delta
    if model.name == ASEP:
        q = model.q
        d = _nonzero(-be * x * x + (q - de + be - 1) * x + de,
                     "-beta*x^2 + (q-delta+beta-1)*x + delta", x)
        return Matrix([[x * (de * x - be * x + q - de + be - 1) / d,
                        -be * (x * x - 1) / d],
                       [-de * (x * x - 1) / d,
                        (q * x - de * x + be * x - x + de - be) / d]])
    if model.name == TASEP:
        d = _nonzero(-be * x * x + be * x - x, "-beta*x^2 + beta*x - x", x)
        o = lift_like(1, x)
        return Matrix([[o, -be * (x * x - 1) / d],
                       [lift_like(0, x), (be * x - x - be) / d]])
    if model.name == SSEP:
        d = _nonzero(x * (de + be) - 1, "x*(delta+beta) - 1", x)
        return Matrix([[(x * (be - de) - 1) / d, 2 * x * be / d],
                       [2 * x * de / d, (x * (de - be) - 1) / d]])
    k = model.kappa
    x2 = x * x
    d = _nonzero(2 * x * (-(x2 - 1) * (de + be) + 2 * k * (x2 + 1)),
                 "2x*(-(x^2-1)(delta+beta) + 2kappa(x^2+1))", x)
    return Matrix([[(x2 + 1) * ((x2 - 1) * (de - be) + 4 * x * k) / d,
                    (x2 - 1) * ((x2 + 1) * (de - be) - 2 * x * (de + be)) / d],
                   [-(x2 - 1) * ((x2 + 1) * (de - be) + 2 * x * (de + be)) / d,
                    -(x2 + 1) * ((x2 - 1) * (de - be) - 4 * x * k) / d]])


def _k_dual(model: ModelDescriptor, x) -> Matrix:
    be, de = model.beta, model.delta
    if model.name == ASEP:
        q = model.q
        d = _nonzero((de * x + be) * (x - 1) + (q - 1) * x,
                     "(delta*x+beta)(x-1) + (q-1)x", x)
        d2 = _nonzero(q * q * x * x - 1, "q^2 x^2 - 1", x)
        pre = (q * x * x - 1) / d
        return Matrix([[pre * (q * x * (q - 1 - de + be) + de - be) / d2, pre * be],
                       [pre * de / q, pre * x * (q * x * (de - be) + q - 1 - de + be) / d2]])
    if model.name == TASEP:
        d = _nonzero(x * (be - 1) - be, "x*(beta-1) - beta", x)
        return Matrix([[-be / d, -be / d],
                       [lift_like(0, x), x * (be - 1) / d]])
    if model.name == SSEP:
        d = _nonzero(x * (de + be) + 1, "x*(delta+beta) + 1", x)
        d2 = _nonzero(2 * (x + 1), "2(x+1)", x)
        pre = (2 * x + 1) / d
        return Matrix([[pre * ((x + 1) * (be - de) + 1) / d2, pre * be],
                       [pre * de, pre * ((x + 1) * (de - be) + 1) / d2]])
    return _rd_ktilde(model, x)


def _rd_ktilde(model: ModelDescriptor, x) -> Matrix:
    """RD dual boundary matrix via the crossing form of the duality map,
    evaluated on jets so the removable singularities at lambda(x^2)=0 (in
    particular the identity point) are crossed exactly."""
    if isinstance(x, Jet):
        raise TypeError("jet arguments are internal to the Ktilde evaluation")
    if isinstance(x, Dual):
        center, slope = x.value, x.deriv
    else:
        center, slope = rat(x), None
    if center == 0:
        raise PoleError("Ktilde undefined at x=0 (argument 1/x)")
    xj = Jet.variable(center, 4)
    try:
        M = _ktilde_crossing_form(model, xj)
    except PoleError:
        raise
    except ZeroDivisionError as exc:
        raise PoleError(f"dual boundary matrix has a pole at x={center}: "
                        f"{exc}") from exc
    if slope is None:
        return M.map(lambda e: e.value)
    return M.map(lambda e: Dual(e.value, e.deriv * slope))


def _ktilde_crossing_form(model: ModelDescriptor, x) -> Matrix:
    """tr_0( Kbar_0(1/x) U_1^-1 R_10(cross(x^2)) U_1 P_01 ) / lambda(x^2)."""
    cross = model.crossing
    if cross is None:
        raise UnsupportedError(f"{model.name}: no crossing data")
    conv = model.convention
    xx = conv.reflect_compose(x, x)
    arg = conv.cross_shift(xx, cross.Q)
    kbar = _k_right(model, conv.invert(x))
    U1 = kron(cross.U, Matrix.identity(2))
    big = kron(kbar, Matrix.identity(2)) * inverse(U1) * \
        r_matrix_swapped(model, arg) * U1 * permutation_op()
    lam = cross.lam(xx)
    return partial_trace_first(big).map(lambda e: e / lam)


def ktilde_from_kbar(model: ModelDescriptor, x) -> Matrix:
    """Dual-boundary map: Ktilde_1(x) = tr_0(Kbar_0(inv x)
    ((R_01(rc(x,x))^{t1})^{-1})^{t1} P_01).  Undefined for TASEP."""
    if model.name == TASEP:
        raise UnsupportedError("tasep: partial transpose of R is singular")
    conv = model.convention
    R = r_matrix(model, conv.reflect_compose(x, x))
    Rt1 = partial_transpose(R, 1)
    try:
        inv = partial_transpose(inverse(Rt1), 1)
    except PoleError as exc:
        raise PoleError(f"singular partial transpose at x={x}") from exc
    big = kron(_k_right(model, conv.invert(x)), Matrix.identity(2)) * inv * \
        permutation_op()
    return partial_trace_first(big)


def kbar_from_ktilde(model: ModelDescriptor, x) -> Matrix:
    """Inverse map: Kbar_1(x) = tr_0(Ktilde_0(inv x) R_01(inv rc(x,x)) P_01)."""
    if model.name == TASEP:
        raise UnsupportedError("tasep: dual reflection structure undefined")
    conv = model.convention
    big = kron(_k_dual(model, conv.invert(x)), Matrix.identity(2)) * \
        r_matrix(model, conv.invert(conv.reflect_compose(x, x))) * permutation_op()
    return partial_trace_first(big)


def general_asep_k(alpha, gamma, q, tau):
    """The twisted ASEP left K-matrix as a function of x.  The exponential
    twist enters algebraically only, as a free rational parameter tau
    (tau=1 is the untwisted Markovian matrix)."""
    alpha, gamma, q, tau = map(rat, (alpha, gamma, q, tau))
    if tau == 0:
        raise ValueError("twist parameter tau must be nonzero")
    base = asep(q, alpha, 1, gamma, 0)

    def k(x):
        K = _k_left(base, x)
        return Matrix([[K.a[0][0], K.a[0][1] / tau],
                       [tau * K.a[1][0], K.a[1][1]]])

    return k


def markov_vector(model: ModelDescriptor, x):
    """The scalar vector v(x) of the bulk Markovian property (gauge f=1)."""
    if model.name == RD:
        raise UnsupportedError("rd: no scalar Markovian vector exists")
    if model.name == SSEP:
        return (model.markov_a * lift_like(1, x), model.markov_b * lift_like(1, x))
    return (model.markov_a * x, model.markov_b * lift_like(1, x))


def lambda_crossing(model: ModelDescriptor, x):
    """Crossing-unitarity scalar lambda(x)."""
    if model.crossing is None:
        raise UnsupportedError(f"{model.name}: no crossing data")
    return model.crossing.lam(x)
