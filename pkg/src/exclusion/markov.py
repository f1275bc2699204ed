"""Markov generators, exact steady states, observables, relaxation.

The generator acts on the 2^L configuration space with site 1 as the most
significant bit, matching the probability-vector layout (0...00, 0...01,
0...10, ...).  Everything except ``evolve`` is exact; ``evolve`` is the one
quarantined floating-point routine, returned as an ApproxDistribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .models import ModelDescriptor, RD, local_operators
from .tensor import SparseMatrix, embed_local, exact_nullspace


class KernelError(ValueError):
    """The stationary kernel is not one-dimensional."""


@dataclass(frozen=True)
class Distribution:
    """Exact stationary weights: probabilities are weights[i] / Z."""
    L: int
    weights: tuple
    Z: Fraction

    def probability(self, index: int) -> Fraction:
        return self.weights[index] / self.Z

    def probabilities(self) -> list:
        return [w / self.Z for w in self.weights]

    def config(self, index: int) -> tuple:
        return tuple((index >> (self.L - 1 - k)) & 1 for k in range(self.L))

    def index(self, config) -> int:
        out = 0
        for tau in config:
            out = (out << 1) | tau
        return out


def build_markov(model: ModelDescriptor, L: int) -> SparseMatrix:
    """M = B_1 + sum_l w_{l,l+1} + Bbar_L; at L=1 both boundaries act on
    the single site."""
    if L < 1:
        raise ValueError("L must be >= 1")
    w, B, Bbar = local_operators(model)
    M = embed_local(B, 1, L) + embed_local(Bbar, L, L)
    for site in range(1, L):
        M = M + embed_local(w, site, L)
    return M


def steady_state_exact(M: SparseMatrix) -> Distribution:
    """Normalized exact stationary distribution from the kernel of M."""
    L = M.dim.bit_length() - 1
    if 1 << L != M.dim:
        raise ValueError("dimension is not a power of two")
    kernel = exact_nullspace(M)
    if len(kernel) != 1:
        raise KernelError(f"kernel dimension {len(kernel)} != 1: "
                          "reducible or mis-built chain")
    vec = kernel[0]
    total = sum(vec)
    if total == 0:
        raise KernelError("kernel vector sums to zero")
    probs = [v / total for v in vec]
    nonneg_rates = all(v >= 0 for r, row in M.rows_items()
                       for c, v in row.items() if r != c)
    if nonneg_rates and any(p < 0 for p in probs):
        raise KernelError("internal error: negative stationary weight "
                          "with nonnegative rates")
    den_lcm = 1
    for p in probs:
        den_lcm = den_lcm * p.denominator // math.gcd(den_lcm, p.denominator)
    weights = tuple(Fraction(p * den_lcm) for p in probs)
    return Distribution(L=L, weights=weights, Z=Fraction(den_lcm))


def observables(dist: Distribution, model: ModelDescriptor) -> dict:
    """Per-site densities and the two stationary currents.

    Lattice current counts right-minus-left hops between i and i+1; the
    evaporation current (pair annihilation minus pair creation) is nonzero
    only for the RD model.
    """
    L = dist.L
    probs = dist.probabilities()
    density = [Fraction(0)] * L
    p_pair = [{(0, 0): Fraction(0), (0, 1): Fraction(0),
               (1, 0): Fraction(0), (1, 1): Fraction(0)} for _ in range(L - 1)]
    for idx, p in enumerate(probs):
        if p == 0:
            continue
        cfg = dist.config(idx)
        for i, tau in enumerate(cfg):
            if tau:
                density[i] += p
        for i in range(L - 1):
            p_pair[i][(cfg[i], cfg[i + 1])] += p
    if model.name == RD:
        hop = model.kappa ** 2
        lat = [hop * (pp[(1, 0)] - pp[(0, 1)]) for pp in p_pair]
        eva = [pp[(1, 1)] - pp[(0, 0)] for pp in p_pair]
    else:
        q_left = model.q if model.name == "asep" else \
            Fraction(1) if model.name == "ssep" else Fraction(0)
        lat = [pp[(1, 0)] - q_left * pp[(0, 1)] for pp in p_pair]
        eva = [Fraction(0)] * (L - 1)
    return {"density": density, "current_lat": lat, "current_eva": eva}


@dataclass(frozen=True)
class ApproxDistribution:
    """Floating-point approximation from uniformized evolution. Inexact."""
    L: int
    probs: tuple
    t: float
    order: int
    uniformization_rate: float
    exact: bool = False


def evolve(dist0, M: SparseMatrix, t, order: int) -> ApproxDistribution:
    """Uniformized master-equation propagation of dist0 by time t.

    P_t ~ sum_{k<=order} e^{-Lt}(Lt)^k/k! Pi^k P_0 with Pi = I + M/Lambda.
    Probability is conserved before the series truncation; the result is
    floating point and flagged inexact.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    dim = M.dim
    lam = max((abs(M.get(i, i)) for i in range(dim)), default=Fraction(0))
    if isinstance(dist0, Distribution):
        vec = [float(p) for p in dist0.probabilities()]
        L = dist0.L
    else:
        vec = [float(p) for p in dist0]
        L = dim.bit_length() - 1
    tf = float(t)
    if lam == 0 or tf == 0.0:
        return ApproxDistribution(L, tuple(vec), tf, order, float(lam))
    rows = [[] for _ in range(dim)]
    for r, row in M.rows_items():
        for c, v in row.items():
            rows[r].append((c, float(v / lam) + (1.0 if r == c else 0.0)))
    for r in range(dim):
        if not any(c == r for c, _ in rows[r]):
            rows[r].append((r, 1.0))
    mu = float(lam) * tf
    # Poisson weights in log space to survive large mu
    logw = [k * math.log(mu) - mu - math.lgamma(k + 1) for k in range(order + 1)]
    out = [math.exp(logw[0]) * v for v in vec]
    cur = vec
    for k in range(1, order + 1):
        nxt = [0.0] * dim
        for r in range(dim):
            acc = 0.0
            for c, v in rows[r]:
                acc += v * cur[c]
            nxt[r] = acc
        cur = nxt
        wk = math.exp(logw[k])
        if wk:
            for r in range(dim):
                out[r] += wk * cur[r]
    return ApproxDistribution(L, tuple(out), tf, order, float(lam))
