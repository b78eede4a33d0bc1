"""Benchmark growth economy: production and depreciation of capital, the
piecewise utility, the closed-form feedback controls, and the Hamiltonian
with its four partial derivatives.

State of one agent: consumer goods ``a``, capital ``k``, and the two
co-states ``q_a``, ``q_k`` (marginal values of goods and capital).  Controls
are a consumption rate ``c`` and a total investment rate ``i``; capital is
bought at the market price ``p`` measured in consumer goods.

The Hamiltonian splits into three parts:

    H_A = F(k, p) q_a + g(k, p) q_k + u1(a) + u1(k)
    H_B = (q_k - p q_a)^2 / 2            (maximum over i of the quadratic)
    H_C = -q_a c*(q_a) + u1(c*(q_a))

where F = Theta + p Xi is global output and g the depreciation.  Two
variants of the consumption rule c*(q_a) are provided, selected by
:class:`ConsumptionLaw`; see its docstring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConsumptionDomainError

# Floor applied to q_a inside the exact-Legendre consumption rule: the rule
# diverges like 1/(4 q_a^2) as q_a -> 0+, and terminal co-states are zero.
EPS_QA = 1e-3


class ConsumptionLaw(str, Enum):
    """Branch assignment of the consumption rule c*(q_a).

    PAPER_LITERAL keeps the stationary point of the sqrt utility branch for
    q_a > 2 and the linear rule (2 - q_a)/2 for q_a <= 2.  LEGENDRE_EXACT
    swaps the branches so that the first-order condition u1'(c*) = q_a holds
    for every q_a > 0; it is the variant validated against a brute-force
    maximizer.  The two rules agree (c* = 0) only at q_a = 2.
    """

    PAPER_LITERAL = "paper"
    LEGENDRE_EXACT = "legendre"


@dataclass(frozen=True)
class ControlPair:
    """Consumption and total-investment rates at one instant."""

    consumption: float
    investment: float


@dataclass(frozen=True)
class CostatePair:
    """Marginal values of consumer goods and capital."""

    q_a: float
    q_k: float


def u1(x: float) -> float:
    """Piecewise utility: sqrt(x + 1/16) for x > 0, 5/4 - (1 - x)^2 otherwise.

    Monotone increasing, concave, and C^1 across the seam at 0 (value 1/4,
    slope 2 on both sides).
    """
    if x > 0.0:
        return math.sqrt(x + 0.0625)
    return 1.25 - (1.0 - x) * (1.0 - x)


def u1_prime(x: float) -> float:
    """Derivative of :func:`u1`: 1/(2 sqrt(x + 1/16)) for x > 0, 2(1 - x) otherwise."""
    if x > 0.0:
        return 0.5 / math.sqrt(x + 0.0625)
    return 2.0 * (1.0 - x)


def _consumption_with_slope(q_a: float, law: ConsumptionLaw) -> tuple[float, float]:
    """Consumption rule c*(q_a) and its derivative dc*/dq_a.

    The sqrt-branch stationary point is (4 - q_a^2)/(16 q_a^2) with slope
    -1/(2 q_a^3); the linear branch is (2 - q_a)/2 with slope -1/2.  At the
    kink q_a = 2 the branch covering q_a <= 2 supplies the derivative.
    Inside the LEGENDRE_EXACT floor region (0 < q_a < EPS_QA) the rule is
    constant, so the slope there is 0; this keeps the Hamiltonian gradient
    equal to the true derivative of the evaluated composite.
    """
    if law is ConsumptionLaw.PAPER_LITERAL:
        if q_a > 2.0:
            return (4.0 - q_a * q_a) / (16.0 * q_a * q_a), -0.5 / (q_a * q_a * q_a)
        return 0.5 * (2.0 - q_a), -0.5
    if q_a <= 0.0:
        raise ConsumptionDomainError(
            f"consumption supremum is unbounded for q_a = {q_a!r} <= 0"
        )
    floored = q_a < EPS_QA
    qe = EPS_QA if floored else q_a
    if qe <= 2.0:
        c = (4.0 - qe * qe) / (16.0 * qe * qe)
        return c, 0.0 if floored else -0.5 / (qe * qe * qe)
    return 0.5 * (2.0 - qe), -0.5


def optimal_consumption(q_a: float, law: ConsumptionLaw) -> float:
    """Feedback consumption c*(q_a) under the given branch law."""
    return _consumption_with_slope(q_a, law)[0]


def consumption_slope(q_a: float, law: ConsumptionLaw) -> float:
    """dc*/dq_a under the given branch law (0 inside the Legendre floor)."""
    return _consumption_with_slope(q_a, law)[1]


def optimal_investment(q_a: float, q_k: float, p: float) -> float:
    """Feedback investment i* = q_k - p q_a (maximizer of the quadratic part)."""
    return q_k - p * q_a


def consumption_profile(q_a: np.ndarray, law: ConsumptionLaw) -> np.ndarray:
    """Vectorized c*(q_a) over an array; element-wise identical to
    :func:`optimal_consumption`."""
    q = np.asarray(q_a, dtype=float)
    out = np.empty_like(q)
    if law is ConsumptionLaw.PAPER_LITERAL:
        hi = q > 2.0
        qh = q[hi]
        out[hi] = (4.0 - qh * qh) / (16.0 * qh * qh)
        ql = q[~hi]
        out[~hi] = 0.5 * (2.0 - ql)
        return out
    if np.any(q <= 0.0):
        raise ConsumptionDomainError(
            "consumption supremum is unbounded for q_a <= 0")
    qe = np.maximum(q, EPS_QA)
    lo = qe <= 2.0
    qlo = qe[lo]
    out[lo] = (4.0 - qlo * qlo) / (16.0 * qlo * qlo)
    qhi = qe[~lo]
    out[~lo] = 0.5 * (2.0 - qhi)
    return out


@dataclass(frozen=True)
class Economy:
    """Linear-production economy with piecewise-sqrt utility.

    Theta(k, p) = theta_coeff * k    (consumer-goods output)
    Xi(k, p)    = xi_coeff * k       (capital output)
    F(k, p)     = Theta + p Xi       (global output)
    g(k, p)     = -depreciation_rate * k

    ``mode`` selects the consumption branch law used by trajectory code;
    the pointwise operations also accept an explicit override.
    """

    theta_coeff: float = 1.0
    xi_coeff: float = 0.1
    depreciation_rate: float = 0.5
    mode: ConsumptionLaw = ConsumptionLaw.PAPER_LITERAL

    def __post_init__(self):
        if self.theta_coeff < 0.0 or self.xi_coeff < 0.0 or self.depreciation_rate < 0.0:
            raise ValueError(
                "economy coefficients must be nonnegative, got "
                f"theta={self.theta_coeff}, xi={self.xi_coeff}, "
                f"depreciation={self.depreciation_rate}"
            )
        if not isinstance(self.mode, ConsumptionLaw):
            object.__setattr__(self, "mode", ConsumptionLaw(self.mode))

    def production(self, k: float, p: float) -> tuple[float, float, float]:
        """(Theta, Xi, F) at capital ``k`` and price ``p``."""
        theta = self.theta_coeff * k
        xi = self.xi_coeff * k
        return theta, xi, theta + p * xi

    def depreciation(self, k: float, p: float) -> float:
        """g(k, p) = -depreciation_rate * k (price-independent here)."""
        return -(self.depreciation_rate * k)

    def hamiltonian(self, a: float, k: float, q_a: float, q_k: float, p: float,
                    law: ConsumptionLaw | None = None) -> float:
        """H = H_A + H_B + H_C at one point of the extended state space."""
        law = self.mode if law is None else law
        c, _ = _consumption_with_slope(q_a, law)
        _, _, f = self.production(k, p)
        g = self.depreciation(k, p)
        w = q_k - p * q_a
        ha = f * q_a + g * q_k + u1(a) + u1(k)
        hb = 0.5 * (w * w)
        hc = u1(c) - q_a * c
        return ha + hb + hc

    def hamiltonian_grad(self, a: float, k: float, q_a: float, q_k: float, p: float,
                         law: ConsumptionLaw | None = None
                         ) -> tuple[float, float, float, float]:
        """(dH/da, dH/dk, dH/dq_a, dH/dq_k).

        dH/dq_a is the chain-rule derivative of the evaluated composite,
        -c* + (u1'(c*) - q_a) dc*/dq_a plus the production terms, so that the
        gradient matches finite differences of :meth:`hamiltonian` even when
        the branch law violates the first-order condition (the correction
        term vanishes wherever u1'(c*) = q_a holds).
        """
        law = self.mode if law is None else law
        c, dc = _consumption_with_slope(q_a, law)
        _, _, f = self.production(k, p)
        g = self.depreciation(k, p)
        w = q_k - p * q_a
        dh_da = u1_prime(a)
        dfdk = self.theta_coeff + p * self.xi_coeff
        dh_dk = dfdk * q_a - self.depreciation_rate * q_k + u1_prime(k)
        dh_dqa = f - p * w - c + (u1_prime(c) - q_a) * dc
        dh_dqk = w + g
        return dh_da, dh_dk, dh_dqa, dh_dqk


def benchmark_economy(law: ConsumptionLaw = ConsumptionLaw.PAPER_LITERAL) -> Economy:
    """The reference economy: Theta = k, Xi = 0.1 k, g = -k/2."""
    return Economy(mode=law)
