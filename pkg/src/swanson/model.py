"""Construction of the Swanson-model operators, parameters and metrics.

The model is the non-Hermitian quadratic Hamiltonian

    H = omega * adag a + lam * a^2 + delta * adag^2 + omega/2,

with real lam != delta, built over the harmonic-oscillator ladder pair.
In the momentum representation the position operator is realized as
x = i*hbar*(1+beta*p^2)*D with p acting by multiplication; beta = 0 is
the undeformed case and beta > 0 the minimal-length deformation, whose
natural scalar product carries the weight 1/(1+beta*p^2).  With that
representation x is symmetric under the deformed measure, which is what
singles it out.

Everything here is a pure constructor over validated immutable inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .algebra import (
    CoeffFn,
    DiffOp,
    Poly,
    anticommutator,
    coeff_const,
    coeff_poly,
    commutator,
    const_op,
    d_op,
    p_op,
)

# Guards the metric-exponent denominator omega - lam - delta.
GUARD_EPS = 1e-9

# Tolerance used when deciding whether parameters sit in the reduced
# regime m = hbar = 1, lam = -delta.
REGIME_EPS = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Validated model parameters; ``mu`` is always delta - lam."""

    omega: float
    lam: float
    delta: float
    m: float = 1.0
    hbar: float = 1.0
    beta: float = 0.0
    mu: float = field(init=False)

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be > 0")
        if not self.m > 0:
            raise ValueError("m must be > 0")
        if not self.hbar > 0:
            raise ValueError("hbar must be > 0")
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        if abs(self.omega - self.lam - self.delta) <= GUARD_EPS:
            raise ValueError("omega - lambda - delta too close to zero "
                             "(metric exponent undefined)")
        object.__setattr__(self, "mu", self.delta - self.lam)

    def to_dict(self) -> dict:
        return {
            "omega": self.omega,
            "lambda": self.lam,
            "delta": self.delta,
            "m": self.m,
            "hbar": self.hbar,
            "beta": self.beta,
            "mu": self.mu,
        }


def make_params(omega, lam, delta, m=1.0, hbar=1.0, beta=0.0) -> ModelParams:
    """Validate raw reals into ModelParams; raises ValueError naming the
    violated invariant."""
    return ModelParams(float(omega), float(lam), float(delta),
                       float(m), float(hbar), float(beta))


def with_beta(params: ModelParams, beta: float) -> ModelParams:
    return replace(params, beta=float(beta))


def in_reduced_regime(params: ModelParams) -> bool:
    """True when m = hbar = 1 and lam = -delta."""
    return (abs(params.m - 1.0) <= REGIME_EPS
            and abs(params.hbar - 1.0) <= REGIME_EPS
            and abs(params.lam + params.delta) <= REGIME_EPS)


def _require_undeformed(params: ModelParams, what: str) -> None:
    if params.beta != 0.0:
        raise ValueError(f"{what} requires beta = 0")


def _require_deformed(params: ModelParams, what: str) -> None:
    if params.beta == 0.0:
        raise ValueError(f"{what} requires beta > 0")


# -- elementary operators -----------------------------------------------------


def momentum_operator(params: ModelParams) -> DiffOp:
    """Multiplication by p."""
    return p_op(params.beta)


def position_operator(params: ModelParams) -> DiffOp:
    """x = i*hbar*(1+beta*p^2)*D; the factor is identically 1 at beta = 0."""
    fn = CoeffFn(Poly((1j * params.hbar,)), 1, params.beta)
    return DiffOp.from_dict(params.beta, {1: fn})


def ladder_ops(params: ModelParams) -> tuple[DiffOp, DiffOp]:
    """Annihilation/creation pair (a, adag) with [a, adag] = 1.

    a    = (p - i*omega*m*x) / sqrt(2*m*hbar*omega)
    adag = (p + i*omega*m*x) / sqrt(2*m*hbar*omega)
    """
    _require_undeformed(params, "ladder_ops")
    c = 1.0 / math.sqrt(2.0 * params.m * params.hbar * params.omega)
    p = momentum_operator(params)
    x = position_operator(params)
    a = c * (p - (1j * params.omega * params.m) * x)
    adag = c * (p + (1j * params.omega * params.m) * x)
    return a, adag


# -- Hamiltonians ---------------------------------------------------------------


def h_ladder(params: ModelParams) -> DiffOp:
    """omega*adag*a + lam*a^2 + delta*adag^2 + omega/2, expanded by
    operator composition."""
    _require_undeformed(params, "h_ladder")
    a, adag = ladder_ops(params)
    return (params.omega * (adag * a)
            + params.lam * (a * a)
            + params.delta * (adag * adag)
            + const_op(params.omega / 2.0, params.beta))


def _quadratic_form(params: ModelParams) -> DiffOp:
    """The quadratic form in x and p equivalent to the ladder form:

    (1/(2 m hbar omega)) * [ (omega+lam+delta) p^2
                             + i m omega (delta-lam-omega) p x
                             + i m omega (delta-lam+omega) x p
                             + m^2 omega^2 (omega-lam-delta) x^2 ] + omega/2
    """
    om, lm, dl = params.omega, params.lam, params.delta
    m, hbar = params.m, params.hbar
    p = momentum_operator(params)
    x = position_operator(params)
    core = ((om + lm + dl) * (p * p)
            + (1j * m * om * (dl - lm - om)) * (p * x)
            + (1j * m * om * (dl - lm + om)) * (x * p)
            + (m * m * om * om * (om - lm - dl)) * (x * x))
    return (1.0 / (2.0 * m * hbar * om)) * core + const_op(om / 2.0, params.beta)


def h_quadratic(params: ModelParams) -> DiffOp:
    """Undeformed quadratic form; equals h_ladder identically."""
    _require_undeformed(params, "h_quadratic")
    return _quadratic_form(params)


def h_deformed(params: ModelParams) -> DiffOp:
    """Quadratic form with the minimal-length position operator substituted.

    For m = hbar = 1 the expansion collapses to

        (omega+lam+delta)/(2 omega) * p^2
        - [(delta-lam) + beta*omega*(omega-lam-delta)] * p*u*D
        - (omega*(omega-lam-delta)/2) * u^2*D^2
        - ((delta-lam+omega)/2) * u + omega/2,     u = 1 + beta*p^2.
    """
    _require_deformed(params, "h_deformed")
    return _quadratic_form(params)


def _require_reduced_regime(params: ModelParams, what: str) -> None:
    if not in_reduced_regime(params):
        raise ValueError(f"{what} requires m = hbar = 1 and lambda = -delta")


def h_reduced(params: ModelParams) -> DiffOp:
    """Reduced Hamiltonian for m = hbar = 1, lam = -delta:

    p^2/2 + omega^2 x^2/2 + i(mu/2){x,p} + i(omega/2)[x,p] + omega/2.

    The commutator term contributes -omega/2 and cancels the additive
    omega/2, which fixes the sign convention x = +i*hbar*u*D.
    """
    _require_reduced_regime(params, "h_reduced")
    om, mu = params.omega, params.mu
    p = momentum_operator(params)
    x = position_operator(params)
    return (0.5 * (p * p)
            + (0.5 * om * om) * (x * x)
            + (0.5j * mu) * anticommutator(x, p)
            + (0.5j * om) * commutator(x, p)
            + const_op(om / 2.0, params.beta))


def h_variant(params: ModelParams) -> DiffOp:
    """Companion reduced form carrying the anticommutator at full strength:

    p^2/2 + omega^2 x^2/2 + i*mu*{x,p}.

    Differs from h_reduced by mu*p*u*D + (mu/2)*u (= mu*p*D + mu/2 at
    beta = 0); the two coincide exactly when mu = 0.
    """
    _require_reduced_regime(params, "h_variant")
    om, mu = params.omega, params.mu
    p = momentum_operator(params)
    x = position_operator(params)
    return (0.5 * (p * p)
            + (0.5 * om * om) * (x * x)
            + (1j * mu) * anticommutator(x, p))


def reduced_variant_difference(params: ModelParams) -> DiffOp:
    """Closed form of h_reduced - h_variant: mu*p*u*D + (mu/2)*u."""
    _require_reduced_regime(params, "reduced_variant_difference")
    mu, beta = params.mu, params.beta
    return DiffOp.from_dict(beta, {
        1: CoeffFn(Poly((0.0, mu)), 1, beta),
        0: CoeffFn(Poly((0.5 * mu,)), 1, beta),
    })


# -- momentum representation of the undeformed Hamiltonian -----------------------


@dataclass(frozen=True)
class MomentumRepCoeffs:
    """Coefficients of H0 = Q*D^2 + R*p*D + S*p^2 + T; T = R/2 always."""

    Q: float
    R: float
    S: float
    T: float


def momentum_rep_coeffs(params: ModelParams) -> MomentumRepCoeffs:
    om, lm, dl = params.omega, params.lam, params.delta
    m, hbar = params.m, params.hbar
    return MomentumRepCoeffs(
        Q=-(m * hbar * om / 2.0) * (om - lm - dl),
        R=lm - dl,
        S=(om + lm + dl) / (2.0 * m * hbar * om),
        T=(lm - dl) / 2.0,
    )


def h0_momentum(params: ModelParams) -> tuple[MomentumRepCoeffs, DiffOp]:
    """Undeformed Hamiltonian assembled directly from its printed
    momentum-space coefficients."""
    _require_undeformed(params, "h0_momentum")
    c = momentum_rep_coeffs(params)
    op = DiffOp.from_dict(0.0, {
        2: coeff_const(c.Q),
        1: coeff_poly((0.0, c.R)),
        0: coeff_poly((c.T, 0.0, c.S)),
    })
    return c, op


def h0_adjoint_expected(params: ModelParams) -> DiffOp:
    """Flat-measure adjoint of H0 in closed form: Q*D^2 - R*p*D + S*p^2 - T."""
    _require_undeformed(params, "h0_adjoint_expected")
    c = momentum_rep_coeffs(params)
    return DiffOp.from_dict(0.0, {
        2: coeff_const(c.Q),
        1: coeff_poly((0.0, -c.R)),
        0: coeff_poly((-c.T, 0.0, c.S)),
    })


# -- metric operators --------------------------------------------------------------


@dataclass(frozen=True)
class MetricSpec:
    """Metric family: (1+beta*p^2)^exponent, e^(exponent*p^2), or identity."""

    family: str  # "power" | "gaussian" | "identity"
    exponent: float
    beta: float

    def __post_init__(self):
        if self.family not in ("power", "gaussian", "identity"):
            raise ValueError(f"unknown metric family {self.family!r}")
        if self.family == "power" and not self.beta > 0:
            raise ValueError("power metric requires beta > 0")
        if self.family == "gaussian" and self.beta != 0.0:
            raise ValueError("gaussian metric requires beta = 0")
        if self.family == "identity" and self.exponent != 0.0:
            raise ValueError("identity metric requires exponent 0")


def metric_exponent(params: ModelParams) -> MetricSpec:
    """Power-law metric exponent e = mu / (m*hbar*omega*(omega-lam-delta)*beta).

    lam = delta gives exponent 0, i.e. the identity metric.
    """
    _require_deformed(params, "metric_exponent")
    e = params.mu / (params.m * params.hbar * params.omega
                     * (params.omega - params.lam - params.delta) * params.beta)
    if e == 0.0:
        return MetricSpec("identity", 0.0, params.beta)
    return MetricSpec("power", e, params.beta)


def gaussian_alpha(params: ModelParams) -> MetricSpec:
    """Gaussian metric coefficient alpha = mu / (m*hbar*omega*(omega-lam-delta)),
    the beta -> 0 limit of the power-law family (exponent(beta)*beta = alpha).

    In the reduced regime alpha = mu / omega^2.
    """
    _require_undeformed(params, "gaussian_alpha")
    alpha = params.mu / (params.m * params.hbar * params.omega
                         * (params.omega - params.lam - params.delta))
    if alpha == 0.0:
        return MetricSpec("identity", 0.0, 0.0)
    return MetricSpec("gaussian", alpha, 0.0)


def oscillator_levels(params: ModelParams, count: int):
    """Closed-form low-lying spectrum (n + 1/2)*sqrt(omega^2 - 4*lam*delta).

    Obtained by hermitizing H0 with the half-power Gaussian metric, which
    removes the p*D term and leaves Q*D^2 + (S - R^2/(4Q))*p^2 with
    |Q|*(S - R^2/(4Q)) = (omega^2 - 4*lam*delta)/4; m and hbar cancel.
    Requires omega^2 > 4*lam*delta and omega > lam + delta so the
    hermitized operator is a bona fide oscillator with ascending ladder.
    """
    disc = params.omega ** 2 - 4.0 * params.lam * params.delta
    if disc <= 0:
        raise ValueError("no real oscillator ladder: omega^2 <= 4*lambda*delta")
    if not params.omega - params.lam - params.delta > 0:
        raise ValueError("no ascending ladder: omega <= lambda + delta")
    root = math.sqrt(disc)
    return [(n + 0.5) * root for n in range(count)]
