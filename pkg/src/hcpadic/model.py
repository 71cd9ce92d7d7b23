"""Hard-core model on the Cayley tree of order k over Q_p.

Parameters, boundary fields, existence gates, the two k <-> p tables and
the polynomials F, L, M, U whose roots give boundary laws.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

from .analytic import PadicPolynomial, exp_ball_valuation, exp_p, log_p
from .errors import ConstructionError, InvalidParameterError, PrecisionError
from .numtheory import prime_divisors, primes_up_to
from .padic import DEFAULT_PRECISION, INF, PadicNumber

# Full factorisation of 2^k - 1 is certified only in the deterministic
# Miller-Rabin range.
MAX_FACTOR_K = 64


def in_Ep(x: PadicNumber) -> bool:
    """|x|_p = 1 and |x - 1|_p below the exp_p radius (<= 1/p, or 1/4 at p = 2)."""
    p = x.prime
    need = exp_ball_valuation(p)
    if x.absprec < need:
        raise PrecisionError(f"membership in E_{p} needs x known mod {p}^{need}")
    if x.is_zero() or x.valuation != 0:
        return False
    return (x - 1).valuation >= need


@dataclass(frozen=True, eq=False)
class ModelParams:
    """(p, k, J, lambda) with lambda = exp_p(J)."""

    p: int
    k: int
    coupling: PadicNumber
    fugacity: PadicNumber

    def __post_init__(self):
        if self.k < 1:
            raise InvalidParameterError(f"tree order k must be >= 1, got {self.k}")
        for x in (self.coupling, self.fugacity):
            if x.prime != self.p:
                raise InvalidParameterError("coupling/fugacity over the wrong prime")
        if self.coupling.valuation < exp_ball_valuation(self.p):
            raise InvalidParameterError(f"|J|_{self.p} = {self.coupling.norm()} outside the exp_p ball")
        if not in_Ep(self.fugacity):
            raise InvalidParameterError(f"lambda = {self.fugacity} is not in E_{self.p}")

    @classmethod
    def from_coupling(cls, p: int, k: int, J, precision: int = DEFAULT_PRECISION) -> ModelParams:
        J = PadicNumber.coerce(J, p, precision)
        if J.valuation < exp_ball_valuation(p):
            raise InvalidParameterError(f"|J|_{p} = {J.norm()} outside the exp_p ball")
        return cls(p, k, J, exp_p(J))

    @classmethod
    def from_fugacity(cls, p: int, k: int, lam, precision: int = DEFAULT_PRECISION) -> ModelParams:
        lam = PadicNumber.coerce(lam, p, precision)
        if not in_Ep(lam):
            raise InvalidParameterError(f"lambda = {lam} is not in E_{p}")
        return cls(p, k, log_p(lam), lam)

    @property
    def lam(self) -> PadicNumber:
        return self.fugacity

    @property
    def precision(self) -> int:
        return self.fugacity.absprec

    def g(self, z: PadicNumber) -> PadicNumber:
        """One step of the boundary recursion, ((z + lambda) / z)**k."""
        return ((z + self.fugacity) / z) ** self.k

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "J": self.coupling.to_json(),
            "lambda": self.fugacity.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> ModelParams:
        return cls(data["p"], data["k"], PadicNumber.from_json(data["J"]),
                   PadicNumber.from_json(data["lambda"]))


@dataclass(frozen=True, eq=False)
class BoundaryField:
    """Generalised boundary condition z, one value per tree level.

    kind is "constant", "alternating" (z_even on even levels, z_odd on odd
    ones) or "explicit" (values[m] on level m).
    """

    kind: str
    values: tuple

    def __post_init__(self):
        if self.kind not in ("constant", "alternating", "explicit"):
            raise InvalidParameterError(f"unknown boundary kind {self.kind!r}")
        expected = {"constant": 1, "alternating": 2}.get(self.kind)
        if expected is not None and len(self.values) != expected:
            raise InvalidParameterError(f"{self.kind} boundary takes {expected} value(s)")
        if not self.values:
            raise InvalidParameterError("empty boundary field")
        primes = {z.prime for z in self.values}
        if len(primes) != 1:
            raise InvalidParameterError("boundary values over different primes")
        for z in self.values:
            if not in_Ep(z):
                raise InvalidParameterError(f"boundary value {z} is not in E_p")

    @classmethod
    def constant(cls, z: PadicNumber) -> BoundaryField:
        return cls("constant", (z,))

    @classmethod
    def alternating(cls, z_even: PadicNumber, z_odd: PadicNumber) -> BoundaryField:
        return cls("alternating", (z_even, z_odd))

    @classmethod
    def explicit(cls, per_level: Sequence[PadicNumber]) -> BoundaryField:
        return cls("explicit", tuple(per_level))

    @property
    def prime(self) -> int:
        return self.values[0].prime

    def at_level(self, m: int) -> PadicNumber:
        if self.kind == "constant":
            return self.values[0]
        if self.kind == "alternating":
            return self.values[m % 2]
        if m >= len(self.values):
            raise IndexError(f"explicit boundary has no value for level {m}")
        return self.values[m]

    def scaled(self, factor) -> BoundaryField:
        return BoundaryField(self.kind, tuple(z * factor for z in self.values))

    def to_json(self) -> dict:
        return {"kind": self.kind, "values": [z.to_json() for z in self.values]}

    @classmethod
    def from_json(cls, data: dict) -> BoundaryField:
        return cls(data["kind"], tuple(PadicNumber.from_json(v) for v in data["values"]))


# -- gates and tables --------------------------------------------------------


def _divides(p: int, n: int) -> bool:
    # every p divides 0
    return n % p == 0


def existence_gate(p: int, k: int) -> bool:
    """p | 2^k - 1: necessary for any boundary law in E_p."""
    return _divides(p, 2**k - 1)


def ti_gate(p: int, k: int) -> bool:
    """p ∤ k + 2: with the existence gate, gives a unique constant solution."""
    return not _divides(p, k + 2)


def periodic_gate(p: int, k: int) -> bool:
    """p | 2^k - 1 and p | k - 2 (p | 0 for every p, covering k = 2)."""
    return _divides(p, 2**k - 1) and _divides(p, k - 2)


def _primes_dividing_mersenne(k: int, p_max: int | None) -> list[int]:
    n = 2**k - 1
    if n == 1:
        return []
    if p_max is not None and p_max < 10**6:
        return [q for q in primes_up_to(p_max) if n % q == 0]
    if k > MAX_FACTOR_K:
        raise ValueError(f"full factorisation of 2^{k} - 1 not certified beyond k = {MAX_FACTOR_K}")
    ps = prime_divisors(n)
    return ps if p_max is None else [q for q in ps if q <= p_max]


def existence_table(k_max: int, p_max: int | None = None) -> dict[int, list[int]]:
    """k -> sorted primes p <= p_max with p | 2^k - 1."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    return {k: _primes_dividing_mersenne(k, p_max) for k in range(1, k_max + 1)}


def periodic_table(k_max: int, p_max: int | None = None) -> dict[int, list[int]]:
    """k -> sorted primes p <= p_max passing the period-2 gate."""
    return {k: [p for p in ps if _divides(p, k - 2)] for k, ps in existence_table(k_max, p_max).items()}


# -- polynomials -------------------------------------------------------------


def _z_lam(params: ModelParams, precision: int | None):
    prec = params.precision if precision is None else min(precision, params.precision)
    z = PadicPolynomial.variable(params.p, prec)
    lam = params.fugacity.residue(prec)
    return z, lam, prec


def ti_polynomial(params: ModelParams, precision: int | None = None) -> PadicPolynomial:
    """F(z) = z^(k+1) - (lambda + z)^k."""
    z, lam, _ = _z_lam(params, precision)
    k = params.k
    return z ** (k + 1) - (z + lam) ** k


def m_polynomial(params: ModelParams, precision: int | None = None) -> PadicPolynomial:
    """M(z) = (lambda + z)^k - z^(k+1), the fixed-point numerator of g."""
    return -ti_polynomial(params, precision)


def l_polynomial(params: ModelParams, precision: int | None = None) -> PadicPolynomial:
    """L(z) = (lambda z^k + (lambda + z)^k)^k - z (lambda + z)^(k^2), numerator of g(g(z)) - z."""
    z, lam, _ = _z_lam(params, precision)
    k = params.k
    zl = z + lam
    zlk = zl**k
    return (lam * z**k + zlk) ** k - z * zlk**k


def u_polynomial_closed_form(params: ModelParams, precision: int | None = None) -> PadicPolynomial:
    """U(z) = (1-k) z^(k^2) + k ((lambda+z) z^k)^(k-1)
    + sum_{i=2..k} C(k,i) M^(i-1) z^(k(k-i)) ((lambda+z)^(k-i) - z^(k-i+1))."""
    z, lam, _ = _z_lam(params, precision)
    k = params.k
    zl = z + lam
    M = zl**k - z ** (k + 1)
    U = (1 - k) * z ** (k * k) + k * (zl * z**k) ** (k - 1)
    Mpow = M
    for i in range(2, k + 1):
        U = U + comb(k, i) * Mpow * z ** (k * (k - i)) * (zl ** (k - i) - z ** (k - i + 1))
        Mpow = Mpow * M
    return U


def u_polynomial(params: ModelParams, precision: int | None = None) -> PadicPolynomial:
    """U = L / M, cross-checked against the closed form coefficientwise."""
    from .analytic import poly_divide_exact

    closed = u_polynomial_closed_form(params, precision)
    quotient = poly_divide_exact(l_polynomial(params, precision), m_polynomial(params, precision))
    if not closed.congruent(quotient):
        raise ConstructionError("closed-form U disagrees with L / M")
    return closed


# -- functional equation -----------------------------------------------------


def functional_equation_residual(z: BoundaryField, params: ModelParams):
    """min over levels of v(z_m - ((lambda + z_{m+1}) / z_{m+1})^k); inf when
    every residual vanishes at working precision."""
    if z.kind == "constant":
        pairs = [(z.values[0], z.values[0])]
    elif z.kind == "alternating":
        a, b = z.values
        pairs = [(a, b), (b, a)]
    else:
        pairs = list(zip(z.values, z.values[1:]))
    best = INF
    for here, succ in pairs:
        best = min(best, (here - params.g(succ)).valuation)
    return best


def lambda_digit_conditions(lam: PadicNumber) -> dict:
    """Digits lambda_1, lambda_2 of lambda = 1 + lambda_1 3 + lambda_2 9 + ...
    and the valuation of lambda - 13 (the k = 2, p = 3 period-2 ball)."""
    digits = lam.digits(min(3, lam.absprec), start=0)
    return {
        "lambda_1": digits[1] if len(digits) > 1 else None,
        "lambda_2": digits[2] if len(digits) > 2 else None,
        "valuation_lambda_minus_13": (lam - 13).valuation,
    }


def witness_mersenne(p: int, k: int) -> str:
    return f"(2^{k} - 1) mod {p} = {(2**k - 1) % p}"

