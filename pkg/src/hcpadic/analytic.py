"""p-adic exp/log, square roots, polynomials over Z_p and Hensel lifting."""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Rational

from .errors import (
    ConvergenceError,
    DyadicDigitError,
    HenselError,
    NonResidueError,
    OddValuationError,
    PolynomialDivisionError,
    PrecisionError,
    PrimeMismatchError,
)
from .numtheory import legendre, sqrt_mod_prime
from .padic import DEFAULT_PRECISION, PadicNumber, _split


def exp_ball_valuation(p: int) -> int:
    """Least valuation of the exp_p convergence ball |x|_p < p^(-1/(p-1))."""
    return 2 if p == 2 else 1


def exp_p(x: PadicNumber) -> PadicNumber:
    """Sum of x**n / n! to the absolute precision of x.

    Terms are added until Legendre's bound v(n!) <= (n-1)/(p-1) shows that
    every remaining term vanishes modulo ``p**x.absprec``.
    """
    p = x.prime
    target = x.absprec
    if x.is_zero():
        return PadicNumber.from_residue(1, p, max(target, 1))
    v = x.valuation
    if v < exp_ball_valuation(p):
        raise ConvergenceError(f"exp_{p} needs |x|_{p} <= {p}^-{exp_ball_valuation(p)}, got valuation {v}")
    mod = p**target
    u = x.unit
    total = 1
    term_unit = 1   # u**n / (n! without its p-part), mod p**target
    fact_val = 0    # v_p(n!)
    n = 0
    while True:
        n += 1
        if n * v - (n - 1) // (p - 1) >= target:
            break
        e, m = _split(n, p)
        fact_val += e
        term_unit = term_unit * u * pow(m, -1, mod) % mod
        total = (total + term_unit * p ** (n * v - fact_val)) % mod
    return PadicNumber.from_residue(total, p, target)


def log_p(x: PadicNumber) -> PadicNumber:
    """Sum of (-1)**(n+1) (x-1)**n / n, defined on |x - 1|_p < 1."""
    p = x.prime
    y = x - 1
    target = y.absprec
    if y.is_zero():
        return PadicNumber.zero(p, target)
    v = y.valuation
    if v < 1:
        raise ConvergenceError(f"log_{p} needs |x - 1|_{p} < 1, got valuation {v}")
    mod = p**target
    u = y.unit
    total = 0
    power = 1
    n = 0
    while True:
        n += 1
        if n * v - _ilog(n, p) >= target:
            break
        power = power * u % mod
        e, m = _split(n, p)
        term = power * pow(m, -1, mod) * p ** (n * v - e) % mod
        total = (total + term) % mod if n % 2 else (total - term) % mod
    return PadicNumber.from_residue(total, p, target)


def _ilog(n: int, p: int) -> int:
    """floor(log_p n) for n >= 1."""
    k, q = 0, p
    while q <= n:
        q *= p
        k += 1
    return k


def sqrt_p(a: PadicNumber) -> tuple[PadicNumber, PadicNumber]:
    """Both square roots of a, ordered by the smaller unit residue first.

    Raises OddValuationError, NonResidueError or DyadicDigitError when no
    root exists in Q_p.
    """
    p = a.prime
    if a.is_zero():
        raise PrecisionError("square root of a value indistinguishable from zero")
    v = a.valuation
    if v % 2:
        raise OddValuationError(f"valuation {v} is odd")
    u, n = a.unit, a.precision
    if p == 2:
        if n < 3:
            raise PrecisionError("p = 2 needs three unit digits to decide squareness")
        if u % 8 != 1:
            raise DyadicDigitError(f"unit ≡ {u % 8} mod 8, digits a1 = a2 = 0 required")
        r = 1
        for j in range(3, n):
            if (r * r - u) % 2 ** (j + 1):
                r += 2 ** (j - 1)
        prec = max(n - 1, 1)
    else:
        if legendre(u, p) != 1:
            raise NonResidueError(f"leading digit {u % p} is not a quadratic residue mod {p}")
        r = sqrt_mod_prime(u, p)
        r = _newton_sqrt(r, u, p, n)
        prec = n
    mod = p**prec
    r %= mod
    roots = sorted((r, (-r) % mod), key=lambda w: [w % p**j for j in range(1, prec + 1)])
    return tuple(PadicNumber(p, v // 2, w, prec) for w in roots)


def _newton_sqrt(r: int, u: int, p: int, n: int) -> int:
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        mod = p**prec
        r = (r - (r * r - u) * pow(2 * r, -1, mod)) % mod
    return r


# -- polynomials -------------------------------------------------------------


class PadicPolynomial:
    """Polynomial with p-adic integer coefficients known modulo p**precision.

    Coefficients are held as integer residues, constant term first.
    """

    __slots__ = ("prime", "precision", "residues")

    def __init__(self, prime: int, residues, precision: int):
        mod = prime**precision
        res = [int(c) % mod for c in residues] or [0]
        while len(res) > 1 and res[-1] == 0:
            res.pop()
        self.prime = prime
        self.precision = precision
        self.residues = tuple(res)

    @classmethod
    def from_coefficients(cls, coeffs, prime: int, precision: int | None = None) -> PadicPolynomial:
        """Build from ints, Fractions with p-free denominators, or PadicNumbers."""
        prec = precision
        res = []
        for c in coeffs:
            if isinstance(c, PadicNumber):
                if c.prime != prime:
                    raise PrimeMismatchError("coefficient over a different prime")
                if c.valuation < 0:
                    raise ValueError("coefficients must be p-adic integers (norm <= 1)")
                prec = c.absprec if prec is None else min(prec, c.absprec)
                res.append(c)
            elif isinstance(c, (int, Rational)):
                res.append(c)
            else:
                raise TypeError(f"bad coefficient {c!r}")
        if prec is None:
            prec = DEFAULT_PRECISION
        out = []
        for c in res:
            if isinstance(c, PadicNumber):
                out.append(c.residue(prec))
            else:
                q = PadicNumber.coerce(c, prime, prec)
                if q.valuation < 0:
                    raise ValueError("coefficients must be p-adic integers (norm <= 1)")
                out.append(q.residue(prec) if not q.is_zero() else 0)
        return cls(prime, out, prec)

    @classmethod
    def variable(cls, prime: int, precision: int = DEFAULT_PRECISION) -> PadicPolynomial:
        return cls(prime, [0, 1], precision)

    @classmethod
    def constant(cls, c, prime: int, precision: int = DEFAULT_PRECISION) -> PadicPolynomial:
        return cls.from_coefficients([c], prime, precision)

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    @property
    def degree(self) -> int:
        """Index of the last coefficient non-zero at working precision (-1 for 0)."""
        if self.residues == (0,):
            return -1
        return len(self.residues) - 1

    @property
    def coefficients(self) -> list[PadicNumber]:
        return [PadicNumber.from_residue(c, self.prime, self.precision) for c in self.residues]

    def __len__(self):
        return len(self.residues)

    def __repr__(self):
        return f"PadicPolynomial(p={self.prime}, prec={self.precision}, {list(self.residues)})"

    def _lift(self, other) -> PadicPolynomial:
        if isinstance(other, PadicPolynomial):
            if other.prime != self.prime:
                raise PrimeMismatchError("polynomials over different primes")
            return other
        if isinstance(other, (int, Rational, PadicNumber)):
            return PadicPolynomial.from_coefficients([other], self.prime, self.precision)
        return NotImplemented

    def with_precision(self, precision: int) -> PadicPolynomial:
        if precision > self.precision:
            raise PrecisionError("cannot raise polynomial precision")
        return PadicPolynomial(self.prime, self.residues, precision)

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = max(len(self), len(o))
        a = self.residues + (0,) * (n - len(self))
        b = o.residues + (0,) * (n - len(o))
        return PadicPolynomial(self.prime, [x + y for x, y in zip(a, b)], min(self.precision, o.precision))

    __radd__ = __add__

    def __neg__(self):
        return PadicPolynomial(self.prime, [-c for c in self.residues], self.precision)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        prec = min(self.precision, o.precision)
        mod = self.prime**prec
        out = [0] * (len(self) + len(o) - 1)
        for i, a in enumerate(self.residues):
            if a:
                for j, b in enumerate(o.residues):
                    out[i + j] += a * b
        return PadicPolynomial(self.prime, [c % mod for c in out], prec)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = PadicPolynomial(self.prime, [1], self.precision)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self) -> PadicPolynomial:
        return PadicPolynomial(self.prime, [i * c for i, c in enumerate(self.residues)][1:], self.precision)

    def eval_residue(self, r: int, modulus: int | None = None) -> int:
        """F(r) mod p**precision (or `modulus`) for an integer r."""
        mod = self.modulus if modulus is None else modulus
        acc = 0
        for c in reversed(self.residues):
            acc = (acc * r + c) % mod
        return acc

    def __call__(self, x) -> PadicNumber:
        return poly_eval(self, x)

    def taylor_shift(self, a: int, b: int = 1) -> PadicPolynomial:
        """G(w) = F(a + b*w)."""
        mod = self.modulus
        acc = [0]
        for c in reversed(self.residues):
            nxt = [0] * (len(acc) + 1)
            for i, t in enumerate(acc):
                nxt[i] += t * a
                nxt[i + 1] += t * b
            nxt[0] += c
            acc = [t % mod for t in nxt]
        return PadicPolynomial(self.prime, acc, self.precision)

    def content_valuation(self) -> int:
        """min v_p over coefficients (`precision` if all vanish)."""
        best = self.precision
        for c in self.residues:
            if c:
                best = min(best, _split(c, self.prime)[0])
        return best

    def congruent(self, other: PadicPolynomial, m: int | None = None) -> bool:
        """Coefficientwise congruence mod p**m (default: common precision)."""
        o = self._lift(other)
        top = min(self.precision, o.precision)
        m = top if m is None else m
        if m > top:
            raise PrecisionError(f"congruence mod p^{m} beyond polynomial precision p^{top}")
        diff = self - o
        mod = self.prime**m
        return all(c % mod == 0 for c in diff.residues)


def poly_eval(F: PadicPolynomial, x) -> PadicNumber:
    """Horner evaluation at a p-adic (or rational) point."""
    x = PadicNumber.coerce(x, F.prime, F.precision)
    coeffs = F.coefficients
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def poly_derivative(F: PadicPolynomial) -> PadicPolynomial:
    return F.derivative()


def poly_divide_exact(L: PadicPolynomial, M: PadicPolynomial) -> PadicPolynomial:
    """Quotient L / M, checking the remainder vanishes at working precision."""
    if L.prime != M.prime:
        raise PrimeMismatchError("polynomials over different primes")
    p = L.prime
    prec = min(L.precision, M.precision)
    mod = p**prec
    if M.degree < 0:
        raise PolynomialDivisionError("division by the zero polynomial")
    lead = M.residues[-1]
    if lead % p == 0:
        raise PolynomialDivisionError("divisor's leading coefficient is not a unit")
    inv = pow(lead, -1, mod)
    rem = [c % mod for c in L.residues]
    dm = M.degree
    if len(rem) - 1 < dm:
        quot = [0]
    else:
        quot = [0] * (len(rem) - dm)
        for i in range(len(rem) - 1, dm - 1, -1):
            q = rem[i] * inv % mod
            quot[i - dm] = q
            if q:
                for j, m in enumerate(M.residues):
                    rem[i - dm + j] = (rem[i - dm + j] - q * m) % mod
    if any(rem):
        raise PolynomialDivisionError("non-zero remainder in exact division")
    return PadicPolynomial(p, quot, prec)


# -- Hensel lifting ----------------------------------------------------------


def hensel_lift(F: PadicPolynomial, a0: int, precision: int | None = None) -> PadicNumber:
    """The unique root a ≡ a0 (mod p) of F, to absolute precision `precision`.

    Requires F(a0) ≡ 0 and F'(a0) ≢ 0 (mod p); iterates Newton's step with
    doubling precision.
    """
    p = F.prime
    target = F.precision if precision is None else precision
    if target > F.precision:
        raise PrecisionError(f"coefficients known mod p^{F.precision}, root requested mod p^{target}")
    dF = F.derivative()
    f0 = F.eval_residue(a0, p)
    if f0:
        raise HenselError(f"F({a0}) ≡ {f0} (mod {p}), not a root mod p")
    d0 = dF.eval_residue(a0, p)
    if d0 == 0:
        raise HenselError(f"F'({a0}) ≡ 0 (mod {p}); root is not simple")
    a, prec = a0 % p, 1
    while prec < target:
        prec = min(2 * prec, target)
        mod = p**prec
        d = dF.eval_residue(a, mod)
        assert d % p, "derivative lost its unit part during lifting"
        a = (a - F.eval_residue(a, mod) * pow(d, -1, mod)) % mod
    return PadicNumber.from_residue(a, p, target)


@dataclass
class RootIsolation:
    """Roots of a polynomial inside a residue disc.

    `roots` are simple roots lifted as far as the data allow; `unresolved`
    lists discs ``(center, exponent)`` = center + p**exponent Z_p in which
    roots could not be separated before precision ran out.
    """

    roots: list[PadicNumber] = field(default_factory=list)
    unresolved: list[tuple[int, int]] = field(default_factory=list)


def isolate_roots(F: PadicPolynomial, center: int = 0, radius_exponent: int = 0) -> RootIsolation:
    """All roots of F in the disc center + p**radius_exponent Z_p.

    Residue classes where F' vanishes mod p are refined by substituting
    z = a + p*w and dividing out the content, so clustered roots separate
    into simple ones that Newton's step then lifts.
    """
    p = F.prime
    out = RootIsolation()
    if radius_exponent == 0:
        G = F
    else:
        G = F.taylor_shift(center, p**radius_exponent)
        c = G.content_valuation()
        if c >= G.precision:
            out.unresolved.append((center, radius_exponent))
            return out
        G = _divide_content(G, c)
    _isolate(G, center, radius_exponent, out)
    return out


def _divide_content(G: PadicPolynomial, c: int) -> PadicPolynomial:
    p = G.prime
    return PadicPolynomial(p, [r // p**c for r in G.residues], G.precision - c)


def _isolate(G: PadicPolynomial, base: int, e: int, out: RootIsolation) -> None:
    # invariant: roots z of the original polynomial in the disc are base + p**e * w, G(w) = 0
    p = G.prime
    dG = G.derivative()
    for w0 in range(p):
        if G.eval_residue(w0, p):
            continue
        if dG.eval_residue(w0, p):
            w = hensel_lift(G, w0, G.precision).residue(G.precision)
            out.roots.append(PadicNumber.from_residue(base + p**e * w, p, e + G.precision))
            continue
        H = G.taylor_shift(w0, p)
        c = H.content_valuation()
        nxt = base + p**e * w0
        if c >= H.precision:
            out.unresolved.append((nxt, e + 1))
            continue
        _isolate(_divide_content(H, c), nxt, e + 1, out)
