"""Laurent polynomials in one variable with integer coefficients.

Only the handful of operations needed by the bracket, the Jones polynomial and
graded Euler characteristics are provided.  Coefficients are Python integers,
so there is no overflow.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from .errors import NonDivisible, NonPeriodicTail


class LaurentPoly:
    """Finite sum ``sum(coef * q**exp)`` stored as ``{exp: coef}``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] | None = None):
        data: dict[int, int] = {}
        if coeffs is not None:
            items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
            for e, c in items:
                e = int(e)
                c = data.get(e, 0) + int(c)
                if c:
                    data[e] = c
                else:
                    data.pop(e, None)
        self._c = data

    # -- constructors ---------------------------------------------------------

    @classmethod
    def monomial(cls, exp: int, coef: int = 1) -> LaurentPoly:
        return cls({exp: coef})

    @classmethod
    def one(cls) -> LaurentPoly:
        return cls({0: 1})

    @classmethod
    def loop(cls) -> LaurentPoly:
        """The value ``q + q^-1`` of a single circle."""
        return cls({1: 1, -1: 1})

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> LaurentPoly:
        return cls({int(k): int(v) for k, v in data.items()})

    # -- inspection -----------------------------------------------------------

    def coeff(self, exp: int) -> int:
        return self._c.get(exp, 0)

    def items(self):
        return sorted(self._c.items())

    def exponents(self) -> list[int]:
        return sorted(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def min_exp(self) -> int:
        return min(self._c)

    def max_exp(self) -> int:
        return max(self._c)

    def to_json(self) -> dict[str, int]:
        return {str(e): c for e, c in self.items()}

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        out = dict(self._c)
        for e, c in other._c.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({e: -c for e, c in self._c.items()})

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other: LaurentPoly | int) -> LaurentPoly:
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self._c.items()})
        out: dict[int, int] = {}
        for e1, c1 in self._c.items():
            for e2, c2 in other._c.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = LaurentPoly.one()
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by ``q**k``."""
        return LaurentPoly({e + k: c for e, c in self._c.items()})

    def substitute_inverse(self) -> LaurentPoly:
        """Return ``p(q^-1)``."""
        return LaurentPoly({-e: c for e, c in self._c.items()})

    def sign_twist(self) -> LaurentPoly:
        """Return ``p(-q)``."""
        return LaurentPoly({e: c if e % 2 == 0 else -c for e, c in self._c.items()})

    def divide_exact(self, divisor: LaurentPoly) -> LaurentPoly:
        """Exact polynomial division; raises :class:`NonDivisible` on a remainder."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = dict(self._c)
        dmax, dmin = divisor.max_exp(), divisor.min_exp()
        lead = divisor.coeff(dmax)
        floor = (self.min_exp() - dmin) if rem else 0
        quot: dict[int, int] = {}
        while rem and max(rem) - dmax >= floor:
            top = max(rem)
            c = rem[top]
            if c % lead:
                raise NonDivisible(f"{self} is not divisible by {divisor}")
            k, s = c // lead, top - dmax
            quot[s] = k
            for e, dc in divisor._c.items():
                v = rem.get(e + s, 0) - k * dc
                if v:
                    rem[e + s] = v
                else:
                    rem.pop(e + s, None)
        if rem:
            raise NonDivisible(f"{self} is not divisible by {divisor}")
        return LaurentPoly(quot)

    # -- comparisons and display ---------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(tuple(self.items()))

    def __repr__(self) -> str:
        return f"LaurentPoly({dict(self.items())})"

    def format(self, var: str = "q") -> str:
        if not self._c:
            return "0"
        parts = []
        for e, c in sorted(self._c.items(), reverse=True):
            if e == 0:
                mono = f"{abs(c)}"
            else:
                power = var if e == 1 else f"{var}^{e}"
                mono = power if abs(c) == 1 else f"{abs(c)}*{power}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, mono))
        head_sign, head = parts[0]
        text = ("-" if head_sign == "-" else "") + head
        for sign, mono in parts[1:]:
            text += f" {sign} {mono}"
        return text

    __str__ = format


class LaurentSeriesRep:
    """A power series of the form ``a + b / (1 - q^2)``.

    The representation is made canonical by keeping at most one monomial of
    ``b`` per parity class of exponents, placed at the smallest exponent of that
    parity occurring in the combined numerator ``a (1 - q^2) + b``.  Two
    representations are equal exactly when their numerators agree.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: LaurentPoly, b: LaurentPoly):
        numerator = a * LaurentPoly({0: 1, 2: -1}) + b
        self.a, self.b = _canonical(numerator)

    @classmethod
    def from_numerator(cls, numerator: LaurentPoly) -> LaurentSeriesRep:
        return cls(LaurentPoly(), numerator)

    @property
    def numerator(self) -> LaurentPoly:
        return self.a * LaurentPoly({0: 1, 2: -1}) + self.b

    def coefficient(self, exp: int) -> int:
        """Coefficient of ``q**exp`` in the expanded series."""
        total = self.a.coeff(exp)
        for e, c in self.b.items():
            if e <= exp and (exp - e) % 2 == 0:
                total += c
        return total

    def shift(self, k: int) -> LaurentSeriesRep:
        return LaurentSeriesRep(self.a.shift(k), self.b.shift(k))

    def __add__(self, other: LaurentSeriesRep) -> LaurentSeriesRep:
        return LaurentSeriesRep.from_numerator(self.numerator + other.numerator)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentSeriesRep):
            return NotImplemented
        return self.numerator == other.numerator

    def __hash__(self) -> int:
        return hash(self.numerator)

    def __repr__(self) -> str:
        return f"LaurentSeriesRep(a={self.a}, b={self.b})"

    def to_json(self) -> dict[str, dict[str, int]]:
        return {"a": self.a.to_json(), "b": self.b.to_json()}

    @classmethod
    def from_ranks(
        cls,
        ranks: Mapping[int, int],
        window: tuple[int, int],
        tail: tuple[int, int] | None = None,
    ) -> LaurentSeriesRep:
        """Build the series of a graded family known on ``window``.

        ``tail`` gives the eventual ranks in even and odd degrees.  Without it
        the last two degrees of the window are taken as the stable values,
        which requires the final four degrees to be 2-periodic.
        """
        lo, hi = window
        if hi - lo < 1:
            raise NonPeriodicTail("window too short to read a periodic tail")
        if tail is None:
            if hi - lo < 3:
                raise NonPeriodicTail("need four degrees to certify periodicity")
            last = [ranks.get(j, 0) for j in range(hi - 3, hi + 1)]
            if last[0] != last[2] or last[1] != last[3]:
                raise NonPeriodicTail(f"ranks {last} near the top of the window are not 2-periodic")
            tail_by_parity = {(hi - 1) % 2: last[2], hi % 2: last[3]}
        else:
            tail_by_parity = {0: tail[0], 1: tail[1]}
        # numerator = (1 - q^2) * sum_{j} r_j q^j, truncated consistently at the tail
        series = {j: ranks.get(j, 0) for j in range(lo, hi + 1)}
        numerator: dict[int, int] = {}
        for j, r in series.items():
            if r:
                numerator[j] = numerator.get(j, 0) + r
                if j + 2 <= hi:
                    numerator[j + 2] = numerator.get(j + 2, 0) - r
        # the last two degrees continue forever with the tail values
        for j in (hi - 1, hi):
            if j < lo:
                continue
            r = series[j]
            t = tail_by_parity[j % 2]
            if r != t:
                raise NonPeriodicTail(f"rank {r} at degree {j} does not match tail value {t}")
        return cls.from_numerator(LaurentPoly(numerator))


def _canonical(numerator: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    b: dict[int, int] = {}
    for parity in (0, 1):
        exps = [e for e in numerator.exponents() if e % 2 == parity]
        if not exps:
            continue
        total = sum(numerator.coeff(e) for e in exps)
        if total:
            b[min(exps)] = total
    bpoly = LaurentPoly(b)
    rest = numerator - bpoly
    # rest is divisible by (1 - q^2) because each parity class sums to zero
    a = rest.divide_exact(LaurentPoly({0: 1, 2: -1})) if not rest.is_zero() else LaurentPoly()
    return a, bpoly
