"""Exact scalar arithmetic: rationals, Bernoulli/zeta/harmonic values, the
formal-constant ring Q[L, Z1, Z3, ..., h1, h3, ...], and truncated power series.

The symbol L stands for log 2, Z(2k-1) for the zeta derivative at 1-2k, and
h(2k-1) for a formal odd harmonic coefficient.  All three are treated as
independent commuting indeterminates; zeta(1-2k) itself is the exact rational
-B(2k)/(2k) and never a symbol.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

Rational = Fraction

# Monomial in the formal constants: sorted tuple of (symbol, exponent) pairs.
ConstMonomial = tuple[tuple[str, int], ...]

_SYMBOL_KIND_ORDER = {"L": 0, "Z": 1, "h": 2}


def symbol_sort_key(name: str) -> tuple[int, int]:
    """Deterministic symbol order: L, then Z1 < Z3 < ..., then h1 < h3 < ..."""
    if name == "L":
        return (0, 0)
    kind, index = name[0], name[1:]
    if kind not in _SYMBOL_KIND_ORDER or not index.isdigit():
        raise ValueError(f"unknown formal constant {name!r}")
    return (_SYMBOL_KIND_ORDER[kind], int(index))


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class Scalar:
    """Element of Q[L, Z1, Z3, ..., h1, h3, ...], stored as a sparse monomial map.

    Immutable; all arithmetic returns new values.  No zero coefficients are
    ever stored and monomials are kept sorted, so equal values compare equal.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[ConstMonomial, Fraction] | None = None):
        clean: dict[ConstMonomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = _as_fraction(coeff)
                if coeff:
                    clean[mono] = coeff
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rational(cls, value) -> "Scalar":
        return cls({(): _as_fraction(value)})

    @classmethod
    def symbol(cls, name: str) -> "Scalar":
        symbol_sort_key(name)  # validates
        return cls({((name, 1),): Fraction(1)})

    @staticmethod
    def coerce(value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        return Scalar.from_rational(value)

    # -- inspection --------------------------------------------------------

    def items(self) -> Iterable[tuple[ConstMonomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: _monomial_key(kv[0]))

    def coefficient(self, mono: ConstMonomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def rational_part(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def is_rational(self) -> bool:
        return all(m == () for m in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def symbols(self) -> set[str]:
        return {name for mono in self._terms for name, _ in mono}

    def symbol_degree(self) -> int:
        """Largest total degree in the formal constants (0 for rationals)."""
        return max((sum(e for _, e in m) for m in self._terms), default=0)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        terms = dict(self._terms)
        for mono, coeff in other._terms.items():
            new = terms.get(mono, Fraction(0)) + coeff
            if new:
                terms[mono] = new
            else:
                terms.pop(mono, None)
        out = Scalar.__new__(Scalar)
        out._terms = terms
        return out

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        out = Scalar.__new__(Scalar)
        out._terms = {m: -c for m, c in self._terms.items()}
        return out

    def __sub__(self, other) -> "Scalar":
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other) -> "Scalar":
        return Scalar.coerce(other) + (-self)

    def __mul__(self, other) -> "Scalar":
        if isinstance(other, (int, Fraction)):
            q = _as_fraction(other)
            if not q:
                return Scalar()
            out = Scalar.__new__(Scalar)
            out._terms = {m: c * q for m, c in self._terms.items()}
            return out
        other = Scalar.coerce(other)
        terms: dict[ConstMonomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _merge_monomials(m1, m2)
                new = terms.get(mono, Fraction(0)) + c1 * c2
                if new:
                    terms[mono] = new
                else:
                    terms.pop(mono, None)
        out = Scalar.__new__(Scalar)
        out._terms = terms
        return out

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if not other.is_rational():
                raise ValueError("can only divide by a rational scalar")
            other = other.rational_part()
        q = _as_fraction(other)
        if not q:
            raise ZeroDivisionError("division by zero scalar")
        return self * (Fraction(1) / q)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.from_rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- substitution ------------------------------------------------------

    def substitute(self, bindings: Mapping[str, "Scalar"]) -> "Scalar":
        """Simultaneously replace formal constants by scalar values.

        Each bound symbol must map to a value not mentioning that symbol
        (self-referential bindings are rejected).  Unbound symbols pass
        through unchanged.
        """
        for name, value in bindings.items():
            symbol_sort_key(name)
            value = Scalar.coerce(value)
            if name in value.symbols() and value != Scalar.symbol(name):
                raise ValueError(f"cyclic binding for {name!r}")
        result = Scalar()
        for mono, coeff in self._terms.items():
            term = Scalar.from_rational(coeff)
            for name, exp in mono:
                if name in bindings:
                    factor = Scalar.coerce(bindings[name])
                else:
                    factor = Scalar.symbol(name)
                for _ in range(exp):
                    term = term * factor
            result = result + term
        return result

    # -- rendering and serialization ---------------------------------------

    def render(self, latex: bool = False) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, coeff in self.items():
            factors = [_symbol_display(name, latex) + _exp_display(exp, latex)
                       for name, exp in mono]
            body = (" " if latex else "*").join(factors)
            parts.append(_coeff_display(coeff, bool(body), latex) + body)
        out = parts[0]
        for part in parts[1:]:
            out += " - " + part[1:] if part.startswith("-") else " + " + part
        return out

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Scalar({self.render()})"

    def to_json(self) -> dict:
        """JSON form: rational and linear parts as flat keys, higher monomials
        under "terms"; every number is an exact fraction string."""
        out: dict = {}
        extra = []
        for mono, coeff in self.items():
            if mono == ():
                out["rat"] = str(coeff)
            elif len(mono) == 1 and mono[0][1] == 1:
                out[mono[0][0]] = str(coeff)
            else:
                extra.append({"monomial": {n: e for n, e in mono}, "coeff": str(coeff)})
        if extra:
            out["terms"] = extra
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "Scalar":
        terms: dict[ConstMonomial, Fraction] = {}
        for key, value in data.items():
            if key == "terms":
                for entry in value:
                    mono = tuple(sorted(((n, int(e)) for n, e in entry["monomial"].items()),
                                        key=lambda p: symbol_sort_key(p[0])))
                    terms[mono] = Fraction(entry["coeff"])
            elif key == "rat":
                terms[()] = Fraction(value)
            else:
                terms[((key, 1),)] = Fraction(value)
        return cls(terms)


def _monomial_key(mono: ConstMonomial):
    return (sum(e for _, e in mono), tuple((symbol_sort_key(n), e) for n, e in mono))


def _merge_monomials(m1: ConstMonomial, m2: ConstMonomial) -> ConstMonomial:
    exps: dict[str, int] = dict(m1)
    for name, e in m2:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted(exps.items(), key=lambda p: symbol_sort_key(p[0])))


def _symbol_display(name: str, latex: bool) -> str:
    if name == "L":
        return "\\log 2" if latex else "log2"
    if name.startswith("Z"):
        return ("\\zeta'(-%s)" if latex else "zeta'(-%s)") % name[1:]
    return ("h_{%s}" if latex else "h%s") % name[1:]


def _exp_display(exp: int, latex: bool) -> str:
    if exp == 1:
        return ""
    return ("^{%d}" if latex else "^%d") % exp


def _coeff_display(coeff: Fraction, has_body: bool, latex: bool) -> str:
    if not has_body:
        if latex and coeff.denominator != 1:
            sign = "-" if coeff < 0 else ""
            return f"{sign}\\frac{{{abs(coeff.numerator)}}}{{{coeff.denominator}}}"
        return str(coeff)
    if coeff == 1:
        return ""
    if coeff == -1:
        return "-"
    if latex:
        if coeff.denominator != 1:
            sign = "-" if coeff < 0 else ""
            return f"{sign}\\frac{{{abs(coeff.numerator)}}}{{{coeff.denominator}}}"
        return f"{coeff}"
    return f"{coeff}*"


ZERO = Scalar()
ONE = Scalar.from_rational(1)
LOG2 = Scalar.symbol("L")


def zeta_prime_symbol(k: int) -> Scalar:
    """The formal constant standing for the zeta derivative at -(2k-1)."""
    if k < 1:
        raise ValueError("k must be positive")
    return Scalar.symbol(f"Z{2 * k - 1}")


def harmonic_symbol(k: int) -> Scalar:
    """The formal odd harmonic placeholder h(2k-1)."""
    if k < 1:
        raise ValueError("k must be positive")
    return Scalar.symbol(f"h{2 * k - 1}")


# ---------------------------------------------------------------------------
# Bernoulli numbers, zeta values, harmonic numbers
# ---------------------------------------------------------------------------

_BERNOULLI_CACHE: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n in the convention B_1 = -1/2.

    Computed by the defining recurrence sum_{j<=m} C(m+1, j) B_j = 0.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    while len(_BERNOULLI_CACHE) <= n:
        m = len(_BERNOULLI_CACHE)
        acc = sum(Fraction(comb(m + 1, j)) * _BERNOULLI_CACHE[j] for j in range(m))
        _BERNOULLI_CACHE.append(-acc / (m + 1))
    return _BERNOULLI_CACHE[n]


def zeta_negative_odd(k: int) -> Fraction:
    """Exact value zeta(1-2k) = -B_{2k}/(2k) for k >= 1."""
    if k < 1:
        raise ValueError("k must be positive")
    return -bernoulli(2 * k) / (2 * k)


def harmonic(n: int) -> Fraction:
    """Harmonic number H_n = 1 + 1/2 + ... + 1/n."""
    if n < 1:
        raise ValueError("n must be positive")
    return sum((Fraction(1, j) for j in range(1, n + 1)), Fraction(0))


# ---------------------------------------------------------------------------
# Truncated formal power series over Scalar
# ---------------------------------------------------------------------------


class FormalSeries:
    """One-variable power series with exact Scalar coefficients, truncated at
    a fixed order N (coefficients of z^0 .. z^N are kept and exact)."""

    __slots__ = ("var", "order", "_coeffs")

    def __init__(self, var: str, order: int,
                 coeffs: Mapping[int, Scalar | Fraction | int] | None = None):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        self.var = var
        self.order = order
        clean: dict[int, Scalar] = {}
        if coeffs:
            for k, c in coeffs.items():
                if k < 0:
                    raise ValueError("negative exponent in series")
                if k > order:
                    continue
                s = Scalar.coerce(c)
                if s:
                    clean[k] = s
        self._coeffs = clean

    @classmethod
    def zero(cls, var: str, order: int) -> "FormalSeries":
        return cls(var, order)

    @classmethod
    def one(cls, var: str, order: int) -> "FormalSeries":
        return cls(var, order, {0: 1})

    @classmethod
    def identity(cls, var: str, order: int) -> "FormalSeries":
        return cls(var, order, {1: 1})

    def coefficient(self, k: int) -> Scalar:
        return self._coeffs.get(k, ZERO)

    def coefficients(self) -> dict[int, Scalar]:
        return dict(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_even(self) -> bool:
        return all(k % 2 == 0 for k in self._coeffs)

    def _common_order(self, other: "FormalSeries") -> int:
        if self.var != other.var:
            raise ValueError("series variable mismatch")
        return min(self.order, other.order)

    def __add__(self, other) -> "FormalSeries":
        if isinstance(other, (int, Fraction, Scalar)):
            other = FormalSeries(self.var, self.order, {0: Scalar.coerce(other)})
        n = self._common_order(other)
        coeffs: dict[int, Scalar] = {}
        for k in set(self._coeffs) | set(other._coeffs):
            if k <= n:
                coeffs[k] = self.coefficient(k) + other.coefficient(k)
        return FormalSeries(self.var, n, coeffs)

    __radd__ = __add__

    def __neg__(self) -> "FormalSeries":
        return FormalSeries(self.var, self.order, {k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other) -> "FormalSeries":
        return self + (-other if isinstance(other, FormalSeries)
                       else FormalSeries(self.var, self.order, {0: -Scalar.coerce(other)}))

    def __mul__(self, other) -> "FormalSeries":
        if isinstance(other, (int, Fraction, Scalar)):
            s = Scalar.coerce(other)
            return FormalSeries(self.var, self.order,
                                {k: c * s for k, c in self._coeffs.items()})
        n = self._common_order(other)
        coeffs: dict[int, Scalar] = {}
        for i, ci in self._coeffs.items():
            for j, cj in other._coeffs.items():
                k = i + j
                if k <= n:
                    coeffs[k] = coeffs.get(k, ZERO) + ci * cj
        return FormalSeries(self.var, n, coeffs)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return (self.var == other.var and self.order == other.order
                and self._coeffs == other._coeffs)

    def derivative(self) -> "FormalSeries":
        if self.order == 0:
            return FormalSeries(self.var, 0)
        return FormalSeries(self.var, self.order - 1,
                            {k - 1: c * k for k, c in self._coeffs.items() if k >= 1})

    def inverse(self) -> "FormalSeries":
        """Multiplicative inverse; the constant term must be invertible (rational, nonzero)."""
        c0 = self.coefficient(0)
        if not c0.is_rational() or c0.is_zero():
            raise ValueError("series inverse needs a nonzero rational constant term")
        inv0 = Fraction(1) / c0.rational_part()
        coeffs: dict[int, Scalar] = {0: Scalar.from_rational(inv0)}
        for k in range(1, self.order + 1):
            acc = ZERO
            for j in range(1, k + 1):
                cj = self.coefficient(j)
                if cj:
                    acc = acc + cj * coeffs.get(k - j, ZERO)
            val = -acc * inv0
            if val:
                coeffs[k] = val
        return FormalSeries(self.var, self.order, coeffs)

    def exp(self) -> "FormalSeries":
        """exp of a series with zero constant term."""
        if self.coefficient(0):
            raise ValueError("exp needs constant term 0")
        # e' = f' e  gives  k e_k = sum_{j=1..k} j f_j e_{k-j}
        coeffs: dict[int, Scalar] = {0: ONE}
        for k in range(1, self.order + 1):
            acc = ZERO
            for j in range(1, k + 1):
                fj = self.coefficient(j)
                if fj:
                    acc = acc + fj * j * coeffs.get(k - j, ZERO)
            val = acc / k
            if val:
                coeffs[k] = val
        return FormalSeries(self.var, self.order, coeffs)

    def log(self) -> "FormalSeries":
        """log of a series with constant term 1."""
        if self.coefficient(0) != ONE:
            raise ValueError("log needs constant term 1")
        # l' = f'/f  gives  l_k = f_k - (1/k) sum_{j<k} j l_j f_{k-j}
        coeffs: dict[int, Scalar] = {}
        for k in range(1, self.order + 1):
            acc = ZERO
            for j in range(1, k):
                lj = coeffs.get(j)
                if lj:
                    fkj = self.coefficient(k - j)
                    if fkj:
                        acc = acc + lj * j * fkj
            val = self.coefficient(k) - acc / k
            if val:
                coeffs[k] = val
        return FormalSeries(self.var, self.order, coeffs)

    def compose_even(self, new_var: str | None = None) -> "FormalSeries":
        """Substitute z^2 -> -z in an even series: the result has coefficient
        (-1)^k * [z^(2k)] self at z^k.  Rejects series with odd terms."""
        if not self.is_even():
            raise ValueError("compose_even needs an even series")
        coeffs = {k // 2: c * Fraction((-1) ** (k // 2))
                  for k, c in self._coeffs.items()}
        return FormalSeries(new_var or self.var, self.order // 2, coeffs)

    def render(self, latex: bool = False) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for k in sorted(self._coeffs):
            cs = self._coeffs[k].render(latex)
            if k == 0:
                parts.append(cs)
                continue
            body = self.var if k == 1 else f"{self.var}^{k}"
            if cs == "1":
                parts.append(body)
            elif cs == "-1":
                parts.append("-" + body)
            elif " " in cs:
                parts.append(f"({cs})*{body}")
            else:
                parts.append(f"{cs}*{body}")
        out = parts[0]
        for part in parts[1:]:
            out += " - " + part[1:] if part.startswith("-") else " + " + part
        return out

    def __repr__(self) -> str:
        return f"FormalSeries({self.var!r}, N={self.order}: {self.render()})"


# ---------------------------------------------------------------------------
# Built-in series
# ---------------------------------------------------------------------------


def tanh_series(var: str, order: int) -> FormalSeries:
    """tanh x from Bernoulli numbers: sum 4^k (4^k - 1) B_{2k} x^{2k-1} / (2k)!."""
    coeffs: dict[int, Fraction] = {}
    fact = 1
    for m in range(1, order + 2):
        fact *= m  # running m!
        if m % 2 == 0:
            k = m // 2
            e = 2 * k - 1
            if e <= order:
                coeffs[e] = Fraction(4**k * (4**k - 1)) * bernoulli(2 * k) / fact
    return FormalSeries(var, order, coeffs)


def sech_squared_half(order: int, var: str = "z") -> FormalSeries:
    """The even series 1/cosh^2(z/2), computed by squaring and inverting cosh."""
    cosh: dict[int, Fraction] = {}
    fact = 1
    for m in range(0, order + 1):
        if m > 0:
            fact *= m
        if m % 2 == 0:
            cosh[m] = Fraction(1, fact * 2**m)
    c = FormalSeries(var, order, cosh)
    return (c * c).inverse()


def ch_even_defect_series(order: int, var: str = "x") -> FormalSeries:
    """Odd additive series with x^(2k-1) coefficient
    (Z(2k-1)/zeta(1-2k) + H(2k-1)/2 - L/(1-4^-k)) / (2k-1)!.

    Applying it as an additive class to the Hodge classes measures the defect
    of the even part of the arithmetic Chern character from the rank."""
    coeffs: dict[int, Scalar] = {}
    fact = Fraction(1)
    for m in range(1, order + 1):
        fact *= m
        if m % 2 == 1:
            k = (m + 1) // 2
            bracket = (zeta_prime_symbol(k) / zeta_negative_odd(k)
                       + Scalar.from_rational(harmonic(m) / 2)
                       - LOG2 * Fraction(4**k, 4**k - 1))
            coeffs[m] = bracket / fact
    return FormalSeries(var, order, coeffs)


def rodd_series(order: int, var: str = "x") -> FormalSeries:
    """Odd part R(-1, x) - R(-1, -x) of the equivariant R-series at -1:
    the x^(2k-1)/(2k-1)! coefficient is
    (4^k - 1)(2 Z(2k-1) + zeta(1-2k) H(2k-1)) - 2 L 4^k zeta(1-2k)."""
    coeffs: dict[int, Scalar] = {}
    fact = Fraction(1)
    for m in range(1, order + 1):
        fact *= m
        if m % 2 == 1:
            k = (m + 1) // 2
            z = zeta_negative_odd(k)
            bracket = (zeta_prime_symbol(k) * (2 * (4**k - 1))
                       + Scalar.from_rational((4**k - 1) * z * harmonic(m))
                       - LOG2 * (2 * 4**k * z))
            coeffs[m] = bracket / fact
    return FormalSeries(var, order, coeffs)


def harmonic_symbol_series(order: int, var: str = "x") -> FormalSeries:
    """sum_k h(2k-1) x^(2k-1): applying it as an additive class yields
    sum_k h(2k-1) (2k-1)! ch^[2k-1], the harmonic correction term."""
    coeffs = {m: harmonic_symbol((m + 1) // 2) for m in range(1, order + 1, 2)}
    return FormalSeries(var, order, coeffs)


_BUILTIN_SERIES = {
    "qtilde": sech_squared_half,
    "ch-even-defect": ch_even_defect_series,
    "rodd": rodd_series,
    "harmonic-odd": harmonic_symbol_series,
}


def builtin_series(name: str, order: int) -> FormalSeries:
    """Named series constructors used by the ring builders and the CLI."""
    if order < 1:
        raise ValueError("order must be at least 1")
    try:
        builder = _BUILTIN_SERIES[name]
    except KeyError:
        raise ValueError(f"unknown builtin series {name!r}; "
                         f"choose from {sorted(_BUILTIN_SERIES)}") from None
    return builder(order)
