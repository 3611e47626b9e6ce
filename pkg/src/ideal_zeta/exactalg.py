"""Exact sparse Laurent polynomials and rational functions with binomial denominators.

A rational function is stored as ``numerator / prod (1 - m)`` where each ``m`` is a
monomial.  All the generating functions built in this package are sums of products
of geometric terms ``x/(1-x)`` and Gaussian polynomials, so this form is closed under
everything we need and keeps cancellation a matter of exact division by binomials.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterable, Mapping, Union

Coeff = Union[int, Fraction]


def _norm_coeff(c) -> Coeff:
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    if isinstance(c, Rational):
        return _norm_coeff(Fraction(c.numerator, c.denominator))
    raise TypeError(f"not an exact rational: {c!r}")


class Monomial(tuple):
    """A Laurent monomial, stored as a sorted tuple of ``(variable, exponent)`` pairs.

    Zero exponents are never stored, so equality and hashing are those of the tuple.
    """

    __slots__ = ()

    def __new__(cls, items: Iterable = ()):
        if isinstance(items, Mapping):
            items = items.items()
        merged: dict[str, int] = {}
        for v, e in items:
            merged[v] = merged.get(v, 0) + int(e)
        return tuple.__new__(cls, sorted((v, e) for v, e in merged.items() if e))

    @classmethod
    def _raw(cls, items) -> "Monomial":
        return tuple.__new__(cls, items)

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "Monomial":
        return cls._raw(((name, exp),) if exp else ())

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not other:
            return self
        if not self:
            return other
        if len(self) == 1 and len(other) == 1 and self[0][0] == other[0][0]:
            e = self[0][1] + other[0][1]
            return Monomial._raw(((self[0][0], e),) if e else ())
        d = dict(self)
        for v, e in other:
            d[v] = d.get(v, 0) + e
        return Monomial._raw(tuple(sorted((v, e) for v, e in d.items() if e)))

    __rmul__ = None  # tuple repetition must never sneak in

    def __pow__(self, k: int) -> "Monomial":
        if k == 0:
            return ONE
        return Monomial._raw(tuple((v, e * k) for v, e in self))

    def inverse(self) -> "Monomial":
        return self ** -1

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return self * other.inverse()

    def degree(self, var: str) -> int:
        for v, e in self:
            if v == var:
                return e
        return 0

    def without(self, var: str) -> "Monomial":
        return Monomial._raw(tuple(p for p in self if p[0] != var))

    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self)

    def as_dict(self) -> dict[str, int]:
        return dict(self)

    def is_one(self) -> bool:
        return not self

    def sort_key(self):
        # variables compared last-name-first so that t-degree dominates q-degree
        return tuple(reversed(self))

    def __str__(self) -> str:
        if not self:
            return "1"
        return "*".join(v if e == 1 else f"{v}^{e}" for v, e in self)

    def latex(self) -> str:
        if not self:
            return "1"
        return " ".join(_latex_var(v) if e == 1 else f"{_latex_var(v)}^{{{e}}}" for v, e in self)

    def __repr__(self) -> str:
        return f"Monomial({str(self)!r})"


ONE = Monomial._raw(())


def _latex_var(v: str) -> str:
    if "[" in v:
        head, _, rest = v.partition("[")
        return f"{head}_{{{rest.rstrip(']')}}}"
    return v


def mono(spec: str | Mapping[str, int] | Monomial | None = None, **exps: int) -> Monomial:
    """Build a monomial from ``"q^2*t"``, a mapping, or keyword exponents."""
    if isinstance(spec, Monomial):
        return spec * Monomial(exps)
    if isinstance(spec, Mapping):
        return Monomial({**spec, **exps})
    items = dict(exps)
    if spec:
        for part in spec.replace(" ", "").split("*"):
            if part == "1":
                continue
            v, _, e = part.partition("^")
            items[v] = items.get(v, 0) + (int(e) if e else 1)
    return Monomial(items)


class Polynomial:
    """Sparse Laurent polynomial with exact rational coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Coeff] | None = None, *, _trusted: bool = False):
        if _trusted:
            self.terms = terms
        else:
            clean: dict[Monomial, Coeff] = {}
            for m, c in (terms or {}).items():
                if not isinstance(m, Monomial):
                    m = Monomial(m)
                c = _norm_coeff(c)
                if c:
                    c = clean.get(m, 0) + c
                    if c:
                        clean[m] = c
                    else:
                        clean.pop(m, None)
            self.terms = clean
        self._hash = None

    @classmethod
    def const(cls, c: Coeff) -> "Polynomial":
        c = _norm_coeff(c)
        return cls({ONE: c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "Polynomial":
        return cls({Monomial.var(name, exp): 1}, _trusted=True)

    @classmethod
    def monomial(cls, m: Monomial, c: Coeff = 1) -> "Polynomial":
        c = _norm_coeff(c)
        return cls({m: c} if c else {}, _trusted=True)

    @staticmethod
    def coerce(x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, Monomial):
            return Polynomial.monomial(x)
        return Polynomial.const(x)

    # -- basic queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def constant_value(self) -> Coeff | None:
        """The value if this polynomial is a constant, else None."""
        if not self.terms:
            return 0
        if len(self.terms) == 1 and ONE in self.terms:
            return self.terms[ONE]
        return None

    def degree(self, var: str) -> int:
        return max(m.degree(var) for m in self.terms)

    def min_degree(self, var: str) -> int:
        return min(m.degree(var) for m in self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Fraction)):
                other = Polynomial.const(other)
            else:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- arithmetic ------------------------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        other = Polynomial.coerce(other)
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for m, c in b.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                del out[m]
        return Polynomial(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other) -> "Polynomial":
        return self + (-Polynomial.coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return Polynomial.coerce(other) - self

    def scale(self, c: Coeff) -> "Polynomial":
        c = _norm_coeff(c)
        if not c:
            return ZERO
        if c == 1:
            return self
        return Polynomial({m: x * c for m, x in self.terms.items()}, _trusted=True)

    def shift(self, m: Monomial, c: Coeff = 1) -> "Polynomial":
        """Multiply by the term ``c*m``."""
        if not c:
            return ZERO
        if not m:
            return self.scale(c)
        return Polynomial({k * m: x * c for k, x in self.terms.items()}, _trusted=True)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Monomial):
            return self.shift(other)
        if not isinstance(other, Polynomial):
            return self.scale(other)
        if len(self.terms) < len(other.terms):
            small, big = self.terms, other.terms
        else:
            small, big = other.terms, self.terms
        if len(small) == 1:
            (m, c), = small.items()
            return Polynomial.shift(Polynomial(big, _trusted=True), m, c)
        out: dict[Monomial, Coeff] = {}
        get = out.get
        for m1, c1 in small.items():
            for m2, c2 in big.items():
                k = m1 * m2
                out[k] = get(k, 0) + c1 * c2
        return Polynomial({m: c for m, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def times_binomial(self, m: Monomial, power: int = 1) -> "Polynomial":
        """Multiply by ``(1 - m)**power``."""
        p = self
        for _ in range(power):
            p = p - p.shift(m)
        return p

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            if len(self.terms) == 1:
                (m, c), = self.terms.items()
                return Polynomial.monomial(m ** k, Fraction(1) / Fraction(c) ** -k)
            raise ValueError("negative power of a non-monomial polynomial")
        result, base = ONE_POLY, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divide_binomial(self, m: Monomial) -> "Polynomial | None":
        """Exact quotient by ``1 - m``, or None when ``1 - m`` does not divide.

        Terms fall into cosets of the exponent lattice modulo the exponent of ``m``;
        on each coset the polynomial is a Laurent polynomial in ``z = m`` and
        divisibility by ``1 - z`` is the vanishing of its coefficient sum.
        """
        if not m:
            raise ZeroDivisionError("division by 1 - 1")
        if not self.terms:
            return self
        pv, pe = m[0]
        inv = m.inverse()
        classes: dict[Monomial, dict[int, Coeff]] = {}
        for k, c in self.terms.items():
            j = k.degree(pv) // pe
            rep = k * (inv ** j) if j else k
            cl = classes.get(rep)
            if cl is None:
                classes[rep] = {j: c}
            else:
                cl[j] = c
        for cl in classes.values():
            if sum(cl.values()):
                return None
        out: dict[Monomial, Coeff] = {}
        for rep, cl in classes.items():
            run = 0
            ks = sorted(cl)
            for j in range(ks[0], ks[-1]):
                run += cl.get(j, 0)
                if run:
                    out[rep * (m ** j) if j else rep] = run
        return Polynomial(out, _trusted=True)

    # -- substitution ------------------------------------------------------------------

    def subs(self, assignment: Mapping[str, object]) -> "Polynomial":
        """Substitute variables by numbers, monomials or polynomials."""
        if not assignment:
            return self
        cache: dict[tuple[str, int], Polynomial] = {}

        def image(v: str, e: int) -> Polynomial:
            key = (v, e)
            if key not in cache:
                val = assignment[v]
                if isinstance(val, Monomial):
                    cache[key] = Polynomial.monomial(val ** e)
                elif isinstance(val, Polynomial):
                    cache[key] = val ** e
                else:
                    val = Fraction(val)
                    if val == 0 and e < 0:
                        raise ZeroDivisionError(f"{v} -> 0 with negative exponent")
                    cache[key] = Polynomial.const(val ** e)
            return cache[key]

        acc: dict[Monomial, Coeff] = {}
        pieces: list[Polynomial] = []
        for k, c in self.terms.items():
            keep = []
            factor: Polynomial | None = None
            for v, e in k:
                if v in assignment:
                    img = image(v, e)
                    factor = img if factor is None else factor * img
                else:
                    keep.append((v, e))
            rest = Monomial._raw(tuple(keep))
            if factor is None:
                acc[rest] = acc.get(rest, 0) + c
            elif len(factor.terms) == 1:
                (fm, fc), = factor.terms.items()
                km = rest * fm
                acc[km] = acc.get(km, 0) + c * fc
            else:
                pieces.append(factor.shift(rest, c))
        out = Polynomial(acc)
        for p in pieces:
            out = out + p
        return out

    def invert(self, variables: Iterable[str]) -> "Polynomial":
        vs = set(variables)
        return Polynomial(
            {Monomial._raw(tuple((v, -e) if v in vs else (v, e) for v, e in k)): c for k, c in self.terms.items()},
            _trusted=True,
        )

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        total = Fraction(0)
        for k, c in self.terms.items():
            term = Fraction(c)
            for v, e in k:
                term *= Fraction(values[v]) ** e
            total += term
        return total

    def by_degree(self, var: str) -> dict[int, "Polynomial"]:
        """Split into ``{d: coefficient of var^d}``."""
        parts: dict[int, dict[Monomial, Coeff]] = {}
        for k, c in self.terms.items():
            d = k.degree(var)
            parts.setdefault(d, {})[k.without(var) if d else k] = c
        return {d: Polynomial(t, _trusted=True) for d, t in parts.items()}

    def coefficients(self, var: str) -> list[Coeff]:
        """Dense coefficient list of a univariate polynomial in ``var``."""
        if not self.terms:
            return []
        if self.variables() - {var}:
            raise ValueError("polynomial is not univariate")
        lo = self.min_degree(var)
        if lo < 0:
            raise ValueError("negative exponents present")
        out = [0] * (self.degree(var) + 1)
        for k, c in self.terms.items():
            out[k.degree(var)] = c
        return out

    # -- output --------------------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Coeff]]:
        return sorted(self.terms.items(), key=lambda kc: kc[0].sort_key())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not m:
                body = str(a)
            elif a == 1:
                body = str(m)
            else:
                body = f"{a}*{m}"
            out.append(("-" if sign == "-" else "") + body if i == 0 else sign + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"

    def latex(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            a = abs(c)
            if isinstance(a, Fraction):
                coef = f"\\frac{{{a.numerator}}}{{{a.denominator}}}"
            else:
                coef = str(a)
            if not m:
                body = coef
            elif a == 1:
                body = m.latex()
            else:
                body = f"{coef} {m.latex()}"
            if i == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def to_json_obj(self) -> dict:
        terms = []
        for m, c in self.sorted_terms():
            c = Fraction(c)
            terms.append({"exps": dict(m), "num": str(c.numerator), "den": str(c.denominator)})
        return {"terms": terms}

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "Polynomial":
        terms = {}
        for t in obj["terms"]:
            terms[Monomial(t["exps"])] = Fraction(int(t["num"]), int(t["den"]))
        return cls(terms)


ZERO = Polynomial({}, _trusted=True)
ONE_POLY = Polynomial({ONE: 1}, _trusted=True)


def poly_arith(a: Polynomial, b: Polynomial | None, op: str) -> Polynomial:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------------------
# Rational functions


def _canonical(m: Monomial) -> bool:
    # orientation rule for 1 - m: the alphabetically last variable has positive exponent
    return m[-1][1] > 0


@dataclass(frozen=True)
class BinomialFactor:
    """The factor ``1 - monomial``."""

    monomial: Monomial

    def __post_init__(self):
        if not self.monomial:
            raise ValueError("1 - 1 is not a valid factor")

    def __str__(self) -> str:
        return f"(1-{self.monomial})"


class RationalFunction:
    """``numerator / prod_m (1 - m)^k`` with canonically oriented factors."""

    __slots__ = ("num", "den")

    def __init__(self, num, den: Mapping[Monomial, int] | Iterable = (), *, reduce: bool = True,
                 _trusted: bool = False):
        num = Polynomial.coerce(num)
        if _trusted:
            self.num, self.den = num, den
            return
        if isinstance(den, Mapping):
            items = den.items()
        else:
            items = [(d.monomial if isinstance(d, BinomialFactor) else d, 1) for d in den]
        merged: dict[Monomial, int] = {}
        for m, k in items:
            if not isinstance(m, Monomial):
                m = Monomial(m)
            if not m:
                raise ZeroDivisionError("denominator factor 1 - 1")
            if k < 0:
                raise ValueError("negative factor multiplicity")
            if not k:
                continue
            if not _canonical(m):
                # 1/(1 - m) = -m^-1 / (1 - m^-1)
                num = num.shift(m.inverse() ** k, (-1) ** k)
                m = m.inverse()
            merged[m] = merged.get(m, 0) + k
        if num.is_zero():
            merged = {}
        self.num = num
        self.den = merged
        if reduce and merged:
            self._cancel()

    def _cancel(self) -> None:
        num, den = self.num, dict(self.den)
        for m in sorted(den, key=Monomial.sort_key):
            while den.get(m):
                q = num.divide_binomial(m)
                if q is None:
                    break
                num = q
                den[m] -= 1
                if not den[m]:
                    del den[m]
        self.num, self.den = num, den

    @classmethod
    def const(cls, c) -> "RationalFunction":
        return cls(Polynomial.coerce(c), {}, _trusted=True)

    @classmethod
    def geometric(cls, m: Monomial) -> "RationalFunction":
        """``1/(1 - m)``."""
        return cls(ONE_POLY, {m: 1})

    @staticmethod
    def coerce(x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        return RationalFunction(Polynomial.coerce(x), {}, _trusted=True)

    # -- queries -------------------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def factors(self) -> list[tuple[Monomial, int]]:
        return sorted(self.den.items(), key=lambda mk: mk[0].sort_key())

    def denominator_polynomial(self) -> Polynomial:
        d = ONE_POLY
        for m, k in self.den.items():
            d = d.times_binomial(m, k)
        return d

    def variables(self) -> set[str]:
        vs = self.num.variables()
        for m in self.den:
            vs.update(m.variables())
        return vs

    # -- arithmetic ---------------------------------------------------------------------

    def __add__(self, other) -> "RationalFunction":
        other = RationalFunction.coerce(other)
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, dict(self.den))
        lcm = dict(self.den)
        for m, k in other.den.items():
            if lcm.get(m, 0) < k:
                lcm[m] = k
        a, b = self.num, other.num
        for m, k in lcm.items():
            ka, kb = k - self.den.get(m, 0), k - other.den.get(m, 0)
            if ka:
                a = a.times_binomial(m, ka)
            if kb:
                b = b.times_binomial(m, kb)
        return RationalFunction(a + b, lcm)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, _trusted=True)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other) -> "RationalFunction":
        return RationalFunction.coerce(other) - self

    def __mul__(self, other) -> "RationalFunction":
        if not isinstance(other, RationalFunction):
            if isinstance(other, (Polynomial, Monomial)):
                other = RationalFunction.coerce(other)
            else:
                return RationalFunction(self.num.scale(other), self.den, _trusted=True) if other else ZERO_RF
        if self.num.is_zero() or other.num.is_zero():
            return ZERO_RF
        den = dict(self.den)
        for m, k in other.den.items():
            den[m] = den.get(m, 0) + k
        return RationalFunction(self.num * other.num, den)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RationalFunction":
        if k < 0:
            raise ValueError("negative powers are not representable in general")
        out = ONE_RF
        for _ in range(k):
            out = out * self
        return out

    def shift(self, m: Monomial, c: Coeff = 1) -> "RationalFunction":
        return RationalFunction(self.num.shift(m, c), self.den, _trusted=True)

    # -- equality -----------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            try:
                other = RationalFunction.coerce(other)
            except TypeError:
                return NotImplemented
        return rf_equal(self, other)

    __hash__ = None

    # -- output -------------------------------------------------------------------------

    def _den_str(self, latex: bool = False) -> str:
        parts = []
        for m, k in self.factors():
            body = f"(1-{m.latex() if latex else m})"
            if k > 1:
                body += f"^{{{k}}}" if latex else f"^{k}"
            parts.append(body)
        return "".join(parts)

    def __str__(self) -> str:
        num = str(self.num)
        if not self.den:
            return num
        if len(self.num.terms) > 1:
            num = f"({num})"
        den = self._den_str()
        if len(self.den) > 1 or any(k > 1 for k in self.den.values()):
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RationalFunction({str(self)!r})"

    def latex(self) -> str:
        if not self.den:
            return self.num.latex()
        return f"\\frac{{{self.num.latex()}}}{{{self._den_str(latex=True)}}}"

    def to_json_obj(self) -> dict:
        return {
            "numerator": self.num.to_json_obj(),
            "denominator": [{"exps": dict(m), "mult": k} for m, k in self.factors()],
        }

    def to_json(self) -> str:
        return dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "RationalFunction":
        num = Polynomial.from_json_obj(obj["numerator"])
        den = {Monomial(d["exps"]): int(d["mult"]) for d in obj["denominator"]}
        return cls(num, den, reduce=False)

    @classmethod
    def from_json(cls, text: str) -> "RationalFunction":
        return cls.from_json_obj(json.loads(text))


ZERO_RF = RationalFunction(ZERO, {}, _trusted=True)
ONE_RF = RationalFunction(ONE_POLY, {}, _trusted=True)


def dumps(obj) -> str:
    """Canonical JSON text used for every serialized object."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def gp(x: Monomial) -> RationalFunction:
    """The geometric progression ``x/(1 - x)``."""
    if not x:
        raise ZeroDivisionError("gp(1) is a pole")
    return RationalFunction(Polynomial.monomial(x), {x: 1})


def rf_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def rf_sum(terms: Iterable[RationalFunction]) -> RationalFunction:
    """Sum many rational functions, grouping equal denominators and merging pairwise."""
    buckets: dict[tuple, list] = {}
    for t in terms:
        if t.num.is_zero():
            continue
        key = tuple(sorted(t.den.items()))
        b = buckets.get(key)
        if b is None:
            buckets[key] = [t.num, t.den]
        else:
            b[0] = b[0] + t.num
    parts = [RationalFunction(n, d) for n, d in buckets.values() if not n.is_zero()]
    if not parts:
        return ZERO_RF
    parts.sort(key=lambda r: sum(r.den.values()))
    while len(parts) > 1:
        merged = [parts[i] + parts[i + 1] for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            merged.append(parts[-1])
        parts = merged
    return parts[0]


def rf_product(factors: Iterable[RationalFunction]) -> RationalFunction:
    out = ONE_RF
    for f in factors:
        out = out * f
    return out


def invert_vars(a: RationalFunction, variables: Iterable[str]) -> RationalFunction:
    """Substitute ``v -> 1/v`` for each named variable and re-orient the factors."""
    vs = set(variables)
    num = a.num.invert(vs)
    den = {}
    for m, k in a.den.items():
        m2 = Monomial._raw(tuple((v, -e) if v in vs else (v, e) for v, e in m))
        den[m2] = den.get(m2, 0) + k
    return RationalFunction(num, den, reduce=False)


def simplify(a: RationalFunction) -> RationalFunction:
    """Replace factors ``1 - m^e`` by ``1 - m`` where the numerator allows it.

    ``(1 - m^e) = (1 - m)(1 + m + ... + m^{e-1})``; when the numerator is divisible by
    the second factor the representation shrinks.  The value is unchanged.
    """
    num, den = a.num, dict(a.den)
    changed = True
    while changed:
        changed = False
        for M in sorted(den, key=Monomial.sort_key):
            g = 0
            for _, e in M:
                g = gcd(g, e)
            for e in sorted((k for k in range(2, g + 1) if g % k == 0), reverse=True):
                m = Monomial._raw(tuple((v, x // e) for v, x in M))
                trial = num.times_binomial(m).divide_binomial(M)
                if trial is None:
                    continue
                num = trial
                den[M] -= 1
                if not den[M]:
                    del den[M]
                den[m] = den.get(m, 0) + 1
                changed = True
                break
            if changed:
                break
    return RationalFunction(num, den)


def rf_equal(a: RationalFunction, b: RationalFunction) -> bool:
    """Decide equality by cross-multiplying over the non-shared denominator factors."""
    a, b = RationalFunction.coerce(a), RationalFunction.coerce(b)
    left, right = a.num, b.num
    for m in set(a.den) | set(b.den):
        ka, kb = a.den.get(m, 0), b.den.get(m, 0)
        if kb > ka:
            left = left.times_binomial(m, kb - ka)
        elif ka > kb:
            right = right.times_binomial(m, ka - kb)
    return left == right


def specialize(a, assignment: Mapping[str, object]):
    """Substitute variables by integers, rationals or monomials.

    Works on Polynomial, RationalFunction and TruncatedSeries.  A denominator factor
    that becomes a number is folded into the numerator (a zero value is a pole); a
    factor whose image is a monomial with a coefficient other than 1 is rejected,
    since it has left the binomial-denominator form.
    """
    if isinstance(a, Polynomial):
        return a.subs(assignment)
    if isinstance(a, TruncatedSeries):
        if a.var in assignment:
            raise ValueError("cannot specialize the series variable")
        return TruncatedSeries(a.var, a.degree, tuple(c.subs(assignment) for c in a.coeffs))
    if not isinstance(a, RationalFunction):
        raise TypeError(type(a))
    num = a.num.subs(assignment)
    scalar = Fraction(1)
    den: dict[Monomial, int] = {}
    for m, k in a.den.items():
        img = Polynomial.monomial(m).subs(assignment)
        (im, ic), = img.terms.items()
        if not im:
            val = 1 - Fraction(ic)
            if val == 0:
                raise ZeroDivisionError(f"pole: factor (1-{m}) vanishes")
            scalar /= val ** k
        elif ic == 1:
            den[im] = den.get(im, 0) + k
        else:
            raise ValueError(f"factor (1-{m}) specializes outside binomial form")
    return RationalFunction(num.scale(scalar), den)


def evaluate(a: RationalFunction | Polynomial, values: Mapping[str, object]) -> Fraction:
    """Exact numeric value; every variable must be assigned."""
    if isinstance(a, Polynomial):
        return a.evaluate(values)
    val = a.num.evaluate(values)
    for m, k in a.den.items():
        d = 1 - Polynomial.monomial(m).evaluate(values)
        if d == 0:
            raise ZeroDivisionError(f"pole at factor (1-{m})")
        val /= d ** k
    return val


# ---------------------------------------------------------------------------------------
# Truncated power series


@dataclass(frozen=True)
class TruncatedSeries:
    var: str
    degree: int
    coeffs: tuple[Polynomial, ...]

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if other.var != self.var:
            raise ValueError("series in different variables")
        D = min(self.degree, other.degree)
        out = []
        for k in range(D + 1):
            acc = ZERO
            for i in range(k + 1):
                if self.coeffs[i] and other.coeffs[k - i]:
                    acc = acc + self.coeffs[i] * other.coeffs[k - i]
            out.append(acc)
        return TruncatedSeries(self.var, D, tuple(out))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        D = min(self.degree, other.degree)
        return TruncatedSeries(self.var, D, tuple(self.coeffs[k] + other.coeffs[k] for k in range(D + 1)))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        D = min(self.degree, other.degree)
        return TruncatedSeries(self.var, D, tuple(self.coeffs[k] - other.coeffs[k] for k in range(D + 1)))

    def truncate(self, D: int) -> "TruncatedSeries":
        return TruncatedSeries(self.var, D, self.coeffs[: D + 1])

    def values(self, assignment: Mapping[str, object]) -> list:
        """Coefficients evaluated numerically (all remaining variables assigned)."""
        return [c.evaluate(assignment) for c in self.coeffs]

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.coeffs) + "]"


def series_expand(a: RationalFunction, var: str, D: int) -> TruncatedSeries:
    """Expand in powers of ``var`` up to degree ``D`` inclusive."""
    a = RationalFunction.coerce(a)
    num = a.num
    factors = []
    for m, k in a.den.items():
        b = m.degree(var)
        if b < 0:
            num = num.shift(m.inverse() ** k, (-1) ** k)
            m, b = m.inverse(), -b
        if b == 0:
            raise ValueError(f"factor (1-{m}) is not expandable in {var}")
        factors.append((m.without(var), b, k))
    parts = num.by_degree(var)
    if parts and min(parts) < 0:
        raise ValueError(f"numerator has negative powers of {var}")
    s = [parts.get(d, ZERO) for d in range(D + 1)]
    for c, b, k in factors:
        for _ in range(k):
            for d in range(b, D + 1):
                if s[d - b]:
                    s[d] = s[d] + s[d - b].shift(c)
    return TruncatedSeries(var, D, tuple(s))
