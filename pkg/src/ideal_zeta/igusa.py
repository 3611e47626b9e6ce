"""Classical and generalized (weak order) Igusa functions.

``I_n(Y; X) = 1/(1-X_n) sum_{I in [n-1]} binom(n, I)_Y prod_{i in I} X_i/(1-X_i)`` and
its generalization ``I^wo_nbar(Y; X)``, a sum over flags of nonempty subwords of
``a_1^{n_1} ... a_m^{n_m}`` weighted by products of Gaussian multinomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Mapping, Sequence

from .combinat import flag_multinom_sets, flags, multinom_coeffs, subwords
from .exactalg import (
    ONE_POLY,
    ONE_RF,
    Monomial,
    Polynomial,
    RationalFunction,
    gp,
    invert_vars,
    rf_equal,
    rf_sum,
)

DEFAULT_BOUND = 6


class HypothesisViolation(ValueError):
    """Numerical data do not satisfy the monomial hypothesis of the matching identity."""


def _mono(x) -> Monomial:
    return Monomial.var(x) if isinstance(x, str) else x


def _word_label(v) -> str:
    return ",".join(map(str, v))


@dataclass(frozen=True)
class IgusaVariables:
    """Y per letter and X per nonempty subword; entries are monomials."""

    Y: tuple[Monomial, ...]
    X: Mapping[tuple, Monomial]

    @classmethod
    def abstract(cls, nbar: Sequence[int], y: str = "Y", x: str = "X") -> "IgusaVariables":
        Y = tuple(Monomial.var(f"{y}{i + 1}") for i in range(len(nbar)))
        X = {v: Monomial.var(f"{x}[{_word_label(v)}]") for v in subwords(nbar, nonempty=True)}
        return cls(Y, X)

    def check(self, nbar: Sequence[int]) -> None:
        if len(self.Y) != len(nbar):
            raise ValueError("one Y variable per letter is required")
        missing = [v for v in subwords(nbar, nonempty=True) if v not in self.X]
        if missing:
            raise ValueError(f"X undefined on subwords {missing[:3]}")


def _weighted(coeffs: Sequence[int], Y: Monomial) -> Polynomial:
    return Polynomial({Y ** k: c for k, c in enumerate(coeffs) if c}, _trusted=True)


def igusa_I(n: int, Y, X: Sequence) -> RationalFunction:
    return _classical(n, _mono(Y), tuple(_mono(x) for x in X), circ=False)


def igusa_I_circ(n: int, Y, X: Sequence) -> RationalFunction:
    return _classical(n, _mono(Y), tuple(_mono(x) for x in X), circ=True)


@lru_cache(maxsize=4096)
def _classical(n: int, Y: Monomial, X: tuple[Monomial, ...], circ: bool) -> RationalFunction:
    if n < 1 or len(X) != n:
        raise ValueError(f"need n >= 1 and n values of X, got n={n}, {len(X)} values")
    terms = []
    top = X[-1]
    for mask in range(1 << (n - 1)):
        I = tuple(i + 1 for i in range(n - 1) if mask >> i & 1)
        num = _weighted(multinom_coeffs(n, I), Y)
        den = {top: 1}
        lead = top if circ else Monomial()
        for i in I:
            lead = lead * X[i - 1]
            den[X[i - 1]] = den.get(X[i - 1], 0) + 1
        terms.append(RationalFunction(num.shift(lead), den, reduce=False))
    return rf_sum(terms)


@lru_cache(maxsize=None)
def flag_table(nbar: tuple[int, ...]) -> tuple[tuple[tuple, tuple[tuple[int, ...], ...]], ...]:
    """Every flag with its multinomial coefficient lists, one per letter."""
    out = []
    for V in flags(nbar):
        sets = flag_multinom_sets(nbar, V)
        out.append((V, tuple(multinom_coeffs(n, J) for n, J in zip(nbar, sets))))
    return tuple(out)


def generalized_igusa(nbar: Sequence[int], vars: IgusaVariables | None = None) -> RationalFunction:
    nbar = tuple(nbar)
    if vars is None:
        vars = IgusaVariables.abstract(nbar)
    vars.check(nbar)
    Y = tuple(_mono(y) for y in vars.Y)
    X = tuple((v, _mono(vars.X[v])) for v in subwords(nbar, nonempty=True))
    return _generalized(nbar, Y, X)


@lru_cache(maxsize=4096)
def _generalized(nbar: tuple[int, ...], Y: tuple[Monomial, ...], X: tuple) -> RationalFunction:
    Xd = dict(X)
    weights: dict[tuple, Polynomial] = {}
    terms = []
    for V, coeff_lists in flag_table(nbar):
        key = coeff_lists
        w = weights.get(key)
        if w is None:
            w = ONE_POLY
            for cl, y in zip(coeff_lists, Y):
                if len(cl) > 1:
                    w = w * _weighted(cl, y)
            weights[key] = w
        lead = Monomial()
        den: dict[Monomial, int] = {}
        for v in V:
            x = Xd[v]
            lead = lead * x
            den[x] = den.get(x, 0) + 1
        terms.append(RationalFunction(w.shift(lead), den, reduce=False))
    return rf_sum(terms)


def weak_order_zeta(m: int, X: Mapping[tuple, Monomial] | None = None) -> RationalFunction:
    """Sum over chains of nonempty subsets of ``[m]`` of ``prod X_S/(1-X_S)``.

    Enumerated over subsets directly (not through subword flags) as an
    independent check of the ``nbar = (1,...,1)`` case.
    """
    subsets = [frozenset(i for i in range(m) if mask >> i & 1) for mask in range(1, 1 << m)]
    key = {S: tuple(1 if i in S else 0 for i in range(m)) for S in subsets}
    if X is None:
        X = {key[S]: Monomial.var(f"X[{_word_label(key[S])}]") for S in subsets}
    out = []

    def rec(last: frozenset, acc: RationalFunction):
        out.append(acc)
        for S in subsets:
            if last < S:
                rec(S, acc * gp(X[key[S]]))

    rec(frozenset(), RationalFunction.const(1))
    return rf_sum(out)


# ---------------------------------------------------------------------------------------
# Functional equations


def igusa_funeq_holds(n: int, circ: bool = False) -> bool:
    """Check the functional equation of ``I_n`` (or ``I_n^o``) in abstract variables."""
    X = [Monomial.var(f"X{i}") for i in range(1, n + 1)]
    Y = Monomial.var("Y")
    f = igusa_I_circ(n, Y, X) if circ else igusa_I(n, Y, X)
    lhs = invert_vars(f, {"Y", *(f"X{i}" for i in range(1, n + 1))})
    factor = X[-1].inverse() if circ else X[-1]
    rhs = f.shift(factor * Y ** -comb(n, 2), (-1) ** n)
    return rf_equal(lhs, rhs)


def funeq_factor(nbar: Sequence[int], vars: IgusaVariables) -> tuple[int, Monomial]:
    """Sign and monomial ``(-1)^N X_top prod Y_i^{-C(n_i,2)}``."""
    top = tuple(nbar)
    m = _mono(vars.X[top])
    for n, y in zip(nbar, vars.Y):
        m = m * _mono(y) ** -comb(n, 2)
    return (-1) ** sum(nbar), m


def check_genigusa_funeq_direct(nbar: Sequence[int]) -> bool:
    """Invert every variable of the abstract rational function and compare."""
    nbar = tuple(nbar)
    vars = IgusaVariables.abstract(nbar)
    f = generalized_igusa(nbar, vars)
    names = {v for y in vars.Y for v in y.variables()} | {v for x in vars.X.values() for v in x.variables()}
    sign, m = funeq_factor(nbar, vars)
    return rf_equal(invert_vars(f, names), f.shift(m, sign))


def gp_basis_expansion(nbar: tuple[int, ...]) -> dict[tuple, Polynomial]:
    """Coefficients of ``I^wo`` divided by ``1 + G_top`` in the basis ``prod_{v in V} G_v``.

    Here ``G_v = X_v/(1-X_v)``.  The ``G_v`` are algebraically independent over
    ``Q(Y)`` and generate the same field as the ``X_v``, so identities in the ``X``
    variables can be decided coefficientwise in this basis.  Only flags avoiding the
    top word occur, because ``I^wo = (1 + G_top) * F``.
    """
    top = tuple(nbar)
    Y = tuple(Monomial.var(f"Y{i + 1}") for i in range(len(nbar)))
    out = {}
    for V, coeff_lists in flag_table(nbar):
        if V and V[-1] == top:
            continue
        w = ONE_POLY
        for cl, y in zip(coeff_lists, Y):
            if len(cl) > 1:
                w = w * _weighted(cl, y)
        out[V] = w
    return out


def check_genigusa_funeq(nbar: Sequence[int], bound: int = DEFAULT_BOUND) -> bool:
    """Exact check of the functional equation of ``I^wo_nbar`` in abstract variables.

    Under ``X -> X^{-1}`` one has ``G_v -> -1 - G_v`` and ``G_top`` factors out of
    both sides, so the identity is equivalent to
    ``sum_{V >= Q} (-1)^{|V|+1} w_V(Y^{-1}) = (-1)^N prod Y_i^{-C(n_i,2)} w_Q(Y)``
    for every flag ``Q`` avoiding the top word.
    """
    nbar = tuple(nbar)
    N = sum(nbar)
    if N > bound:
        raise ValueError(f"N = {N} exceeds the verification bound {bound}")
    if N == 0:
        return True
    F = gp_basis_expansion(nbar)
    ynames = [f"Y{i + 1}" for i in range(len(nbar))]
    lhs: dict[tuple, Polynomial] = {}
    for V, w in F.items():
        wi = w.invert(ynames)
        if (len(V) + 1) % 2:
            wi = -wi
        k = len(V)
        for mask in range(1 << k):
            Q = tuple(V[i] for i in range(k) if mask >> i & 1)
            prev = lhs.get(Q)
            lhs[Q] = wi if prev is None else prev + wi
    shift = Monomial([(y, -comb(n, 2)) for y, n in zip(ynames, nbar)])
    sign = (-1) ** N
    for Q in set(lhs) | set(F):
        left = lhs.get(Q, Polynomial())
        right = F.get(Q, Polynomial()).shift(shift, sign)
        if left != right:
            return False
    return True


def count_flags(nbar: Sequence[int]) -> int:
    return len(flag_table(tuple(nbar)))


# ---------------------------------------------------------------------------------------
# Radical decomposition for products of Heisenberg rings


def _heis_word(g: int, J, extra=()) -> tuple:
    v = [0] * (2 * g)
    for i in J:
        v[i] = v[i + g] = 1
    for i in extra:
        v[i] = 1
    return tuple(v)


def check_match_hypothesis(g: int, y: Mapping[tuple, Monomial]) -> None:
    """Raise unless ``y_r = y_{sqrt r} * prod_{i in I' u I''} y_{a_i}`` for every r."""
    one = Monomial()
    for r in subwords((1,) * (2 * g), nonempty=True):
        J = [i for i in range(g) if r[i] and r[i + g]]
        single = [i for i in range(g) if r[i] != r[i + g]]
        root = _heis_word(g, J)
        expect = y[root] if any(root) else one
        for i in single:
            expect = expect * y[_heis_word(g, (), (i,))]
        if _mono(y[r]) != expect:
            raise HypothesisViolation(f"y at {r} is {y[r]}, hypothesis requires {expect}")


def _match_factor(g: int, y: Mapping[tuple, Monomial]) -> RationalFunction:
    out = ONE_RF
    for i in range(g):
        ya = y[_heis_word(g, (), (i,))]
        out = out * RationalFunction(ONE_POLY + Polynomial.monomial(ya), {ya: 1})
    return out


def _radical_flag(g: int, S: tuple) -> tuple:
    out = []
    for s in S:
        root = tuple(1 if s[i] and s[i + g] else 0 for i in range(g))
        if any(root) and (not out or out[-1] != root):
            out.append(root)
    return tuple(out)


def _chain_term(V: tuple, X: Mapping[tuple, Monomial]) -> RationalFunction:
    lead = Monomial()
    den: dict[Monomial, int] = {}
    for v in V:
        lead = lead * X[v]
        den[X[v]] = den.get(X[v], 0) + 1
    return RationalFunction(Polynomial.monomial(lead), den, reduce=False)


def igusas_match_check(g: int, y: Mapping[tuple, Monomial], method: str = "radical") -> bool:
    """Compare ``I^wo_{(1^{2g})}(y)`` with ``prod (1+y_{a_i})/(1-y_{a_i}) I^wo_{(1^g)}(z)``.

    ``method="direct"`` compares the two full sums. ``method="radical"`` groups the
    flags on the left by their radical flag ``R`` and compares each group with
    the ``R`` summand on the right; both sides are sums over ``R`` so this is
    equivalent, and much cheaper in many abstract variables.
    """
    y = {k: _mono(v) for k, v in y.items()}
    check_match_hypothesis(g, y)
    z = {J: y[_heis_word(g, [i for i in range(g) if J[i]])] for J in subwords((1,) * g, nonempty=True)}
    factor = _match_factor(g, y)
    if method == "direct":
        lhs = generalized_igusa((1,) * (2 * g), IgusaVariables((Monomial(),) * (2 * g), y))
        rhs = generalized_igusa((1,) * g, IgusaVariables((Monomial(),) * g, z)) * factor
        return rf_equal(lhs, rhs)
    if method != "radical":
        raise ValueError(f"unknown method {method!r}")
    groups: dict[tuple, list] = {}
    for S in flags((1,) * (2 * g)):
        groups.setdefault(_radical_flag(g, S), []).append(_chain_term(S, y))
    targets = list(flags((1,) * g))
    if set(groups) != set(targets):
        return False
    return all(rf_equal(rf_sum(groups[R]), _chain_term(R, z) * factor) for R in targets)


def abstract_match_data(g: int) -> dict[tuple, Monomial]:
    """Generic data satisfying the hypothesis: ``u_i`` per letter pair, ``z_J`` per radical word."""
    y = {}
    for r in subwords((1,) * (2 * g), nonempty=True):
        J = [i for i in range(g) if r[i] and r[i + g]]
        m = Monomial.var("z[" + "".join(str(i + 1) for i in J) + "]") if J else Monomial()
        for i in range(g):
            if r[i] != r[i + g]:
                m = m * Monomial.var(f"u{i + 1}")
        y[r] = m
    return y
