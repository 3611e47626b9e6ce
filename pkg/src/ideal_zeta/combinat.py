"""Finite combinatorics: partitions, Dyck words, subword posets, Gaussian polynomials,
Birkhoff and beta polynomials, lengths and radicals of words, admissible compositions.

Partitions are tuples of non-negative integers in weakly decreasing order.  Their
length is significant (trailing zeros are kept) wherever the number of parts matters.
Subwords ``a_1^{alpha_1} ... a_m^{alpha_m}`` of an ambient word are exponent tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

from .exactalg import ONE_POLY, Monomial, Polynomial

Partition = tuple
Subword = tuple
Flag = tuple


def partition(parts: Sequence[int]) -> Partition:
    return tuple(sorted((int(x) for x in parts), reverse=True))


def strip(p: Sequence[int]) -> Partition:
    return tuple(x for x in p if x)


def dual(p: Sequence[int]) -> Partition:
    p = strip(partition(p))
    if not p:
        return ()
    return tuple(sum(1 for x in p if x >= k) for k in range(1, p[0] + 1))


def star(p1: Sequence[int], p2: Sequence[int]) -> Partition:
    """Multiset of pairwise minima."""
    return partition(min(a, b) for a in p1 for b in p2)


def star_power(p: Sequence[int], b: int) -> Partition:
    """Multiset of minima over the ``b``-element subsets of the parts."""
    if b > len(p):
        raise ValueError(f"b={b} exceeds the number of parts {len(p)}")
    return partition(min(s) for s in itertools.combinations(p, b))


def tau_multiset(tau: int, e: int, f: int) -> Partition:
    g, h = divmod(tau, e)
    return (g + 1,) * (h * f) + (g,) * ((e - h) * f)


def _as_monomial(Y) -> Monomial:
    return Monomial.var(Y) if isinstance(Y, str) else Y


# ---------------------------------------------------------------------------------------
# Gaussian polynomials


@lru_cache(maxsize=None)
def gauss_coeffs(a: int, b: int) -> tuple[int, ...]:
    """Coefficients of the Gaussian binomial ``[a choose b]_Y`` in powers of Y."""
    if b < 0 or b > a:
        raise ValueError(f"gaussian binomial ({a},{b}) undefined")
    if b == 0 or b == a:
        return (1,)
    # [a,b] = [a-1,b-1] + Y^b [a-1,b]
    x = gauss_coeffs(a - 1, b - 1)
    y = gauss_coeffs(a - 1, b)
    out = [0] * (b * (a - b) + 1)
    for i, c in enumerate(x):
        out[i] += c
    for i, c in enumerate(y):
        out[i + b] += c
    return tuple(out)


def _from_coeffs(coeffs: Sequence[int], Y) -> Polynomial:
    Y = _as_monomial(Y)
    return Polynomial({Y ** k: c for k, c in enumerate(coeffs) if c}, _trusted=True)


def gauss_binom(a: int, b: int, Y) -> Polynomial:
    return _from_coeffs(gauss_coeffs(a, b), Y)


@lru_cache(maxsize=None)
def multinom_coeffs(n: int, J: tuple[int, ...]) -> tuple[int, ...]:
    out = [1]
    top = n
    for j in sorted(J, reverse=True):
        out = _mul_dense(out, gauss_coeffs(top, j))
        top = j
    return tuple(out)


def _mul_dense(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def gauss_multinom(n: int, J, Y) -> Polynomial:
    """``binom(n, J)_Y`` for ``J`` a subset of ``[n-1]``."""
    J = tuple(sorted(set(J)))
    if any(j < 1 or j > n - 1 for j in J):
        raise ValueError(f"J={J} is not a subset of [1,{n - 1}]")
    return _from_coeffs(multinom_coeffs(n, J), Y)


def sym_group_tools(n: int) -> Iterator[tuple[tuple[int, ...], int, frozenset]]:
    """All permutations of ``1..n`` with Coxeter length and right descent set."""
    if n > 8:
        raise ValueError("symmetric group enumeration is limited to n <= 8")
    for w in itertools.permutations(range(1, n + 1)):
        length = sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])
        des = frozenset(i + 1 for i in range(n - 1) if w[i] > w[i + 1])
        yield w, length, des


# ---------------------------------------------------------------------------------------
# Birkhoff and beta polynomials


def _dominates(lam: Sequence[int], mu: Sequence[int]) -> bool:
    lam, mu = strip(partition(lam)), strip(partition(mu))
    if len(mu) > len(lam):
        return False
    return all(m <= l for m, l in zip(mu, lam))


def pad(lam: Sequence[int], mu: Sequence[int], epsilon: int, xi: int | None = None) -> Partition:
    """Prepend ``epsilon`` parts, each at least ``max(lambda_1, mu_1)``."""
    top = max([0, *lam, *mu])
    if xi is None:
        xi = top + 1
    elif xi < top:
        raise ValueError("padding parts must be at least max(lambda_1, mu_1)")
    return partition((xi,) * epsilon + tuple(lam))


def birkhoff_alpha(lam: Sequence[int], mu: Sequence[int], Y, epsilon: int = 0, xi: int | None = None) -> Polynomial:
    """Number of subgroups of type ``mu`` in an abelian p-group of type ``lam``, as a polynomial in Y=p."""
    lt = pad(lam, mu, epsilon, xi)
    if not _dominates(lt, mu):
        raise ValueError(f"mu={tuple(mu)} is not contained in lambda={lt}")
    Ym = _as_monomial(Y)
    ld, md = dual(lt), dual(mu)
    shift = 0
    coeffs = [1]
    for k in range(1, len(md) + 1):
        lk, mk = ld[k - 1], md[k - 1]
        mk1 = md[k] if k < len(md) else 0
        shift += mk * (lk - mk)
        g = gauss_coeffs(lk - mk1, lk - mk)
        coeffs = _mul_dense(coeffs, g)
    # prod of binomials at Y^-1 is sum c_i Y^-i
    return Polynomial({Ym ** (shift - i): c for i, c in enumerate(coeffs) if c}, _trusted=True)


def beta(nu: Sequence[int], Y) -> Polynomial:
    """Number of sublattices of o^N of elementary divisor type ``nu`` (N = len(nu))."""
    nu = partition(nu)
    N = len(nu)
    if N == 0:
        return ONE_POLY
    J = tuple(d for d in range(1, N) if nu[d - 1] > nu[d])
    e = sum(d * (N - d) * (nu[d - 1] - nu[d]) for d in range(1, N))
    Ym = _as_monomial(Y)
    return Polynomial({Ym ** (e - i): c for i, c in enumerate(multinom_coeffs(N, J)) if c}, _trusted=True)


def partitions_bounded(length: int, max_part: int) -> Iterator[Partition]:
    """Weakly decreasing tuples of the given length with parts in ``[0, max_part]``."""
    for combo in itertools.combinations_with_replacement(range(max_part, -1, -1), length):
        yield combo


# ---------------------------------------------------------------------------------------
# Dyck words


@dataclass(frozen=True)
class DyckWord:
    """The word ``0^{L_1} 1^{M_1} 0^{L_2-L_1} 1^{M_2-M_1} ...``."""

    L: tuple[int, ...]
    M: tuple[int, ...]

    def __post_init__(self):
        if len(self.L) != len(self.M) or not self.L:
            raise ValueError("L and M must be nonempty of equal length")
        prevL = prevM = 0
        for l, m in zip(self.L, self.M):
            if l <= prevL or m <= prevM or m > l:
                raise ValueError(f"not a Dyck word: L={self.L} M={self.M}")
            prevL, prevM = l, m
        if self.L[-1] != self.M[-1]:
            raise ValueError("L_r must equal M_r")

    @property
    def r(self) -> int:
        return len(self.L)

    @property
    def c(self) -> int:
        return self.L[-1]

    @classmethod
    def from_word(cls, word: str) -> "DyckWord":
        L, M = [], []
        zeros = ones = 0
        for ch, grp in itertools.groupby(word):
            k = len(list(grp))
            if ch == "0":
                zeros += k
                L.append(zeros)
            elif ch == "1":
                ones += k
                M.append(ones)
            else:
                raise ValueError(f"bad letter {ch!r}")
        if word and word[0] != "0":
            raise ValueError("a Dyck word starts with 0")
        return cls(tuple(L), tuple(M))

    @property
    def word(self) -> str:
        out, pl, pm = [], 0, 0
        for l, m in zip(self.L, self.M):
            out.append("0" * (l - pl) + "1" * (m - pm))
            pl, pm = l, m
        return "".join(out)

    def __str__(self) -> str:
        return self.word


def enum_dyck(c: int) -> list[DyckWord]:
    """All Dyck words of length ``2c`` in lexicographic order (0 < 1)."""
    out = []

    def rec(prefix: str, zeros: int, ones: int):
        if zeros == c and ones == c:
            out.append(DyckWord.from_word(prefix))
            return
        if zeros < c:
            rec(prefix + "0", zeros + 1, ones)
        if ones < zeros:
            rec(prefix + "1", zeros, ones + 1)

    if c > 0:
        rec("", 0, 0)
    return out


def overlap_holds(lam_padded: Sequence[int], mu: Sequence[int], w: DyckWord) -> bool:
    """Check the interleaved inequality chain defining overlap type ``w``."""
    lt, mu = partition(lam_padded), partition(mu)
    seq: list[tuple[int, int]] = []  # (value, 0 for lambda / 1 for mu)
    pl = pm = 0
    for l, m in zip(w.L, w.M):
        seq += [(lt[i], 0) for i in range(pl, l)]
        seq += [(mu[i], 1) for i in range(pm, m)]
        pl, pm = l, m
    for (a, sa), (b, sb) in zip(seq, seq[1:]):
        if sa == 1 and sb == 0:
            if not a > b:
                return False
        elif not a >= b:
            return False
    return True


def overlap_type(lam: Sequence[int], mu: Sequence[int], epsilon: int = 0, xi: int | None = None) -> DyckWord | None:
    lt = pad(lam, mu, epsilon, xi)
    mu = partition(mu)
    if len(lt) != len(mu):
        raise ValueError(f"lambda has {len(lt) - epsilon} parts, mu needs {len(mu) - epsilon}")
    word = []
    i = j = 0
    while i < len(lt) or j < len(mu):
        if j >= len(mu) or (i < len(lt) and lt[i] >= mu[j]):
            word.append("0")
            i += 1
        else:
            word.append("1")
            j += 1
        if word.count("1") > word.count("0"):
            return None
    return DyckWord.from_word("".join(word))


# ---------------------------------------------------------------------------------------
# Subwords and flags


def subwords(nbar: Sequence[int], nonempty: bool = False) -> list[Subword]:
    words = list(itertools.product(*(range(n + 1) for n in nbar)))
    if nonempty:
        words = [v for v in words if any(v)]
    return words


def leq(u: Subword, v: Subword) -> bool:
    return all(a <= b for a, b in zip(u, v))


def flags(nbar: Sequence[int]) -> Iterator[Flag]:
    """All chains of nonempty subwords, the empty chain first, depth-first."""
    words = subwords(nbar, nonempty=True)
    above = {u: [v for v in words if v != u and leq(u, v)] for u in words}
    roots = words

    def rec(chain: Flag, options):
        yield chain
        for v in options:
            yield from rec(chain + (v,), above[v])

    yield from rec((), roots)


def flag_multinom_sets(nbar: Sequence[int], flag: Flag) -> list[tuple[int, ...]]:
    """The sets ``phi_i(V) = {pi_i(v)} cap [n_i - 1]`` for each coordinate."""
    return [tuple(sorted({v[i] for v in flag} & set(range(1, n)))) for i, n in enumerate(nbar)]


def word_str(v: Subword, letters: str | None = None) -> str:
    """Readable form such as ``a^2b`` (letters a, b, ... or a1, a2, ... when m > 26)."""
    if not any(v):
        return "1"
    out = []
    for i, a in enumerate(v):
        if a:
            name = (letters or "abcdefghijklmnopqrstuvwxyz")[i] if len(v) <= 26 else f"a{i + 1}"
            out.append(name if a == 1 else f"{name}^{a}")
    return "".join(out)


# ---------------------------------------------------------------------------------------
# Structural descriptors


@dataclass(frozen=True)
class StructuralDescriptor:
    """Combinatorial data of a class-2 ring relative to A = Z(L).

    ``nbar`` and ``f`` list the components of L/A (ranks over the extension and
    inertia degrees); ``pairs`` are the ``(S_k, sigma_k)`` with 0-based component
    indices, one entry per copy; ``epsilon`` is the rank of the abelian part of A
    over o.
    """

    nbar: tuple[int, ...]
    f: tuple[int, ...]
    pairs: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    epsilon: int = 0
    quotient_rank: int | None = None  # rk L/Z(L) over o, if known
    certified: bool = True
    label: str = ""
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(self.nbar) != len(self.f):
            raise ValueError("nbar and f differ in length")
        used = set()
        for S, sigma in self.pairs:
            if len(S) != len(sigma) or not S:
                raise ValueError(f"malformed pair {(S, sigma)}")
            if any(s < 0 or s >= len(self.nbar) for s in S) or any(x < 1 for x in sigma):
                raise ValueError(f"pair {(S, sigma)} out of range")
            used.update(S)
        if used != set(range(len(self.nbar))):
            raise ValueError("every component must occur in some pair")

    @property
    def m(self) -> int:
        return len(self.nbar)

    @property
    def c_prime(self) -> int:
        return ell(self.nbar, self)

    @property
    def c(self) -> int:
        return self.c_prime + self.epsilon

    @property
    def n(self) -> int:
        return sum(a * b for a, b in zip(self.nbar, self.f))

    @property
    def N0(self) -> int:
        return self.n + self.c

    @property
    def N1(self) -> int:
        return self.n if self.quotient_rank is None else self.quotient_rank


def ell(v: Subword, d: StructuralDescriptor) -> int:
    total = 0
    for S, sigma in d.pairs:
        prod = 1
        for s, x in zip(S, sigma):
            prod *= comb(v[s], x)
            if not prod:
                break
        total += prod
    return total


def radical(v: Subword, d: StructuralDescriptor) -> Subword:
    keep = set()
    for S, sigma in d.pairs:
        if all(v[s] >= x for s, x in zip(S, sigma)):
            keep.update(S)
    return tuple(a if i in keep else 0 for i, a in enumerate(v))


def radical_bruteforce(v: Subword, d: StructuralDescriptor) -> Subword:
    """Minimal subword with the same length, straight from the definition."""
    target = ell(v, d)
    cands = [u for u in itertools.product(*(range(a + 1) for a in v)) if ell(u, d) == target]
    minimal = [u for u in cands if not any(w != u and leq(w, u) for w in cands)]
    if len(minimal) != 1:
        raise AssertionError(f"no unique radical for {v}: {minimal}")
    return minimal[0]


def lambda_of_nu(nu: Sequence[Sequence[int]], d: StructuralDescriptor) -> Partition:
    if len(nu) != d.m or any(len(p) != n for p, n in zip(nu, d.nbar)):
        raise ValueError("projection data has the wrong shape")
    parts: list[int] = []
    for S, sigma in d.pairs:
        acc = star_power(nu[S[0]], sigma[0])
        for s, x in zip(S[1:], sigma[1:]):
            acc = star(acc, star_power(nu[s], x))
        parts.extend(acc)
    return partition(parts)


@dataclass(frozen=True)
class AdmissibleComposition:
    rho: tuple[tuple[int, ...], ...]  # m rows, r columns

    @property
    def m(self) -> int:
        return len(self.rho)

    @property
    def r(self) -> int:
        return len(self.rho[0]) if self.rho else 0

    def P(self, i: int, j: int) -> int:
        """Cumulative sum ``P_{ij}`` (1-based ``j``; ``P_{i0} = 0``)."""
        return sum(self.rho[i][:j])

    def P_set(self, i: int) -> tuple[int, ...]:
        return tuple(sorted({self.P(i, j) for j in range(1, self.r + 1)}))

    def column(self, j: int) -> tuple[int, ...]:
        """Row composition ``rho_j`` (1-based)."""
        return tuple(row[j - 1] for row in self.rho)

    def milestone(self, j: int) -> Subword:
        """``w_j``; ``w_0`` is the empty word."""
        return tuple(self.P(i, j) for i in range(self.m))

    @classmethod
    def from_flag(cls, flag: Sequence[Subword], m: int) -> "AdmissibleComposition":
        prev = (0,) * m
        cols = []
        for v in flag:
            cols.append(tuple(b - a for a, b in zip(prev, v)))
            prev = v
        return cls(tuple(tuple(col[i] for col in cols) for i in range(m)))

    def flag(self) -> tuple[Subword, ...]:
        return tuple(self.milestone(j) for j in range(1, self.r + 1))


def radical_words(d: StructuralDescriptor) -> dict[int, list[Subword]]:
    """Radical subwords of the ambient word grouped by length, lex-sorted."""
    key = "radicals"
    if key not in d._cache:
        out: dict[int, list[Subword]] = {}
        for v in subwords(d.nbar):
            if radical(v, d) == v:
                out.setdefault(ell(v, d), []).append(v)
        d._cache[key] = out
    return d._cache[key]


def admissible_compositions(d: StructuralDescriptor, w: DyckWord) -> list[AdmissibleComposition]:
    Lt = [L - d.epsilon for L in w.L]
    if Lt[0] < 0 or Lt[-1] != d.c_prime:
        return []
    rad = radical_words(d)
    if any(x not in rad for x in Lt):
        return []
    out = []

    def rec(j: int, chain: tuple):
        if j == len(Lt):
            out.append(AdmissibleComposition.from_flag(chain, d.m))
            return
        prev = chain[-1] if chain else None
        for v in rad[Lt[j]]:
            if prev is None or (v != prev and leq(prev, v)):
                rec(j + 1, chain + (v,))

    rec(0, ())
    return out


def is_admissible(d: StructuralDescriptor, w: DyckWord, rho: AdmissibleComposition) -> bool:
    """Re-check both defining conditions and ``P_{ir} = n_i`` directly."""
    if rho.r != w.r or rho.m != d.m or any(x < 0 for row in rho.rho for x in row):
        return False
    for j in range(1, w.r + 1):
        wj = rho.milestone(j)
        if ell(wj, d) != w.L[j - 1] - d.epsilon or radical_bruteforce(wj, d) != wj:
            return False
    return rho.milestone(w.r) == tuple(d.nbar)
