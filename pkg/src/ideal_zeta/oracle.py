"""Brute-force and semi-structural lattice counts used to validate the engine.

Everything here works with integer matrices in Hermite normal form: a
sublattice of index ``p^k`` in ``Z^N`` (equivalently in ``Z_p^N``) has a unique
upper triangular basis with diagonal ``p^{a_i}`` and entries above the diagonal
reduced modulo the diagonal entry of their column.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Iterator, Mapping, Sequence

from .combinat import (
    AdmissibleComposition,
    DyckWord,
    StructuralDescriptor,
    beta,
    birkhoff_alpha,
    ell,
    lambda_of_nu,
    overlap_type,
    partitions_bounded,
    radical,
)
from .exactalg import Monomial, Polynomial, TruncatedSeries

DEFAULT_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    """The enumeration would visit more matrices than the budget allows."""

    def __init__(self, estimate: int, budget: int):
        super().__init__(f"enumeration needs about {estimate} matrices, budget is {budget}")
        self.estimate = estimate
        self.budget = budget


def budget_from_env(default: int = DEFAULT_BUDGET) -> int:
    raw = os.environ.get("IGUSA_BUDGET")
    if not raw:
        return default
    try:
        return int(float(raw))
    except ValueError as exc:
        raise ValueError(f"IGUSA_BUDGET={raw!r} is not a number") from exc


def _check_budget(estimate: int, budget: int | None) -> None:
    budget = budget_from_env() if budget is None else budget
    if estimate > budget:
        raise BudgetExceeded(estimate, budget)


# ---------------------------------------------------------------------------------------
# Bracket tables


Vector = tuple[int, ...]


@dataclass(frozen=True)
class BracketTable:
    """Structure constants ``[e_i, e_j] = sum_k c_ij^k e_k`` of a class-2 Lie ring.

    ``brackets`` holds ``((i, j), ((k, c), ...))`` with ``i < j`` (0-based),
    zero coefficients dropped; brackets not listed vanish.
    """

    rank: int
    brackets: tuple[tuple[tuple[int, int], tuple[tuple[int, int], ...]], ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        seen = set()
        for (i, j), coeffs in self.brackets:
            if not (0 <= i < j < self.rank):
                raise ValueError(f"bracket index ({i}, {j}) must satisfy 0 <= i < j < rank")
            if (i, j) in seen:
                raise ValueError(f"bracket ({i}, {j}) listed twice")
            seen.add((i, j))
            if any(not (0 <= k < self.rank) or c == 0 for k, c in coeffs):
                raise ValueError(f"bad coefficients for bracket ({i}, {j})")
        if not self.is_class2():
            raise ValueError("bracket table is not nilpotent of class at most 2")

    @classmethod
    def build(cls, rank: int, entries: Mapping[tuple[int, int], Mapping[int, int]]) -> "BracketTable":
        """Normalize a mapping that may list ``(i, j)`` and/or ``(j, i)``."""
        acc: dict[tuple[int, int], dict[int, int]] = {}
        given: dict[tuple[int, int], dict[int, int]] = {}
        for (i, j), coeffs in entries.items():
            coeffs = {int(k): int(c) for k, c in coeffs.items() if c}
            if i == j:
                if coeffs:
                    raise ValueError(f"[e_{i}, e_{i}] must vanish")
                continue
            key, sign = ((i, j), 1) if i < j else ((j, i), -1)
            signed = {k: sign * c for k, c in coeffs.items()}
            if key in given and given[key] != signed:
                raise ValueError(f"brackets ({i}, {j}) and ({j}, {i}) are not antisymmetric")
            given[key] = signed
            acc[key] = signed
        items = tuple(
            (key, tuple(sorted(v.items()))) for key, v in sorted(acc.items()) if v
        )
        return cls(rank, items)

    def bracket_basis(self, i: int, j: int) -> Vector:
        out = [0] * self.rank
        if i == j:
            return tuple(out)
        key, sign = ((i, j), 1) if i < j else ((j, i), -1)
        for k, c in self._table.get(key, ()):
            out[k] += sign * c
        return tuple(out)

    @property
    def _table(self) -> dict:
        t = self.__dict__.get("_table_cache")
        if t is None:
            t = dict(self.brackets)
            object.__setattr__(self, "_table_cache", t)
        return t

    def bracket(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        out = [0] * self.rank
        for (i, j), coeffs in self.brackets:
            s = u[i] * v[j] - u[j] * v[i]
            if s:
                for k, c in coeffs:
                    out[k] += s * c
        return tuple(out)

    def ad_rows(self, l: int) -> tuple[Vector, ...]:
        """Rows ``[e_i, e_l]`` for all ``i``."""
        return tuple(self.bracket_basis(i, l) for i in range(self.rank))

    def is_class2(self) -> bool:
        for _, coeffs in self.brackets:
            v = [0] * self.rank
            for k, c in coeffs:
                v[k] = c
            for l in range(self.rank):
                e = [0] * self.rank
                e[l] = 1
                if any(self.bracket(v, e)):
                    return False
        return True

    def central_indices(self) -> tuple[int, ...]:
        """Basis vectors commuting with everything."""
        touched = {i for (i, j), _ in self.brackets} | {j for (i, j), _ in self.brackets}
        return tuple(i for i in range(self.rank) if i not in touched)

    def derived_support(self) -> set[int]:
        return {k for _, coeffs in self.brackets for k, _ in coeffs}

    def permuted(self, order: Sequence[int]) -> "BracketTable":
        """Relabel so that new basis vector ``a`` is old ``order[a]``."""
        pos = {old: new for new, old in enumerate(order)}
        entries = {}
        for (i, j), coeffs in self.brackets:
            entries[(pos[i], pos[j])] = {pos[k]: c for k, c in coeffs}
        return BracketTable.build(self.rank, entries)

    def to_json_obj(self) -> dict:
        return {
            "rank": self.rank,
            "brackets": [
                {"i": i + 1, "j": j + 1, "coeffs": {str(k + 1): c for k, c in coeffs}}
                for (i, j), coeffs in self.brackets
            ],
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "BracketTable":
        try:
            rank = int(obj["rank"])
            entries: dict = {}
            for b in obj.get("brackets", []):
                i, j = int(b["i"]) - 1, int(b["j"]) - 1
                if (i, j) in entries:
                    raise ValueError(f"bracket ({i + 1}, {j + 1}) listed twice")
                entries[(i, j)] = {int(k) - 1: int(c) for k, c in b["coeffs"].items()}
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"bad bracket table: {exc}") from exc
        return cls.build(rank, entries)


def direct_sum(tables: Sequence[BracketTable]) -> BracketTable:
    entries = {}
    off = 0
    for t in tables:
        for (i, j), coeffs in t.brackets:
            entries[(i + off, j + off)] = {k + off: c for k, c in coeffs}
        off += t.rank
    return BracketTable.build(off, entries)


def _poly_mod_p_divides(a: list[int], b: list[int], p: int) -> bool:
    """Does ``a`` divide ``b`` over F_p (coefficient lists, low degree first, ``a`` monic)."""
    r = [x % p for x in b]
    da = len(a) - 1
    for top in range(len(r) - 1, da - 1, -1):
        c = r[top]
        if c:
            for i in range(da + 1):
                r[top - da + i] = (r[top - da + i] - c * a[i]) % p
    return not any(r[:da])


@lru_cache(maxsize=None)
def irreducible_poly(f: int, p: int) -> tuple[int, ...]:
    """First monic polynomial of degree f irreducible over F_p (low degree first)."""
    if f == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=f):
        cand = list(tail) + [1]
        if cand[0] == 0:
            continue
        reducible = False
        for d in range(1, f // 2 + 1):
            for low in itertools.product(range(p), repeat=d):
                if _poly_mod_p_divides(list(low) + [1], cand, p):
                    reducible = True
                    break
            if reducible:
                break
        if not reducible:
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")


def _ring_constants(f: int, p: int) -> list[list[dict[int, int]]]:
    """``x^a * x^b`` in the basis ``1, x, ..., x^{f-1}`` of ``Z[x]/(h)``."""
    h = irreducible_poly(f, p)
    out = []
    for a in range(f):
        row = []
        for b in range(f):
            v = [0] * (2 * f)
            v[a + b] = 1
            for top in range(2 * f - 1, f - 1, -1):
                c = v[top]
                if c:
                    for i in range(f + 1):
                        v[top - f + i] -= c * h[i]
            row.append({k: c for k, c in enumerate(v[:f]) if c})
        out.append(row)
    return out


def scalar_extension(t: BracketTable, f: int, p: int) -> BracketTable:
    """``L tensor O`` as a ring over Z_p, O unramified of degree f; basis ``e_u x^a`` at ``u*f + a``."""
    if f == 1:
        return t
    mult = _ring_constants(f, p)
    entries: dict = {}
    for (u, v), coeffs in t.brackets:
        for a in range(f):
            for b in range(f):
                acc: dict[int, int] = {}
                for w, c in coeffs:
                    for e, d in mult[a][b].items():
                        acc[w * f + e] = acc.get(w * f + e, 0) + c * d
                entries[(u * f + a, v * f + b)] = acc
    return BracketTable.build(t.rank * f, entries)


def _family_table(family: str, params: tuple[int, ...]) -> BracketTable:
    if family == "Z":
        return BracketTable(params[0])
    if family == "f":
        d = params[0]
        entries = {}
        z = d
        for i in range(d):
            for j in range(i + 1, d):
                entries[(i, j)] = {z: 1}
                z += 1
        return BracketTable.build(z, entries)
    if family == "g":
        a, b = params
        entries = {}
        for i in range(a):
            for j in range(b):
                entries[(i, a + j)] = {a + b + i * b + j: 1}
        return BracketTable.build(a + b + a * b, entries)
    if family == "h":
        d = params[0]
        return BracketTable.build(2 * d + 1, {(i, d + i): {2 * d: 1} for i in range(d)})
    raise ValueError(f"unknown family {family!r}")


def catalog_table(spec, p: int) -> BracketTable:
    """Bracket table over Z_p of a catalog spec (a LieRingSpec or spec string).

    A base degree (``"... over f=k"``) does not change the table; ideals over the
    extension are counted by ``ext_ideal_count``.
    """
    from .zeta import LieRingSpec, RamifiedError, parse_spec

    if isinstance(spec, str):
        spec = parse_spec(spec)
    if not isinstance(spec, LieRingSpec):
        raise TypeError("expected a LieRingSpec")
    if not spec.factors:
        if spec.brackets is None:
            raise ValueError("spec has neither factors nor a bracket table")
        return spec.brackets
    parts = []
    for fa in spec.factors:
        if fa.e != 1:
            raise RamifiedError(f"{fa}: ramified extensions are not supported")
        parts.append(scalar_extension(_family_table(fa.family, fa.params), fa.f, p))
    return direct_sum(parts)


# ---------------------------------------------------------------------------------------
# Hermite normal forms


def weak_compositions(k: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if k == 0:
            yield ()
        return
    if parts == 1:
        yield (k,)
        return
    for a in range(k + 1):
        for rest in weak_compositions(k - a, parts - 1):
            yield (a,) + rest


@lru_cache(maxsize=None)
def hnf_count(N: int, p: int, k: int) -> int:
    """Number of sublattices of index ``p^k`` in ``Z^N``."""
    # column j carries j free entries modulo p^{a_j}
    table = [1] + [0] * k
    for j in range(N):
        new = [0] * (k + 1)
        for s, v in enumerate(table):
            if v:
                for a in range(k - s + 1):
                    new[s + a] += v * p ** (a * j)
        table = new
    return table[k]


def hnf_lattices_with_diag(diag: Sequence[int], p: int) -> Iterator[list[list[int]]]:
    N = len(diag)
    mods = [p**a for a in diag]
    slots = [(i, j) for j in range(N) for i in range(j)]
    ranges = [range(mods[j]) for i, j in slots]
    for vals in itertools.product(*ranges):
        H = [[0] * N for _ in range(N)]
        for i in range(N):
            H[i][i] = mods[i]
        for (i, j), v in zip(slots, vals):
            H[i][j] = v
        yield H


def hnf_lattices(N: int, p: int, k: int) -> Iterator[list[list[int]]]:
    """Every sublattice of index ``p^k`` of ``Z^N`` as an HNF row basis."""
    for diag in weak_compositions(k, N):
        yield from hnf_lattices_with_diag(diag, p)


def in_lattice(v: Sequence[int], H: Sequence[Sequence[int]]) -> bool:
    """Membership via reduction against an upper triangular row basis."""
    v = list(v)
    N = len(H)
    for i in range(N):
        if v[i]:
            d = H[i][i]
            if v[i] % d:
                return False
            c = v[i] // d
            row = H[i]
            for j in range(i, N):
                v[j] -= c * row[j]
    return True


def hnf_of(gens: Iterable[Sequence[int]], N: int, modulus: int) -> tuple[tuple[int, ...], ...]:
    """Canonical HNF of the lattice spanned by ``gens`` and ``modulus * Z^N``."""
    # the lattice contains modulus * Z^N, so rows may be reduced modulo it at any stage
    rows = [[x % modulus for x in g] for g in gens]
    rows = [r for r in rows if any(r)]
    basis = []
    for col in range(N):
        e = [0] * N
        e[col] = modulus
        pivots = [r for r in rows if r[col]] + [e]
        rest = [r for r in rows if not r[col]]
        while len(pivots) > 1:
            pivots.sort(key=lambda r: abs(r[col]))
            a = pivots[0]
            nxt = [a]
            for r in pivots[1:]:
                c = r[col] // a[col]
                r = [x - c * y for x, y in zip(r, a)]
                (nxt if r[col] else rest).append(r)
            pivots = nxt
        piv = pivots[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        rows = [[x % modulus for x in r] for r in rest]
        rows = [r for r in rows if any(r)]
    for j in range(N):
        for i in range(j):
            c = basis[i][j] // basis[j][j]
            if c:
                basis[i] = [x - c * y for x, y in zip(basis[i], basis[j])]
    return tuple(tuple(r) for r in basis)


# ---------------------------------------------------------------------------------------
# Smith normal form


def elementary_divisors(M: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal of the Smith normal form of an integer matrix."""
    A = [list(r) for r in M if any(r)]
    out = []
    while A and A[0]:
        nz = [(abs(A[i][j]), i, j) for i in range(len(A)) for j in range(len(A[0])) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        A[0], A[i] = A[i], A[0]
        for r in A:
            r[0], r[j] = r[j], r[0]
        while True:
            piv = A[0][0]
            changed = False
            for i in range(1, len(A)):
                c = A[i][0] // piv
                if c:
                    A[i] = [x - c * y for x, y in zip(A[i], A[0])]
                if A[i][0]:
                    changed = True
            for j in range(1, len(A[0])):
                c = A[0][j] // piv
                if c:
                    for r in A:
                        r[j] -= c * r[0]
                if A[0][j]:
                    changed = True
            if not changed:
                bad = [(i, j) for i in range(1, len(A)) for j in range(1, len(A[0])) if A[i][j] % piv]
                if not bad:
                    break
                i, _ = bad[0]
                A[0] = [x + y for x, y in zip(A[0], A[i])]
                changed = True
            nz = [(abs(A[i][0]), i, 0) for i in range(len(A)) if A[i][0]]
            nz += [(abs(A[0][j]), 0, j) for j in range(len(A[0])) if A[0][j]]
            _, i, j = min(nz)
            if i:
                A[0], A[i] = A[i], A[0]
            if j:
                for r in A:
                    r[0], r[j] = r[j], r[0]
        out.append(abs(A[0][0]))
        A = [r[1:] for r in A[1:]]
        A = [r for r in A if any(r)]
    return out


def determinantal_divisors(M: Sequence[Sequence[int]]) -> list[int]:
    """Elementary divisors from gcds of minors (slow, for cross-checks)."""
    rows, cols = len(M), len(M[0]) if M else 0
    d_prev, out = 1, []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for R in itertools.combinations(range(rows), k):
            for C in itertools.combinations(range(cols), k):
                g = gcd(g, _det([[M[r][c] for c in C] for r in R]))
        if g == 0:
            break
        out.append(g // d_prev)
        d_prev = g
    return out


def _det(A: list[list[int]]) -> int:
    n = len(A)
    if n == 1:
        return A[0][0]
    return sum((-1) ** j * A[0][j] * _det([r[:j] + r[j + 1:] for r in A[1:]]) for j in range(n) if A[0][j])


def valuation(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def p_type(M: Sequence[Sequence[int]], p: int) -> list[int]:
    """p-adic valuations of the elementary divisors, largest first."""
    return sorted((valuation(d, p) for d in elementary_divisors(M)), reverse=True)


# ---------------------------------------------------------------------------------------
# Counting ideals


def _naive_job(args) -> int:
    table, p, diag = args
    ads = [table.ad_rows(l) for l in range(table.rank)]
    count = 0
    for H in hnf_lattices_with_diag(diag, p):
        if _is_ideal(H, ads):
            count += 1
    return count


def _is_ideal(H: list[list[int]], ads) -> bool:
    N = len(H)
    for row in H:
        for ad in ads:
            v = [0] * N
            for i, c in enumerate(row):
                if c:
                    for k, x in enumerate(ad[i]):
                        if x:
                            v[k] += c * x
            if any(v) and not in_lattice(v, H):
                return False
    return True


def central_split(table: BracketTable) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Basis indices outside and inside the largest basis-spanned central block."""
    cent = table.central_indices()
    if not table.derived_support() <= set(cent):
        return tuple(range(table.rank)), ()
    quot = tuple(i for i in range(table.rank) if i not in cent)
    return quot, cent


def _commutator_generators(table: BracketTable, quot: Sequence[int], cent: Sequence[int],
                           rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """``[lift(row), e_l]`` projected to the central coordinates."""
    gens = []
    for row in rows:
        u = [0] * table.rank
        for a, i in enumerate(quot):
            u[i] = row[a]
        for l in quot:
            e = [0] * table.rank
            e[l] = 1
            v = table.bracket(u, e)
            g = [v[c] for c in cent]
            if any(g):
                gens.append(g)
    return gens


def hnf_ideal_count(table: BracketTable, p: int, k: int, *, method: str = "auto",
                    budget: int | None = None, threads: int = 1) -> int:
    """Number of ideals of index ``p^k`` in ``table`` tensored with Z_p.

    ``method="naive"`` tests every HNF lattice of ``Z^N`` for closure under
    bracketing with the basis. ``method="factored"`` uses a central block
    ``A`` containing the derived ring: the HNF splits into a quotient lattice,
    a lattice ``M`` of ``A`` containing its commutators, and free entries.
    """
    if k == 0:
        return 1
    quot, cent = central_split(table)
    if method == "auto":
        method = "factored" if cent else "naive"
    if method == "naive":
        _check_budget(hnf_count(table.rank, p, k), budget)
        jobs = [(table, p, diag) for diag in weak_compositions(k, table.rank)]
        if threads > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=threads) as ex:
                return sum(ex.map(_naive_job, jobs))
        return sum(_naive_job(j) for j in jobs)
    if method != "factored":
        raise ValueError(f"unknown method {method!r}")
    if not cent:
        raise ValueError("no central block containing the derived ring")
    n, c = len(quot), len(cent)
    _check_budget(sum(hnf_count(n, p, k1) + hnf_count(c, p, k - k1) for k1 in range(k + 1)), budget)
    total = 0
    for k1 in range(k + 1):
        k2 = k - k1
        modulus = p**k2
        cache: dict = {}
        for H in hnf_lattices(n, p, k1):
            key = hnf_of(_commutator_generators(table, quot, cent, H), c, modulus)
            if key not in cache:
                cache[key] = sum(
                    1 for M in hnf_lattices(c, p, k2) if all(in_lattice(g, M) for g in key)
                )
            total += cache[key] * p ** (n * k2)
    return total


# ---------------------------------------------------------------------------------------
# Ideals over an unramified extension O of Z_p


def _ext_mul(a: Sequence[int], b: Sequence[int], mult) -> list[int]:
    out = [0] * len(a)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    for k, c in mult[i][j].items():
                        out[k] += x * y * c
    return out


def ext_in_lattice(v, H, diag: Sequence[int], p: int, mult) -> bool:
    """Membership of an O-vector (entries are coefficient lists in 1, x, ...) in an O-HNF."""
    v = [list(x) for x in v]
    for i in range(len(H)):
        if any(v[i]):
            d = p ** diag[i]
            if any(x % d for x in v[i]):
                return False
            c = [x // d for x in v[i]]
            for j in range(i, len(H)):
                v[j] = [a - b for a, b in zip(v[j], _ext_mul(c, H[i][j], mult))]
    return True


def ext_hnf_lattices_with_diag(diag: Sequence[int], p: int, f: int) -> Iterator[list[list[tuple[int, ...]]]]:
    """O-lattices of O^N with diagonal ``p^diag``; entries above it run over O/p^{diag_j}."""
    N = len(diag)
    zero = (0,) * f
    slots = [(i, j) for j in range(N) for i in range(j)]
    ranges = [list(itertools.product(range(p ** diag[j]), repeat=f)) for i, j in slots]
    for vals in itertools.product(*ranges):
        H = [[zero] * N for _ in range(N)]
        for i in range(N):
            H[i][i] = (p ** diag[i],) + zero[1:]
        for (i, j), v in zip(slots, vals):
            H[i][j] = v
        yield H


def ext_ideal_count(table: BracketTable, p: int, f: int, k: int, *, budget: int | None = None) -> int:
    """O-ideals of index ``q^k`` (``q = p^f``) in ``table`` tensored with O, O unramified of degree f.

    The brackets have integer constants and are extended O-linearly, so an
    O-lattice is an ideal iff it is closed under bracketing with the basis.
    """
    if k == 0:
        return 1
    _check_budget(hnf_count(table.rank, p**f, k), budget)
    mult = _ring_constants(f, p)
    ads = [table.ad_rows(l) for l in range(table.rank)]
    N = table.rank
    count = 0
    for diag in weak_compositions(k, N):
        for H in ext_hnf_lattices_with_diag(diag, p, f):
            ok = True
            for row in H:
                for ad in ads:
                    v = [[0] * f for _ in range(N)]
                    for i, c in enumerate(row):
                        if any(c):
                            for m, x in enumerate(ad[i]):
                                if x:
                                    v[m] = [a + x * b for a, b in zip(v[m], c)]
                    if any(any(e) for e in v) and not ext_in_lattice(v, H, diag, p, mult):
                        ok = False
                        break
                if not ok:
                    break
            count += ok
    return count


@lru_cache(maxsize=None)
def _overlattices_of_diagonal(lam: tuple[int, ...], p: int, k2: int) -> int:
    """Lattices of index ``p^k2`` in ``Z^c`` containing ``diag(p^lam)``."""
    c = len(lam)
    count = 0
    for M in hnf_lattices(c, p, k2):
        if all(in_lattice([p**lam[i] if j == i else 0 for j in range(c)], M) for i in range(c)):
            count += 1
    return count


def structural_ideal_count(table: BracketTable, A_basis: Sequence[int], p: int, k: int,
                           *, budget: int | None = None) -> int:
    """Ideal count via ``sum_Lambda |L/A:Lambda|^-s sum_{[Lambda,L] <= M <= A} |A:M|^{n-s}``.

    The inner count depends only on the elementary divisor type of
    ``[Lambda, L]`` inside ``A``, read off a Smith normal form.
    """
    cent = tuple(sorted(A_basis))
    if len(set(cent)) != len(cent) or any(not 0 <= i < table.rank for i in cent):
        raise ValueError("invalid A basis")
    if not set(cent) <= set(table.central_indices()):
        raise ValueError("A is not central")
    if not table.derived_support() <= set(cent):
        raise ValueError("A does not contain the derived ring")
    if k == 0:
        return 1
    quot = tuple(i for i in range(table.rank) if i not in cent)
    n, c = len(quot), len(cent)
    _check_budget(sum(hnf_count(n, p, k1) for k1 in range(k + 1)) + hnf_count(c, p, k), budget)
    total = 0
    for k1 in range(k + 1):
        k2 = k - k1
        cache: dict = {}
        for H in hnf_lattices(n, p, k1):
            gens = _commutator_generators(table, quot, cent, H)
            vals = p_type(gens, p) if gens else []
            lam = tuple(sorted([min(v, k2) for v in vals] + [k2] * (c - len(vals)), reverse=True))
            if lam not in cache:
                cache[lam] = _overlattices_of_diagonal(lam, p, k2)
            total += cache[lam] * p ** (n * k2)
    return total


def oracle_series(table: BracketTable, p: int, K: int, method: str = "auto",
                  budget: int | None = None) -> list[int]:
    return [hnf_ideal_count(table, p, k, method=method, budget=budget) for k in range(K + 1)]


# ---------------------------------------------------------------------------------------
# Sublattices and subgroups by type


def count_sublattices_by_type(n: int, p: int, nu: Sequence[int], *, budget: int | None = None) -> int:
    """Sublattices of ``Z_p^n`` with elementary divisor type ``nu``."""
    target = sorted(nu, reverse=True)
    if len(target) > n:
        raise ValueError("nu has more parts than the rank")
    target += [0] * (n - len(target))
    k = sum(target)
    top = target[0] if target else 0
    # such a lattice contains p^top Z^n, so its HNF diagonal exponents are at most top
    diags = [dg for dg in weak_compositions(k, n) if max(dg, default=0) <= top]
    _check_budget(sum(p ** sum(e * j for j, e in enumerate(dg)) for dg in diags), budget)
    return sum(1 for dg in diags for H in hnf_lattices_with_diag(dg, p) if _full_type(H, p) == target)


def _full_type(H: Sequence[Sequence[int]], p: int) -> list[int]:
    vals = p_type(H, p)
    return vals + [0] * (len(H) - len(vals))


def _quotient_type(H: Sequence[Sequence[int]], lam: Sequence[int], p: int) -> list[int]:
    """Type of ``M / diag(p^lam)`` for the lattice ``M`` with HNF ``H``."""
    r = len(lam)
    X = []
    for i in range(r):
        target = [p**lam[i] if j == i else 0 for j in range(r)]
        x = [0] * r
        for j in range(r):
            s = target[j] - sum(x[a] * H[a][j] for a in range(j))
            if s % H[j][j]:
                raise ValueError("lattice does not contain the relations")
            x[j] = s // H[j][j]
        X.append(x)
    return _full_type(X, p)


def subgroup_types(lam: Sequence[int], p: int, *, budget: int | None = None) -> dict[tuple[int, ...], int]:
    """Numbers of subgroups of each type in the abelian p-group of type ``lam``."""
    lam = [a for a in lam if a]
    r = len(lam)
    # a lattice containing diag(p^lam) has HNF diagonal exponents bounded by lam
    diags = list(itertools.product(*(range(a + 1) for a in lam)))
    _check_budget(sum(p ** sum(e * j for j, e in enumerate(diag)) for diag in diags), budget)
    rel = [[p**lam[i] if j == i else 0 for j in range(r)] for i in range(r)]
    out: dict[tuple[int, ...], int] = {}
    for diag in diags:
        for M in hnf_lattices_with_diag(diag, p):
            if all(in_lattice(v, M) for v in rel):
                mu = tuple(x for x in _quotient_type(M, lam, p) if x)
                out[mu] = out.get(mu, 0) + 1
    return out


def count_subgroups(lam: Sequence[int], mu: Sequence[int], p: int, *, budget: int | None = None) -> int:
    """Subgroups of type ``mu`` in ``sum Z/p^{lam_i}``, by exhaustive enumeration."""
    key = tuple(sorted((x for x in mu if x), reverse=True))
    return subgroup_types(lam, p, budget=budget).get(key, 0)


# ---------------------------------------------------------------------------------------
# Truncated Delta_{w, rho}


def projection_flag(nu: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Words ``v`` of the flag ``V(nu)``: cut the multiset of all parts at each value."""
    values = sorted({x for part in nu for x in part}, reverse=True)
    return [tuple(sum(1 for x in part if x >= v) for part in nu) for v in values]


def rho_of_nu(nu: Sequence[Sequence[int]], d: StructuralDescriptor, w: DyckWord) -> AdmissibleComposition | None:
    """Radical flag ``sqrt(kappa_1) < ... < sqrt(kappa_r)`` with ``ell(kappa_j) = L_j - epsilon``."""
    words = [(0,) * d.m] + projection_flag(nu)
    by_len: dict[int, tuple[int, ...]] = {}
    for v in words:
        by_len.setdefault(ell(v, d), v)
    chain = []
    for L in w.L:
        v = by_len.get(L - d.epsilon)
        if v is None:
            return None
        chain.append(radical(v, d))
    return AdmissibleComposition.from_flag(chain, d.m)


def delta_truncated(d: StructuralDescriptor, w: DyckWord, rho: AdmissibleComposition, bound: int,
                    q_var: str = "q", t_var: str = "t") -> TruncatedSeries:
    """Direct sum defining ``Delta_{w,rho}`` over ``nu``, ``mu`` with all parts at most ``bound``.

    Every omitted summand has t-degree above ``bound``, so the result is exact
    through t-degree ``bound``.
    """
    q = Monomial.var(q_var)
    coeffs = [Polynomial() for _ in range(bound + 1)]
    n, c = d.n, d.c
    choices = [list(partitions_bounded(ni, bound)) for ni in d.nbar]
    for nu in itertools.product(*choices):
        tnu = sum(fi * sum(part) for fi, part in zip(d.f, nu))
        if tnu > bound:
            continue
        lam = lambda_of_nu(nu, d)
        weight = None
        for mu in partitions_bounded(c, bound - tnu):
            deg = tnu + sum(mu)
            if deg > bound:
                continue
            if overlap_type(lam, mu, d.epsilon) != w:
                continue
            if weight is None:
                if rho_of_nu(nu, d, w) != rho:
                    break
                weight = Polynomial.const(1)
                for fi, part in zip(d.f, nu):
                    weight = weight * beta(part, q**fi)
            term = weight * birkhoff_alpha(lam, mu, q, d.epsilon) * Polynomial.monomial(q ** (n * sum(mu)))
            coeffs[deg] = coeffs[deg] + term
    return TruncatedSeries(t_var, bound, tuple(coeffs))
