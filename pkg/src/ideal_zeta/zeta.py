"""Ideal zeta functions of class-2 Lie rings as sums over Dyck words and admissible compositions.

The local ideal zeta function is assembled as

    zeta_{o^n} / prod_i zeta_{O_i^{n_i}}  *  sum_w sum_rho D_{w,rho}(q, t),

each ``D_{w,rho}`` being a product of Gaussian multinomials, generalized Igusa
functions in the ``y``-data and classical Igusa functions in the ``x``-data.
"""

from __future__ import annotations

import json
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb

from .combinat import (
    AdmissibleComposition,
    DyckWord,
    StructuralDescriptor,
    admissible_compositions,
    ell,
    enum_dyck,
    gauss_binom,
    gauss_multinom,
    radical_words,
    subwords,
)
from .exactalg import (
    ONE_POLY,
    Monomial,
    RationalFunction,
    invert_vars,
    rf_equal,
    rf_product,
    rf_sum,
    simplify,
    specialize,
)
from .igusa import IgusaVariables, generalized_igusa, igusa_I, igusa_I_circ

Q, T = "q", "t"
MAX_C = 10


class SpecError(ValueError):
    """Malformed ring specification."""


class RamifiedError(ValueError):
    """Ramified extensions are outside the scope of the engine."""


class ResourceGuard(RuntimeError):
    """The requested computation exceeds the configured size limits."""


class NotCertified(ValueError):
    """The ring has no catalog descriptor (only the oracle can handle it)."""


def qt(a: int = 0, b: int = 0) -> Monomial:
    return Monomial(((Q, a), (T, b)))


# ---------------------------------------------------------------------------------------
# Ring specifications


FAMILIES = ("f", "g", "h", "Z")


@dataclass(frozen=True)
class Factor:
    """One direct factor: ``f2,d``, ``gd,d'``, ``hd`` or ``Z^r`` over an extension of degree f."""

    family: str
    params: tuple[int, ...]
    f: int = 1
    e: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise SpecError(f"unknown family {self.family!r}")
        need = {"f": 1, "g": 2, "h": 1, "Z": 1}[self.family]
        if len(self.params) != need:
            raise SpecError(f"family {self.family} takes {need} parameter(s)")
        if self.f < 1 or self.e < 1 or any(p < 0 for p in self.params):
            raise SpecError("parameters must be non-negative and f, e positive")
        if self.family == "f" and self.params[0] < 2:
            raise SpecError("f2,d needs d >= 2")
        if self.family == "h" and self.params[0] < 1:
            raise SpecError("hd needs d >= 1")

    def __str__(self) -> str:
        body = {
            "f": lambda: f"f2,{self.params[0]}",
            "g": lambda: f"g{self.params[0]},{self.params[1]}",
            "h": lambda: f"h{self.params[0]}",
            "Z": lambda: f"Z^{self.params[0]}",
        }[self.family]()
        opts = []
        if self.f != 1:
            opts.append(f"f={self.f}")
        if self.e != 1:
            opts.append(f"e={self.e}")
        return body + (f"[{','.join(opts)}]" if opts else "")

    def is_abelian(self) -> bool:
        return self.family == "Z" or (self.family == "g" and 0 in self.params)

    def rank(self) -> int:
        """Rank over the extension ring."""
        a = self.params[0]
        if self.family == "f":
            return a + comb(a, 2)
        if self.family == "g":
            b = self.params[1]
            return a + b + a * b
        if self.family == "h":
            return 2 * a + 1
        return a

    def quotient_rank(self) -> int:
        """Rank of L/Z(L) over the extension ring."""
        if self.is_abelian():
            return 0
        if self.family == "f":
            return self.params[0]
        if self.family == "g":
            return sum(self.params)
        return 2 * self.params[0]


@dataclass(frozen=True)
class LieRingSpec:
    factors: tuple[Factor, ...] = ()
    brackets: object = None  # oracle.BracketTable for rings outside the catalog
    descriptor: StructuralDescriptor | None = None  # caller-supplied, not certified
    base: int = 1  # inertia degree of the ring over which ideals are counted

    def __post_init__(self):
        if not isinstance(self.base, int) or self.base < 1:
            raise SpecError("base degree must be a positive integer")

    def __str__(self) -> str:
        body = " x ".join(map(str, self.factors)) if self.factors else "custom"
        return body + (f" over f={self.base}" if self.base != 1 else "")

    @property
    def N0(self) -> int:
        return sum(fa.rank() * fa.f for fa in self.factors)

    @property
    def N1(self) -> int:
        return sum(fa.quotient_rank() * fa.f for fa in self.factors)

    def to_json_obj(self) -> dict:
        obj: dict = {"version": 1}
        if self.factors:
            obj["factors"] = [
                {"family": fa.family, "params": list(fa.params), "f": fa.f, "e": fa.e} for fa in self.factors
            ]
        if self.descriptor is not None:
            d = self.descriptor
            obj["descriptor"] = {
                "nbar": list(d.nbar),
                "f": list(d.f),
                "pairs": [[list(S), list(s)] for S, s in d.pairs],
                "epsilon": d.epsilon,
            }
        if self.brackets is not None:
            obj["brackets"] = self.brackets.to_json_obj()
        if self.base != 1:
            obj["base"] = self.base
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "LieRingSpec":
        try:
            factors = tuple(
                Factor(x["family"], tuple(x["params"]), int(x.get("f", 1)), int(x.get("e", 1)))
                for x in obj.get("factors", [])
            )
            descriptor = None
            if "descriptor" in obj:
                d = obj["descriptor"]
                descriptor = StructuralDescriptor(
                    tuple(d["nbar"]),
                    tuple(d.get("f", [1] * len(d["nbar"]))),
                    tuple((tuple(S), tuple(s)) for S, s in d["pairs"]),
                    int(d.get("epsilon", 0)),
                    certified=False,
                    label="custom",
                )
            brackets = None
            if "rank" in obj:
                # a bare bracket table document
                from .oracle import BracketTable

                brackets = BracketTable.from_json_obj(obj)
            elif "brackets" in obj:
                from .oracle import BracketTable

                brackets = BracketTable.from_json_obj(obj["brackets"])
            base = int(obj.get("base", 1))
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError(f"bad spec document: {exc}") from exc
        if not factors and descriptor is None and brackets is None:
            raise SpecError("empty spec")
        return cls(factors, brackets, descriptor, base)


_FACTOR_RE = re.compile(
    r"^(?:f2,(?P<fd>\d+)|g(?P<ga>\d+),(?P<gb>\d+)|h(?P<hd>\d+)|Z\^?(?P<zr>\d+))"
    r"(?:\[(?P<opts>[^\]]*)\])?$"
)


def parse_spec(text: str) -> LieRingSpec:
    """Parse ``"f2,3 x h2[f=2] x Z^1"`` or a path to a JSON spec document.

    A trailing ``"over f=k"`` counts ideals over an unramified extension of
    degree k of the base ring instead of over the base ring itself.
    """
    if os.path.isfile(text):
        try:
            with open(text) as fh:
                return LieRingSpec.from_json_obj(json.load(fh))
        except json.JSONDecodeError as exc:
            raise SpecError(f"{text}: invalid JSON ({exc})") from exc
    s = re.sub(r"\s+", "", text)
    s, sep, over = s.partition("over")
    base = 1
    if sep:
        m = re.fullmatch(r"f=(\d+)", over)
        if not m or int(m[1]) < 1:
            raise SpecError(f"bad base ring {over!r}, expected over f=k")
        base = int(m[1])
    if not s:
        raise SpecError("empty spec")
    factors = []
    for tok in s.split("x"):
        m = _FACTOR_RE.match(tok)
        if not m:
            raise SpecError(f"cannot parse factor {tok!r}")
        opts = {"f": 1, "e": 1}
        if m["opts"]:
            for kv in m["opts"].split(","):
                k, _, v = kv.partition("=")
                if k not in opts or not v.isdigit():
                    raise SpecError(f"bad option {kv!r} in {tok!r}")
                opts[k] = int(v)
        if m["fd"] is not None:
            fam, params = "f", (int(m["fd"]),)
        elif m["ga"] is not None:
            fam, params = "g", (int(m["ga"]), int(m["gb"]))
        elif m["hd"] is not None:
            fam, params = "h", (int(m["hd"]),)
        else:
            fam, params = "Z", (int(m["zr"]),)
        factors.append(Factor(fam, params, opts["f"], opts["e"]))
    return LieRingSpec(tuple(factors), base=base)


# ---------------------------------------------------------------------------------------
# Descriptors


def descriptor_for(spec: LieRingSpec) -> StructuralDescriptor:
    """Components of L/Z(L), pairs and ranks for a catalog ring.

    Component order: f2,d blocks, then the x-blocks of all g-factors, then their
    y-blocks (so g-factor i has components i and i+g within that range), then the
    blocks of the h-factors.
    """
    if spec.descriptor is not None:
        return spec.descriptor
    if not spec.factors:
        raise NotCertified("ring has no catalog descriptor")
    for fa in spec.factors:
        if fa.e != 1:
            raise RamifiedError(f"{fa}: ramified extensions are not supported")
    nbar: list[int] = []
    fs: list[int] = []
    pairs: list = []
    eps = 0
    gfac = [fa for fa in spec.factors if fa.family == "g" and not fa.is_abelian()]
    for fa in spec.factors:
        if fa.is_abelian():
            eps += sum(fa.params) * fa.f
        elif fa.family == "f":
            i = len(nbar)
            nbar.append(fa.params[0])
            fs.append(fa.f)
            pairs += [((i,), (2,))] * fa.f
    base = len(nbar)
    g = len(gfac)
    nbar += [fa.params[0] for fa in gfac] + [fa.params[1] for fa in gfac]
    fs += [fa.f for fa in gfac] * 2
    for i, fa in enumerate(gfac):
        pairs += [((base + i, base + g + i), (1, 1))] * fa.f
    for fa in spec.factors:
        if fa.family == "h":
            d = fa.params[0]
            S = tuple(range(len(nbar), len(nbar) + 2 * d))
            nbar += [1] * (2 * d)
            fs += [fa.f] * (2 * d)
            pairs += [(S, (1,) * (2 * d))] * fa.f
    return StructuralDescriptor(
        tuple(nbar), tuple(fs), tuple(pairs), eps, quotient_rank=spec.N1, label=str(spec)
    )


# ---------------------------------------------------------------------------------------
# Building blocks


def abelian_zeta(n: int, q_var: str = Q, t_var: str = T) -> RationalFunction:
    den = {Monomial(((q_var, i), (t_var, 1))): 1 for i in range(n)}
    return RationalFunction(ONE_POLY, den)


def unramified_abelian_zeta(n: int, f: int) -> RationalFunction:
    """``zeta_{O^n}`` for O unramified of degree f over o."""
    return RationalFunction(ONE_POLY, {qt(f * k, f): 1 for k in range(n)})


def prefactor(d: StructuralDescriptor) -> RationalFunction:
    num = ONE_POLY
    for n_i, f_i in zip(d.nbar, d.f):
        for k in range(n_i):
            num = num.times_binomial(qt(f_i * k, f_i))
    return RationalFunction(num, {qt(i, 1): 1 for i in range(d.n)})


@dataclass(frozen=True)
class NumericalData:
    x: dict  # k -> monomial
    y: dict  # j -> {subword of rho_j: monomial}
    delta: dict  # j -> {subword: 0 or 1}
    B: dict  # j -> {subword: int}


def numerical_data(d: StructuralDescriptor, w: DyckWord, rho: AdmissibleComposition) -> NumericalData:
    n, eps = d.n, d.epsilon
    x, y, delta, B = {}, {}, {}, {}
    M = (0,) + w.M
    for j in range(1, w.r + 1):
        prev = rho.milestone(j - 1)
        l_prev = ell(prev, d)
        Mp = M[j - 1]
        yj, dj, bj = {}, {}, {}
        for v in subwords(rho.column(j), nonempty=True):
            vj = tuple(a + b for a, b in zip(v, prev))
            l_vj = ell(vj, d)
            dv = 0 if l_vj == l_prev else 1
            src = v if dv == 0 else vj
            b = sum(f * a * (ni - a) for f, a, ni in zip(d.f, src, d.nbar))
            qe = dv * Mp * (n + l_vj + eps - Mp) + b
            te = sum(a * f for a, f in zip(v, d.f)) + dv * (Mp + sum(p * f for p, f in zip(prev, d.f)))
            yj[v], dj[v], bj[v] = qt(qe, te), dv, b
        y[j], delta[j], B[j] = yj, dj, bj
        P = rho.milestone(j)
        Lj = w.L[j - 1]
        extra_q = sum(f * p * (ni - p) for f, p, ni in zip(d.f, P, d.nbar))
        extra_t = sum(f * p for f, p in zip(d.f, P))
        for k in range(Mp + 1, w.M[j - 1] + 1):
            x[k] = qt(k * (n + Lj - k) + extra_q, k + extra_t)
    return NumericalData(x, y, delta, B)


def D_w_rho(d: StructuralDescriptor, w: DyckWord, rho: AdmissibleComposition) -> RationalFunction:
    data = numerical_data(d, w, rho)
    qinv = qt(-1)
    Yi = tuple(qt(-f) for f in d.f)
    parts: list = []
    num = ONE_POLY
    for i, n_i in enumerate(d.nbar):
        J = [p for p in rho.P_set(i) if 0 < p < n_i]
        num = num * gauss_multinom(n_i, J, Yi[i])
    M = (0,) + w.M
    for j in range(1, w.r + 1):
        Lj = w.L[j - 1]
        num = num * gauss_binom(Lj - M[j - 1], Lj - M[j], qinv)
        col = rho.column(j)
        if any(col):
            parts.append(generalized_igusa(col, IgusaVariables(Yi, data.y[j])))
        xs = [data.x[k] for k in range(M[j - 1] + 1, M[j] + 1)]
        if j < w.r:
            parts.append(igusa_I_circ(len(xs), qinv, xs))
        else:
            parts.append(igusa_I(len(xs), qinv, xs))
    return RationalFunction(num, {}) * rf_product(parts)


def dw_funeq_factor(d: StructuralDescriptor) -> tuple[int, Monomial]:
    n, c = d.n, d.c
    sign = (-1) ** (c + sum(d.nbar))
    qe = comb(n + c, 2) - comb(n, 2) + sum(f * comb(ni, 2) for f, ni in zip(d.f, d.nbar))
    te = c + 2 * sum(ni * f for ni, f in zip(d.nbar, d.f))
    return sign, qt(qe, te)


def satisfies_funeq(z: RationalFunction, sign: int, factor: Monomial) -> bool:
    return rf_equal(invert_vars(z, {Q, T}), z.shift(factor, sign))


@dataclass
class Term:
    w: DyckWord
    rho: AdmissibleComposition
    value: RationalFunction
    funeq: bool | None = None


def pairs_for(d: StructuralDescriptor) -> list[tuple[DyckWord, AdmissibleComposition]]:
    achievable = set(radical_words(d))
    out = []
    for w in enum_dyck(d.c):
        if any(L - d.epsilon not in achievable for L in w.L):
            continue
        for rho in admissible_compositions(d, w):
            out.append((w, rho))
    return out


def _term_job(args) -> Term:
    d, w, rho, check = args
    val = D_w_rho(d, w, rho)
    ok = satisfies_funeq(val, *dw_funeq_factor(d)) if check else None
    return Term(w, rho, val, ok)


def terms_for(d: StructuralDescriptor, check: bool = True, threads: int = 1) -> list[Term]:
    jobs = [(d, w, rho, check) for w, rho in pairs_for(d)]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(_term_job, jobs))
    return [_term_job(j) for j in jobs]


class TermFunEqFailure(AssertionError):
    pass


@dataclass
class ZetaResult:
    spec: LieRingSpec
    descriptor: StructuralDescriptor
    value: RationalFunction
    terms: list[Term] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.descriptor.certified


_cache: dict[str, ZetaResult] = {}


def compute(spec: LieRingSpec | str, *, check_terms: bool = True, threads: int = 1,
            override: bool = False, strict: bool = True) -> ZetaResult:
    """Assemble the zeta function and keep the individual terms.

    With ``check_terms`` every ``D_{w,rho}`` is tested against its functional
    equation during assembly; ``strict`` turns a failure into an exception.
    """
    if isinstance(spec, str):
        spec = parse_spec(spec)
    key = json.dumps(spec.to_json_obj(), sort_keys=True) + f"|{check_terms}"
    if key in _cache:
        return _cache[key]
    if spec.base != 1:
        # every D_{w,rho} and the prefactor are rational in (q, t); over O they
        # are read in the residue size q^f and the variable t^f
        inner = compute(replace(spec, base=1), check_terms=check_terms, threads=threads,
                        override=override, strict=strict)
        f = spec.base
        terms = [Term(t.w, t.rho, base_extend(t.value, f), t.funeq) for t in inner.terms]
        total = rf_sum(t.value for t in terms)
        value = simplify(base_extend(prefactor(inner.descriptor), f) * total)
        res = ZetaResult(spec, inner.descriptor, value, terms)
        _cache[key] = res
        return res
    d = descriptor_for(spec)
    if d.c > MAX_C and not override:
        raise ResourceGuard(f"c = {d.c} > {MAX_C}: Catalan growth, pass an override to proceed")
    terms = terms_for(d, check=check_terms, threads=threads)
    if check_terms and strict:
        bad = [t for t in terms if not t.funeq]
        if bad:
            raise TermFunEqFailure(f"{len(bad)} terms violate the per-term functional equation")
    total = rf_sum(t.value for t in terms)
    res = ZetaResult(spec, d, simplify(prefactor(d) * total), terms)
    _cache[key] = res
    return res


def zeta_ideal(spec: LieRingSpec | str, **kw) -> RationalFunction:
    return compute(spec, **kw).value


def base_extend(z: RationalFunction, f: int) -> RationalFunction:
    if f == 1:
        return z
    return specialize(z, {Q: Monomial.var(Q, f), T: Monomial.var(T, f)})


@dataclass(frozen=True)
class FunEqReport:
    holds: bool
    N0: int
    N1: int
    sign: int
    factor: Monomial

    def to_json_obj(self) -> dict:
        return {"holds": self.holds, "N0": self.N0, "N1": self.N1, "sign": self.sign, "factor": dict(self.factor)}


def check_local_funeq(spec: LieRingSpec | str, z: RationalFunction | None = None) -> FunEqReport:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    if z is None:
        z = zeta_ideal(spec)
    if spec.factors:
        N0, N1 = spec.N0, spec.N1
    else:
        d = descriptor_for(spec)
        N0, N1 = d.N0, d.N1
    f = spec.base
    sign, factor = (-1) ** N0, qt(f * comb(N0, 2), f * (N0 + N1))
    return FunEqReport(satisfies_funeq(z, sign, factor), N0, N1, sign, factor)


def abscissa(z: RationalFunction, n: int) -> Fraction:
    best = Fraction(n)
    for m in z.den:
        a, b = m.degree(Q), m.degree(T)
        if b == 0 or set(m.variables()) - {Q, T}:
            raise ValueError(f"factor (1-{m}) is not of the form 1 - q^a t^b with b >= 1")
        best = max(best, Fraction(a, b))
    return best
