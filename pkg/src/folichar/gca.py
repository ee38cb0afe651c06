"""Exact graded-commutative algebra over the rationals.

Elements are finite sums of monomials ``coeff * funcs * word``.  ``funcs`` is a
sorted multiset of degree-0 function symbols, ``word`` a sorted tuple of graded
generators where odd generators occur at most once and even generators may
repeat (powers).  Coefficients are ``gmpy2.mpq`` and never rounded.
"""
from __future__ import annotations

from bisect import bisect_right
from enum import IntEnum
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, NamedTuple

from gmpy2 import mpq


class Family(IntEnum):
    """Generator families; the integer value is the primary sort key."""

    SIMPLEX_DT = 0
    WEIL_OMEGA = 1
    WEIL_CURV = 2
    PULLBACK_1FORM = 3
    PULLBACK_2FORM = 4
    COORD_DZ = 5
    LEAFWISE_1FORM = 6
    MAURER_CARTAN = 7
    DERIVED_COEFF = 8
    WO_TRANSGRESSION = 9
    WO_CHERN = 10


class FuncKind(IntEnum):
    SIMPLEX_PARAM = 0
    OPAQUE = 1


class Gen(NamedTuple):
    family: int
    name: str
    index: tuple
    degree: int

    def label(self) -> str:
        return _label(self.name, self.index)


class Func(NamedTuple):
    kind: int
    name: str
    index: tuple = ()

    def label(self) -> str:
        return _label(self.name, self.index)


def _label(name: str, index: tuple) -> str:
    if not index:
        return name
    return f"{name}[{','.join(str(i) for i in index)}]"


class AlgebraError(Exception):
    pass


class MissingImageError(AlgebraError):
    """A derivation or homomorphism was applied to a symbol it does not know."""


Key = tuple  # (funcs, word)


def as_q(x) -> mpq:
    return x if type(x) is mpq else mpq(x)


def merge_words(w1: tuple, w2: tuple):
    """Normal-order the concatenation ``w1 w2``; returns ``(sign, word)``, sign 0 if it vanishes."""
    if not w1:
        return 1, w2
    if not w2:
        return 1, w1
    if w1[-1] < w2[0]:
        return 1, w1 + w2
    odd1 = [g for g in w1 if g[3] & 1]
    sign = 1
    if odd1:
        n1 = len(odd1)
        for g in w2:
            if g[3] & 1:
                i = bisect_right(odd1, g)
                if i and odd1[i - 1] == g:
                    return 0, None
                if (n1 - i) & 1:
                    sign = -sign
    return sign, tuple(sorted(w1 + w2))


def _merge_funcs(f1: tuple, f2: tuple) -> tuple:
    if not f1:
        return f2
    if not f2:
        return f1
    if f1[-1] <= f2[0]:
        return f1 + f2
    return tuple(sorted(f1 + f2))


def word_degree(word: tuple) -> int:
    return sum(g[3] for g in word)


def _add_into(out: dict, key, c) -> None:
    v = out.get(key)
    if v is None:
        out[key] = c
    else:
        v = v + c
        if v:
            out[key] = v
        else:
            del out[key]


class GradedElement:
    """Immutable normal-form element; build with the class methods or arithmetic."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | None = None, *, _trusted: bool = False):
        if _trusted:
            self._terms = terms
        else:
            self._terms = _normalize(terms or {})
        self._hash = None

    # construction
    @classmethod
    def zero(cls) -> "GradedElement":
        return cls({}, _trusted=True)

    @classmethod
    def scalar(cls, c) -> "GradedElement":
        c = as_q(c)
        return cls({((), ()): c} if c else {}, _trusted=True)

    @classmethod
    def one(cls) -> "GradedElement":
        return cls.scalar(1)

    @classmethod
    def gen(cls, g: Gen, c=1) -> "GradedElement":
        return cls({((), (g,)): as_q(c)}, _trusted=True)

    @classmethod
    def func(cls, f: Func, power: int = 1, c=1) -> "GradedElement":
        return cls({((f,) * power, ()): as_q(c)}, _trusted=True)

    @classmethod
    def monomial(cls, c, funcs: Iterable[Func] = (), gens: Iterable[Gen] = ()) -> "GradedElement":
        """Product ``c * funcs * g1 g2 ...`` with generators taken in the given order."""
        out = cls.scalar(c)
        if funcs:
            out = out * cls({(tuple(sorted(funcs)), ()): mpq(1)}, _trusted=True)
        for g in gens:
            out = out * cls.gen(g)
        return out

    # inspection
    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def __iter__(self) -> Iterator:
        """Yield ``(coeff, funcs, word)`` triples in canonical order."""
        for key in sorted(self._terms):
            yield self._terms[key], key[0], key[1]

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degrees(self) -> set:
        return {word_degree(w) for (_, w) in self._terms}

    def degree(self) -> int | None:
        """Homogeneous degree, or None for zero / inhomogeneous elements."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def generators(self) -> set:
        return {g for (_, w) in self._terms for g in w}

    def functions(self) -> set:
        return {f for (fs, _) in self._terms for f in fs}

    def filter(self, pred) -> "GradedElement":
        """Keep monomials whose key satisfies ``pred(funcs, word)``."""
        return GradedElement({k: c for k, c in self._terms.items() if pred(*k)}, _trusted=True)

    def scalar_value(self):
        """The constant coefficient, error if any non-constant monomial is present."""
        if not self._terms:
            return mpq(0)
        if set(self._terms) != {((), ())}:
            raise AlgebraError("element is not a scalar")
        return self._terms[((), ())]

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        if len(other._terms) > len(self._terms):
            self, other = other, self
        out = dict(self._terms)
        for k, c in other._terms.items():
            _add_into(out, k, c)
        return GradedElement(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return GradedElement({k: -c for k, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, GradedElement):
            return wedge(self, other)
        c = as_q(other)
        if not c:
            return GradedElement.zero()
        return GradedElement({k: v * c for k, v in self._terms.items()}, _trusted=True)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            try:
                other = _coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        if not self._terms:
            return "GradedElement(0)"
        return "GradedElement(" + " + ".join(_fmt_term(c, f, w) for c, f, w in self) + ")"

    def dump(self) -> str:
        """Canonical text form, one monomial per line, sorted."""
        return "".join(_fmt_term(c, f, w) + "\n" for c, f, w in self)


def _coerce(x) -> GradedElement:
    if isinstance(x, GradedElement):
        return x
    return GradedElement.scalar(x)


def _normalize(terms: Mapping) -> dict:
    """Bring an arbitrary ``{(funcs, word): coeff}`` mapping into normal form."""
    out: dict = {}
    for (funcs, word), c in terms.items():
        c = as_q(c)
        if not c:
            continue
        sign, w = 1, ()
        for g in word:
            s, w = merge_words(w, (g,))
            if not s:
                break
            sign *= s
        else:
            _add_into(out, (tuple(sorted(funcs)), w), c if sign > 0 else -c)
    return out


def _fmt_term(c, funcs: tuple, word: tuple) -> str:
    return f"{c} * {_fmt_powers(funcs, Func.label)} * {_fmt_word(word)}"


def _fmt_powers(items: tuple, lab) -> str:
    if not items:
        return "1"
    parts = []
    i = 0
    while i < len(items):
        j = i
        while j < len(items) and items[j] == items[i]:
            j += 1
        parts.append(lab(items[i]) + (f"^{j - i}" if j - i > 1 else ""))
        i = j
    return " ".join(parts)


def _fmt_word(word: tuple) -> str:
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        parts.append(word[i].label() + (f"^{j - i}" if j - i > 1 else ""))
        i = j
    return " ∧ ".join(parts)


def wedge(a: GradedElement, b: GradedElement) -> GradedElement:
    out: dict = {}
    bt = b._terms
    for (f1, w1), c1 in a._terms.items():
        for (f2, w2), c2 in bt.items():
            s, w = merge_words(w1, w2)
            if not s:
                continue
            c = c1 * c2
            _add_into(out, (_merge_funcs(f1, f2), w), c if s > 0 else -c)
    return GradedElement(out, _trusted=True)


def wedge_all(elems: Iterable[GradedElement]) -> GradedElement:
    out = GradedElement.one()
    for e in elems:
        out = wedge(out, e)
    return out


def homogeneous_part(a: GradedElement, n: int) -> GradedElement:
    return a.filter(lambda f, w: word_degree(w) == n)


def family_count(word: tuple, family: int) -> int:
    return sum(1 for g in word if g[0] == family)


def capped_wedge(a: GradedElement, b: GradedElement, caps: Mapping[int, int],
                 exact: bool = False) -> GradedElement:
    """Wedge product dropping monomials whose count of family ``f`` exceeds ``caps[f]``
    (or differs from it, with ``exact``).

    Bucketing by family counts skips whole blocks of term pairs that cannot survive.
    """
    fams = tuple(caps)
    limits = tuple(caps[f] for f in fams)

    def buckets(x):
        out: dict = {}
        for k, c in x._terms.items():
            cnt = tuple(family_count(k[1], f) for f in fams)
            out.setdefault(cnt, {})[k] = c
        return out

    ba, bb = buckets(a), buckets(b)
    out: dict = {}
    for ca, ta in ba.items():
        for cb, tb in bb.items():
            if exact:
                if any(x + y != m for x, y, m in zip(ca, cb, limits)):
                    continue
            elif any(x + y > m for x, y, m in zip(ca, cb, limits)):
                continue
            for (f1, w1), c1 in ta.items():
                for (f2, w2), c2 in tb.items():
                    s, w = merge_words(w1, w2)
                    if not s:
                        continue
                    c = c1 * c2
                    _add_into(out, (_merge_funcs(f1, f2), w), c if s > 0 else -c)
    return GradedElement(out, _trusted=True)


class DerivationSpec(NamedTuple):
    degree: int
    gen_images: Mapping
    func_images: Mapping = MappingProxyType({})


def _check_images(deg_shift: int, images: Mapping, sources_deg) -> None:
    for src, img in images.items():
        d = img.degree()
        if img and d != sources_deg(src) + deg_shift:
            raise AlgebraError(f"image of {src} has degree {d}, expected {sources_deg(src) + deg_shift}")


def make_derivation(degree: int, gen_images: Mapping, func_images: Mapping | None = None,
                    check: bool = True) -> DerivationSpec:
    if check:
        _check_images(degree, gen_images, lambda g: g.degree)
        _check_images(degree, func_images or {}, lambda f: 0)
    return DerivationSpec(degree, MappingProxyType(dict(gen_images)),
                          MappingProxyType(dict(func_images or {})))


def _func_image(D: DerivationSpec, f: Func) -> GradedElement:
    img = D.func_images.get(f)
    if img is None:
        if D.degree < 0:
            return GradedElement.zero()
        raise MissingImageError(f"derivation has no image for function {f.label()}")
    return img


def derive(D: DerivationSpec, a: GradedElement) -> GradedElement:
    out: dict = {}
    odd_D = D.degree & 1
    gimg = D.gen_images
    for (funcs, word), c in a._terms.items():
        # derivative hitting the degree-0 function factor
        i = 0
        while i < len(funcs):
            j = i
            while j < len(funcs) and funcs[j] == funcs[i]:
                j += 1
            img = _func_image(D, funcs[i])
            if img:
                rest = funcs[:i] + funcs[i + 1:]
                cc = c * (j - i)
                for (fi, wi), ci in img._terms.items():
                    s, w = merge_words(wi, word)
                    if s:
                        v = cc * ci
                        _add_into(out, (_merge_funcs(rest, fi), w), v if s > 0 else -v)
            i = j
        # derivative hitting the word
        pdeg = 0
        i = 0
        while i < len(word):
            g = word[i]
            j = i
            while j < len(word) and word[j] == g:
                j += 1
            img = gimg.get(g)
            if img is None:
                raise MissingImageError(f"derivation has no image for generator {g.label()}")
            if img:
                mult = j - i
                sign0 = -1 if (odd_D and pdeg & 1) else 1
                prefix = word[:i]
                suffix = word[i + 1:]
                cc = c * mult * sign0
                for (fi, wi), ci in img._terms.items():
                    s1, w = merge_words(prefix, wi)
                    if not s1:
                        continue
                    s2, w = merge_words(w, suffix)
                    if not s2:
                        continue
                    v = cc * ci
                    _add_into(out, (_merge_funcs(funcs, fi), w), v if s1 * s2 > 0 else -v)
            pdeg += g[3] * (j - i)
            i = j
    return GradedElement(out, _trusted=True)


class AlgebraHom:
    """Multiplicative, degree-preserving map given on generators.

    Generators whose family is in ``fixed_families`` are mapped to themselves;
    any other generator without an image raises :class:`MissingImageError`.
    Function symbols are fixed unless listed in ``func_images``.
    """

    def __init__(self, gen_images: Mapping, func_images: Mapping | None = None,
                 fixed_families: Iterable[int] = (), check: bool = True):
        self.gen_images = MappingProxyType(dict(gen_images))
        self.func_images = MappingProxyType(dict(func_images or {}))
        self.fixed_families = frozenset(fixed_families)
        if check:
            _check_images(0, self.gen_images, lambda g: g.degree)
            _check_images(0, self.func_images, lambda f: 0)

    def image(self, g: Gen) -> GradedElement:
        img = self.gen_images.get(g)
        if img is None:
            if g.family in self.fixed_families:
                return GradedElement.gen(g)
            raise MissingImageError(f"homomorphism has no image for generator {g.label()}")
        return img


def hom_apply(H: AlgebraHom, a: GradedElement) -> GradedElement:
    cache: dict = {(): GradedElement.one()}

    def word_image(w: tuple) -> GradedElement:
        r = cache.get(w)
        if r is None:
            r = wedge(word_image(w[:-1]), H.image(w[-1]))
            cache[w] = r
        return r

    fcache: dict = {}

    def funcs_image(fs: tuple) -> GradedElement:
        r = fcache.get(fs)
        if r is None:
            r = GradedElement.one()
            kept = []
            for f in fs:
                img = H.func_images.get(f)
                if img is None:
                    kept.append(f)
                else:
                    r = wedge(r, img)
            if kept:
                r = wedge(GradedElement({(tuple(kept), ()): mpq(1)}, _trusted=True), r)
            fcache[fs] = r
        return r

    out: dict = {}
    for (funcs, word), c in a._terms.items():
        img = wedge(funcs_image(funcs), word_image(word))
        for k, v in img._terms.items():
            _add_into(out, k, v * c)
    return GradedElement(out, _trusted=True)


def lin_comb(pairs: Iterable) -> GradedElement:
    """Sum of ``c * x`` over ``(c, x)`` pairs."""
    out: dict = {}
    for c, x in pairs:
        c = as_q(c)
        if not c:
            continue
        for k, v in x._terms.items():
            _add_into(out, k, v * c)
    return GradedElement(out, _trusted=True)
