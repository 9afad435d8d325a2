"""Exact arithmetic in Z[s, 1/s] and 2x2 matrices over it.

The ring carries the involution s -> 1/s. The Burau variable t is never a
separate symbol: it is the monomial s**2 throughout.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .braid import BraidWord, as_word

REDUCED = "reduced"
SQUIER = "squier"
VARIANTS = (REDUCED, SQUIER)


class LaurentPoly:
    """Integer Laurent polynomial in ``s`` stored as ``{exponent: coeff}``.

    Zero coefficients are never stored, so two polynomials are equal exactly
    when their maps are equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean = {}
        for e, c in (terms or {}).items():
            if not isinstance(c, int) or not isinstance(e, int):
                raise TypeError("LaurentPoly needs integer exponents and coefficients")
            if c:
                clean[e] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def const(cls, c: int) -> LaurentPoly:
        return cls({0: c})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials are invertible in Z[s, 1/s]")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("only +-s**k are units")
            return LaurentPoly({-e * (-k): c ** (-k)})
        out = LaurentPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def unit_inverse(self) -> LaurentPoly:
        return self ** -1

    def __call__(self, s: complex) -> complex:
        return sum(c * s ** e for e, c in self._terms.items())

    def __repr__(self):
        return f"LaurentPoly({self._terms})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "s" if e == 1 else f"s^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append(("-" if c < 0 else "+") + body)
        text = " ".join(parts)
        return text[1:] if text.startswith("+") else text


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a Laurent polynomial")


def monomial(exp: int, coeff: int = 1) -> LaurentPoly:
    return LaurentPoly({exp: coeff})


def poly_add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def poly_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def poly_neg(p: LaurentPoly) -> LaurentPoly:
    return -p


def involute(p: LaurentPoly) -> LaurentPoly:
    """Apply s -> 1/s; integer coefficients are their own conjugates."""
    return LaurentPoly({-e: c for e, c in p.terms.items()})


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
S = monomial(1)
T = monomial(2)


@dataclass(frozen=True)
class LaurentMatrix:
    """2x2 matrix over Z[s, 1/s], entries stored row-major."""

    a: LaurentPoly
    b: LaurentPoly
    c: LaurentPoly
    d: LaurentPoly

    @classmethod
    def of(cls, rows) -> LaurentMatrix:
        (a, b), (c, d) = rows
        return cls(_coerce(a), _coerce(b), _coerce(c), _coerce(d))

    @property
    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: LaurentMatrix) -> LaurentMatrix:
        return LaurentMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __add__(self, other: LaurentMatrix) -> LaurentMatrix:
        return LaurentMatrix(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: LaurentMatrix) -> LaurentMatrix:
        return LaurentMatrix(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def scale(self, p) -> LaurentMatrix:
        p = _coerce(p)
        return LaurentMatrix(p * self.a, p * self.b, p * self.c, p * self.d)

    def det(self) -> LaurentPoly:
        return self.a * self.d - self.b * self.c

    def transpose(self) -> LaurentMatrix:
        return LaurentMatrix(self.a, self.c, self.b, self.d)

    def map(self, f: Callable[[LaurentPoly], LaurentPoly]) -> LaurentMatrix:
        return LaurentMatrix(f(self.a), f(self.b), f(self.c), f(self.d))

    def inverse(self) -> LaurentMatrix:
        """Adjugate over the determinant; the determinant must be a unit +-s**k."""
        inv_det = self.det().unit_inverse()
        return LaurentMatrix(self.d, -self.b, -self.c, self.a).scale(inv_det)

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


IDENTITY2 = LaurentMatrix(ONE, ZERO, ZERO, ONE)
SWAP = LaurentMatrix(ZERO, ONE, ONE, ZERO)


def star(m: LaurentMatrix) -> LaurentMatrix:
    """Conjugate transpose under s -> 1/s."""
    return m.transpose().map(involute)


def _reduced_generators():
    # t = s**2
    return {
        1: LaurentMatrix.of(((-T, 1), (0, 1))),
        2: LaurentMatrix.of(((1, 0), (T, -T))),
    }


def _squier_generators():
    return {
        1: LaurentMatrix.of(((-T, S), (0, 1))),
        2: LaurentMatrix.of(((1, 0), (S, -T))),
    }


_GENERATORS = {REDUCED: _reduced_generators(), SQUIER: _squier_generators()}


def burau_generator(i: int, variant: str = SQUIER, sign: int = 1) -> LaurentMatrix:
    """Generator matrix for sigma_i (or its inverse when ``sign=-1``)."""
    try:
        m = _GENERATORS[variant][i]
    except KeyError:
        raise ValueError(f"no generator {i!r} for variant {variant!r}") from None
    return m if sign > 0 else m.inverse()


def evaluate_word(w, variant: str = SQUIER, generators: Mapping[int, LaurentMatrix] | None = None) -> LaurentMatrix:
    """Product of generator matrices in reading order.

    ``generators`` overrides the built-in table (used to feed deliberately
    broken matrices to the identity checks).
    """
    table = generators if generators is not None else _GENERATORS[variant]
    out = IDENTITY2
    for g in as_word(w):
        m = table[g.index]
        out = out @ (m if g.sign > 0 else m.inverse())
    return out


def squier_form() -> LaurentMatrix:
    """J(s) = (s + 1/s) I - swap."""
    return IDENTITY2.scale(S + involute(S)) - SWAP


def similarity_matrix() -> LaurentMatrix:
    """D(s) = diag(1, 1/s), relating the two variants by conjugation."""
    return LaurentMatrix(ONE, ZERO, ZERO, monomial(-1))


def check_braid_relation(variant: str = SQUIER, generators=None) -> bool:
    return evaluate_word("1 2 1", variant, generators) == evaluate_word("2 1 2", variant, generators)


def check_j_unitarity(generators: Mapping[int, LaurentMatrix] | None = None, indices: Iterable[int] = (1, 2)) -> bool:
    table = generators if generators is not None else _GENERATORS[SQUIER]
    J = squier_form()
    return all(star(table[i]) @ J @ table[i] == J for i in indices)


def check_similarity(squier: Mapping[int, LaurentMatrix] | None = None,
                     reduced: Mapping[int, LaurentMatrix] | None = None) -> bool:
    """psi_i = D^-1 beta_i D for both generators, and psi_i preserves D* J D."""
    beta = squier if squier is not None else _GENERATORS[SQUIER]
    psi = reduced if reduced is not None else _GENERATORS[REDUCED]
    D = similarity_matrix()
    D_inv = D.inverse()
    J_tilde = star(D) @ squier_form() @ D
    for i in (1, 2):
        if D_inv @ beta[i] @ D != psi[i]:
            return False
        if star(psi[i]) @ J_tilde @ psi[i] != J_tilde:
            return False
    return True


def generator_table(variant: str = SQUIER) -> dict[int, LaurentMatrix]:
    return dict(_GENERATORS[variant])
