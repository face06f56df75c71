"""Exact real-root isolation for polynomials with rational coefficients.

Everything here is exact: polynomials are normalised to primitive integer
coefficient lists (ascending powers), probe points are rationals, and root
counts come from Sturm-sequence sign variations.  A Descartes bound in the
Bernstein basis is used as a cheap exact prefilter (variation count 0
certifies an interval root-free, 1 certifies a single simple root) before
a Sturm chain is built; the chain drives all remaining cases.

Used by the exact mode counter, where the polynomials are the derivative
pieces of a density estimate in a scaled local variable, so degrees stay
small (2*theta - 1) and intervals are O(1).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

__all__ = [
    "primitive_int",
    "poly_derivative",
    "eval_at",
    "sign_at",
    "one_sided_sign",
    "sturm_chain",
    "count_roots",
    "bernstein_variations",
    "isolate_roots",
    "refine_crossing",
    "IsolatedRoot",
]

Rational = Fraction | int


def trim(coeffs: Sequence) -> list:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def is_zero(coeffs: Sequence) -> bool:
    return all(c == 0 for c in coeffs)


def primitive_int(coeffs: Sequence[Rational]) -> list[int]:
    """Scale by a positive rational to primitive integer coefficients."""
    cs = trim(coeffs)
    if not cs:
        return []
    fracs = [Fraction(c) for c in cs]
    den = math.lcm(*(f.denominator for f in fracs))
    ints = [int(f * den) for f in fracs]
    g = math.gcd(*(abs(i) for i in ints))
    return [i // g for i in ints]


def poly_derivative(coeffs: Sequence) -> list:
    if len(coeffs) <= 1:
        return []
    return [k * c for k, c in enumerate(coeffs)][1:]


def eval_at(coeffs: Sequence, x: Rational) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def sign_at(coeffs: Sequence[int], x: Fraction) -> int:
    """Exact sign of p(x) at a rational point, integer arithmetic only."""
    cs = trim(coeffs)
    if not cs:
        return 0
    p, q = x.numerator, x.denominator
    acc = cs[-1]
    qpow = 1
    for c in reversed(cs[:-1]):
        qpow *= q
        acc = acc * p + c * qpow
    return (acc > 0) - (acc < 0)


def taylor_shift(coeffs: Sequence[Rational], a: Rational) -> list[Fraction]:
    """Coefficients of p(a + t), ascending in t."""
    out = [Fraction(0)] * max(len(coeffs), 1)
    for c in reversed(list(coeffs)):
        prev = out
        out = [Fraction(0)] * len(prev)
        for k in range(len(prev) - 1):
            out[k + 1] += prev[k]
        for k in range(len(prev)):
            out[k] += Fraction(a) * prev[k]
        out[0] += Fraction(c)
    return out


def one_sided_sign(coeffs: Sequence[int], a: Rational, side: int) -> int:
    """Sign of p(a + side * 0+): first nonvanishing derivative at a decides.

    Expects integer coefficients; the common case (p(a) != 0) costs one
    integer Horner pass.
    """
    a = Fraction(a)
    q = trim(coeffs)
    k = 0
    while q:
        s = sign_at(q, a)
        if s != 0:
            return s if (side > 0 or k % 2 == 0) else -s
        q = trim(poly_derivative(q))
        k += 1
    return 0


def sturm_chain(coeffs: Sequence[int]) -> list[list[int]]:
    """Sturm sequence of p, each element normalised to a primitive integer
    polynomial (positive rescaling preserves sign variations).

    Without a square-free reduction the variation difference counts
    distinct real roots, which is what mode counting needs.
    """
    p0 = primitive_int(coeffs)
    chain = [p0]
    d = poly_derivative(p0)
    if trim(d):
        chain.append(primitive_int(d))
    while len(chain) >= 2:
        r = _neg_remainder(chain[-2], chain[-1])
        if not r:
            break
        chain.append(primitive_int(r))
    return chain


def _neg_remainder(f: Sequence[int], g: Sequence[int]) -> list[Fraction]:
    rem = [Fraction(c) for c in f]
    glead = Fraction(g[-1])
    dg = len(g) - 1
    while len(trim(rem)) - 1 >= dg and trim(rem):
        rem = trim(rem)
        k = len(rem) - 1 - dg
        factor = rem[-1] / glead
        for i, c in enumerate(g):
            rem[i + k] -= factor * c
        rem[-1] = Fraction(0)
    return [-c for c in trim(rem)]


def _variations(signs: Sequence[int]) -> int:
    v = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev != 0 and s != prev:
            v += 1
        prev = s
    return v


def chain_variations(chain: list[list[int]], x: Fraction) -> int:
    return _variations([sign_at(p, x) for p in chain])


def count_roots(chain: list[list[int]], a: Fraction, b: Fraction) -> int:
    """Distinct real roots in (a, b]; requires p(a) != 0."""
    return chain_variations(chain, a) - chain_variations(chain, b)


def bernstein_variations(coeffs: Sequence[Rational], a: Fraction, b: Fraction) -> int:
    """Sign variations of the Bernstein coefficients of p on [a, b].

    Exact Descartes bound: the number of roots in (a, b), counted with
    multiplicity, is at most this and of the same parity.
    """
    shifted = taylor_shift(coeffs, a)
    width = Fraction(b) - Fraction(a)
    scaled = [c * width**k for k, c in enumerate(shifted)]
    d = len(scaled) - 1
    bern = []
    for j in range(d + 1):
        s = Fraction(0)
        for i in range(j + 1):
            s += scaled[i] * Fraction(math.comb(j, i), math.comb(d, i))
        bern.append(s)
    return _variations([(c > 0) - (c < 0) for c in bern])


class IsolatedRoot:
    """One distinct real root bracketed in (lo, hi) with p(lo), p(hi) != 0.

    ``sign_change`` is (sign before, sign after); equal signs mean the root
    has even multiplicity (a tangency).
    """

    __slots__ = ("lo", "hi", "sign_before", "sign_after")

    def __init__(self, lo: Fraction, hi: Fraction, sign_before: int, sign_after: int):
        self.lo = lo
        self.hi = hi
        self.sign_before = sign_before
        self.sign_after = sign_after

    @property
    def is_crossing(self) -> bool:
        return self.sign_before != self.sign_after

    def __repr__(self) -> str:  # pragma: no cover
        return f"IsolatedRoot(({float(self.lo)}, {float(self.hi)}), {self.sign_before}->{self.sign_after})"


_PROBE_NUMERATORS = (1, 53, 61, 47, 89, 31, 71, 13, 97, 41)


def _root_free_probe(coeffs: Sequence[int], a: Fraction, b: Fraction) -> Fraction:
    """A point inside (a, b) where p does not vanish."""
    width = b - a
    denominators = (2, 107, 128, 97, 181, 64, 144, 27, 195, 83)
    for num, den in zip(_PROBE_NUMERATORS, denominators):
        x = a + width * Fraction(num, den)
        if sign_at(coeffs, x) != 0:
            return x
    # more roots than probes is impossible for the degrees used here, but
    # fall back to a dense rational sweep for safety
    for k in range(2, 4 * len(coeffs)):
        x = a + width * Fraction(2 * k - 1, 2 * k)
        if sign_at(coeffs, x) != 0:
            return x
    raise ArithmeticError("could not find a root-free probe point")


def isolate_roots(coeffs: Sequence[int], a: Fraction, b: Fraction) -> list[IsolatedRoot]:
    """Isolating intervals for every distinct root of p in the open (a, b).

    Requires p(a) != 0 and p(b) != 0 (deflate known endpoint roots first).
    """
    p = primitive_int(coeffs)
    if not p or len(p) == 1:
        return []
    va = bernstein_variations(p, a, b)
    if va == 0:
        return []
    if va == 1:
        return [IsolatedRoot(a, b, sign_at(p, a), sign_at(p, b))]
    chain = sturm_chain(p)
    out: list[IsolatedRoot] = []
    _isolate_rec(p, chain, a, b, count_roots(chain, a, b), out)
    out.sort(key=lambda r: r.lo)
    return out


def _isolate_rec(p, chain, a, b, n_roots, out) -> None:
    if n_roots <= 0:
        return
    sa, sb = sign_at(p, a), sign_at(p, b)
    if n_roots == 1:
        out.append(IsolatedRoot(a, b, sa, sb))
        return
    mid = (a + b) / 2
    if sign_at(p, mid) == 0:
        mid = _root_free_probe(p, a, b)
    left = count_roots(chain, a, mid)
    _isolate_rec(p, chain, a, mid, left, out)
    _isolate_rec(p, chain, mid, b, n_roots - left, out)


def refine_crossing(
    coeffs: Sequence[int], root: IsolatedRoot, tol: Fraction = Fraction(1, 10**12)
) -> Fraction:
    """Bisect a sign-changing root bracket down to the given width."""
    if not root.is_crossing:
        raise ValueError("refinement by sign bisection needs a sign change")
    lo, hi = root.lo, root.hi
    s_lo = root.sign_before
    while hi - lo > tol:
        mid = (lo + hi) / 2
        sm = sign_at(coeffs, mid)
        if sm == 0:
            return mid
        if sm == s_lo:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2
