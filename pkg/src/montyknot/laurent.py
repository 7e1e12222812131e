"""Exact Laurent polynomial arithmetic over the integers.

Provides the sparse integer Laurent polynomials used for Alexander
polynomials, the symmetric unit normalization, the L-space coefficient-form
test, and exact determinants of matrices with Laurent polynomial entries.
Determinants are computed by evaluating the matrix at integers and
interpolating, with the per-point integer determinants done either by
fraction-free (Bareiss) elimination or, for larger batches, by modular
elimination over several 30-bit primes followed by CRT reconstruction.
No floating point is used anywhere; floats appear only in bit-size
estimates that decide how many primes to use.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import MontyknotError


class NotPalindromicError(MontyknotError):
    """Raised when a polynomial admits no symmetric normalization."""


class LaurentPoly:
    """Integer Laurent polynomial stored sparsely as {exponent: coefficient}.

    Invariants: no zero coefficients are stored, so the zero polynomial is
    the empty map.  Exponents may be negative.  Instances are treated as
    immutable values; all arithmetic returns new objects.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, dict) else coeffs
            for e, v in items:
                v = int(v)
                if v:
                    e = int(e)
                    nv = c.get(e, 0) + v
                    if nv:
                        c[e] = nv
                    elif e in c:
                        del c[e]
        self._c = c

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def from_int(cls, n):
        return cls({0: n})

    @classmethod
    def t(cls, exp=1, coeff=1):
        """The monomial coeff * t**exp."""
        return cls({exp: coeff})

    def items(self):
        """Coefficient pairs sorted by increasing exponent."""
        return sorted(self._c.items())

    def coeff(self, e):
        return self._c.get(e, 0)

    @property
    def is_zero(self):
        return not self._c

    @property
    def min_exp(self):
        if not self._c:
            raise ValueError("zero polynomial has no exponent range")
        return min(self._c)

    @property
    def max_exp(self):
        if not self._c:
            raise ValueError("zero polynomial has no exponent range")
        return max(self._c)

    @property
    def span(self):
        """max_exp - min_exp; the Alexander span equals twice the genus for fibered knots."""
        return self.max_exp - self.min_exp

    def shift(self, k):
        """Multiply by t**k."""
        if not self._c or k == 0:
            return self if k == 0 else LaurentPoly(self._c)
        return LaurentPoly({e + k: v for e, v in self._c.items()})

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.from_int(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        c = dict(self._c)
        for e, v in other._c.items():
            nv = c.get(e, 0) + v
            if nv:
                c[e] = nv
            elif e in c:
                del c[e]
        out = LaurentPoly()
        out._c = c
        return out

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.from_int(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly()
            return LaurentPoly({e: v * other for e, v in self._c.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        c = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                nv = c.get(e, 0) + v1 * v2
                if nv:
                    c[e] = nv
                elif e in c:
                    del c[e]
        out = LaurentPoly()
        out._c = c
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.from_int(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def eval_int(self, x):
        """Exact value at the nonzero integer x, as a Fraction."""
        x = int(x)
        if x == 0:
            raise ZeroDivisionError("Laurent polynomial evaluated at 0")
        total = Fraction(0)
        for e, v in self._c.items():
            if e >= 0:
                total += v * x ** e
            else:
                total += Fraction(v, x ** (-e))
        return total

    def content(self):
        """Nonnegative gcd of the coefficients (0 for the zero polynomial)."""
        g = 0
        for v in self._c.values():
            g = math.gcd(g, v)
        return g

    def divide_content(self):
        g = self.content()
        if g <= 1:
            return self
        return LaurentPoly({e: v // g for e, v in self._c.items()})

    def normalize_symmetric(self):
        """Center the exponent range about 0 and make the leading coefficient positive.

        Requires p(t) = +-t^k * p(1/t) for some k; anything else signals an
        upstream computation bug and raises NotPalindromicError.
        """
        if not self._c:
            raise NotPalindromicError("zero polynomial is not normalizable")
        lo, hi = self.min_exp, self.max_exp
        if (lo + hi) % 2 != 0:
            raise NotPalindromicError(
                "exponent range of odd span cannot be centered: %s" % self
            )
        q = self.shift(-(lo + hi) // 2)
        sym = all(q.coeff(e) == q.coeff(-e) for e in q._c)
        if not sym and not all(q.coeff(e) == -q.coeff(-e) for e in q._c):
            raise NotPalindromicError("not palindromic up to units: %s" % self)
        if q.coeff(q.max_exp) < 0:
            q = -q
        return q

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c, reverse=True):
            v = self._c[e]
            mag = abs(v)
            if e == 0:
                body = str(mag)
            else:
                tpow = "t" if e == 1 else "t^%d" % e
                body = tpow if mag == 1 else "%d%s" % (mag, tpow)
            if not parts:
                parts.append(body if v > 0 else "-" + body)
            else:
                parts.append(("+ " if v > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return "LaurentPoly(%r)" % (dict(sorted(self._c.items())),)


def lspace_coefficient_form(p):
    """Test the coefficient condition satisfied by L-space knot Alexander polynomials.

    True iff every nonzero coefficient of p is +-1 and, in order of
    increasing exponent, the signs strictly alternate starting and ending
    with +1.  The endpoint condition is a normalization convention: after
    normalize_symmetric the extreme coefficients of such a polynomial are
    both +1.
    """
    if p.is_zero:
        return False
    items = p.items()
    if any(abs(v) != 1 for _, v in items):
        return False
    if items[0][1] != 1 or items[-1][1] != 1:
        return False
    for (_, a), (_, b) in zip(items, items[1:]):
        if a * b != -1:
            return False
    return True


# ---------------------------------------------------------------------------
# Exact integer matrix determinants.

def _bareiss_det(rows):
    """Fraction-free elimination; exact for any list-of-lists of ints."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                # Bareiss: division by the previous pivot is exact
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


# 30-bit primes for the modular determinant path; products of two residues
# stay below 2**60 and fit comfortably in int64.
def _gen_primes30(count):
    small = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]

    def is_prime(n):
        for p in small:
            if n % p == 0:
                return n == p
        d, s = n - 1, 0
        while d % 2 == 0:
            d //= 2
            s += 1
        for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
            x = pow(a, d, n)
            if x in (1, n - 1):
                continue
            for _ in range(s - 1):
                x = x * x % n
                if x == n - 1:
                    break
            else:
                return False
        return True

    primes = []
    n = (1 << 30) - 1
    while len(primes) < count:
        if is_prime(n):
            primes.append(n)
        n -= 2
    return primes


_PRIMES30 = _gen_primes30(72)


def _pow_mod_vec(base, exp, mod):
    """Vectorized pow(base, exp, mod) on int64 arrays with per-element moduli."""
    result = np.ones_like(base)
    b = base % mod
    e = exp.copy()
    while e.max() > 0:
        odd = (e & 1).astype(bool)
        if odd.any():
            result[odd] = (result[odd] * b[odd]) % mod[odd]
        b = (b * b) % mod
        e >>= 1
    return result


def _batched_det_mod(a, p):
    """Determinants of a batch of int64 matrices a[i] modulo p[i].

    a has shape (B, n, n) with entries already reduced mod p; p holds one
    30-bit prime per matrix.  Gaussian elimination with per-matrix partial
    pivoting, vectorized across the batch axis.
    """
    a = a.copy()
    batch, n, _ = a.shape
    p = p.astype(np.int64)
    det = np.ones(batch, dtype=np.int64)
    idx = np.arange(batch)
    for k in range(n):
        col = a[:, k:, k]
        nz = col != 0
        has_pivot = nz.any(axis=1)
        det[~has_pivot] = 0
        off = np.argmax(nz, axis=1)
        rows = k + off
        pivot_rows = a[idx, rows, :].copy()
        a[idx, rows, :] = a[:, k, :]
        a[:, k, :] = pivot_rows
        swapped = (off > 0) & (det != 0)
        det[swapped] = (p[swapped] - det[swapped]) % p[swapped]
        piv = a[:, k, k].copy()
        piv_safe = np.where(piv == 0, 1, piv)
        det = (det * piv_safe) % p
        if k + 1 < n:
            inv = _pow_mod_vec(piv_safe, p - 2, p)
            factor = (a[:, k + 1 :, k] * inv[:, None]) % p[:, None]
            a[:, k + 1 :, k:] = (
                a[:, k + 1 :, k:] - factor[:, :, None] * a[:, k : k + 1, k:]
            ) % p[:, None, None]
    return det


def _crt_signed(residues, primes):
    """Symmetric CRT lift of residues to the integer of least absolute value."""
    x = 0
    m = 1
    for r, p in zip(residues, primes):
        t = ((int(r) - x) * pow(m, -1, p)) % p
        x += m * t
        m *= p
    if 2 * x > m:
        x -= m
    return x


def _hadamard_bits(rows):
    """Upper bound on log2 |det| from row norms, plus slack."""
    bits = 0.0
    for r in rows:
        s = sum(v * v for v in r)
        if s == 0:
            return 0.0
        bits += 0.5 * math.log2(s)
    return bits


_MODULAR_MIN_SIZE = 12
_INT64_SAFE = 1 << 31


def det_int_matrices(mats):
    """Exact determinants of a batch of equal-size integer matrices.

    Small or big-entry batches go through Bareiss elimination; otherwise all
    matrices are reduced modulo enough 30-bit primes (from the Hadamard
    bound) and eliminated in one vectorized pass, then CRT-lifted.
    """
    if not mats:
        return []
    n = len(mats[0])
    if n < _MODULAR_MIN_SIZE:
        return [_bareiss_det(m) for m in mats]
    max_abs = max((abs(v) for m in mats for r in m for v in r), default=0)
    if max_abs >= _INT64_SAFE:
        return [_bareiss_det(m) for m in mats]
    bits = max(_hadamard_bits(m) for m in mats)
    n_primes = int(bits / 29.0) + 2
    if n_primes > len(_PRIMES30):
        return [_bareiss_det(m) for m in mats]
    primes = _PRIMES30[:n_primes]
    base = np.array(mats, dtype=np.int64)
    pvec = np.array(primes, dtype=np.int64)
    stacked = base[:, None, :, :] % pvec[None, :, None, None]
    flat = stacked.reshape(-1, n, n)
    pflat = np.broadcast_to(pvec, (len(mats), n_primes)).reshape(-1)
    dets_mod = _batched_det_mod(flat, pflat).reshape(len(mats), n_primes)
    return [_crt_signed(dets_mod[i], primes) for i in range(len(mats))]


def det_int_matrix(rows):
    """Exact determinant of one integer matrix."""
    return det_int_matrices([rows])[0]


class PolyMatrix:
    """Square matrix of LaurentPoly entries."""

    __slots__ = ("rows", "n")

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        n = len(rows)
        if n < 1:
            raise ValueError("PolyMatrix must have dimension >= 1")
        for r in rows:
            if len(r) != n:
                raise ValueError("PolyMatrix must be square")
            for p in r:
                if not isinstance(p, LaurentPoly):
                    raise TypeError("entries must be LaurentPoly")
        self.rows = rows
        self.n = n

    def det(self):
        """Exact determinant via evaluation at integers and interpolation.

        Each row is first scaled by a power of t so its entries are ordinary
        polynomials; the total shift is restored at the end.  The number of
        evaluation points is the degree bound plus one.
        """
        n = self.n
        total_shift = 0
        rows = []
        for r in self.rows:
            exps = [p.min_exp for p in r if not p.is_zero]
            if not exps:
                return LaurentPoly.zero()
            m = min(exps)
            total_shift += m
            rows.append([p.shift(-m) for p in r])
        degree = sum(max(p.max_exp for p in r if not p.is_zero) for r in rows)
        if degree == 0:
            val = det_int_matrix([[p.coeff(0) for p in r] for r in rows])
            return LaurentPoly({total_shift: val})
        points = _eval_points(degree + 1)
        mats = [
            [[_poly_eval_nonneg(p, x) for p in r] for r in rows] for x in points
        ]
        values = det_int_matrices(mats)
        coeffs = _interpolate_int(points, values)
        return LaurentPoly(
            {e + total_shift: c for e, c in enumerate(coeffs) if c}
        )


def _eval_points(count):
    """count distinct nonzero integers of small magnitude: 1, -1, 2, -2, ..."""
    pts = []
    k = 1
    while len(pts) < count:
        pts.append(k)
        if len(pts) < count:
            pts.append(-k)
        k += 1
    return pts


def _poly_eval_nonneg(p, x):
    """Integer value of a Laurent polynomial with nonnegative exponents."""
    total = 0
    for e, v in p._c.items():
        total += v * x ** e
    return total


def _interpolate_int(xs, ys):
    """Newton interpolation; the data must come from an integer polynomial."""
    m = len(xs)
    divided = [Fraction(y) for y in ys]
    for j in range(1, m):
        for i in range(m - 1, j - 1, -1):
            divided[i] = (divided[i] - divided[i - 1]) / (xs[i] - xs[i - j])
    # Horner expansion of the Newton form into monomial coefficients
    coeffs = [divided[m - 1]]
    for i in range(m - 2, -1, -1):
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for j, c in enumerate(coeffs):
            nxt[j + 1] += c
            nxt[j] -= xs[i] * c
        nxt[0] += divided[i]
        coeffs = nxt
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError("interpolation produced a non-integer coefficient")
        out.append(int(c))
    return out
