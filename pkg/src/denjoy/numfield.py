"""Exact arithmetic in the real number field generated by a Perron root.

The field is presented as Q[x]/(m) for a monic irreducible integer
polynomial m.  Elements live in the power basis 1, th, ..., th^(d-1) with
exact rational coordinates, so equality and ring identities are decidable.
Sign queries at any real embedding are answered by interval evaluation
over an isolating rational interval of the corresponding real root,
bisected until the sign is certified.

Construction from a primitive nonnegative integer matrix goes through an
exact characteristic polynomial (Faddeev-LeVerrier), a numeric root
cluster factor extraction verified by exact polynomial division, Sturm
isolation of the real roots, and an exact kernel solve for the dominant
eigenvector.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import mpmath

_ZERO = Fraction(0)
_ONE = Fraction(1)


class NotPrimitive(ValueError):
    """No power of the matrix up to the Wielandt bound is positive."""


class FactorizationFailure(ArithmeticError):
    """Root-cluster factor extraction failed within the precision budget."""


class DivisionByZero(ZeroDivisionError):
    """Inversion of the zero field element."""


# ---------------------------------------------------------------------------
# dense polynomial helpers over Fraction (coefficient lists, constant first)

def _trim(c: list[Fraction]) -> list[Fraction]:
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _poly_eval(c: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = _ZERO
    for a in reversed(c):
        acc = acc * x + a
    return acc


def _poly_divmod(num: Sequence[Fraction], den: Sequence[Fraction]):
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    if dd == 0:
        return [a / lead for a in num], [_ZERO]
    quot = [_ZERO] * max(1, len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        q = num[k] / lead
        if q:
            quot[k - dd] = q
            for i, b in enumerate(den):
                num[k - dd + i] -= q * b
    return _trim(quot), _trim(num[:dd] or [_ZERO])


def _poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a, b = _trim(list(a)), _trim(list(b))
    while b != [_ZERO]:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    lead = a[-1]
    return [x / lead for x in a] if lead != 0 else a


def _poly_deriv(c: Sequence[Fraction]) -> list[Fraction]:
    return _trim([Fraction(i) * c[i] for i in range(1, len(c))] or [_ZERO])


def _interval_eval(coeffs: Sequence[Fraction], lo: Fraction, hi: Fraction):
    """Enclosure of p([lo, hi]) by interval Horner."""
    vlo = vhi = coeffs[-1]
    for a in reversed(coeffs[:-1]):
        cands = (vlo * lo, vlo * hi, vhi * lo, vhi * hi)
        vlo, vhi = min(cands) + a, max(cands) + a
    return vlo, vhi


def _mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)]


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, constant term first, nonzero leading coefficient."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs or (len(self.coeffs) > 1 and self.coeffs[-1] == 0):
            raise ValueError("leading coefficient must be nonzero")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return self.coeffs[-1] == 1

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def fractions(self) -> list[Fraction]:
        return [Fraction(a) for a in self.coeffs]

    def divides(self, other: "IntPolynomial") -> bool:
        _, rem = _poly_divmod(other.fractions(), self.fractions())
        return rem == [_ZERO]

    def eval_matrix(self, matrix: Sequence[Sequence[int]]) -> list[list[int]]:
        """p(M) for a square integer matrix, exact (Horner on matrices)."""
        n = len(matrix)
        acc = [[0] * n for _ in range(n)]
        for a in reversed(self.coeffs):
            acc = _mat_mul(acc, matrix)
            for i in range(n):
                acc[i][i] += a
        return acc

    def __str__(self) -> str:
        return " ".join(str(a) for a in self.coeffs)


def charpoly(matrix: Sequence[Sequence[int]]) -> IntPolynomial:
    """Monic characteristic polynomial of a square integer matrix.

    Faddeev-LeVerrier recursion; every division is exact over the
    integers, so the result is exact for arbitrary-precision entries.
    """
    n = len(matrix)
    if n == 0 or any(len(row) != n for row in matrix):
        raise ValueError("matrix must be square and nonempty")
    coeffs = [0] * n + [1]
    aux = [[0] * n for _ in range(n)]          # M_0 = 0
    for k in range(1, n + 1):
        aux = _mat_mul(matrix, aux)             # A.M_{k-1}
        for i in range(n):
            aux[i][i] += coeffs[n - k + 1]      # M_k = A.M_{k-1} + c_{n-k+1} I
        prod_trace = sum(sum(matrix[i][j] * aux[j][i] for j in range(n))
                         for i in range(n))     # tr(A.M_k)
        c, rem = divmod(-prod_trace, k)
        if rem:
            raise AssertionError("Faddeev-LeVerrier division must be exact")
        coeffs[n - k] = c
    return IntPolynomial(tuple(coeffs))


# ---------------------------------------------------------------------------
# Sturm isolation


def _sturm_chain(p: list[Fraction]) -> list[list[Fraction]]:
    chain = [list(p), _poly_deriv(p)]
    while len(chain[-1]) > 1 or chain[-1][0] != 0:
        _, r = _poly_divmod(chain[-2], chain[-1])
        if r == [_ZERO]:
            break
        chain.append([-x for x in r])
    return chain


def _sign_variations(chain, x: Fraction) -> int:
    signs = []
    for c in chain:
        v = _poly_eval(c, x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def isolate_real_roots(poly: IntPolynomial) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals, each containing one real root, sorted.

    Requires a squarefree polynomial.  Intervals (lo, hi) carry a strict
    sign change of the polynomial at their endpoints.
    """
    p = poly.fractions()
    if poly.degree == 0:
        return []
    if poly.degree == 1:
        root = -p[0] / p[1]
        return [(root - 1, root + 1)]
    chain = _sturm_chain(p)
    bound = 1 + max(abs(c) for c in p[:-1]) / abs(p[-1])
    todo = [(-bound, bound)]
    found: list[tuple[Fraction, Fraction]] = []
    while todo:
        lo, hi = todo.pop()
        count = _sign_variations(chain, lo) - _sign_variations(chain, hi)
        if count == 0:
            continue
        if count == 1 and _poly_eval(p, lo) * _poly_eval(p, hi) < 0:
            found.append((lo, hi))
            continue
        mid = _split_point(p, lo, hi)
        todo.append((lo, mid))
        todo.append((mid, hi))
    found.sort()
    # shrink until pairwise disjoint
    changed = True
    while changed:
        changed = False
        for i in range(len(found) - 1):
            (alo, ahi), (blo, bhi) = found[i], found[i + 1]
            if ahi > blo:
                found[i] = _bisect_to(p, alo, ahi)
                found[i + 1] = _bisect_to(p, blo, bhi)
                changed = True
    return found


def _split_point(p: list[Fraction], lo: Fraction, hi: Fraction) -> Fraction:
    """Interior point where p does not vanish (avoids rational roots)."""
    for num, den in ((1, 2), (1, 3), (2, 5), (3, 7), (5, 11)):
        mid = lo + (hi - lo) * Fraction(num, den)
        if _poly_eval(p, mid) != 0:
            return mid
    raise FactorizationFailure("could not find a root-free split point")


def _bisect_to(p: list[Fraction], lo: Fraction, hi: Fraction):
    mid = _split_point(p, lo, hi)
    if _poly_eval(p, lo) * _poly_eval(p, mid) < 0:
        return (lo, mid)
    return (mid, hi)


# ---------------------------------------------------------------------------


class NumberField:
    """Q[th] for a real algebraic number th, with certified real embeddings.

    ``real_roots`` lists isolating intervals of the real roots of the
    minimal polynomial in ascending order; ``perron_index`` marks th_1
    (the largest real root) and ``conj_index``, when set, marks the
    chosen conjugate th_2 in (1, th_1).

    Values are immutable; root-interval refinement for sign queries is
    memoised internally and never changes the published invariants.
    """

    def __init__(self, min_poly: IntPolynomial, conj_index: int | None = None,
                 _roots: list[tuple[Fraction, Fraction]] | None = None):
        if not min_poly.is_monic:
            raise ValueError("minimal polynomial must be monic")
        self.min_poly = min_poly
        self.degree = min_poly.degree
        self._min_fr = min_poly.fractions()
        roots = list(_roots) if _roots is not None else isolate_real_roots(min_poly)
        if not roots:
            raise ValueError("field must have at least one real embedding")
        self._roots = roots
        self.perron_index = len(roots) - 1
        if conj_index is not None and not (0 <= conj_index < len(roots)):
            raise ValueError("conj_index out of range")
        self.conj_index = conj_index
        self._mpf_cache: dict[tuple[int, int], mpmath.mpf] = {}

    # -- constructors ------------------------------------------------------

    @classmethod
    def rationals(cls) -> "NumberField":
        """The degenerate degree-1 field Q (generator 0)."""
        return cls(IntPolynomial((0, 1)))

    def with_conj(self, conj_index: int | None) -> "NumberField":
        return NumberField(self.min_poly, conj_index, _roots=self._roots)

    def refined(self, index: int, width: Fraction) -> "NumberField":
        """New field value whose ``index``-th root interval has width < width."""
        nf = NumberField(self.min_poly, self.conj_index, _roots=self._roots)
        nf._refine(index, width)
        return nf

    # -- elements ----------------------------------------------------------

    @property
    def real_roots(self) -> tuple[tuple[Fraction, Fraction], ...]:
        return tuple(self._roots)

    def element(self, coords: Sequence[Fraction | int]) -> "FieldElement":
        coords = [Fraction(c) for c in coords]
        if len(coords) > self.degree:
            coords = self._reduce(coords)
        coords += [_ZERO] * (self.degree - len(coords))
        return FieldElement(self, tuple(coords))

    def zero(self) -> "FieldElement":
        return self.element([])

    def one(self) -> "FieldElement":
        return self.element([1])

    def gen(self) -> "FieldElement":
        """The generator th (the class of x)."""
        if self.degree == 1:
            return self.element([-self._min_fr[0]])
        return self.element([0, 1])

    def from_rational(self, q: Fraction | int) -> "FieldElement":
        return self.element([Fraction(q)])

    def _reduce(self, coords: list[Fraction]) -> list[Fraction]:
        d = self.degree
        m = self._min_fr
        for k in range(len(coords) - 1, d - 1, -1):
            c = coords[k]
            if c:
                coords[k] = _ZERO
                for i in range(d):
                    coords[k - d + i] -= c * m[i]
        return coords[:d]

    # -- certified root access ---------------------------------------------

    def _refine(self, index: int, width: Fraction) -> tuple[Fraction, Fraction]:
        lo, hi = self._roots[index]
        if hi - lo <= width:
            return lo, hi
        if self.degree == 1:
            root = -self._min_fr[0]
            lo, hi = root - width / 3, root + width / 3
        else:
            flo = _poly_eval(self._min_fr, lo)
            while hi - lo > width:
                mid = (lo + hi) / 2
                v = _poly_eval(self._min_fr, mid)
                if v == 0:
                    mid = (2 * lo + hi) / 3
                    v = _poly_eval(self._min_fr, mid)
                if flo * v < 0:
                    hi = mid
                else:
                    lo, flo = mid, v
        self._roots[index] = (lo, hi)
        return lo, hi

    def root_interval(self, index: int, width: Fraction | None = None):
        if width is None:
            return self._roots[index]
        return self._refine(index, width)

    def root_mpf(self, index: int, prec_bits: int = 256) -> mpmath.mpf:
        """Certified floating approximation of the ``index``-th real root.

        The isolating interval is first narrowed below 2**-(prec_bits+8),
        so the returned midpoint carries the full working precision.
        """
        key = (index, prec_bits)
        cached = self._mpf_cache.get(key)
        if cached is not None:
            return cached
        lo, hi = self._refine(index, Fraction(1, 2 ** (prec_bits + 8)))
        mid = (lo + hi) / 2
        with mpmath.workprec(prec_bits + 16):
            val = mpmath.mpf(mid.numerator) / mid.denominator
        self._mpf_cache[key] = val
        return val

    def compare_root(self, index: int, q: Fraction | int) -> int:
        """Exact sign of (root_index - q)."""
        q = Fraction(q)
        if self.degree == 1:
            root = -self._min_fr[0]
            return 0 if root == q else (1 if root > q else -1)
        if _poly_eval(self._min_fr, q) == 0:
            lo, hi = self._roots[index]
            if lo < q < hi:
                return 0
        lo, hi = self._roots[index]
        while lo < q < hi:
            lo, hi = self._refine(index, (hi - lo) / 2)
        return 1 if q <= lo else -1

    def sign_at(self, elem: "FieldElement", index: int) -> int:
        """Exact sign (-1, 0, 1) of ``elem`` at the ``index``-th embedding."""
        if elem.field is not self:
            raise ValueError("element belongs to a different field")
        if all(c == 0 for c in elem.coords):
            return 0
        coeffs = list(elem.coords)
        if self.degree == 1:
            v = _poly_eval(coeffs, -self._min_fr[0])
            return 0 if v == 0 else (1 if v > 0 else -1)
        lo, hi = self._roots[index]
        while True:
            vlo, vhi = _interval_eval(coeffs, lo, hi)
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            lo, hi = self._refine(index, (hi - lo) / 2)

    def __repr__(self) -> str:
        return f"NumberField({self.min_poly})"


@dataclass(frozen=True)
class FieldElement:
    """Element of a NumberField in the power basis, exact rational coords."""

    field: NumberField = dc_field(repr=False)
    coords: tuple[Fraction, ...] = ()

    def _check(self, other: "FieldElement"):
        if self.field is not other.field:
            raise ValueError("elements of different fields")

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check(other)
        return FieldElement(self.field,
                            tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check(other)
        return FieldElement(self.field,
                            tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return FieldElement(self.field, tuple(a * q for a in self.coords))
        self._check(other)
        a, b = self.coords, other.coords
        d = self.field.degree
        prod = [_ZERO] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return FieldElement(self.field, tuple(self.field._reduce(prod)))

    __rmul__ = __mul__

    def __radd__(self, other):
        return self.__add__(other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    def inv(self) -> "FieldElement":
        """Multiplicative inverse via extended Euclid against min_poly."""
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        m = self.field._min_fr
        r0, r1 = list(m), _trim(list(self.coords))
        s0, s1 = [_ZERO], [_ONE]
        while len(r1) > 1 or r1[0] != 0:
            q, r = _poly_divmod(r0, r1)
            s = _poly_sub(s0, _poly_mul(q, s1))
            r0, r1, s0, s1 = r1, r, s1, s
        # r0 is a nonzero constant gcd (min_poly irreducible)
        g = r0[0]
        if g == 0:
            raise DivisionByZero("element not invertible (reducible modulus?)")
        return self.field.element([c / g for c in s0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                raise DivisionByZero("division by zero rational")
            return FieldElement(self.field, tuple(a / q for a in self.coords))
        self._check(other)
        return self * other.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        acc = self.field.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def sign_at(self, index: int) -> int:
        return self.field.sign_at(self, index)

    def mpf_at(self, index: int, prec_bits: int = 256) -> mpmath.mpf:
        """Floating value at an embedding, from a certified root midpoint."""
        root = self.field.root_mpf(index, prec_bits)
        with mpmath.workprec(prec_bits):
            acc = mpmath.mpf(0)
            for c in reversed(self.coords):
                acc = acc * root + mpmath.mpf(c.numerator) / c.denominator
        return acc

    def interval_at(self, index: int, width: Fraction | None = None):
        """Rational interval enclosure of the value at an embedding."""
        lo, hi = self.field.root_interval(index, width)
        return _interval_eval(list(self.coords), lo, hi)

    def coord_strings(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" if c.denominator != 1
                else str(c.numerator) for c in self.coords]

    def __repr__(self) -> str:
        return "FieldElement(" + ", ".join(self.coord_strings()) + ")"


def _poly_mul(a, b):
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [_ZERO] * (n - len(a))
    b = list(b) + [_ZERO] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def field_arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Dispatch surface for field arithmetic: add | sub | mul | inv."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    raise ValueError(f"unknown op {op!r}")


def sign_at(elem: FieldElement, root_index: int) -> int:
    return elem.field.sign_at(elem, root_index)


# ---------------------------------------------------------------------------
# Perron field construction


def is_primitive_matrix(matrix: Sequence[Sequence[int]]) -> tuple[bool, int | None]:
    """Primitivity of a nonnegative integer matrix, with minimal witness."""
    n = len(matrix)
    if any(e < 0 for row in matrix for e in row):
        return False, None
    bound = (n - 1) ** 2 + 1 if n > 1 else 1
    b = [[1 if e > 0 else 0 for e in row] for row in matrix]
    power = b
    for k in range(1, bound + 1):
        if all(all(e for e in row) for row in power):
            return True, k
        power = [[1 if sum(power[i][m] * b[m][j] for m in range(n)) else 0
                  for j in range(n)] for i in range(n)]
    return False, None


def _cluster_roots(roots, tol):
    """Group numeric roots into (representative, multiplicity) clusters."""
    clusters: list[list] = []
    for z in sorted(roots, key=lambda z: (mpmath.re(z), mpmath.im(z))):
        for cl in clusters:
            if abs(cl[0] - z) < tol:
                cl[1] += 1
                break
        else:
            clusters.append([z, 1])
    return clusters


def _clear_denominators(fr: Sequence[Fraction]) -> IntPolynomial:
    from math import lcm

    mult = lcm(*(c.denominator for c in fr)) if len(fr) > 1 else fr[0].denominator
    return IntPolynomial(tuple(int(c * mult) for c in fr))


def _squarefree_part(poly: IntPolynomial) -> IntPolynomial:
    fr = poly.fractions()
    g = _poly_gcd(fr, _poly_deriv(fr))
    sf, _ = _poly_divmod(fr, g)
    lead = sf[-1]
    return _clear_denominators([c / lead for c in sf])


class _PerronWitness:
    """Certified isolating interval of the largest real root of charpoly."""

    def __init__(self, cp: IntPolynomial):
        self.sf = _squarefree_part(cp)
        self._sf_fr = self.sf.fractions()
        roots = isolate_real_roots(self.sf)
        if not roots:
            raise FactorizationFailure("charpoly has no real root")
        self.interval = roots[-1]

    def _bisect(self):
        self.interval = _bisect_to(self._sf_fr, *self.interval)

    def is_root_of(self, cand: IntPolynomial) -> bool:
        """Exact: does the Perron root satisfy ``cand``?

        The interval isolates exactly one root of the squarefree part of
        charpoly, and every root of a verified factor is among those, so
        a strict sign change of ``cand`` on the interval decides it.
        """
        for _ in range(64):
            lo, hi = self.interval
            a, b = cand(lo), cand(hi)
            if a != 0 and b != 0:
                return (a < 0) != (b < 0)
            self._bisect()
        raise FactorizationFailure("could not separate candidate factor roots")


def _minpoly_from_clusters(cp: IntPolynomial, dps: int,
                           witness: _PerronWitness) -> IntPolynomial | None:
    """One precision rung of the factor extraction; None if inconclusive."""
    with mpmath.workdps(dps):
        try:
            roots = mpmath.polyroots([mpmath.mpf(c) for c in reversed(cp.coeffs)],
                                     maxsteps=200, extraprec=dps * 4)
        except mpmath.libmp.NoConvergence:
            return None
        tol = mpmath.mpf(10) ** (-dps // 3)
        clusters = _cluster_roots(roots, tol)
        # units: real clusters alone, complex clusters paired with conjugates
        reals, pairs, used = [], [], set()
        for i, (z, _) in enumerate(clusters):
            if abs(mpmath.im(z)) < tol:
                reals.append((i, mpmath.re(z)))
            elif i not in used and mpmath.im(z) > 0:
                for j, (w, _) in enumerate(clusters):
                    if j != i and abs(w - mpmath.conj(z)) < tol:
                        pairs.append((i, j, z))
                        used.update((i, j))
                        break
                else:
                    return None
        if not reals or len(reals) + 2 * len(pairs) != len(clusters):
            return None
        perron_unit = max(reals, key=lambda t: t[1])
        units = ([("r", i, [v]) for i, v in reals]
                 + [("c", i, [z, mpmath.conj(z)]) for i, j, z in pairs])
        perron_pos = next(k for k, u in enumerate(units)
                          if u[0] == "r" and u[1] == perron_unit[0])
        rest = [k for k in range(len(units)) if k != perron_pos]
        subsets = []
        for size in range(len(rest) + 1):
            for combo in itertools.combinations(rest, size):
                chosen = [perron_pos, *combo]
                deg = sum(len(units[k][2]) for k in chosen)
                subsets.append((deg, chosen))
        subsets.sort(key=lambda t: (t[0], t[1]))
        for _, chosen in subsets:
            coeffs = [mpmath.mpc(1)]
            for k in chosen:
                for root in units[k][2]:
                    coeffs = _poly_mul_num(coeffs, root)
            ints = []
            ok = True
            for c in coeffs:
                r = mpmath.nint(mpmath.re(c))
                if abs(c - r) > 0.25 or abs(mpmath.im(c)) > 0.25:
                    ok = False
                    break
                ints.append(int(r))
            if not ok:
                continue
            try:
                cand = IntPolynomial(tuple(reversed(ints)))
            except ValueError:
                continue
            if cand.degree == 0 or not cand.is_monic:
                continue
            if cand.divides(cp) and witness.is_root_of(cand):
                return cand
    return None


def _poly_mul_num(coeffs, root):
    """Multiply a monic numeric polynomial (descending coeffs) by (x - root)."""
    out = [mpmath.mpc(0)] * (len(coeffs) + 1)
    for i, c in enumerate(coeffs):
        out[i] += c
        out[i + 1] -= c * root
    return out


def perron_field(matrix: Sequence[Sequence[int]]) -> tuple[NumberField, list[FieldElement]]:
    """Field of the Perron root of a primitive matrix, plus its eigenvector.

    The eigenvector solves (M - th I) v = 0 exactly over the field and is
    normalised to sum 1; every coordinate is positive at the Perron
    embedding.
    """
    ok, _ = is_primitive_matrix(matrix)
    if not ok:
        raise NotPrimitive("matrix is not primitive")
    cp = charpoly(matrix)
    witness = _PerronWitness(cp)
    min_poly = None
    for dps in (60, 120, 240, 480):
        min_poly = _minpoly_from_clusters(cp, dps, witness)
        if min_poly is not None:
            break
    if min_poly is None:
        raise FactorizationFailure("could not certify an integer factor")
    nf = NumberField(min_poly)
    return nf, perron_eigenvector(matrix, nf)


def perron_eigenvector(matrix: Sequence[Sequence[int]],
                       nf: NumberField) -> list[FieldElement]:
    """Exact dominant eigenvector of ``matrix`` over an existing field.

    Solves (M - th I) v = 0 by exact elimination, normalises the result
    to sum 1 and certifies positivity at the Perron embedding.  Useful
    for the transpose of a loop matrix, whose eigenvector lives in the
    same field as the length vector but differs from it.
    """
    lam = _kernel_vector(matrix, nf)
    total = nf.zero()
    for v in lam:
        total = total + v
    lam = [v / total for v in lam]
    for v in lam:
        if v.sign_at(nf.perron_index) <= 0:
            raise FactorizationFailure("eigenvector not positive at Perron root")
    return lam


def _kernel_vector(matrix: Sequence[Sequence[int]], nf: NumberField) -> list[FieldElement]:
    """One-dimensional kernel of (M - th I), by exact Gaussian elimination."""
    n = len(matrix)
    th = nf.gen()
    rows = [[nf.from_rational(matrix[i][j]) - (th if i == j else nf.zero())
             for j in range(n)] for i in range(n)]
    pivots: list[tuple[int, int]] = []
    pivot_cols: set[int] = set()
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, n) if not rows[i][col].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][col].inv()
        rows[r] = [e * inv for e in rows[r]]
        for i in range(n):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append((r, col))
        pivot_cols.add(col)
        r += 1
    free = [c for c in range(n) if c not in pivot_cols]
    if len(free) != 1:
        raise FactorizationFailure(
            f"kernel of (M - th I) has dimension {len(free)}, expected 1")
    fc = free[0]
    vec = [nf.zero()] * n
    vec[fc] = nf.one()
    for rr, col in pivots:
        vec[col] = -rows[rr][fc]
    return vec


# ---------------------------------------------------------------------------
# hypothesis checks


@dataclass(frozen=True)
class HypothesisReport:
    """Verdicts for the spectral hypotheses on a Perron field.

    ``verdicts`` holds, for every real embedding other than the Perron
    one, whether that root lies strictly inside (1, th_1).  The
    hypotheses pass when at least one does; ``conj_index`` is then chosen
    by ``policy`` (largest valid root by default).
    """

    passes: bool
    perron_index: int
    conj_index: int | None
    verdicts: tuple[tuple[int, bool], ...]
    policy: str
    failing_condition: str | None = None

    def to_dict(self) -> dict:
        return {
            "passes": self.passes,
            "perron_index": self.perron_index,
            "conj_index": self.conj_index,
            "verdicts": [{"root_index": i, "in_range": ok}
                         for i, ok in self.verdicts],
            "policy": self.policy,
            "failing_condition": self.failing_condition,
        }


def check_hypotheses(nf: NumberField, policy: str = "largest") -> HypothesisReport:
    """Check for a real conjugate th_2 with 1 < th_2 < th_1.

    Conjugacy with th_1 is automatic: the minimal polynomial is
    irreducible and divides the characteristic polynomial, so each of its
    roots is an eigenvalue conjugate to th_1.  Only the placement in
    (1, th_1) needs certification.
    """
    verdicts = []
    valid = []
    for i in range(len(nf.real_roots)):
        if i == nf.perron_index:
            continue
        ok = nf.compare_root(i, 1) > 0   # already < th_1: intervals are sorted
        verdicts.append((i, ok))
        if ok:
            valid.append(i)
    if not valid:
        reason = ("no real conjugate exceeds 1 (condition (3))"
                  if verdicts else "no real conjugate exists (condition (2))")
        return HypothesisReport(False, nf.perron_index, None, tuple(verdicts),
                                policy, reason)
    if policy == "largest":
        conj = max(valid)
    elif policy == "smallest":
        conj = min(valid)
    elif policy.startswith("index:"):
        conj = int(policy.split(":", 1)[1])
        if conj not in valid:
            return HypothesisReport(False, nf.perron_index, None,
                                    tuple(verdicts), policy,
                                    f"requested root {conj} is not in (1, th_1)")
    else:
        raise ValueError(f"unknown theta2 policy {policy!r}")
    return HypothesisReport(True, nf.perron_index, conj, tuple(verdicts), policy)
