"""Exact arithmetic in the completed Grothendieck ring of varieties.

Elements live in the subring generated by L (the affine-line class), Pic
(the Jacobian class), and the symmetric-power classes of the curve, with
denominators restricted to products of (L^a - 1) factors and powers of L.
Fractions are kept in a canonical reduced form so equal ring elements compare
equal as Python objects.

Symmetric powers are not independent: the Abel-Jacobi stratification gives
    [C^(d)] = L^{d-g+1} [C^(2g-2-d)] + Pic * [P^{d-g}]   for d >= g,
so only C1..C_{g-1} are kept as atoms and higher powers are rewritten on
construction.  Without this quotient, equal ring elements reached along
different computation paths would not share a normal form.  At genus 0 the
atom set degenerates to {L} (Pic = 1); at genus 1 it is {L, Pic}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .errors import (
    DivisionOutsideRing,
    InconsistentZeta,
    MissingZetaData,
    NonConvergentEvaluation,
)
from . import poly
from .poly import (
    U_ONE,
    bundle_cyclotomic,
    p_add,
    p_const,
    p_is_zero,
    p_items_sorted,
    p_mul,
    p_neg,
    p_pow,
    p_scale,
    u_deg,
    u_div_exact,
    u_factor_cyclotomic,
    u_gcd,
    u_is_one,
    u_lpower_minus_one,
    u_mul,
    u_to_multivar,
    u_trim,
)


def max_atom(genus):
    """Largest independent symmetric-power index: g - 1."""
    return max(genus - 1, 0)


def num_vars(genus):
    """L, then Pic (g >= 1), then C1..C_{g-1} (g >= 2)."""
    if genus == 0:
        return 1
    return 2 + max_atom(genus)


def var_names(genus):
    names = ["L"]
    if genus >= 1:
        names.append("Pic")
    for i in range(1, max_atom(genus) + 1):
        names.append(f"C{i}")
    return names


class MotiveClass:
    """Canonical fraction num/den with num multivariate and den in Z[L]."""

    __slots__ = ("genus", "num", "den", "_hash")

    def __init__(self, genus, num, den=U_ONE, _reduced=False):
        self.genus = genus
        if _reduced:
            self.num = num
            self.den = den
        else:
            self.num, self.den = _reduce(num, den)
        self._hash = None

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def const(genus, c):
        return MotiveClass(genus, p_const(c, num_vars(genus)), U_ONE, _reduced=True)

    # -- canonical identity --------------------------------------------------

    def key(self):
        return (self.genus, tuple(p_items_sorted(self.num)), self.den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, MotiveClass):
            return NotImplemented
        return self.genus == other.genus and self.num == other.num and self.den == other.den

    def is_zero(self):
        return p_is_zero(self.num)

    def is_polynomial(self):
        return u_is_one(self.den)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MotiveClass):
            if other.genus != self.genus:
                raise ValueError("mixed-genus arithmetic")
            return other
        if isinstance(other, int):
            return MotiveClass.const(self.genus, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        g = u_gcd(self.den, other.den)
        da = u_div_exact(self.den, g)
        db = u_div_exact(other.den, g)
        nv = num_vars(self.genus)
        num = p_add(
            p_mul(self.num, u_to_multivar(db, nv)),
            p_mul(other.num, u_to_multivar(da, nv)),
        )
        den = u_mul(u_mul(da, g), db)
        return MotiveClass(self.genus, num, den)

    __radd__ = __add__

    def __neg__(self):
        return MotiveClass(self.genus, p_neg(self.num), self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return MotiveClass(
            self.genus, p_mul(self.num, other.num), u_mul(self.den, other.den)
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        inv = other.inverse()
        return self * inv

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        nv = num_vars(self.genus)
        num = p_pow(self.num, n, nv)
        den = U_ONE
        for _ in range(n):
            den = u_mul(den, self.den)
        return MotiveClass(self.genus, num, den)

    def inverse(self):
        """Invert; only unit multiples of admissible denominator factors allow it."""
        if self.is_zero():
            raise ZeroDivisionError("division by zero motive class")
        uni = _univariate_part(self.num)
        if uni is None:
            raise DivisionOutsideRing(
                "divisor involves Pic or symmetric-power atoms; quotient leaves the ring"
            )
        fact = u_factor_cyclotomic(uni)
        if fact is None:
            raise DivisionOutsideRing(
                "divisor numerator is not a unit times L-powers and (L^a - 1) factors"
            )
        nv = num_vars(self.genus)
        sign = fact[0]
        return MotiveClass(self.genus, p_scale(u_to_multivar(self.den, nv), sign),
                           tuple(sign * c for c in uni))

    # -- inspection ----------------------------------------------------------

    def dimension(self):
        """Weighted top degree: L counts 1, Pic counts g, C^(i) counts i."""
        if self.is_zero():
            return None
        g = self.genus
        weights = [1]
        if g >= 1:
            weights.append(g)
        weights.extend(range(1, max_atom(g) + 1))
        top = max(sum(w * e for w, e in zip(weights, m)) for m in self.num)
        return top - u_deg(self.den)

    # -- text form -----------------------------------------------------------

    def __str__(self):
        return format_class(self)

    def __repr__(self):
        return f"MotiveClass({self})"


def _univariate_part(num):
    """Return num as a univariate L-tuple when no other atom occurs, else None."""
    if p_is_zero(num):
        return ()
    deg = 0
    for m in num:
        if any(m[1:]):
            return None
        deg = max(deg, m[0])
    out = [0] * (deg + 1)
    for m, c in num.items():
        out[m[0]] = c
    return u_trim(out)


def _reduce(num, den):
    den = u_trim(den)
    if not den:
        raise ZeroDivisionError("zero denominator")
    if p_is_zero(num):
        return {}, U_ONE
    if not u_is_one(den):
        # gcd of den with every L-coefficient polynomial of num
        groups = {}
        for m, c in num.items():
            groups.setdefault(m[1:], []).append((m[0], c))
        g = den
        for tail, terms in groups.items():
            coeff = [0] * (max(e for e, _ in terms) + 1)
            for e, c in terms:
                coeff[e] = c
            g = u_gcd(g, tuple(coeff))
            if u_deg(g) == 0:
                break
        if u_deg(g) > 0:
            den = u_div_exact(den, g)
            new_num = {}
            for tail, terms in groups.items():
                coeff = [0] * (max(e for e, _ in terms) + 1)
                for e, c in terms:
                    coeff[e] = c
                q = u_div_exact(u_trim(coeff), g)
                for e, c in enumerate(q):
                    if c:
                        new_num[(e,) + tail] = c
            num = new_num
    if den[-1] < 0:
        den = tuple(-c for c in den)
        num = p_neg(num)
    return num, den


# ---------------------------------------------------------------------------
# per-genus atom factory


class Ring:
    """Atom factory for a fixed genus."""

    def __init__(self, genus):
        if genus < 0:
            raise ValueError("genus must be nonnegative")
        self.genus = genus
        self.nvars = num_vars(genus)
        self.zero = MotiveClass.const(genus, 0)
        self.one = MotiveClass.const(genus, 1)

    def from_int(self, c):
        return MotiveClass.const(self.genus, c)

    @property
    def L(self):
        m = [0] * self.nvars
        m[0] = 1
        return MotiveClass(self.genus, {tuple(m): 1}, U_ONE, _reduced=True)

    def L_pow(self, k):
        if k >= 0:
            m = [0] * self.nvars
            m[0] = k
            return MotiveClass(self.genus, {tuple(m): 1}, U_ONE, _reduced=True)
        den = [0] * (-k + 1)
        den[-k] = 1
        return MotiveClass(
            self.genus, p_const(1, self.nvars), tuple(den), _reduced=True
        )

    @property
    def Pic(self):
        if self.genus == 0:
            return self.one
        m = [0] * self.nvars
        m[1] = 1
        return MotiveClass(self.genus, {tuple(m): 1}, U_ONE, _reduced=True)

    def C(self, i):
        """Symmetric-power class, eagerly rewritten above index g-1.

        For i >= g the class splits along the Abel-Jacobi map as a projective
        bundle piece plus the Serre-dual symmetric power, which keeps every
        representation in the free basis {L, Pic, C1..C_{g-1}}.
        """
        if i == 0:
            return self.one
        if i < 0:
            return self.zero
        g = self.genus
        if i <= g - 1:
            m = [0] * self.nvars
            m[1 + i] = 1
            return MotiveClass(self.genus, {tuple(m): 1}, U_ONE, _reduced=True)
        e = i - g + 1
        proj = MotiveClass(
            g, u_to_multivar(u_lpower_minus_one(e), self.nvars), U_ONE
        ) / MotiveClass(g, u_to_multivar(u_lpower_minus_one(1), self.nvars), U_ONE)
        return self.L_pow(e) * self.C(2 * g - 2 - i) + self.Pic * proj

    def parse(self, text):
        return parse_class(text, self.genus)


@lru_cache(maxsize=None)
def ring(genus):
    return Ring(genus)


def ring_ops(a, b, op):
    """Dispatch arithmetic by name; the add/sub/mul/div/pow surface."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown op {op!r}")


@lru_cache(maxsize=None)
def reduce_high_sym(i, genus):
    """Large symmetric powers are projective bundles over the Jacobian:
    [C^(i)] = Pic * (L^{i-g+1} - 1)/(L - 1) for i > 2g - 2."""
    if i <= 2 * genus - 2:
        raise ValueError("reduce_high_sym applies above degree 2g-2 only")
    R = ring(genus)
    e = i - genus + 1
    num = MotiveClass(
        genus, u_to_multivar(u_lpower_minus_one(e), R.nvars), U_ONE
    )
    return R.Pic * num / MotiveClass(genus, u_to_multivar(u_lpower_minus_one(1), R.nvars), U_ONE)


# ---------------------------------------------------------------------------
# curve data and zeta machinery


@dataclass(frozen=True)
class CurveData:
    """Genus, number of marked points, optional zeta numerator coefficients."""

    genus: int
    num_marked: int = 0
    zeta_numerator: Optional[tuple] = None

    def __post_init__(self):
        if self.genus < 0 or self.num_marked < 0:
            raise ValueError("genus and marked-point count must be nonnegative")
        if self.zeta_numerator is not None:
            zn = tuple(self.zeta_numerator)
            object.__setattr__(self, "zeta_numerator", zn)
            if len(zn) != 2 * self.genus + 1:
                raise InconsistentZeta("zeta numerator must have degree exactly 2g")
            if zn[0] != 1:
                raise InconsistentZeta("zeta numerator must have constant term 1")

    def check_functional_equation(self, q):
        if self.zeta_numerator is None:
            raise MissingZetaData("point-count specialization needs a zeta numerator")
        g = self.genus
        a = self.zeta_numerator
        for i in range(0, 2 * g + 1):
            if Fraction(a[2 * g - i]) != Fraction(q) ** (g - i) * a[i]:
                raise InconsistentZeta(
                    f"functional equation fails at q={q}, index {i}"
                )


def zeta_coeff(curve, i):
    """Class of the i-th symmetric power of the curve."""
    if i < 0:
        raise ValueError("symmetric power index must be nonnegative")
    return ring(curve.genus).C(i)


def _zeta_numerator_classes(curve):
    """Coefficients a_j of P(t) = (1-t)(1-Lt) Z(C,t) as ring elements."""
    g = curve.genus
    R = ring(g)
    coeffs = []
    for j in range(0, 2 * g + 1):
        a = R.C(j) - (R.one + R.L) * R.C(j - 1) + R.L * R.C(j - 2)
        coeffs.append(a)
    return coeffs


def zeta_eval(curve, arg_exponent):
    """Closed form of Z(C, L^e); convergent only for e <= -2."""
    if arg_exponent >= -1:
        raise NonConvergentEvaluation(
            "Z(C, L^e) is evaluated only for e <= -2 in the completed ring"
        )
    g = curve.genus
    R = ring(g)
    e = arg_exponent
    p_val = R.zero
    for j, a in enumerate(_zeta_numerator_classes(curve)):
        p_val = p_val + a * R.L_pow(j * e)
    den = (R.one - R.L_pow(e)) * (R.one - R.L_pow(e + 1))
    return p_val / den


def sym_cxp_coeff(curve, n, ell):
    """t^ell coefficient of prod_{j<n} Z(C, L^j t): symmetric powers of C x P^{n-1}."""
    if n < 1 or ell < 0:
        raise ValueError("need n >= 1 and ell >= 0")
    g = curve.genus
    R = ring(g)
    series = [R.one] + [R.zero] * ell
    for j in range(n):
        factor = [R.C(i) * R.L_pow(j * i) for i in range(ell + 1)]
        new = [R.zero] * (ell + 1)
        for a in range(ell + 1):
            if series[a].is_zero():
                continue
            for b in range(ell + 1 - a):
                new[a + b] = new[a + b] + series[a] * factor[b]
        series = new
    return series[ell]


# ---------------------------------------------------------------------------
# specializations


class EPoly:
    """Bivariate polynomial (or flagged rational function) in (u, v) over Q."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        self.num = {m: Fraction(c) for m, c in num.items() if c}
        self.den = None
        if den is not None and den != {(0, 0): Fraction(1)}:
            self.den = {m: Fraction(c) for m, c in den.items() if c}

    @property
    def is_polynomial(self):
        return self.den is None

    def __eq__(self, other):
        return (
            isinstance(other, EPoly)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash(
            (
                tuple(sorted(self.num.items())),
                None if self.den is None else tuple(sorted(self.den.items())),
            )
        )

    def substitute_equal(self):
        """Set u = v; returns dict degree -> coefficient (needs polynomiality)."""
        if not self.is_polynomial:
            raise ValueError("rational E-specialization cannot be substituted")
        out = {}
        for (i, j), c in self.num.items():
            out[i + j] = out.get(i + j, 0) + c
        return {d: c for d, c in out.items() if c}

    def u_degree(self):
        if not self.num:
            return None
        return max(i for i, _ in self.num)

    def total_degree(self):
        if not self.num:
            return None
        return max(i + j for i, j in self.num)

    def __str__(self):
        if not self.num:
            body = "0"
        else:
            parts = []
            for (i, j), c in sorted(self.num.items(), reverse=True):
                mono = []
                if i:
                    mono.append("u" if i == 1 else f"u^{i}")
                if j:
                    mono.append("v" if j == 1 else f"v^{j}")
                if not mono or abs(c) != 1:
                    mono.insert(0, str(abs(c)))
                term = "*".join(mono) if mono else "1"
                if not parts:
                    parts.append(term if c > 0 else f"-{term}")
                else:
                    parts.append(f"+ {term}" if c > 0 else f"- {term}")
            body = " ".join(parts)
        if self.den is None:
            return body
        dparts = " ".join(
            f"+ {c}*u^{i}*v^{j}" for (i, j), c in sorted(self.den.items(), reverse=True)
        )
        return f"({body}) / ({dparts})"


def _bi_mul(a, b):
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = (m1[0] + m2[0], m1[1] + m2[1])
            s = out.get(m, 0) + c1 * c2
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def _bi_pow(a, n):
    out = {(0, 0): Fraction(1)}
    while n:
        if n & 1:
            out = _bi_mul(out, a)
        a = _bi_mul(a, a)
        n >>= 1
    return out


def _bi_div_exact(a, b):
    """Exact division of bivariate Fraction polys; None when not divisible."""
    if not a:
        return {}
    rem = dict(a)
    lead = max(b)
    lead_c = b[lead]
    quot = {}
    while rem:
        m = max(rem)
        if m[0] < lead[0] or m[1] < lead[1]:
            return None
        qm = (m[0] - lead[0], m[1] - lead[1])
        qc = rem[m] / lead_c
        quot[qm] = quot.get(qm, 0) + qc
        for bm, bc in b.items():
            t = (qm[0] + bm[0], qm[1] + bm[1])
            s = rem.get(t, 0) - qc * bc
            if s:
                rem[t] = s
            else:
                rem.pop(t, None)
    return quot


@lru_cache(maxsize=None)
def _sym_gen_coeff(i, genus):
    """t^i coefficient of (1-ut)^g (1-vt)^g / ((1-t)(1-uvt)) as a bivariate poly."""
    from math import comb

    # numerator coefficients of (1-ut)^g (1-vt)^g
    num = {}
    g = genus
    for a in range(g + 1):
        for b in range(g + 1):
            num[(a, b)] = Fraction(comb(g, a) * comb(g, b) * (-1) ** (a + b))
    # series of 1/((1-t)(1-uvt)) : coeff of t^m is sum_{j<=m} (uv)^j
    out = {}
    for (a, b), c in num.items():
        m = i - a - b
        if m < 0:
            continue
        for j in range(m + 1):
            mono = (a + j, b + j)
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
    return out


def specialize_E(x, genus=None):
    """Hodge specialization: L -> uv, Pic -> (1-u)^g (1-v)^g, C^(i) -> curve series."""
    g = x.genus if genus is None else genus
    uv = {(1, 1): Fraction(1)}
    pic = _bi_mul(
        _bi_pow({(0, 0): Fraction(1), (1, 0): Fraction(-1)}, g),
        _bi_pow({(0, 0): Fraction(1), (0, 1): Fraction(-1)}, g),
    )
    images = [uv]
    if g >= 1:
        images.append(pic)
    for i in range(1, max_atom(g) + 1):
        images.append(dict(_sym_gen_coeff(i, g)))

    num_out = {}
    pow_cache = [dict() for _ in images]

    def image_pow(idx, e):
        cache = pow_cache[idx]
        if e not in cache:
            cache[e] = _bi_pow(images[idx], e)
        return cache[e]

    for m, c in x.num.items():
        term = {(0, 0): Fraction(c)}
        for idx, e in enumerate(m):
            if e:
                term = _bi_mul(term, image_pow(idx, e))
        for mono, cc in term.items():
            s = num_out.get(mono, 0) + cc
            if s:
                num_out[mono] = s
            else:
                num_out.pop(mono, None)
    den_out = {}
    for e, c in enumerate(x.den):
        if c:
            m = (e, e)
            den_out[m] = den_out.get(m, 0) + Fraction(c)
    quot = _bi_div_exact(num_out, den_out)
    if quot is None:
        return EPoly(num_out, den_out)
    return EPoly(quot)


def specialize_count(x, curve, q):
    """Point-count specialization at q; exact rational output."""
    curve.check_functional_equation(q)
    g = curve.genus
    if x.genus != g:
        raise ValueError("class genus does not match curve")
    P = [Fraction(c) for c in curve.zeta_numerator]
    # symmetric-power counts: t^i coefficients of P(t)/((1-t)(1-qt))
    max_c = max_atom(g)
    sym = [Fraction(0)] * (max_c + 1)
    series = [Fraction(0)] * (max_c + 1)
    for i in range(max_c + 1):
        s = sum(Fraction(q) ** j for j in range(i + 1))
        series[i] = s  # coeff of t^i in 1/((1-t)(1-qt)) = sum q^j, j<=i
    for i in range(max_c + 1):
        tot = Fraction(0)
        for j in range(0, min(i, 2 * g) + 1):
            tot += P[j] * series[i - j]
        sym[i] = tot
    pic_val = sum(P)
    values = [Fraction(q)]
    if g >= 1:
        values.append(Fraction(pic_val))
    for i in range(1, max_c + 1):
        values.append(sym[i])
    num_val = Fraction(0)
    for m, c in x.num.items():
        t = Fraction(c)
        for v, e in zip(values, m):
            if e:
                t *= v ** e
        num_val += t
    den_val = sum(Fraction(c) * Fraction(q) ** e for e, c in enumerate(x.den))
    if den_val == 0:
        raise ZeroDivisionError("denominator vanishes at this q")
    return num_val / den_val


# ---------------------------------------------------------------------------
# canonical text form and parser


def _format_poly(num, genus):
    # exchange format lists L, then symmetric powers, then Pic
    names = var_names(genus)
    order = [0] + list(range(2, len(names))) + ([1] if genus >= 1 else [])
    if p_is_zero(num):
        return "0"
    parts = []
    for m, c in p_items_sorted(num):
        factors = []
        for idx in order:
            name, e = names[idx], m[idx]
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        if not factors or abs(c) != 1:
            factors.insert(0, str(abs(c)))
        term = " * ".join(factors) if factors else "1"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts)


def _format_den(den):
    fact = u_factor_cyclotomic(den)
    if fact is None:  # defensive; reduced denominators always factor
        return "(" + _format_poly(u_to_multivar(den, 1), 0) + ")"
    sign, b, factors = fact
    bundles, leftover = bundle_cyclotomic(factors)
    parts = []
    if b == 1:
        parts.append("L")
    elif b > 1:
        parts.append(f"L^{b}")
    for a in sorted(bundles, reverse=True):
        base = f"(L^{a} - 1)" if a > 1 else "(L - 1)"
        m = bundles[a]
        parts.append(base if m == 1 else f"{base}^{m}")
    for e in sorted(leftover, reverse=True):
        body = _format_poly(u_to_multivar(poly.cyclotomic(e), 1), 0)
        m = leftover[e]
        parts.append(f"({body})" if m == 1 else f"({body})^{m}")
    out = " * ".join(parts) if parts else "1"
    return out


def format_class(x):
    num = _format_poly(x.num, x.genus)
    if x.is_polynomial():
        return num
    return f"({num}) / ({_format_den(x.den)})"


class _Parser:
    def __init__(self, text, genus):
        self.text = text
        self.pos = 0
        self.R = ring(genus)

    def error(self, msg):
        raise ValueError(f"parse error at {self.pos}: {msg} in {self.text!r}")

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self):
        node = self.term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                node = node + self.term()
            elif ch == "-":
                self.pos += 1
                node = node - self.term()
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                node = node * self.factor()
            elif ch == "/":
                self.pos += 1
                node = node / self.factor()
            else:
                return node

    def factor(self):
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            return -self.factor()
        node = self.atom()
        if self.peek() == "^":
            self.pos += 1
            sign = 1
            if self.peek() == "-":
                sign = -1
                self.pos += 1
            exp = self.integer()
            node = node ** (sign * exp)
        return node

    def integer(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected integer")
        return int(self.text[start : self.pos])

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            node = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return node
        if ch.isdigit():
            return self.R.from_int(self.integer())
        if self.text.startswith("Pic", self.pos):
            self.pos += 3
            return self.R.Pic
        if ch == "C":
            self.pos += 1
            idx = self.integer()
            return self.R.C(idx)
        if ch == "L":
            self.pos += 1
            return self.R.L
        self.error(f"unexpected character {ch!r}")


def parse_class(text, genus):
    p = _Parser(text, genus)
    node = p.expr()
    p.skip()
    if p.pos != len(p.text):
        p.error("trailing input")
    return node
