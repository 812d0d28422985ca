# Copyright (c) 2025 Equiform Core Authors.
# Licensed under the MIT License

"""
Finite trigonometric polynomials in two angles (theta, phi) whose coefficients
are polynomials in the time variable t.

A TrigPoly is a sum of terms C(t) cos(i*theta + j*phi) + S(t) sin(i*theta + j*phi)
stored under a canonical frequency key (i, j): i > 0 with any j, or i == 0 with
j >= 0. Coefficients live either in the exact field (int / Fraction) or in
double precision; the two scalar modes never mix.

Values are immutable. Every operation returns a new object, so instances can
be shared freely between threads.
"""

from __future__ import annotations

import enum
import logging
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

Key = Tuple[int, int]
Coeffs = Tuple[Any, ...]

_HALF = Fraction(1, 2)
_EMPTY: Coeffs = ()


class ScalarModeError(TypeError):
    """Raised when exact and floating point values are combined."""
    pass


class ScalarMode(str, enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


def scalar_mode(value: Any) -> Optional[ScalarMode]:
    """
    Classify a scalar. Integers are mode-neutral and return None.
    """
    if isinstance(value, bool):
        raise ScalarModeError(f"Booleans are not scalars: {value!r}")
    if isinstance(value, int):
        return None
    if isinstance(value, Rational):
        return ScalarMode.EXACT
    if isinstance(value, (float, np.floating)):
        return ScalarMode.FLOAT
    raise ScalarModeError(f"Unsupported scalar type {type(value).__name__}")


def coerce_scalar(value: Any, mode: ScalarMode) -> Any:
    """Convert a scalar into the representation used by the given mode."""
    found = scalar_mode(value)
    if mode is ScalarMode.FLOAT:
        return float(value)
    if found is ScalarMode.FLOAT:
        raise ScalarModeError(f"Float value {value!r} used in exact mode")
    return value


def canonical_key(i: int, j: int) -> Tuple[Key, int]:
    """
    Map a frequency pair onto its canonical home.

    Returns the canonical key and the sign picked up by the sine coefficient
    (cos(-x) = cos(x), sin(-x) = -sin(x)).
    """
    if i < 0 or (i == 0 and j < 0):
        return (-i, -j), -1
    return (i, j), 1


# ---------------------------------------------------------------------------
# Coefficient tuples (polynomials in t)
# ---------------------------------------------------------------------------

def _strip(coeffs: Iterable[Any]) -> Coeffs:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _padd(a: Coeffs, b: Coeffs) -> Coeffs:
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    return _strip([x + y for x, y in zip(a, b)] + list(a[len(b):]))


def _pneg(a: Coeffs) -> Coeffs:
    return tuple(-x for x in a)


def _pscale(a: Coeffs, k: Any) -> Coeffs:
    if k == 0:
        return _EMPTY
    return _strip(x * k for x in a)


def _pmul(a: Coeffs, b: Coeffs, t_degree: Optional[int] = None) -> Coeffs:
    if not a or not b:
        return _EMPTY
    size = len(a) + len(b) - 1
    if t_degree is not None:
        size = min(size, t_degree + 1)
    out = [0] * size
    for p, x in enumerate(a):
        if p >= size:
            break
        if x == 0:
            continue
        for q, y in enumerate(b):
            if p + q >= size:
                break
            out[p + q] += x * y
    return _strip(out)


def _peval(a: Coeffs, t: Any) -> Any:
    value = 0
    for x in reversed(a):
        value = value * t + x
    return value


def _pderiv(a: Coeffs) -> Coeffs:
    return _strip(k * x for k, x in enumerate(a) if k > 0)


class TPoly:
    """
    Dense polynomial c0 + c1*t + ... + cd*t^d with trailing zeros stripped.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Union[Iterable[Any], Any] = ()):
        if isinstance(coeffs, TPoly):
            coeffs = coeffs.coeffs
        elif not isinstance(coeffs, (tuple, list)):
            coeffs = (coeffs,)
        object.__setattr__(self, "coeffs", _strip(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("TPoly is immutable")

    @property
    def degree(self) -> int:
        """Degree in t; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t: Any) -> Any:
        return _peval(self.coeffs, t)

    def derivative(self) -> "TPoly":
        return TPoly(_pderiv(self.coeffs))

    def __add__(self, other: "TPoly") -> "TPoly":
        return TPoly(_padd(self.coeffs, TPoly(other).coeffs))

    def __neg__(self) -> "TPoly":
        return TPoly(_pneg(self.coeffs))

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + (-TPoly(other))

    def __mul__(self, other: Any) -> "TPoly":
        if isinstance(other, TPoly):
            return TPoly(_pmul(self.coeffs, other.coeffs))
        return TPoly(_pscale(self.coeffs, other))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, float, Fraction)):
            return self.coeffs == _strip((other,))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"TPoly({list(self.coeffs)!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            text = str(c)
            parts.append(text if k == 0 else f"({text})*t" if k == 1 else f"({text})*t^{k}")
        return " + ".join(parts)


def _as_coeffs(value: Any, mode: ScalarMode) -> Coeffs:
    if isinstance(value, TPoly):
        value = value.coeffs
    elif not isinstance(value, (tuple, list)):
        value = (value,)
    return _strip(coerce_scalar(x, mode) for x in value)


def _infer_mode(values: Iterable[Any]) -> ScalarMode:
    for value in values:
        items = value.coeffs if isinstance(value, TPoly) else value if isinstance(value, (tuple, list)) else (value,)
        for x in items:
            found = scalar_mode(x)
            if found is not None:
                return found
    return ScalarMode.EXACT


# ---------------------------------------------------------------------------
# Grid evaluation support
# ---------------------------------------------------------------------------

@lru_cache(maxsize=512)
def _harmonic_table(n: int, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """cos(k*x) and sin(k*x) sampled on x = 2*pi*a/n, a = 0..n-1."""
    x = 2.0 * np.pi * np.arange(n) / n
    c, s = np.cos(k * x), np.sin(k * x)
    c.setflags(write=False)
    s.setflags(write=False)
    return c, s


class TrigPoly:
    """
    Finite map FreqKey -> (cos coefficient, sin coefficient), coefficients
    being polynomials in t.

    Construct through make_term(), TrigPoly.constant(), TrigPoly.from_table()
    or arithmetic; the raw constructor expects already canonical data.
    """

    __slots__ = ("_terms", "_mode", "_tdeg")

    def __init__(self, terms: Optional[Mapping[Key, Tuple[Coeffs, Coeffs]]] = None,
                 mode: ScalarMode = ScalarMode.EXACT):
        clean: Dict[Key, Tuple[Coeffs, Coeffs]] = {}
        tdeg = -1
        for key, (c, s) in (terms or {}).items():
            if key == (0, 0):
                s = _EMPTY
            if not c and not s:
                continue
            clean[key] = (c, s)
            tdeg = max(tdeg, len(c) - 1, len(s) - 1)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_mode", ScalarMode(mode))
        object.__setattr__(self, "_tdeg", tdeg)

    def __setattr__(self, name, value):
        raise AttributeError("TrigPoly is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def zero(cls, mode: ScalarMode = ScalarMode.EXACT) -> "TrigPoly":
        return cls({}, mode)

    @classmethod
    def constant(cls, value: Any, mode: Optional[ScalarMode] = None) -> "TrigPoly":
        return make_term((0, 0), "cos", value, mode)

    @classmethod
    def from_table(cls, table: Mapping[Key, Tuple[Any, Any]],
                   mode: Optional[ScalarMode] = None) -> "TrigPoly":
        """
        Build a series from {(i, j): (cos coefficient, sin coefficient)}.
        Keys may be non-canonical; colliding entries are summed.
        """
        if mode is None:
            mode = _infer_mode(v for pair in table.values() for v in pair)
        result = cls.zero(mode)
        for (i, j), (c, s) in table.items():
            result = result + make_term((i, j), "cos", c, mode) + make_term((i, j), "sin", s, mode)
        return result

    # -- introspection ----------------------------------------------------

    @property
    def mode(self) -> ScalarMode:
        return self._mode

    @property
    def exact(self) -> bool:
        return self._mode is ScalarMode.EXACT

    @property
    def t_degree(self) -> int:
        """Largest power of t present; -1 for the zero series."""
        return self._tdeg

    def keys(self) -> List[Key]:
        return sorted(self._terms)

    def items(self) -> Iterator[Tuple[Key, TPoly, TPoly]]:
        for key in sorted(self._terms):
            c, s = self._terms[key]
            yield key, TPoly(c), TPoly(s)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def spectrum_bound(self) -> Key:
        """(max |i|, max |j|) over stored keys; (0, 0) for the zero series."""
        if not self._terms:
            return (0, 0)
        return (max(abs(i) for i, _ in self._terms), max(abs(j) for _, j in self._terms))

    def max_abs(self) -> float:
        """Largest coefficient magnitude, as a float scale hint."""
        best = 0.0
        for c, s in self._terms.values():
            for x in c + s:
                best = max(best, abs(float(x)))
        return best

    def coefficient(self, i: int, j: int) -> Tuple[TPoly, TPoly]:
        """
        Cosine and sine coefficient of the harmonic (i, j), canonicalized.
        """
        key, sign = canonical_key(i, j)
        c, s = self._terms.get(key, (_EMPTY, _EMPTY))
        if key == (0, 0):
            return TPoly(c), TPoly(())
        return TPoly(c), TPoly(s if sign > 0 else _pneg(s))

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "TrigPoly") -> None:
        if other._mode is not self._mode:
            raise ScalarModeError(f"Cannot combine {self._mode.value} and {other._mode.value} series")

    def _lift(self, other: Any) -> "TrigPoly":
        if isinstance(other, TrigPoly):
            self._check(other)
            return other
        if isinstance(other, TPoly) or scalar_mode(other) in (None, self._mode):
            return make_term((0, 0), "cos", other, self._mode)
        raise ScalarModeError(f"Cannot combine {self._mode.value} series with {other!r}")

    def __add__(self, other: Any) -> "TrigPoly":
        other = self._lift(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        terms = dict(self._terms)
        for key, (c, s) in other._terms.items():
            mine = terms.get(key)
            if mine is None:
                terms[key] = (c, s)
            else:
                terms[key] = (_padd(mine[0], c), _padd(mine[1], s))
        return TrigPoly(terms, self._mode)

    __radd__ = __add__

    def __neg__(self) -> "TrigPoly":
        return TrigPoly({k: (_pneg(c), _pneg(s)) for k, (c, s) in self._terms.items()}, self._mode)

    def __sub__(self, other: Any) -> "TrigPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> "TrigPoly":
        return self._lift(other) - self

    def scale(self, k: Any) -> "TrigPoly":
        """Multiply every coefficient by a scalar or a TPoly."""
        if isinstance(k, TPoly):
            coeffs = _as_coeffs(k, self._mode)
            return TrigPoly({key: (_pmul(c, coeffs), _pmul(s, coeffs))
                             for key, (c, s) in self._terms.items()}, self._mode)
        k = coerce_scalar(k, self._mode)
        return TrigPoly({key: (_pscale(c, k), _pscale(s, k))
                         for key, (c, s) in self._terms.items()}, self._mode)

    def __mul__(self, other: Any) -> "TrigPoly":
        if isinstance(other, TrigPoly):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def mul(self, other: "TrigPoly", *, doubled: bool = False,
            t_degree: Optional[int] = None) -> "TrigPoly":
        """
        Exact product via the product-to-sum identities.

        doubled=True returns 2*(self*other), which keeps integer coefficients
        integral. t_degree drops every power of t above the given degree.
        """
        self._check(other)
        if not self._terms or not other._terms:
            return TrigPoly.zero(self._mode)
        if self._tdeg <= 0 and other._tdeg <= 0:
            terms = _flat_product(self._terms, other._terms)
        else:
            terms = _poly_product(self._terms, other._terms, t_degree)
        if not doubled:
            half = _HALF if self.exact else 0.5
            terms = {k: (_pscale(c, half), _pscale(s, half)) for k, (c, s) in terms.items()}
        return TrigPoly(terms, self._mode)

    # -- calculus and evaluation -------------------------------------------

    def differentiate(self, var: str) -> "TrigPoly":
        """Partial derivative with respect to 't', 'theta' or 'phi'."""
        var = _VARIABLE_ALIASES.get(var, var)
        if var == "t":
            return TrigPoly({k: (_pderiv(c), _pderiv(s)) for k, (c, s) in self._terms.items()},
                            self._mode)
        if var not in ("theta", "phi"):
            raise ValueError(f"Unknown variable {var!r}; expected t, theta or phi")
        terms = {}
        for (i, j), (c, s) in self._terms.items():
            f = i if var == "theta" else j
            if f == 0:
                continue
            terms[(i, j)] = (_pscale(s, f), _pscale(c, -f))
        return TrigPoly(terms, self._mode)

    def substitute_t(self, t0: Any) -> "TrigPoly":
        """Collapse every coefficient polynomial to its value at t = t0."""
        t0 = coerce_scalar(t0, self._mode)
        terms = {k: (_strip((_peval(c, t0),)), _strip((_peval(s, t0),)))
                 for k, (c, s) in self._terms.items()}
        return TrigPoly(terms, self._mode)

    def evaluate(self, t: Any, theta: Any, phi: Any) -> Any:
        """
        Numeric value at (t, theta, phi). The t substitution stays exact in exact
        mode; the angles always go through floating point trigonometry.
        """
        theta, phi = float(theta), float(phi)
        if not self.exact or scalar_mode(t) is ScalarMode.FLOAT:
            t = float(t)
        total = 0.0
        for (i, j), (c, s) in self._terms.items():
            arg = i * theta + j * phi
            if c:
                total += float(_peval(c, t)) * math.cos(arg)
            if s:
                total += float(_peval(s, t)) * math.sin(arg)
        return total

    def evaluate_grid(self, n: int, t: Any = 0) -> np.ndarray:
        """
        Values on the uniform n x n grid theta_a = 2*pi*a/n, phi_b = 2*pi*b/n.
        Row index is theta, column index is phi.
        """
        out = np.zeros((n, n))
        for (i, j), (c, s) in self._terms.items():
            cv = float(_peval(c, t)) if c else 0.0
            sv = float(_peval(s, t)) if s else 0.0
            ci, si = _harmonic_table(n, i)
            cj, sj = _harmonic_table(n, j)
            if cv:
                out += cv * (np.outer(ci, cj) - np.outer(si, sj))
            if sv:
                out += sv * (np.outer(si, cj) + np.outer(ci, sj))
        return out

    def is_zero(self, scale: Optional[float] = None, tol: Optional[float] = None) -> bool:
        """
        Exact mode: the map is empty. Float mode: every coefficient magnitude
        is at most tol * scale, scale being the caller's magnitude hint.
        """
        if self.exact or not self._terms:
            return not self._terms
        if tol is None:
            from equiform_core.config import CONFIG
            tol = CONFIG.numerics.tolerance
        bound = tol * (1.0 if scale is None else float(scale))
        return self.max_abs() <= bound

    def to_float(self) -> "TrigPoly":
        if not self.exact:
            return self
        return TrigPoly({k: (tuple(float(x) for x in c), tuple(float(x) for x in s))
                         for k, (c, s) in self._terms.items()}, ScalarMode.FLOAT)

    def common_denominator(self) -> int:
        """Least common denominator of all exact coefficients (1 in float mode)."""
        lcd = 1
        if not self.exact:
            return lcd
        for c, s in self._terms.values():
            for x in c + s:
                if isinstance(x, Fraction):
                    lcd = lcd * x.denominator // math.gcd(lcd, x.denominator)
        return lcd

    def integral(self, factor: int = 1) -> "TrigPoly":
        """
        Exact series multiplied by factor, with every coefficient stored as a
        plain int. The product must clear all denominators.
        """
        def as_int(x: Any) -> int:
            y = x * factor
            if isinstance(y, Fraction):
                if y.denominator != 1:
                    raise ValueError(f"factor {factor} does not clear the coefficient {x}")
                return y.numerator
            return int(y)

        if not self.exact:
            raise ScalarModeError("integral() needs an exact series")
        return TrigPoly({k: (_strip(as_int(x) for x in c), _strip(as_int(x) for x in s))
                         for k, (c, s) in self._terms.items()}, self._mode)

    # -- comparison and display ---------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self._mode is other._mode and self._terms == other._terms

    __hash__ = None

    def __repr__(self) -> str:
        return f"TrigPoly({self._mode.value}, {len(self._terms)} terms)"

    def describe(self, limit: Optional[int] = None) -> str:
        """One line per harmonic: key, cosine and sine coefficient."""
        lines = []
        for key, c, s in self.items():
            lines.append(f"  ({key[0]:>3},{key[1]:>4})  cos: {c}   sin: {s}")
            if limit is not None and len(lines) >= limit:
                lines.append(f"  ... {len(self._terms) - limit} more")
                break
        return "\n".join(lines) if lines else "  0"


_VARIABLE_ALIASES = {"θ": "theta", "φ": "phi", "x1": "t", "x2": "theta", "x3": "phi"}


def make_term(key: Key, kind: str, coeff: Any, mode: Optional[ScalarMode] = None) -> TrigPoly:
    """
    Single-term series coeff * cos(i*theta + j*phi) (kind='cos') or the sine
    counterpart, stored under the canonical key.
    """
    if kind not in ("cos", "sin"):
        raise ValueError(f"kind must be 'cos' or 'sin', got {kind!r}")
    if mode is None:
        mode = _infer_mode([coeff])
    mode = ScalarMode(mode)
    coeffs = _as_coeffs(coeff, mode)
    canon, sign = canonical_key(*key)
    if kind == "cos":
        return TrigPoly({canon: (coeffs, _EMPTY)}, mode)
    if canon == (0, 0):
        return TrigPoly.zero(mode)
    return TrigPoly({canon: (_EMPTY, coeffs if sign > 0 else _pneg(coeffs))}, mode)


def _flat_product(a: Mapping[Key, Tuple[Coeffs, Coeffs]],
                  b: Mapping[Key, Tuple[Coeffs, Coeffs]]) -> Dict[Key, Tuple[Coeffs, Coeffs]]:
    """
    2*(a*b) for t-free operands, accumulated on plain scalars.
    2cos(x)cos(y) = cos(x-y) + cos(x+y); 2sin(x)sin(y) = cos(x-y) - cos(x+y);
    2sin(x)cos(y) = sin(x+y) + sin(x-y).
    """
    left = [(i, j, c[0] if c else 0, s[0] if s else 0) for (i, j), (c, s) in a.items()]
    right = [(i, j, c[0] if c else 0, s[0] if s else 0) for (i, j), (c, s) in b.items()]
    acc: Dict[Key, List[Any]] = {}
    for i1, j1, ca, sa in left:
        for i2, j2, cb, sb in right:
            cc = ca * cb
            ss = sa * sb
            sc = sa * cb
            cs = ca * sb
            key = (i1 + i2, j1 + j2)
            slot = acc.get(key)
            if slot is None:
                acc[key] = [cc - ss, sc + cs]
            else:
                slot[0] += cc - ss
                slot[1] += sc + cs
            di, dj = i1 - i2, j1 - j2
            if di < 0 or (di == 0 and dj < 0):
                di, dj = -di, -dj
                sin_part = cs - sc
            else:
                sin_part = sc - cs
            key = (di, dj)
            slot = acc.get(key)
            if slot is None:
                acc[key] = [cc + ss, sin_part]
            else:
                slot[0] += cc + ss
                slot[1] += sin_part
    return {k: (_strip((c,)), _strip((s,))) for k, (c, s) in acc.items()}


def _poly_product(a: Mapping[Key, Tuple[Coeffs, Coeffs]],
                  b: Mapping[Key, Tuple[Coeffs, Coeffs]],
                  t_degree: Optional[int]) -> Dict[Key, Tuple[Coeffs, Coeffs]]:
    """Same identities as _flat_product with t-polynomial coefficients."""
    acc: Dict[Key, List[Coeffs]] = {}

    def bump(key: Key, c: Coeffs, s: Coeffs) -> None:
        slot = acc.get(key)
        if slot is None:
            acc[key] = [c, s]
        else:
            slot[0] = _padd(slot[0], c)
            slot[1] = _padd(slot[1], s)

    for (i1, j1), (ca, sa) in a.items():
        for (i2, j2), (cb, sb) in b.items():
            cc = _pmul(ca, cb, t_degree)
            ss = _pmul(sa, sb, t_degree)
            sc = _pmul(sa, cb, t_degree)
            cs = _pmul(ca, sb, t_degree)
            bump((i1 + i2, j1 + j2), _padd(cc, _pneg(ss)), _padd(sc, cs))
            di, dj = i1 - i2, j1 - j2
            if di < 0 or (di == 0 and dj < 0):
                bump((-di, -dj), _padd(cc, ss), _padd(cs, _pneg(sc)))
            else:
                bump((di, dj), _padd(cc, ss), _padd(sc, _pneg(cs)))
    return {k: (c, s) for k, (c, s) in acc.items()}


class RationalTrig:
    """
    Quotient num/den of trigonometric polynomials. No cancellation is ever
    attempted; equality is decided by cross multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: TrigPoly, den: Optional[TrigPoly] = None):
        if den is None:
            den = TrigPoly.constant(1, num.mode)
        num._check(den)
        if not den:
            raise ZeroDivisionError("RationalTrig denominator is the zero series")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalTrig is immutable")

    @property
    def mode(self) -> ScalarMode:
        return self.num.mode

    def __add__(self, other: "RationalTrig") -> "RationalTrig":
        if self.den == other.den:
            return RationalTrig(self.num + other.num, self.den)
        return RationalTrig(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RationalTrig":
        return RationalTrig(-self.num, self.den)

    def __sub__(self, other: "RationalTrig") -> "RationalTrig":
        return self + (-other)

    def __mul__(self, other: Union["RationalTrig", TrigPoly]) -> "RationalTrig":
        if isinstance(other, TrigPoly):
            return RationalTrig(self.num * other, self.den)
        return RationalTrig(self.num * other.num, self.den * other.den)

    def differentiate(self, var: str) -> "RationalTrig":
        """Quotient rule: (n'd - nd') / d^2."""
        dn = self.num.differentiate(var)
        dd = self.den.differentiate(var)
        return RationalTrig(dn * self.den - self.num * dd, self.den * self.den)

    def substitute_t(self, t0: Any) -> "RationalTrig":
        den = self.den.substitute_t(t0)
        return RationalTrig(self.num.substitute_t(t0), den)

    def evaluate(self, t: Any, theta: Any, phi: Any) -> float:
        return self.num.evaluate(t, theta, phi) / self.den.evaluate(t, theta, phi)

    def equals(self, other: "RationalTrig", scale: Optional[float] = None) -> bool:
        return (self.num * other.den - other.num * self.den).is_zero(scale)

    def __repr__(self) -> str:
        return f"RationalTrig(num={self.num!r}, den={self.den!r})"
