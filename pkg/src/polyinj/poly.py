"""Sparse exact multivariate polynomials and homogeneous binary forms.

MultiPoly is a sparse polynomial in a subset of the variables x, y, z, w
with Fraction coefficients, normalized so that the variable tuple lists
exactly the variables that actually occur.  BinaryForm is a dense
homogeneous form F(x, y) stored by coefficient vector.  Everything is
immutable and exact; serialized term order is graded-lexicographic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .rationals import rat_from_str, rat_to_str

VAR_ORDER = ("x", "y", "z", "w")

_VAR_INDEX = {v: i for i, v in enumerate(VAR_ORDER)}


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return rat_from_str(c)
    raise TypeError(f"coefficient must be exact (int, Fraction, str), got {type(c)!r}")


def _gradlex_key(exp: tuple[int, ...]) -> tuple:
    return (sum(exp), exp)


@dataclass(frozen=True)
class MultiPoly:
    """Sparse polynomial: exponent vector -> nonzero Fraction coefficient.

    The normal form enforced at construction: coefficients are nonzero
    Fractions, exponent vectors have length len(vars), and vars lists in
    x<y<z<w order exactly the variables appearing with positive exponent.
    The zero polynomial is the empty term map over no variables.
    """

    vars: tuple[str, ...]
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        vs = tuple(self.vars)
        for v in vs:
            if v not in _VAR_INDEX:
                raise ValueError(f"unknown variable {v!r}; allowed: {VAR_ORDER}")
        if list(vs) != sorted(set(vs), key=_VAR_INDEX.get):
            raise ValueError(f"variables must be distinct and in x,y,z,w order: {vs}")
        cleaned: dict[tuple[int, ...], Fraction] = {}
        for exp, coef in self.terms.items():
            exp = tuple(exp)
            if len(exp) != len(vs):
                raise ValueError(f"exponent {exp} has wrong arity for vars {vs}")
            if any(e < 0 or not isinstance(e, int) for e in exp):
                raise ValueError(f"exponents must be nonnegative integers: {exp}")
            coef = _as_fraction(coef)
            if coef != 0:
                cleaned[exp] = cleaned.get(exp, Fraction(0)) + coef
        cleaned = {e: c for e, c in cleaned.items() if c != 0}
        # Drop variables that no surviving term uses.
        used = [i for i in range(len(vs)) if any(e[i] > 0 for e in cleaned)]
        if len(used) != len(vs):
            vs = tuple(vs[i] for i in used)
            cleaned = {tuple(e[i] for i in used): c for e, c in cleaned.items()}
        object.__setattr__(self, "vars", vs)
        object.__setattr__(self, "terms", cleaned)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "MultiPoly":
        return MultiPoly((), {})

    @staticmethod
    def const(c) -> "MultiPoly":
        return MultiPoly((), {(): _as_fraction(c)})

    @staticmethod
    def variable(name: str) -> "MultiPoly":
        return MultiPoly((name,), {(1,): Fraction(1)})

    # -- ring structure ------------------------------------------------

    def _aligned(self, other: "MultiPoly"):
        """Both term maps rewritten over the union variable tuple."""
        vs = tuple(sorted(set(self.vars) | set(other.vars), key=_VAR_INDEX.get))
        return vs, _reindex(self, vs), _reindex(other, vs)

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        vs, a, b = self._aligned(other)
        out = dict(a)
        for exp, coef in b.items():
            out[exp] = out.get(exp, Fraction(0)) + coef
        return MultiPoly(vs, out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        vs, a, b = self._aligned(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(vs, out)

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative polynomial power")
        acc = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def scale(self, c) -> "MultiPoly":
        c = _as_fraction(c)
        return MultiPoly(self.vars, {e: k * c for e, k in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    # -- queries --------------------------------------------------------

    def total_degree(self) -> int:
        """Max total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def homogeneity(self) -> int | None:
        """The common total degree of all terms, or None if mixed.

        Raises ValueError on the zero polynomial, whose degree is undefined.
        """
        if not self.terms:
            raise ValueError("homogeneity of the zero polynomial is undefined")
        degs = {sum(e) for e in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def evaluate(self, point) -> Fraction:
        """Exact value at a point with one coordinate per variable."""
        pt = tuple(point)
        if len(pt) != len(self.vars):
            raise ValueError(
                f"arity mismatch: polynomial in {self.vars} evaluated at {len(pt)} coordinates"
            )
        pt = tuple(_as_fraction(c) for c in pt)
        maxes = [0] * len(pt)
        for e in self.terms:
            for i, k in enumerate(e):
                maxes[i] = max(maxes[i], k)
        pows = []
        for v, m in zip(pt, maxes):
            row = [Fraction(1)]
            for _ in range(m):
                row.append(row[-1] * v)
            pows.append(row)
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    t = t * pows[i][k]
            total += t
        return total

    def eval_xy(self, xv, yv) -> Fraction:
        """Evaluate a polynomial in variables within {x, y} at (xv, yv)."""
        coords = {"x": xv, "y": yv}
        try:
            return self.evaluate(tuple(coords[v] for v in self.vars))
        except KeyError:
            raise ValueError(f"polynomial has variables {self.vars}, expected subset of (x, y)")

    def substitute(self, mapping: dict[str, "MultiPoly"]) -> "MultiPoly":
        """Exact composition: replace each variable by the mapped polynomial.

        Every variable of this polynomial must be in the mapping.
        """
        for v in self.vars:
            if v not in mapping:
                raise ValueError(f"substitution does not map variable {v!r}")
        # Cache successive powers of each image as they get used.
        pow_cache: dict[str, list[MultiPoly]] = {v: [MultiPoly.const(1)] for v in self.vars}

        def image_pow(v: str, k: int) -> MultiPoly:
            row = pow_cache[v]
            while len(row) <= k:
                row.append(row[-1] * mapping[v])
            return row[k]

        acc = MultiPoly.zero()
        for e, c in self.terms.items():
            t = MultiPoly.const(c)
            for v, k in zip(self.vars, e):
                if k:
                    t = t * image_pow(v, k)
            acc = acc + t
        return acc

    def partial(self, var: str) -> "MultiPoly":
        """Formal partial derivative with respect to var."""
        if var not in _VAR_INDEX:
            raise ValueError(f"unknown variable {var!r}")
        if var not in self.vars:
            return MultiPoly.zero()
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = e[:i] + (e[i] - 1,) + e[i + 1 :]
            out[ne] = out.get(ne, Fraction(0)) + c * e[i]
        return MultiPoly(self.vars, out)

    # -- presentation ----------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in descending graded-lex order (the serialized order)."""
        return sorted(self.terms.items(), key=lambda t: _gradlex_key(t[0]), reverse=True)

    def render(self) -> str:
        """Deterministic pretty-printer; output re-parses to an equal polynomial."""
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            factors = []
            for v, k in zip(self.vars, e):
                if k == 1:
                    factors.append(v)
                elif k > 1:
                    factors.append(f"{v}^{k}")
            mag = abs(c)
            if not factors:
                body = _coef_str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_coef_str(mag)] + factors)
            pieces.append(("-" if c < 0 else "+", body))
        sign, body = pieces[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def to_json_dict(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [
                {"exp": list(e), "coef": rat_to_str(c)} for e, c in self.sorted_terms()
            ],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "MultiPoly":
        vars_ = tuple(d["vars"])
        terms = {tuple(t["exp"]): rat_from_str(t["coef"]) for t in d["terms"]}
        return MultiPoly(vars_, terms)

    def __str__(self) -> str:
        return self.render()


def _reindex(p: MultiPoly, vs: tuple[str, ...]) -> dict:
    if p.vars == vs:
        return p.terms
    pos = {v: i for i, v in enumerate(vs)}
    out = {}
    for e, c in p.terms.items():
        ne = [0] * len(vs)
        for v, k in zip(p.vars, e):
            ne[pos[v]] = k
        out[tuple(ne)] = c
    return out


def _coef_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# Univariate helpers over Fraction, used by separability and local root work.
# Representation: tuple of coefficients, low degree first, trailing zeros
# trimmed; the zero polynomial is ().
# ---------------------------------------------------------------------------


def utrim(coeffs) -> tuple[Fraction, ...]:
    cs = [_as_fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def udeg(u: tuple[Fraction, ...]) -> int:
    return len(u) - 1


def uderiv(u: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    return utrim(c * i for i, c in enumerate(u) if i >= 1)


def ueval(u: tuple[Fraction, ...], v) -> Fraction:
    acc = Fraction(0)
    for c in reversed(u):
        acc = acc * v + c
    return acc


def udivmod(a: tuple[Fraction, ...], b: tuple[Fraction, ...]):
    if not b:
        raise ZeroDivisionError("univariate division by zero polynomial")
    r = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + len(b) - 1] * inv
        if c != 0:
            q[k] = c
            for i, bc in enumerate(b):
                r[k + i] -= c * bc
    return utrim(q), utrim(r)


def ugcd(a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    """Monic gcd via the Euclidean algorithm (monic: for gcd != 0)."""
    while b:
        a, b = b, udivmod(a, b)[1]
    if a:
        inv = 1 / a[-1]
        a = tuple(c * inv for c in a)
    return a


# ---------------------------------------------------------------------------
# Binary forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous form F(x, y) of degree d; coeffs[i] multiplies x^(d-i) y^i.

    The zero form is rejected: the collision surface F(x,y)=F(z,w) would be
    all of projective space.
    """

    degree: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        cs = tuple(_as_fraction(c) for c in self.coeffs)
        if self.degree < 0 or len(cs) != self.degree + 1:
            raise ValueError(
                f"degree {self.degree} needs {self.degree + 1} coefficients, got {len(cs)}"
            )
        if all(c == 0 for c in cs):
            raise ValueError("the zero form is not a valid BinaryForm")
        object.__setattr__(self, "coeffs", cs)

    @staticmethod
    def from_multipoly(p: MultiPoly) -> "BinaryForm":
        if p.is_zero():
            raise ValueError("the zero polynomial is not a binary form")
        if not set(p.vars) <= {"x", "y"}:
            raise ValueError(f"binary form must use only x and y, got {p.vars}")
        d = p.homogeneity()
        if d is None:
            raise ValueError("polynomial is not homogeneous")
        coeffs = [Fraction(0)] * (d + 1)
        for e, c in p.terms.items():
            ex = dict(zip(p.vars, e))
            coeffs[ex.get("y", 0)] = c
        return BinaryForm(d, tuple(coeffs))

    def to_multipoly(self) -> MultiPoly:
        d = self.degree
        terms = {(d - i, i): c for i, c in enumerate(self.coeffs) if c != 0}
        return MultiPoly(("x", "y"), terms)

    def evaluate(self, xv, yv) -> Fraction:
        xv, yv = _as_fraction(xv), _as_fraction(yv)
        d = self.degree
        xp = [Fraction(1)]
        yp = [Fraction(1)]
        for _ in range(d):
            xp.append(xp[-1] * xv)
            yp.append(yp[-1] * yv)
        total = Fraction(0)
        for i, c in enumerate(self.coeffs):
            if c != 0:
                total += c * xp[d - i] * yp[i]
        return total

    def y_multiplicity(self) -> int:
        """Largest m with y^m dividing the form (order of the root at infinity)."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        raise AssertionError("zero form cannot exist here")

    def dehomogenized(self) -> tuple[Fraction, ...]:
        """g(x) = F(x, 1) as a univariate coefficient tuple, low degree first."""
        return utrim(reversed(self.coeffs))

    def is_separable(self) -> bool:
        """True iff the form is squarefree (no repeated linear factor over Qbar).

        Decided on the dehomogenization g(x) = F(x, 1) via gcd(g, g') = 1,
        plus the requirement that y^2 does not divide the form.
        """
        if self.y_multiplicity() > 1:
            return False
        g = self.dehomogenized()
        if udeg(g) <= 0:
            # Constant g: the form is c * y^m with m <= 1 here.
            return True
        return udeg(ugcd(g, uderiv(g))) == 0

    def to_json_dict(self) -> dict:
        return self.to_multipoly().to_json_dict()

    def __str__(self) -> str:
        return self.to_multipoly().render()
