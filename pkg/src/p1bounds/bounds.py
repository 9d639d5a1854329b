"""Error constants and W^{1,p} interpolation bounds.

Constants are exact :class:`fractions.Fraction` values; they only become
floats inside :func:`interpolation_bound` and the savings calculator.

The bound on ``||u - u_I||_{1,p}`` for a method with constant ``C`` is::

    ( C (h^p + h^{2p}/p) sup|u''|^p  +  D )^(1/p)

with ``D = (3/8)^p (h^p + h^{2p}/p) (M2 - m2)^p / (3n)`` for the
finite-n Taylor-like method and ``D = 0`` otherwise.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional

__all__ = [
    "NormOrder",
    "BoundMethod",
    "TAYLOR",
    "MEAN_VALUE",
    "TAYLOR_LIKE_ASYMPTOTIC",
    "taylor_like",
    "parse_method",
    "BoundReport",
    "power_sum",
    "power_sum_pascal",
    "star_sum",
    "constant",
    "interpolation_bound",
    "asymptotic_gap",
    "lemma21_cell_bound",
    "MeshSavings",
    "constant_ratio",
    "mesh_savings",
    "constants_table_csv",
]


def _check_p(p: int) -> None:
    if int(p) != p or p < 2:
        raise ValueError(f"p must be an integer >= 2, got {p!r}")


@dataclass(frozen=True)
class NormOrder:
    p: int

    def __post_init__(self) -> None:
        _check_p(self.p)

    @property
    def q(self) -> Fraction:
        """Conjugate exponent ``p / (p - 1)``."""
        return Fraction(self.p, self.p - 1)


@dataclass(frozen=True, order=True)
class BoundMethod:
    """One of ``taylor``, ``mean_value``, ``taylor_like`` (with ``n``) or
    ``taylor_like_asymptotic``."""

    kind: str
    n: Optional[int] = None

    _KINDS = ("taylor", "mean_value", "taylor_like", "taylor_like_asymptotic")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown method {self.kind!r}")
        if self.kind == "taylor_like":
            if self.n is None or int(self.n) != self.n or self.n < 1:
                raise ValueError("taylor_like needs an integer n >= 1")
        elif self.n is not None:
            raise ValueError(f"{self.kind} takes no n")

    @property
    def label(self) -> str:
        return f"taylor_like:{self.n}" if self.kind == "taylor_like" else self.kind

    def __str__(self) -> str:
        return self.label


TAYLOR = BoundMethod("taylor")
MEAN_VALUE = BoundMethod("mean_value")
TAYLOR_LIKE_ASYMPTOTIC = BoundMethod("taylor_like_asymptotic")


def taylor_like(n: int) -> BoundMethod:
    return BoundMethod("taylor_like", n)


_ALIASES = {
    "taylor": TAYLOR,
    "mean_value": MEAN_VALUE,
    "meanvalue": MEAN_VALUE,
    "mvt": MEAN_VALUE,
    "taylor_like_asymptotic": TAYLOR_LIKE_ASYMPTOTIC,
    "asymptotic": TAYLOR_LIKE_ASYMPTOTIC,
    "taylor_like_inf": TAYLOR_LIKE_ASYMPTOTIC,
}


def parse_method(text: str) -> BoundMethod:
    """Parse ``taylor``, ``mean_value``, ``asymptotic`` or ``taylor_like:N``."""
    key = text.strip().lower().replace("-", "_")
    if key in _ALIASES:
        return _ALIASES[key]
    if key.startswith("taylor_like:"):
        return taylor_like(int(key.split(":", 1)[1]))
    raise ValueError(
        f"unknown method {text!r}; use taylor, mean_value, asymptotic or taylor_like:N"
    )


@dataclass
class BoundReport:
    method: BoundMethod
    p: int
    h: float
    constant: Fraction
    bound_W1p: float
    oscillation_term: float
    measured_error: Optional[float] = None
    bounds_exact: bool = True

    @property
    def ok(self) -> Optional[bool]:
        """``measured <= bound`` with a 1e-10 relative quadrature slack."""
        if self.measured_error is None:
            return None
        return self.measured_error <= self.bound_W1p * (1.0 + 1e-10) + 1e-13


# -- power sums ---------------------------------------------------------------


def power_sum(p: int, n: int) -> int:
    """``sum(k**p for k in 1..n)`` by direct summation."""
    if p < 0 or n < 0:
        raise ValueError("p and n must be nonnegative")
    return sum(k ** p for k in range(1, n + 1))


def power_sum_pascal(p: int, n: int) -> int:
    """``S_p(n)`` from the recursion over lower powers.

    Uses ``(p+2) S_{p+1}(n) = (n+1)^{p+2} - 1 - sum_{j<=p} C(p+2, j) S_j(n)``
    starting from ``S_0(n) = n``.
    """
    if p < 0 or n < 0:
        raise ValueError("p and n must be nonnegative")
    sums = [n]
    for m in range(p):
        rhs = (n + 1) ** (m + 2) - 1 - sum(math.comb(m + 2, j) * sums[j] for j in range(m + 1))
        q, r = divmod(rhs, m + 2)
        assert r == 0, "recursion produced a non-integer"
        sums.append(q)
    return sums[p]


def star_sum(p: int, n: int) -> int:
    """``sum(k**(p+1) for k in 1..n-1)``; zero for ``n = 1``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    return power_sum(p + 1, n - 1)


# -- constants ----------------------------------------------------------------


def constant(method: BoundMethod, p: int) -> Fraction:
    """Exact constant multiplying ``h^p (1 + h^p/p) sup|u''|^p``."""
    _check_p(p)
    if method.kind == "taylor":
        return Fraction(2 ** (p - 1), p + 1) + Fraction(1, 2)
    if method.kind == "mean_value":
        return Fraction(1, p + 1)
    if method.kind == "taylor_like_asymptotic":
        return Fraction(2, (p + 1) * (p + 2))
    n = method.n
    lead = Fraction((n + 2) ** (p - 1), p + 1)
    return lead * (Fraction(1, 2 ** (p - 1) * n ** p) + Fraction(2 * star_sum(p, n), n ** (2 * p + 1)))


def interpolation_bound(
    method: BoundMethod,
    p: int,
    h: float,
    sup_d2: float,
    osc_d2: float = 0.0,
) -> BoundReport:
    _check_p(p)
    if sup_d2 < 0 or osc_d2 < 0:
        raise ValueError("sup_d2 and osc_d2 must be nonnegative")
    if not 0.0 < h <= 1.0:
        raise ValueError(f"h must lie in (0, 1], got {h!r}")
    c = constant(method, p)
    scale = h ** p + h ** (2 * p) / p
    main = float(c) * scale * sup_d2 ** p
    osc = 0.0
    if method.kind == "taylor_like":
        osc = (0.375 ** p) * scale * osc_d2 ** p / (3 * method.n)
    return BoundReport(
        method=method,
        p=p,
        h=h,
        constant=c,
        bound_W1p=(main + osc) ** (1.0 / p),
        oscillation_term=osc,
    )


def asymptotic_gap(p: int, n: int) -> float:
    """Relative excess of the finite-n constant over its n -> inf limit."""
    return float(constant(taylor_like(n), p) / constant(TAYLOR_LIKE_ASYMPTOTIC, p) - 1)


def lemma21_cell_bound(p: int, k: int, n: int, h_i: float, sup_d2: float) -> float:
    """Bound on ``int_cell |u'(x) - u'(x_i + k h_i/n)|^p dx``."""
    _check_p(p)
    if n < 1 or not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n and n >= 1, got k={k}, n={n}")
    weight = Fraction(k ** (p + 1) + (n - k) ** (p + 1), p + 1)
    return float(weight) * (h_i / n) ** (p + 1) * sup_d2 ** p


# -- mesh savings -------------------------------------------------------------


class MeshSavings(NamedTuple):
    h_ratio: float
    node_factor: float


def constant_ratio(p: int, coarse: BoundMethod, fine: BoundMethod) -> Fraction:
    return constant(fine, p) / constant(coarse, p)


def mesh_savings(p: int, coarse: BoundMethod, fine: BoundMethod, dim: int) -> MeshSavings:
    """How much larger ``h`` may be when bounding with ``coarse`` instead of ``fine``.

    Drops the ``(1 + h^p/p)^(1/p)`` factor, which is close to one for
    small ``h``.  ``fine`` is expected to carry the larger constant.
    """
    if dim not in (1, 2, 3):
        raise ValueError(f"dim must be 1, 2 or 3, got {dim!r}")
    ratio = constant_ratio(p, coarse, fine)
    if ratio == 1:
        return MeshSavings(1.0, 1.0)
    h_ratio = float(ratio) ** (1.0 / p)
    return MeshSavings(h_ratio, h_ratio ** dim)


SAVINGS_NOTE = "h ratio ignores the (1 + h^p/p)^(1/p) factor (close to 1 for small h)"


def constants_table_csv(ps: Iterable[int], methods: Iterable[BoundMethod]) -> str:
    """CSV with columns method,p,n,constant_num,constant_den,constant_float."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["method", "p", "n", "constant_num", "constant_den", "constant_float"])
    methods = list(methods)
    for p in ps:
        for m in methods:
            c = constant(m, p)
            w.writerow([m.kind, p, "" if m.n is None else m.n,
                        c.numerator, c.denominator, "%.12e" % float(c)])
    return buf.getvalue()
