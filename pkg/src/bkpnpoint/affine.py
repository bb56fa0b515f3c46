r"""Affine coordinates of tau-functions and their generating series.

A BKP tau-function is determined by antisymmetric affine coordinates
``a_{n,m}`` (``n, m >= 0``, ``a_{n,m} = -a_{m,n}``, zero diagonal).  A KP
tau-function by coordinates ``a_{m,n}`` (``m, n >= 0``), no symmetry.

Both kinds are stored sparsely as ``dict[(row, col)] -> Fraction``; the BKP
store keeps both triangles so lookups never need sign fixups.

Generating series conventions (variables ordered ``z_0, z_1, ...``; the
smaller position always dominates kernel expansions):

* ``A^KP(x, y)  = sum a_{m,n} x^{-m-1} y^{-n-1}``
* ``A^BKP(w, z) = (1/2) [sum_{n>=1,m>=0} + sum_{n>=0,m>=1}]
  (-1)^{m+n+1} a_{n,m} w^{-n} z^{-m}``
* ``hat A^KP(x, y)  = A^KP(x, y) + expansion of 1/(x - y)``
* ``hat A^BKP(w, z) = A^BKP(w, z) - 1/4 - (1/2) sum_{k>=1} (-1)^k w^{-k} z^k``

The two hierarchies are linked by

* coordinates: ``a^KP_{m,n} = 2 (-1)^{m+1} (a_{m+1,n} + a_{m+1,0} a_{0,n})``
* series: ``A^BKP(w, z) = (1/4) (z A^KP(w, -z) - w A^KP(z, -w))``

and `check_gs_relation` verifies the series form coefficientwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .series import KernelKind, Series, expand_kernel, uniform_window

Window = tuple[tuple[int, int], ...]


@dataclass(frozen=True, eq=True)
class AffineB:
    """Antisymmetric BKP affine coordinates, both triangles stored."""

    entries: dict = field(default_factory=dict)

    def get(self, n: int, m: int) -> Fraction:
        return self.entries.get((n, m), Fraction(0))

    @property
    def max_index(self) -> int:
        return max((max(k) for k in self.entries), default=0)

    def upper_items(self):
        """Entries with row > col, sorted; determines the rest."""
        return sorted((k, v) for k, v in self.entries.items() if k[0] > k[1])

    def is_zero(self) -> bool:
        return not self.entries


@dataclass(frozen=True, eq=True)
class AffineKP:
    """KP affine coordinates ``a_{m,n}``."""

    entries: dict = field(default_factory=dict)

    def get(self, m: int, n: int) -> Fraction:
        return self.entries.get((m, n), Fraction(0))

    @property
    def max_index(self) -> int:
        return max((max(k) for k in self.entries), default=0)


def validate_b(items) -> AffineB:
    """Build :class:`AffineB` from ``{(n, m): value}`` or ``(n, m, value)`` rows.

    Either triangle (or both, if consistent) may be given; the other is
    completed by antisymmetry.  Raises ``ValueError`` on a nonzero diagonal
    entry, an antisymmetry conflict, or a negative index.
    """
    if isinstance(items, dict):
        rows = [(n, m, v) for (n, m), v in items.items()]
    else:
        rows = [(n, m, v) for n, m, v in items]
    entries: dict = {}
    for n, m, v in rows:
        if not (isinstance(n, int) and isinstance(m, int)):
            raise ValueError(f"indices must be integers, got ({n!r}, {m!r})")
        if n < 0 or m < 0:
            raise ValueError(f"negative index in ({n}, {m})")
        v = Fraction(v)
        if n == m:
            if v != 0:
                raise ValueError(f"nonzero diagonal entry ({n}, {m}) = {v}")
            continue
        for key, val in (((n, m), v), ((m, n), -v)):
            if key in entries and entries[key] != val:
                raise ValueError(
                    f"antisymmetry conflict at {key}: {entries[key]} vs {val}"
                )
            entries[key] = val
    return AffineB({k: v for k, v in entries.items() if v != 0})


def bkp_to_kp(b: AffineB) -> AffineKP:
    """KP affine coordinates of the square embedding of a BKP point."""
    out: dict = {}
    top = b.max_index
    for m in range(0, top):  # a_{m+1, .} must exist
        for n in range(0, top + 1):
            val = 2 * (-1) ** (m + 1) * (b.get(m + 1, n) + b.get(m + 1, 0) * b.get(0, n))
            if val != 0:
                out[(m, n)] = val
    return AffineKP(out)


# -- generating series ----------------------------------------------------


def series_a_kp(
    kp: AffineKP,
    nvars: int,
    window: Window,
    var_first: int,
    var_second: int,
    sign_first: int = 1,
    sign_second: int = 1,
) -> Series:
    """``A^KP(s1 z_a, s2 z_b)``; the two slots may be the same variable."""
    total = Series.zero(nvars, window)
    for (m, n), a in sorted(kp.entries.items()):
        exps = [0] * nvars
        exps[var_first] += -m - 1
        exps[var_second] += -n - 1
        c = a * sign_first ** (m + 1) * sign_second ** (n + 1)
        total = total.add(Series.monomial(nvars, window, exps, c))
    return total


def series_a_bkp(
    b: AffineB,
    nvars: int,
    window: Window,
    var_first: int,
    var_second: int,
    sign_first: int = 1,
    sign_second: int = 1,
) -> Series:
    """``A^BKP(s1 z_a, s2 z_b)``; the two slots may be the same variable."""
    total = Series.zero(nvars, window)
    for (n, m), a in sorted(b.entries.items()):
        weight = (1 if n >= 1 else 0) + (1 if m >= 1 else 0)
        if weight == 0:
            continue
        exps = [0] * nvars
        exps[var_first] += -n
        exps[var_second] += -m
        c = (
            Fraction(weight, 2)
            * (-1) ** (m + n + 1)
            * a
            * sign_first**n
            * sign_second**m
        )
        total = total.add(Series.monomial(nvars, window, exps, c))
    return total


def series_a_hat_kp(
    kp: AffineKP,
    nvars: int,
    window: Window,
    var_first: int,
    var_second: int,
    sign_first: int = 1,
    sign_second: int = 1,
) -> Series:
    """``hat A^KP``: adds the expanded ``1/(arg1 - arg2)`` off the diagonal."""
    base = series_a_kp(
        kp, nvars, window, var_first, var_second, sign_first, sign_second
    )
    if var_first == var_second:
        return base
    kernel = expand_kernel(
        KernelKind.INV_DIFF,
        nvars,
        window,
        var_first,
        var_second,
        sign_first,
        sign_second,
    )
    return base.add(kernel)


def series_a_hat_bkp(
    b: AffineB,
    nvars: int,
    window: Window,
    var_first: int,
    var_second: int,
    sign_first: int = 1,
    sign_second: int = 1,
) -> Series:
    """``hat A^BKP``: subtracts ``1/4`` and the geometric tail off the diagonal.

    Off the diagonal the first variable must be the dominant (smaller) one;
    that is the only region where the tail converges as written.
    """
    base = series_a_bkp(
        b, nvars, window, var_first, var_second, sign_first, sign_second
    )
    if var_first == var_second:
        return base
    if var_first > var_second:
        raise ValueError("hat A^BKP requires the first variable dominant")
    tail = expand_kernel(
        KernelKind.GEOM_TAIL,
        nvars,
        window,
        var_first,
        var_second,
        sign_first,
        sign_second,
    )
    quarter = Series.constant(nvars, window, Fraction(-1, 4))
    return base.add(quarter).add(tail.scale(Fraction(-1, 2)))


def check_gs_relation(b: AffineB, depth: int) -> bool:
    """``A^BKP(w,z) == (1/4)(z A^KP(w,-z) - w A^KP(z,-w))`` on the depth box.

    Coefficients are compared for all exponent pairs in ``[-depth, 0]^2``.
    """
    kp = bkp_to_kp(b)
    window = uniform_window(2, -depth - 2, 1)
    lhs = series_a_bkp(b, 2, window, 0, 1)
    t1 = series_a_kp(kp, 2, window, 0, 1, 1, -1).shift((0, 1))
    t2 = series_a_kp(kp, 2, window, 1, 0, 1, -1).shift((1, 0))
    rhs = t1.sub(t2).scale(Fraction(1, 4))
    for ew in range(-depth, 1):
        for ez in range(-depth, 1):
            if lhs.coefficient((ew, ez)) != rhs.coefficient((ew, ez)):
                return False
    return True


# -- coordinate files ------------------------------------------------------


def load_affine_b(path) -> AffineB:
    """Read BKP coordinates from a JSON list of ``[n, m, value]`` records."""
    with open(path) as fh:
        data = json.load(fh)
    return parse_affine_b(data)


def parse_affine_b(data) -> AffineB:
    if not isinstance(data, list):
        raise ValueError("coordinate file must be a JSON list of records")
    rows = []
    for rec in data:
        if not (isinstance(rec, list) and len(rec) == 3):
            raise ValueError(f"bad coordinate record {rec!r}")
        n, m, v = rec
        if isinstance(v, bool) or isinstance(n, bool) or isinstance(m, bool):
            raise ValueError(f"bad coordinate record {rec!r}")
        if not isinstance(v, (str, int)):
            raise ValueError(f"bad coordinate value {v!r}")
        try:
            value = Fraction(str(v))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad coordinate value {v!r}") from exc
        rows.append((n, m, value))
    return validate_b(rows)


def dump_affine_b(b: AffineB) -> str:
    """Canonical JSON text: upper-triangle records sorted by index."""
    recs = [[n, m, _frac_str(v)] for (n, m), v in b.upper_items()]
    return json.dumps(recs, separators=(", ", ": ")) + "\n"


def dump_affine_kp(kp: AffineKP) -> str:
    recs = [[m, n, _frac_str(v)] for (m, n), v in sorted(kp.entries.items())]
    return json.dumps(recs, separators=(", ", ": ")) + "\n"


def _frac_str(v: Fraction) -> str:
    return str(v)
