r"""Connected n-point functions as closed cycle sums over affine coordinates.

Three routes to the same numbers:

* `kp_npoint`: the KP n-point generating series

  ``(-1)^{n-1} sum_{n-cycles} prod_{a->b} hat A^KP(z_a, z_b)
  - [n=2] (expansion of 1/(z_1-z_2)^2)``,

  whose coefficient of ``prod z_k^{-i_k-1}`` is the connected correlator
  ``d^n log tau / dt_{i_1} ... dt_{i_n}`` at ``t = 0``.

* `embedded_npoint_series`: the same cycle sum evaluated for the KP image of
  a BKP point, averaged over sign flips of every variable,

  ``(-1)^{n-1}/2^{n+1} sum_{cycles} sum_{eps in {+-1}^n}
  prod hat A^KP(eps_a z_a, eps_b z_b) - [n=2] (KP delta kernel)``,

  coefficient of ``prod z_k^{-i_k-1}``, odd ``i_k``.

* `wangyang_npoint_series`: the intrinsic BKP cycle sum

  ``-[n=2] (BKP delta kernel) + sum_{cycles} sum_{eps, eps_1 = 1}
  (-eps_2 ... eps_n) prod xi(a, b, eps)``,

  coefficient of ``prod z_k^{-i_k}``, odd ``i_k``, where the factor for the
  cycle step ``a -> b`` keeps the smaller variable index dominant:

  ``xi = hat A^BKP(eps_a z_a, -eps_b z_b)``        for ``a < b``,
  ``xi = A^BKP(eps_a z_a, -eps_a z_a)``            for ``a == b`` (n = 1),
  ``xi = -hat A^BKP(-eps_b z_b, eps_a z_a)``       for ``a > b``.

The two BKP routes are related by ``wangyang = (z_1 ... z_n) * embedded`` as
raw series on the all-negative-exponent box.

Truncation policy: exponent floor ``-(max_weight + 2)``; positive cap
``max_weight + nvars * (max_degree + 2)`` where ``max_degree`` bounds the
deepest coordinate exponent; `cap_scale` rescales the cap to certify that
reported coefficients are truncation-stable.  Once both factors touching a
variable are multiplied in, that variable's exponents are final and are
clipped to the reported region (``<= -1``), which keeps intermediate products
small without affecting any reported coefficient.  Returned series are
restricted to the all-negative box.

Per-variable parity (a consequence of the sign-flip sums: even exponents for
the embedded route, odd for the direct one) is asserted on every kept
monomial, as is permutation symmetry of the extracted tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .affine import (
    AffineB,
    AffineKP,
    bkp_to_kp,
    series_a_bkp,
    series_a_hat_bkp,
    series_a_hat_kp,
)
from .series import KernelKind, Series, expand_kernel

Window = tuple[tuple[int, int], ...]


def cycle_orders(n: int):
    """Visiting orders of the ``(n-1)!`` cycles on ``{0, .., n-1}``."""
    if n == 1:
        return ((0,),)
    return tuple((0,) + rest for rest in permutations(range(1, n)))


def cycle_pairs(order):
    n = len(order)
    return tuple((order[i], order[(i + 1) % n]) for i in range(n))


def standard_window(
    nvars: int, max_weight: int, max_degree: int, cap_scale: int = 1,
    pos_cap: int | None = None,
) -> Window:
    lo = -(max_weight + 2)
    hi = pos_cap if pos_cap is not None else cap_scale * (
        max_weight + nvars * (max_degree + 2)
    )
    return ((lo, hi),) * nvars


def _kp_degree(kp: AffineKP) -> int:
    return max((max(m, n) + 1 for m, n in kp.entries), default=1)


def _b_degree(b: AffineB) -> int:
    return max(b.max_index, 1)


def _negative_box(nvars: int, window: Window) -> dict:
    return {v: (window[v][0], -1) for v in range(nvars)}


def _cycle_product(factors, order, window) -> Series:
    """Multiply factors along the cycle, clipping completed variables."""
    total = factors[0]
    n = len(factors)
    lo = window[0][0]
    for i in range(1, n):
        total = total.mul(factors[i])
        done = order[i]  # both incident factors are now included
        total = total.clip({done: (lo, -1)})
    return total.clip(_negative_box(total.nvars, window))


def _sign_vectors(n: int, fix_first: bool):
    if n == 0:
        return ((),)
    vecs = []
    first_choices = (1,) if fix_first else (1, -1)
    for mask in range(2 ** (n - 1)):
        for f in first_choices:
            eps = [f]
            for k in range(n - 1):
                eps.append(1 if (mask >> k) & 1 == 0 else -1)
            vecs.append(tuple(eps))
    return tuple(vecs)


def kp_npoint(
    kp: AffineKP,
    n: int,
    max_weight: int,
    *,
    cap_scale: int = 1,
    pos_cap: int | None = None,
) -> Series:
    """KP connected n-point series, ``n >= 2``, on the all-negative box."""
    if n < 2:
        raise ValueError("the KP cycle formula needs n >= 2")
    window = standard_window(n, max_weight, _kp_degree(kp), cap_scale, pos_cap)
    cache: dict = {}

    def factor(a, b):
        if (a, b) not in cache:
            cache[(a, b)] = series_a_hat_kp(kp, n, window, a, b)
        return cache[(a, b)]

    total = Series.zero(n, window)
    for order in cycle_orders(n):
        pairs = cycle_pairs(order)
        term = _cycle_product([factor(a, b) for a, b in pairs], order, window)
        total = total.add(term)
    if (n - 1) % 2 == 1:
        total = total.neg()
    if n == 2:
        delta = expand_kernel(KernelKind.INV_DIFF_SQ, n, window, 0, 1)
        total = total.sub(delta.clip(_negative_box(n, window)))
    return total.clip(_negative_box(n, window))


def embedded_npoint_series(
    b: AffineB,
    n: int,
    max_weight: int,
    *,
    cap_scale: int = 1,
    pos_cap: int | None = None,
) -> Series:
    """BKP n-point series through the KP embedding (sign-flip average)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    kp = bkp_to_kp(b)
    window = standard_window(n, max_weight, _kp_degree(kp), cap_scale, pos_cap)
    cache: dict = {}

    def factor(a, bb, eps):
        key = (a, bb, eps[a], eps[bb])
        if key not in cache:
            cache[key] = series_a_hat_kp(kp, n, window, a, bb, eps[a], eps[bb])
        return cache[key]

    total = Series.zero(n, window)
    for order in cycle_orders(n):
        pairs = cycle_pairs(order)
        for eps in _sign_vectors(n, fix_first=False):
            term = _cycle_product(
                [factor(a, bb, eps) for a, bb in pairs], order, window
            )
            total = total.add(term)
    sign = -1 if (n - 1) % 2 == 1 else 1
    total = total.scale(Fraction(sign, 2 ** (n + 1)))
    if n == 2:
        delta = expand_kernel(KernelKind.KP_DELTA, n, window, 0, 1)
        total = total.sub(delta.clip(_negative_box(n, window)))
    total = total.clip(_negative_box(n, window))
    _assert_parity(total, even=True)
    return total


def wangyang_npoint_series(
    b: AffineB,
    n: int,
    max_weight: int,
    *,
    cap_scale: int = 1,
    pos_cap: int | None = None,
) -> Series:
    """BKP n-point series from the intrinsic neutral-fermion cycle sum."""
    if n < 1:
        raise ValueError("n must be >= 1")
    window = standard_window(n, max_weight, _b_degree(b), cap_scale, pos_cap)
    cache: dict = {}

    def factor(a, bb, eps):
        key = (a, bb, eps[a], eps[bb])
        if key not in cache:
            if a == bb:
                cache[key] = series_a_bkp(b, n, window, a, a, eps[a], -eps[a])
            elif a < bb:
                cache[key] = series_a_hat_bkp(
                    b, n, window, a, bb, eps[a], -eps[bb]
                )
            else:
                cache[key] = series_a_hat_bkp(
                    b, n, window, bb, a, -eps[bb], eps[a]
                ).neg()
        return cache[key]

    total = Series.zero(n, window)
    for order in cycle_orders(n):
        pairs = cycle_pairs(order)
        for eps in _sign_vectors(n, fix_first=True):
            prod_sign = 1
            for e in eps[1:]:
                prod_sign *= e
            term = _cycle_product(
                [factor(a, bb, eps) for a, bb in pairs], order, window
            )
            total = total.add(term.scale(-prod_sign))
    if n == 2:
        delta = expand_kernel(KernelKind.BKP_DELTA, n, window, 0, 1)
        total = total.sub(delta.clip(_negative_box(n, window)))
    total = total.clip(_negative_box(n, window))
    _assert_parity(total, even=False)
    return total


def _assert_parity(series: Series, even: bool) -> None:
    want = 0 if even else 1
    for exps in series.coeffs:
        if any(e % 2 != want for e in exps):
            raise ArithmeticError(
                f"parity violation at {exps}: truncation window too small"
            )


# -- tables ------------------------------------------------------------------


def _all_tuples(n, max_weight, step):
    def rec(prefix, lo, rem):
        if len(prefix) == n:
            yield prefix
            return
        needed_after = n - len(prefix) - 1
        idx = lo
        while idx * (needed_after + 1) <= rem:
            yield from rec(prefix + (idx,), idx, rem - idx)
            idx += step

    yield from rec((), 1, max_weight)


def npoint_table(series: Series, n: int, max_weight: int, *, index_shift: int,
                 odd_only: bool = True) -> dict:
    """Read the n-point values off a series: ``key -> coeff`` at
    ``exps = (-i_1 - shift, ...)``; asserts permutation symmetry."""
    out: dict = {}
    step = 2 if odd_only else 1
    for key in _all_tuples(n, max_weight, step):
        exps = tuple(-i - index_shift for i in key)
        value = series.coefficient(exps)
        for perm in set(permutations(exps)):
            if series.coefficient(perm) != value:
                raise ArithmeticError(
                    f"table not symmetric at {key}: {perm} differs"
                )
        out[key] = value
    return out


@dataclass(frozen=True)
class FormulaComparison:
    n: int
    max_weight: int
    table_embedded: dict
    table_wangyang: dict
    tables_agree: bool
    raw_relation_holds: bool
    first_difference: tuple | None


def compare_formulas(
    b: AffineB, n: int, max_weight: int, *, cap_scale: int = 1
) -> FormulaComparison:
    """Compute both BKP routes, their tables, and the raw series relation."""
    emb = embedded_npoint_series(b, n, max_weight, cap_scale=cap_scale)
    wy = wangyang_npoint_series(b, n, max_weight, cap_scale=cap_scale)
    t_emb = npoint_table(emb, n, max_weight, index_shift=1)
    t_wy = npoint_table(wy, n, max_weight, index_shift=0)
    agree = t_emb == t_wy
    first = None
    if not agree:
        for key in sorted(t_emb):
            if t_emb[key] != t_wy.get(key):
                first = (key, t_emb[key], t_wy.get(key))
                break
    # wangyang == (z_1 ... z_n) * embedded, compared where both are reliable
    shifted = emb.shift((1,) * n)
    lo = -(max_weight + 1)
    raw = True
    for exps in _box(n, lo, -1):
        if shifted.coefficient(exps) != wy.coefficient(exps):
            raw = False
            break
    return FormulaComparison(n, max_weight, t_emb, t_wy, agree, raw, first)


def _box(nvars, lo, hi):
    def rec(prefix):
        if len(prefix) == nvars:
            yield prefix
            return
        for e in range(lo, hi + 1):
            yield from rec(prefix + (e,))

    yield from rec(())
