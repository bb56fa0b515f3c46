"""Sign-sum identity relating the f-product and g-product cycle sums.

For an antisymmetric series s(x, y) = -s(y, x) and a series t(x) in
negative powers, define

    f(y, x) = 2 s(y, x) + 2 t(y) - 2 t(x) + (y - x)/(y + x)
    g(y, x) = s(y, x) + 2 t(y) (1 - t(x)) - x/(y + x)

where each rational piece is the directional expansion keyed on the pair
of lemma indices carried by the arguments (equal indices make the piece
vanish; otherwise the variable with the smaller index dominates).  Over
the 2k variables x_1, y_1, ..., x_k, y_k the identity states

    sum_{eps in {+-1}^k} sum_{sigma(1)=1} prod_i eps_{sigma(i)} *
        f(sel(sigma(i)), sel'(sigma(i+1)))
    = 2^k * (the same sum with g in place of f)

with sigma(k+1) wrapping to sigma(1).  Here sel(j) is y_j when eps_j = +1
and x_j when eps_j = -1, while sel'(j) picks the opposite flavor, so each
of the 2k variables occurs in exactly one factor of every product.  That
disjointness is what makes truncation easy: restricting every factor to
the box |exponent| <= window already gives the exact product coefficients
on that box, with no coupling between factors.  The ``clipped`` flag on
the returned sides only propagates factor-level events (spec entries or
t*t products falling outside a narrow window); kernel expansions are
window-exact by construction.

``lemma_side("RHS", ...)`` includes the 2^k prefactor.  Both sides are
antisymmetric under swapping every x_j with y_j up to the factor (-1)^k,
which the evaluator uses to halve the sign enumeration.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Dict, Optional, Tuple

from .affine import AffineB
from .npoint import cycle_orders
from .series import (
    KernelKind,
    Series,
    Window,
    expand_kernel,
    uniform_window,
)

ZERO = Fraction(0)


@dataclass(frozen=True)
class SeriesPairSpec:
    """Finite-support pair (s, t) with s stored on the m < n triangle.

    ``s_entries[(m, n)]`` (1 <= m < n) is the coefficient of
    x^{-m} y^{-n} - x^{-n} y^{-m} in s(x, y); ``t_entries[m]`` (m >= 1)
    is the coefficient of x^{-m} in t(x).
    """

    s_entries: dict
    t_entries: dict

    @property
    def max_index(self) -> int:
        idx = [k for pair in self.s_entries for k in pair]
        idx.extend(self.t_entries)
        return max(idx, default=0)

    def is_zero(self) -> bool:
        return not self.s_entries and not self.t_entries


def validate_pair_spec(s_entries, t_entries) -> SeriesPairSpec:
    """Build a SeriesPairSpec, folding s onto the m < n triangle.

    Either triangle may be given; (n, m) entries fold in with a sign flip.
    Nonzero diagonal entries, indices < 1 and conflicting duplicates are
    rejected.
    """
    folded: Dict[Tuple[int, int], Fraction] = {}
    for key, raw in dict(s_entries or {}).items():
        m, n = key
        if isinstance(m, bool) or isinstance(n, bool):
            raise ValueError(f"bad s index {key!r}")
        if not (isinstance(m, int) and isinstance(n, int)) or m < 1 or n < 1:
            raise ValueError(f"bad s index {key!r}")
        value = Fraction(raw)
        if m == n:
            if value != 0:
                raise ValueError(f"nonzero diagonal s entry at {key!r}")
            continue
        slot, signed = ((m, n), value) if m < n else ((n, m), -value)
        if slot in folded and folded[slot] != signed:
            raise ValueError(f"conflicting s entries for pair {slot!r}")
        folded[slot] = signed
    t_clean: Dict[int, Fraction] = {}
    for m, raw in dict(t_entries or {}).items():
        if isinstance(m, bool) or not isinstance(m, int) or m < 1:
            raise ValueError(f"bad t index {m!r}")
        value = Fraction(raw)
        if value != 0:
            t_clean[m] = value
    folded = {k: v for k, v in sorted(folded.items()) if v != 0}
    return SeriesPairSpec(folded, dict(sorted(t_clean.items())))


@dataclass(frozen=True)
class VarRef:
    """One of the 2k variables: flavor 'x' or 'y' of lemma index i >= 1.

    Variable positions interleave as x_1, y_1, x_2, y_2, ... so index i
    owns positions 2(i-1) and 2(i-1)+1.
    """

    index: int
    flavor: str

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 1:
            raise ValueError(f"bad variable index {self.index!r}")
        if self.flavor not in ("x", "y"):
            raise ValueError(f"bad flavor {self.flavor!r}")

    @property
    def position(self) -> int:
        return 2 * (self.index - 1) + (1 if self.flavor == "y" else 0)


def _monomials(nvars: int, window: Window, items) -> Series:
    # items: iterable of (exps tuple, Fraction); drops out-of-window terms.
    coeffs = {}
    clipped = False
    for exps, value in items:
        if value == 0:
            continue
        if all(lo <= e <= hi for e, (lo, hi) in zip(exps, window)):
            coeffs[exps] = coeffs.get(exps, ZERO) + value
        else:
            clipped = True
    return Series(nvars, window, {k: v for k, v in coeffs.items() if v != 0},
                  clipped=clipped)


def _t_series(spec: SeriesPairSpec, nvars: int, window: Window,
              pos: int) -> Series:
    items = []
    for m, c in spec.t_entries.items():
        e = [0] * nvars
        e[pos] = -m
        items.append((tuple(e), c))
    return _monomials(nvars, window, items)


def _s_series(spec: SeriesPairSpec, nvars: int, window: Window,
              pos1: int, pos2: int) -> Series:
    # s(u, v) = sum s_{m,n} (u^{-m} v^{-n} - u^{-n} v^{-m}); vanishes when
    # both arguments are the same variable.
    items = []
    for (m, n), c in spec.s_entries.items():
        for em, en, cc in ((-m, -n, c), (-n, -m, -c)):
            e = [0] * nvars
            e[pos1] += em
            e[pos2] += en
            items.append((tuple(e), cc))
    return _monomials(nvars, window, items)


def _ratio(nvars: int, window: Window, num: VarRef, other: VarRef) -> Series:
    # num/(other + num), directional by lemma index; zero on equal indices.
    return expand_kernel(
        KernelKind.LEMMA_RATIO, nvars, window, num.position, other.position,
        idx_i=num.index, idx_j=other.index,
    )


def eval_f(spec: SeriesPairSpec, arg1: VarRef, arg2: VarRef,
           window: Window) -> Series:
    """f(arg1, arg2) = 2s + 2t(arg1) - 2t(arg2) + (arg1 - arg2)/(arg1 + arg2)."""
    nvars = len(window)
    p1, p2 = arg1.position, arg2.position
    out = _s_series(spec, nvars, window, p1, p2).scale(2)
    out = out.add(_t_series(spec, nvars, window, p1).scale(2))
    out = out.sub(_t_series(spec, nvars, window, p2).scale(2))
    if arg1.index != arg2.index:
        out = out.add(_ratio(nvars, window, arg1, arg2))
        out = out.sub(_ratio(nvars, window, arg2, arg1))
    return out


def eval_g(spec: SeriesPairSpec, arg1: VarRef, arg2: VarRef,
           window: Window) -> Series:
    """g(arg1, arg2) = s + 2t(arg1)(1 - t(arg2)) - arg2/(arg1 + arg2)."""
    nvars = len(window)
    p1, p2 = arg1.position, arg2.position
    t1 = _t_series(spec, nvars, window, p1)
    out = _s_series(spec, nvars, window, p1, p2)
    out = out.add(t1.scale(2))
    out = out.sub(t1.mul(_t_series(spec, nvars, window, p2)).scale(2))
    if arg1.index != arg2.index:
        out = out.sub(_ratio(nvars, window, arg2, arg1))
    return out


def _factor_table(which: str, k: int, spec: SeriesPairSpec, window: Window):
    # Factor for cycle step j1 -> j2 under signs (e1, e2): the first slot
    # takes y_{j1} for e1 = +1 (x_{j1} otherwise), the second slot the
    # opposite flavor of j2.
    evaluate = eval_f if which == "LHS" else eval_g
    table = {}
    for j1 in range(1, k + 1):
        for j2 in range(1, k + 1):
            if j1 != j2 or k == 1:
                for e1, e2 in product((1, -1), repeat=2):
                    a = VarRef(j1, "y" if e1 == 1 else "x")
                    b = VarRef(j2, "x" if e2 == 1 else "y")
                    table[j1, j2, e1, e2] = evaluate(spec, a, b, window)
    return table


def _swap_flavors(coeffs: dict, nvars: int) -> dict:
    # Exchange x_j and y_j exponents (position p maps to p ^ 1).
    return {tuple(e[p ^ 1] for p in range(nvars)): c for e, c in coeffs.items()}


def lemma_side(which: str, k: int, spec: SeriesPairSpec,
               window: int) -> Series:
    """One side of the identity on the box |exponent| <= window.

    ``which`` is "LHS" (f-products) or "RHS" (g-products, including the
    2^k prefactor).  Returns a Series in 2k variables.
    """
    if which not in ("LHS", "RHS"):
        raise ValueError(f"side must be LHS or RHS, got {which!r}")
    if not 1 <= k <= 4:
        raise ValueError("k must be between 1 and 4")
    if window < 0:
        raise ValueError("window must be nonnegative")
    nvars = 2 * k
    win = uniform_window(nvars, -window, window)
    factors = _factor_table(which, k, spec, win)
    markers: dict = {}
    clipped = False
    for fac in factors.values():
        for pair, dom in fac.markers.items():
            markers[pair] = dom  # index-keyed dominance cannot conflict
        clipped = clipped or fac.clipped

    # Compact view of each factor: its two variable positions plus the
    # bivariate items with integer numerators over a common denominator
    # (everything else in an exponent key is zero).
    compact = {}
    common = 1
    for (j1, j2, e1, e2), fac in factors.items():
        pa = 2 * (j1 - 1) + (1 if e1 == 1 else 0)
        pb = 2 * (j2 - 1) + (0 if e2 == 1 else 1)
        den = lcm(*(c.denominator for c in fac.coeffs.values()), 1)
        items = [(e[pa], e[pb], int(c * den)) for e, c in fac.coeffs.items()]
        compact[j1, j2, e1, e2] = (pa, pb, items, den)
        common = lcm(common, den)
    # Every chain denominator divides scale_den, so the hot loop runs on
    # plain integers scaled by it.
    scale_den = common ** k

    # Sum over sign vectors with eps_1 = +1 only; flipping every sign maps
    # a term to its x<->y flavor swap times (-1)^k, so the other half is
    # recovered by symmetrization below.  Every product assembles exponents
    # by direct assignment: the chain factors occupy pairwise disjoint
    # positions, so box truncation of the factors is already exact.
    half: Dict[tuple, int] = {}
    for order in cycle_orders(k):
        for eps in product((1,), *((1, -1),) * (k - 1)):
            sign = 1
            for e in eps:
                sign *= e
            chain = [
                compact[order[i] + 1, order[(i + 1) % k] + 1,
                        eps[order[i]], eps[order[(i + 1) % k]]]
                for i in range(k)
            ]
            if not all(items for _, _, items, _ in chain):
                continue
            term_den = 1
            for _, _, _, den in chain:
                term_den *= den
            base = sign * (scale_den // term_den)
            positions = [(pa, pb) for pa, pb, _, _ in chain]
            get = half.get
            for combo in product(*(items for _, _, items, _ in chain)):
                exps = [0] * nvars
                value = base
                for (pa, pb), (ea, eb, c) in zip(positions, combo):
                    exps[pa] = ea
                    exps[pb] = eb
                    value *= c
                key = tuple(exps)
                half[key] = get(key, 0) + value
    flip = 1 if k % 2 == 0 else -1
    total = dict(half)
    for key, value in _swap_flavors(half, nvars).items():
        total[key] = total.get(key, 0) + flip * value
    out_num = 2 ** k if which == "RHS" else 1
    coeffs = {key: Fraction(v * out_num, scale_den)
              for key, v in total.items() if v}
    return Series(nvars, win, coeffs, markers, clipped)


def check_lemma(k: int, spec: SeriesPairSpec, window: int = 6) -> bool:
    """True when the f-side equals the 2^k-weighted g-side on the box."""
    return first_lemma_difference(k, spec, window) is None


def first_lemma_difference(
    k: int, spec: SeriesPairSpec, window: int = 6
) -> Optional[Tuple[tuple, Fraction, Fraction]]:
    """Smallest differing monomial between the two sides, or None."""
    lhs = lemma_side("LHS", k, spec, window)
    rhs = lemma_side("RHS", k, spec, window)
    diff = lhs.sub(rhs)
    if not diff.coeffs:
        return None
    exps = min(diff.coeffs)
    return exps, lhs.coefficient(exps), rhs.coefficient(exps)


def instantiate_from_affine(b: AffineB) -> SeriesPairSpec:
    """The (s, t) pair carrying the affine coordinates into the identity.

    s(u, v) = sum_{m,n>=1} a_{m,n} (u^{-m} v^{-n} - u^{-n} v^{-m}), so the
    m < n triangle picks up a factor 2 from the antisymmetric double sum;
    t collects the a_{m,0} column.
    """
    s_entries = {}
    t_entries = {}
    for m in range(1, b.max_index + 1):
        value = b.get(m, 0)
        if value != 0:
            t_entries[m] = value
        for n in range(m + 1, b.max_index + 1):
            value = b.get(m, n)
            if value != 0:
                s_entries[m, n] = 2 * value
    return SeriesPairSpec(s_entries, t_entries)
