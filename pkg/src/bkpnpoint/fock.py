r"""Truncated charged free-fermion Fock space over exact rationals.

Basis states are semi-infinite wedges over half-integer modes ``z^{r}``.  The
vacuum occupies every positive mode ``z^{1/2} wedge z^{3/2} wedge ...``; an
excited state is encoded by the finite deviation from it:

* ``bubbles``: occupied negative modes,
* ``holes``: vacated positive modes,

both stored as ascending tuples of doubled (odd) integers, so ``-3`` means
``z^{-3/2}``.  Energy is half-integral and is tracked doubled as well:
``E2 = sum(holes) - sum(bubbles)``; ``charge = len(bubbles) - len(holes)``.

Operator conventions (``r`` half-integer, ``m2 = 2r``):

* ``psi_r`` wedges ``z^r`` in front; moving it to sorted position gives the
  sign ``(-1)^{#occupied modes < r}``.
* ``psi*_r`` contracts against ``z^{-r}`` (removes mode ``-r``) with the same
  position sign.  Both raise the energy by ``-r``.
* ``phi_m = (psi_{-m-1/2} + (-1)^m psi*_{-m+1/2}) / sqrt(2)``; only products
  of two ``phi`` occur, so the ``1/sqrt(2)`` factors always combine to the
  rational ``1/2``.
* ``H_k   = sum_r psi_{-r} psi*_{r+k}`` (charge preserving, lowers E by k),
* ``H^B_k = (1/2) sum_{i in Z} (-1)^{i-1} phi_i phi_{-i-k}`` (mixes charge
  sectors ``+-2``, components lower E by ``k`` or ``k -+ 1``).

Vectors are sparse ``dict[state] -> Fraction``.  ``exp_bilinear_vacuum``
builds ``exp(sum of quadratic raising operators)|0>`` truncated to
``E2 <= cutoff2``; since no operator used here ever lowers energy below a
previously dropped state, the truncated vector is exact on the kept subspace.

The energy cutoff needed for weight-``W`` tau coefficients exceeds ``W``:
contributing intermediate states satisfy ``E = W_remaining + charge/2`` with
``E >= charge^2/2``, so ``cutoff2 = 2W + margin2`` with ``margin2`` the
largest even ``c`` such that ``c(c-1) <= 2W``.
"""

from __future__ import annotations

from bisect import bisect_left, insort
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .affine import AffineB, AffineKP, bkp_to_kp

ZERO = Fraction(0)
ONE = Fraction(1)

VACUUM = ((), ())


def energy2(state) -> int:
    bubbles, holes = state
    return sum(holes) - sum(bubbles)


def charge(state) -> int:
    bubbles, holes = state
    return len(bubbles) - len(holes)


def _count_below(bubbles, holes, m2: int) -> int:
    """Occupied modes strictly below ``m2`` (doubled odd integer)."""
    if m2 < 0:
        return bisect_left(bubbles, m2)
    return len(bubbles) + (m2 - 1) // 2 - bisect_left(holes, m2)


def _insert(state, m2: int):
    """Wedge mode ``m2`` in; ``None`` if occupied, else ``(state, sign)``."""
    bubbles, holes = state
    if m2 < 0:
        if m2 in bubbles:
            return None
        new = list(bubbles)
        insort(new, m2)
        out = (tuple(new), holes)
    else:
        if m2 not in holes:
            return None  # sea mode already occupied
        out = (bubbles, tuple(h for h in holes if h != m2))
    sign = -1 if _count_below(bubbles, holes, m2) & 1 else 1
    return out, sign


def _remove(state, m2: int):
    """Contract mode ``m2`` out; ``None`` if unoccupied."""
    bubbles, holes = state
    if m2 < 0:
        if m2 not in bubbles:
            return None
        out = (tuple(b for b in bubbles if b != m2), holes)
    else:
        if m2 in holes:
            return None
        new = list(holes)
        insort(new, m2)
        out = (bubbles, tuple(new))
    sign = -1 if _count_below(bubbles, holes, m2) & 1 else 1
    return out, sign


def apply_mode_ops(state, ops):
    """Apply ``(kind, m2)`` pairs right to left; kinds ``+`` insert, ``-`` remove."""
    sign = 1
    for kind, m2 in reversed(ops):
        res = _insert(state, m2) if kind == "+" else _remove(state, m2)
        if res is None:
            return None
        state, s = res
        sign *= s
    return state, sign


@dataclass(frozen=True)
class QuadraticOp:
    """A fermion bilinear: ``psi_{r} psi*_{s}`` or ``phi_m phi_n``."""

    kind: str  # "psi_psi_star" | "phi_phi"
    a: int     # doubled psi index r2, or integer m
    b: int     # doubled psi* index s2, or integer n
    coeff: Fraction

    def min_raise2(self) -> int:
        if self.kind == "psi_psi_star":
            return -(self.a + self.b)
        return 2 * (self.a + self.b) - 2

    def mode_terms(self):
        """Expand into ``(ops, coefficient)`` with primitive mode actions."""
        if self.kind == "psi_psi_star":
            return ((((("+", self.a)), (("-", -self.b))), self.coeff),)
        m, n = self.a, self.b
        half = self.coeff / 2
        sm, sn = (-1) ** m, (-1) ** n
        return (
            (((("+", -2 * m - 1)), (("+", -2 * n - 1))), half),
            (((("+", -2 * m - 1)), (("-", 2 * n - 1))), half * sn),
            (((("-", 2 * m - 1)), (("+", -2 * n - 1))), half * sm),
            (((("-", 2 * m - 1)), (("-", 2 * n - 1))), half * sm * sn),
        )


def psi_psi_star(r2: int, s2: int, coeff) -> QuadraticOp:
    if r2 % 2 == 0 or s2 % 2 == 0:
        raise ValueError("psi indices must be doubled half-integers (odd)")
    return QuadraticOp("psi_psi_star", r2, s2, Fraction(coeff))


def phi_phi(m: int, n: int, coeff) -> QuadraticOp:
    return QuadraticOp("phi_phi", m, n, Fraction(coeff))


def apply_quadratic(op: QuadraticOp, vec: dict, cutoff2: int):
    """``op * vec`` truncated to ``E2 <= cutoff2``; returns ``(dict, clipped)``."""
    out: dict = {}
    clipped = False
    terms = op.mode_terms()
    for state, c in vec.items():
        for ops, k in terms:
            res = apply_mode_ops(state, ops)
            if res is None:
                continue
            new, sign = res
            if energy2(new) > cutoff2:
                clipped = True
                continue
            val = c * k * sign
            prev = out.get(new)
            out[new] = val if prev is None else prev + val
    return {s: c for s, c in out.items() if c != 0}, clipped


def apply_h_kp(k: int, vec: dict) -> dict:
    """``H_k`` for ``k >= 1``: moves one occupied mode up by ``k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    k2 = 2 * k
    out: dict = {}
    for state, c in vec.items():
        bubbles, holes = state
        targets = []
        for nu in holes:  # fill a hole from an occupied mode below
            mu = nu - k2
            if (mu < 0 and mu in bubbles) or (mu > 0 and mu not in holes):
                targets.append(mu)
        for mu in bubbles:  # raise a bubble staying below the sea
            nu = mu + k2
            if nu < 0 and nu not in bubbles:
                targets.append(mu)
        for mu in targets:
            res = apply_mode_ops(state, ((("+", mu + k2)), (("-", mu))))
            if res is None:
                continue
            new, sign = res
            val = c * sign
            prev = out.get(new)
            out[new] = val if prev is None else prev + val
    return {s: c for s, c in out.items() if c != 0}


def apply_h_b(k: int, vec: dict) -> dict:
    """``H^B_k`` for ``k >= 1``; never raises energy, mixes charge by 0, +-2."""
    if k < 1:
        raise ValueError("k must be >= 1")
    out: dict = {}
    quarter = Fraction(1, 4)
    for state, c in vec.items():
        e2 = energy2(state)
        imax = e2 // 2 + k + 2
        bubbles, holes = state
        for i in range(-imax, imax + 1):
            # (-1) ** negative int is a float in Python; use parities
            base = -quarter if i % 2 == 0 else quarter          # (-1)^(i-1)/4
            s_i = 1 if i % 2 == 0 else -1
            s_ik = 1 if (i + k) % 2 == 0 else -1
            s_k = 1 if k % 2 == 0 else -1
            lo_ins, lo_rem = -2 * i - 1, 2 * i - 1
            hi_ins, hi_rem = 2 * (i + k) - 1, -2 * (i + k) - 1
            for ops, fam_sign in (
                (((("+", lo_ins)), (("+", hi_ins))), 1),
                (((("+", lo_ins)), (("-", hi_rem))), s_ik),
                (((("-", lo_rem)), (("+", hi_ins))), s_i),
                (((("-", lo_rem)), (("-", hi_rem))), s_k),
            ):
                res = apply_mode_ops(state, ops)
                if res is None:
                    continue
                new, sign = res
                val = c * base * fam_sign * sign
                prev = out.get(new)
                out[new] = val if prev is None else prev + val
    return {s: c for s, c in out.items() if c != 0}


class TruncationOverflow(RuntimeError):
    """exp() iteration failed to terminate within the energy budget."""


@dataclass
class FockVector:
    coeffs: dict
    clipped: bool = False

    def vacuum_coefficient(self) -> Fraction:
        return self.coeffs.get(VACUUM, ZERO)


def exp_bilinear_vacuum(ops, cutoff2: int) -> FockVector:
    """``exp(sum ops)|0>`` truncated to ``E2 <= cutoff2``.

    Every operator must have nonnegative minimal energy raise and strictly
    positive nominal raise (quadratic pieces of affine-coordinate generators
    do); zero-raise components lower the charge, so iteration terminates.
    """
    for op in ops:
        if op.kind == "psi_psi_star" and op.min_raise2() < 2:
            raise ValueError(f"operator {op} does not raise energy")
        if op.kind == "phi_phi" and op.a + op.b < 1:
            raise ValueError(f"operator {op} does not raise energy")
    result = {VACUUM: ONE}
    term = {VACUUM: ONE}
    clipped = False
    limit = cutoff2 + 2 * _isqrt(cutoff2) + 8
    for j in range(1, limit + 1):
        acc: dict = {}
        for op in ops:
            part, clip = apply_quadratic(op, term, cutoff2)
            clipped = clipped or clip
            for s, c in part.items():
                prev = acc.get(s)
                acc[s] = c if prev is None else prev + c
        term = {s: c / j for s, c in acc.items() if c != 0}
        if not term:
            return FockVector(result, clipped)
        for s, c in term.items():
            prev = result.get(s)
            total = c if prev is None else prev + c
            if total != 0:
                result[s] = total
            elif prev is not None:
                del result[s]
    raise TruncationOverflow("exp() did not terminate; generator not raising?")


def _isqrt(n: int) -> int:
    from math import isqrt

    return isqrt(max(0, n))


# -- generators from affine coordinates ------------------------------------


def phi_phi_generator(b: AffineB):
    """``sum_{n,m} a_{n,m} phi_m phi_n`` over both triangles."""
    return [phi_phi(m, n, a) for (n, m), a in sorted(b.entries.items())]


def psi_generator_kp(kp: AffineKP):
    """``sum a_{p,q} psi_{-q-1/2} psi*_{-p-1/2}``."""
    return [
        psi_psi_star(-2 * q - 1, -2 * p - 1, a)
        for (p, q), a in sorted(kp.entries.items())
    ]


def psi_generator_embedded(b: AffineB):
    """The psi-bilinear form of the BKP generator plus its reflection.

    ``sum_{n,m} 2 (-1)^n a_{n,m} psi_{-m-1/2} psi*_{-n+1/2}``; exponentiating
    it from the vacuum gives the same state as the KP generator built from
    the converted coordinates.
    """
    return [
        psi_psi_star(-2 * m - 1, -2 * n + 1, 2 * (-1) ** n * a)
        for (n, m), a in sorted(b.entries.items())
    ]


# -- tau coefficients -------------------------------------------------------


def needed_cutoff2(max_weight: int) -> int:
    margin2 = 0
    c = 2
    while c * (c - 1) <= 2 * max_weight:
        margin2 = c
        c += 2
    return 2 * max_weight + margin2


def tau_table(vec: FockVector, hamiltonian: str, max_weight: int, odd_only: bool):
    """Coefficients of ``<0| exp(sum t_k H_k) |vec>`` by time monomial.

    Returns ``dict[ascending index tuple] -> Fraction`` for all monomials of
    weight ``<= max_weight`` (odd indices only when ``odd_only``).  The
    Hamiltonians commute, so each monomial is read off one descending
    application chain; charged states that can no longer reach the vacuum
    within the remaining weight are pruned.
    """
    apply_h = {"kp": apply_h_kp, "b": apply_h_b}[hamiltonian]
    if hamiltonian == "kp":
        start = {s: c for s, c in vec.coeffs.items() if charge(s) == 0}
    else:
        start = dict(vec.coeffs)
    start = _prune(start, max_weight)
    out: dict = {}

    def visit(v: dict, prefix: tuple):
        value = v.get(VACUUM, ZERO)
        if value != 0:
            key = tuple(sorted(prefix))
            mult = ONE
            for idx in set(prefix):
                mult *= factorial(prefix.count(idx))
            out[key] = value / mult
        rem = max_weight - sum(prefix)
        top = min(prefix[-1] if prefix else max_weight, rem)
        for idx in range(top, 0, -1):
            if odd_only and idx % 2 == 0:
                continue
            nxt = _prune(apply_h(idx, v), rem - idx)
            if nxt:
                visit(nxt, prefix + (idx,))

    visit(start, ())
    return out


def _prune(vec: dict, remaining_weight: int) -> dict:
    return {
        s: c
        for s, c in vec.items()
        if energy2(s) <= 2 * remaining_weight + charge(s)
    }


def tau_coefficients_bkp(b: AffineB, max_weight: int, cutoff_bump: int = 0):
    """BKP tau in odd times, exact for monomial weights ``<= max_weight``."""
    cutoff2 = needed_cutoff2(max_weight) + 2 * cutoff_bump
    vec = exp_bilinear_vacuum(phi_phi_generator(b), cutoff2)
    return tau_table(vec, "b", max_weight, odd_only=True)


def tau_coefficients_kp(
    kp: AffineKP, max_weight: int, odd_only: bool = False, cutoff_bump: int = 0
):
    """KP tau coefficients for monomial weights ``<= max_weight``."""
    cutoff2 = 2 * (max_weight + cutoff_bump)
    vec = exp_bilinear_vacuum(psi_generator_kp(kp), cutoff2)
    return tau_table(vec, "kp", max_weight, odd_only=odd_only)


# -- log and connected functions --------------------------------------------


def poly_mul(p: dict, q: dict, max_weight: int) -> dict:
    out: dict = {}
    for k1, v1 in p.items():
        w1 = sum(k1)
        for k2, v2 in q.items():
            if w1 + sum(k2) > max_weight:
                continue
            key = tuple(sorted(k1 + k2))
            prev = out.get(key)
            out[key] = v1 * v2 if prev is None else prev + v1 * v2
    return {k: v for k, v in out.items() if v != 0}


def poly_log(tau: dict, max_weight: int) -> dict:
    """``log tau`` as a polynomial in the times, weight-truncated."""
    if tau.get((), ZERO) != 1:
        raise ValueError("tau must have constant term 1")
    u = {k: v for k, v in tau.items() if k and sum(k) <= max_weight}
    out: dict = {}
    power = {(): ONE}
    sign = 1
    for j in range(1, max_weight + 1):
        power = poly_mul(power, u, max_weight)
        if not power:
            break
        for k, v in power.items():
            prev = out.get(k, ZERO)
            out[k] = prev + Fraction(sign, j) * v
        sign = -sign
    return {k: v for k, v in out.items() if v != 0}


def connected_table_from_log(
    logf: dict, n: int, max_weight: int, odd_only: bool = True
) -> dict:
    """Connected n-point values: mixed partials of ``log tau`` at ``t = 0``.

    ``d^n F / dt_{i_1} .. dt_{i_n} = coeff * prod_i multiplicity_i!`` for the
    sorted index tuples of length ``n`` with total weight ``<= max_weight``
    (odd indices by default; all indices with ``odd_only=False``).
    """
    out: dict = {}
    for key in odd_tuples(n, max_weight, step=2 if odd_only else 1):
        coeff = logf.get(key, ZERO)
        mult = ONE
        for idx in set(key):
            mult *= factorial(key.count(idx))
        out[key] = coeff * mult
    return out


def odd_tuples(n: int, max_weight: int, step: int = 2):
    """Ascending tuples of ``n`` positive indices with sum ``<= max_weight``.

    ``step=2`` (default) walks odd indices only, ``step=1`` all indices.
    """

    def rec(prefix, lo, rem):
        if len(prefix) == n:
            yield prefix
            return
        needed_after = n - len(prefix) - 1
        idx = lo
        while idx + needed_after * idx <= rem:
            yield from rec(prefix + (idx,), idx, rem - idx)
            idx += step

    if n >= 1:
        yield from rec((), 1, max_weight)


def oracle_npoint_table(b: AffineB, n: int, max_weight: int, cutoff_bump: int = 0):
    """Connected n-point table straight from the Fock-space evaluation."""
    tau = tau_coefficients_bkp(b, max_weight, cutoff_bump)
    logf = poly_log(tau, max_weight)
    return connected_table_from_log(logf, n, max_weight)


# -- identity checks ---------------------------------------------------------


def check_square_relation(b: AffineB, max_weight: int, cutoff_bump: int = 0) -> bool:
    """KP tau of the embedded point equals the BKP tau squared (odd times)."""
    tau_b = tau_coefficients_bkp(b, max_weight, cutoff_bump)
    cutoff2 = 2 * (max_weight + cutoff_bump)
    vec = exp_bilinear_vacuum(psi_generator_embedded(b), cutoff2)
    tau_kp = tau_table(vec, "kp", max_weight, odd_only=True)
    return poly_mul(tau_b, tau_b, max_weight) == tau_kp


def check_state_equality(b: AffineB, cutoff: int) -> bool:
    """The two generator forms build the same state below the cutoff.

    ``exp`` of the psi-bilinear form of the BKP generator agrees with ``exp``
    of the KP generator made from the converted coordinates; this is the
    normal-ordering identity behind the coordinate conversion.
    """
    cutoff2 = 2 * cutoff
    v1 = exp_bilinear_vacuum(psi_generator_kp(bkp_to_kp(b)), cutoff2)
    v2 = exp_bilinear_vacuum(psi_generator_embedded(b), cutoff2)
    return v1.coeffs == v2.coeffs
