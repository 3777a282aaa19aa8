"""Exact integer coefficient tables for the two wavelet recursions.

* ``alpha_l^m``: the Stirling-like coefficients connecting the iterated Euler
  operator to plain derivatives, ``(r d/dr)^m = sum_l alpha_l^m r^l (d/dr)^l``,
  generated by ``alpha_l^(m+1) = l alpha_l^m + alpha_(l-1)^m`` with
  ``alpha_0^0 = 1`` and ``alpha_0^m = 0`` for m >= 1.

* ``a_j^(m,k)`` / ``R_k^m``: the closed-form representation writes

      g_a^m = (a^m / Sigma_n) D_(lambda+m+1) sum_k R_k^m(r) cos^k(theta),
      D_j = r / (1 - 2 r cos(theta) + r^2)^j,

  with ``R_k^m(r) = sum_j a_j^(m,k) r^(2j + (k-1) mod 2)`` of degree
  ``2m - k + 1``.  Instead of transcribing the printed per-index recursion
  (whose endpoint indices overlap between the generic and boundary terms),
  the table is grown by applying the defining polynomial identities

      B-part:  (1 - (2 lambda + 2m + 1) r^2) R_k  + (1 + r^2) r R_k'
      C-part:  2 (lambda + m) r R_(k-1)           - 2 r^2 R_(k-1)'

  directly to polynomial objects and reading off coefficients; these
  identities come straight from r d/dr acting on D_(lambda+m+1) and are
  unambiguous.  With 2 lambda = n - 1 both multipliers, n + 2m and
  n - 1 + 2m, are integer polynomials in n, so the whole table is exact:
  entries are integer polynomials in n (represented as coefficient tuples,
  lowest power first) or plain integers once n is substituted.

All arithmetic is over Python integers, so there is no overflow at any order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, InvalidContextError

# ---------------------------------------------------------------------------
# integer polynomials in n, as tuples of coefficients (lowest power first)
# ---------------------------------------------------------------------------


def _ptrim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(p, q):
    out = [0] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return _ptrim(out)


def _pmul(p, q):
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _ptrim(out)


def _pscale(p, c: int):
    return _ptrim(a * c for a in p)


def _peval(p, n: int) -> int:
    acc = 0
    for c in reversed(p):
        acc = acc * n + c
    return acc


def poly_str(p) -> str:
    """Human-readable form of an integer polynomial in n, e.g. (-3, -1) -> '-n - 3'."""
    if not p:
        return "0"
    parts = []
    for e in range(len(p) - 1, -1, -1):
        c = p[e]
        if c == 0:
            continue
        mag = abs(c)
        if e == 0:
            term = f"{mag}"
        elif e == 1:
            term = "n" if mag == 1 else f"{mag}*n"
        else:
            term = f"n^{e}" if mag == 1 else f"{mag}*n^{e}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# alpha table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlphaTable:
    """Exact integers alpha_l^m for 0 <= l <= m <= max_order."""

    max_order: int
    rows: tuple  # rows[m][l]

    def alpha(self, l: int, m: int) -> int:
        if m > self.max_order:
            raise DomainError(f"table built to order {self.max_order}, asked for m={m}")
        if l < 0 or l > m:
            return 0
        return self.rows[m][l]


@lru_cache(maxsize=None)
def build_alpha_table(max_order: int) -> AlphaTable:
    """Grow the alpha recursion to the requested order (exact, deterministic)."""
    if max_order < 0:
        raise DomainError(f"max_order must be >= 0, got {max_order}")
    rows = [(1,)]
    for m in range(max_order):
        prev = rows[m]
        nxt = [0] * (m + 2)
        for l in range(m + 2):
            term = l * prev[l] if l <= m else 0
            if l >= 1 and l - 1 <= m:
                term += prev[l - 1]
            nxt[l] = term
        rows.append(tuple(nxt))
    return AlphaTable(max_order=max_order, rows=tuple(rows))


def falling_factorial(p: int, l: int) -> int:
    """p (p-1) ... (p-l+1); equals 0 once l > p for nonnegative integer p."""
    acc = 1
    for i in range(l):
        acc *= p - i
    return acc


def stirling_second_kind(m: int, l: int) -> int:
    """Set-partition count S(m, l) by the explicit alternating sum.

    (1/l!) sum_j (-1)^(l-j) C(l, j) j^m, evaluated in exact integer
    arithmetic.  Deliberately a different route than the alpha recursion:
    the two must agree entry for entry, which is the table's oracle.
    """
    if l < 0 or m < 0:
        return 0
    if l == 0:
        return 1 if m == 0 else 0
    total = sum((-1) ** (l - j) * math.comb(l, j) * j**m for j in range(l + 1))
    q, rem = divmod(total, math.factorial(l))
    if rem:
        raise ArithmeticError(f"alternating sum not divisible by l! at (m={m}, l={l})")
    return q


def operator_identity_check(max_order: int) -> dict:
    """Verify p^m = sum_l alpha_l^m * falling(p, l) exactly for p, m <= max_order.

    Both sides are the action of (r d/dr)^m and of its alpha expansion on the
    monomial r^p; the discrepancy must be identically zero.
    """
    table = build_alpha_table(max_order)
    worst = 0
    cases = 0
    for m in range(max_order + 1):
        for p in range(max_order + 1):
            lhs = p**m
            rhs = sum(table.alpha(l, m) * falling_factorial(p, l) for l in range(m + 1))
            worst = max(worst, abs(lhs - rhs))
            cases += 1
    return {"max_order": max_order, "cases": cases, "max_discrepancy": worst, "passed": worst == 0}


# ---------------------------------------------------------------------------
# R table
# ---------------------------------------------------------------------------

_BASE_M1 = {
    # k -> dense list over r-exponent of n-polynomials, from the m=1 display:
    # R_0^1 = -(n+3) r + (n-1) r^3,  R_1^1 = (n+1) - (n-3) r^2
    0: [(), (-3, -1), (), (-1, 1)],
    1: [(1, 1), (), (3, -1)],
}


def _r_derivative(poly):
    return [_pscale(c, e) for e, c in enumerate(poly)][1:] or [()]


def _r_shift(poly, s: int):
    return [()] * s + list(poly)


def _r_add(p, q):
    out = [()] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] = _padd(out[i], c)
    for i, c in enumerate(q):
        out[i] = _padd(out[i], c)
    return out


def _r_scale(poly, npoly):
    return [_pmul(c, npoly) for c in poly]


@dataclass(frozen=True)
class RTable:
    """Closed-form coefficient table a_j^(m,k) for one order m.

    ``entries[k][j]`` is the coefficient of ``r^(2j + (k-1) mod 2)`` in
    R_k^m: an integer polynomial in n (coefficient tuple) when built
    symbolically, a plain integer when n was substituted.
    """

    m: int
    n: int | None  # None = symbolic
    entries: tuple  # entries[k] = tuple over j

    @staticmethod
    def parity(k: int) -> int:
        return (k - 1) % 2

    def degree(self, k: int) -> int:
        """Degree of R_k^m as a polynomial in r (must be 2m - k + 1)."""
        return 2 * (len(self.entries[k]) - 1) + self.parity(k)

    def eval_r_polys(self, r: float):
        """[R_0^m(r), ..., R_m^m(r)] for numeric n."""
        if self.n is None:
            raise DomainError("symbolic table cannot be evaluated; substitute n first")
        values = []
        for k in range(self.m + 1):
            r2 = r * r
            acc = 0.0
            for a in reversed(self.entries[k]):
                acc = acc * r2 + a
            values.append(acc * r ** self.parity(k))
        return values

    def substitute(self, n: int) -> "RTable":
        if self.n is not None:
            raise DomainError("table already numeric")
        ent = tuple(tuple(_peval(p, n) for p in row) for row in self.entries)
        return RTable(m=self.m, n=n, entries=ent)

    def to_json_dict(self) -> dict:
        rows = []
        for k, row in enumerate(self.entries):
            if self.n is None:
                coeffs = [list(p) for p in row]
                rendered = [poly_str(p) for p in row]
            else:
                coeffs = list(row)
                rendered = [str(c) for c in row]
            rows.append({"k": k, "parity": self.parity(k), "coeffs": coeffs, "rendered": rendered})
        return {"m": self.m, "n": self.n, "R": rows}


@lru_cache(maxsize=None)
def _build_r_table_symbolic(m: int) -> RTable:
    if m < 1:
        raise DomainError(f"closed-form table needs order m >= 1, got {m}")
    # dense representation: per k, list over absolute r-exponent of n-polys
    dense = {k: list(_BASE_M1[k]) for k in (0, 1)}
    for cur in range(1, m):
        # multipliers for the step cur -> cur+1 (2 lambda = n - 1):
        #   1 - (2 lambda + 2 cur + 1) r^2 = 1 - (n + 2 cur) r^2
        #   2 (lambda + cur) r            = (n - 1 + 2 cur) r
        sub_b = (2 * cur, 1)      # n + 2 cur
        sub_c = (2 * cur - 1, 1)  # n - 1 + 2 cur
        nxt = {}
        for k in range(cur + 2):
            acc = [()]
            if k <= cur:
                rk = dense[k]
                drk = _r_derivative(rk)
                # (1 - (n+2cur) r^2) R_k + (1 + r^2) r R_k'
                acc = _r_add(acc, rk)
                acc = _r_add(acc, _r_scale(_r_shift(rk, 2), _pscale(sub_b, -1)))
                acc = _r_add(acc, _r_shift(drk, 1))
                acc = _r_add(acc, _r_shift(drk, 3))
            if 1 <= k <= cur + 1:
                rk1 = dense[k - 1]
                drk1 = _r_derivative(rk1)
                # (n-1+2cur) r R_(k-1) - 2 r^2 R_(k-1)'
                acc = _r_add(acc, _r_scale(_r_shift(rk1, 1), sub_c))
                acc = _r_add(acc, _r_scale(_r_shift(drk1, 2), (-2,)))
            nxt[k] = acc
        dense = nxt

    entries = []
    for k in range(m + 1):
        poly = dense[k]
        par = (k - 1) % 2
        deg = 2 * m - k + 1
        # read off the strided coefficients; exponents of the other parity
        # must have cancelled identically
        for e, c in enumerate(poly):
            if c and (e - par) % 2 != 0:
                raise ArithmeticError(f"parity violation in R_{k}^{m} at r^{e}: {c}")
            if c and e > deg:
                raise ArithmeticError(f"degree violation in R_{k}^{m}: r^{e} with {c}")
        row = []
        for j in range((deg - par) // 2 + 1):
            e = 2 * j + par
            row.append(poly[e] if e < len(poly) else ())
        entries.append(tuple(row))
    return RTable(m=m, n=None, entries=tuple(entries))


@lru_cache(maxsize=None)
def build_r_table(m: int, n: int | None = None) -> RTable:
    """Coefficient table for order m; symbolic in n when n is None.

    The numeric table is always obtained by substituting into the symbolic
    one, so the two can never drift apart.
    """
    table = _build_r_table_symbolic(m)
    if n is None:
        return table
    if n < 2:
        raise InvalidContextError(f"sphere dimension must be >= 2, got {n}")
    return table.substitute(n)
