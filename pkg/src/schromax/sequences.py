"""Decreasing time sequences, summability classes and the dyadic threshold
arithmetic used by the convergence experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TimeSequence:
    """A strictly decreasing sequence 1 > t_1 > t_2 > ... > 0.

    kind:
      power      t_m = scale * (m + 1)^{-alpha}   (alpha > 0; the +1 shift keeps t_1 < 1)
      geometric  t_m = scale * ratio^m            (0 < ratio < 1)
      log        t_m = 1 / log(m + 2)             (slowly decaying; in no l^{r,inf})
      explicit   a finite list supplied directly
    """

    kind: str
    alpha: float = 1.0
    ratio: float = 0.5
    scale: float = 1.0
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in ("power", "geometric", "log", "explicit"):
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        if self.kind == "power" and self.alpha <= 0:
            raise ValueError("power sequence needs alpha > 0")
        if self.kind == "geometric" and not (0 < self.ratio < 1):
            raise ValueError("geometric sequence needs 0 < ratio < 1")
        if self.kind == "explicit":
            vals = np.asarray(self.values, dtype=float)
            if vals.size == 0:
                raise ValueError("explicit sequence must be nonempty")
            if not (vals[0] < 1.0 and np.all(vals > 0) and np.all(np.diff(vals) < 0)):
                raise ValueError("explicit sequence must satisfy 1 > t_1 > t_2 > ... > 0")
        first = self.term(1)
        if not (0.0 < first < 1.0):
            raise ValueError("need 1 > t_1 > 0")

    def term(self, m) -> np.ndarray | float:
        """t_m for 1-indexed m (vectorized)."""
        m_arr = np.asarray(m, dtype=float)
        if self.kind == "power":
            out = self.scale * (m_arr + 1.0) ** (-self.alpha)
        elif self.kind == "geometric":
            out = self.scale * self.ratio ** m_arr
        elif self.kind == "log":
            out = 1.0 / np.log(m_arr + 2.0)
        else:
            vals = np.asarray(self.values, dtype=float)
            idx = np.asarray(m, dtype=int) - 1
            if np.any(idx < 0) or np.any(idx >= vals.size):
                raise IndexError("explicit sequence index out of range")
            out = vals[idx]
        return out if np.ndim(m) else float(out)

    def prefix(self, M: int) -> np.ndarray:
        return self.term(np.arange(1, M + 1))

    def count_above(self, b: float) -> int:
        """#{m >= 1 : t_m > b} (finite for b > 0; exact closed-form count)."""
        if b <= 0:
            raise ValueError("b must be positive")
        if self.term(1) <= b:
            return 0
        if self.kind == "power":
            # t_m > b  <=>  m + 1 < (b/scale)^{-1/alpha}
            x = (b / self.scale) ** (-1.0 / self.alpha)
            count = int(math.ceil(x)) - 2
        elif self.kind == "geometric":
            x = math.log(b / self.scale) / math.log(self.ratio)
            count = int(math.floor(x))
        elif self.kind == "log":
            x = math.exp(1.0 / b)
            count = int(math.ceil(x)) - 2
        else:
            vals = np.asarray(self.values, dtype=float)
            count = int(np.searchsorted(-vals, -b, side="left"))
            return count
        # closed forms can be off by one at exact boundaries; fix locally.
        # Beyond exact float-integer range the boundary comparison cannot
        # resolve anyway (and the walk would not terminate), so return as is.
        count = max(count, 0)
        if count > 10 ** 15:
            return count
        while count >= 1 and not self.term(count) > b:
            count -= 1
        while self.term(count + 1) > b:
            count += 1
        return count

    def members_in(self, low: float, high: float, max_count: int = 10_000_000) -> np.ndarray:
        """All t_m with low < t_m <= high, in decreasing order."""
        if not (0 <= low < high):
            raise ValueError("need 0 <= low < high")
        n_hi = self.count_above(high)   # members strictly above high: skip
        n_lo = self.count_above(low) if low > 0 else None
        if n_lo is None:
            raise ValueError("low = 0 would select infinitely many members")
        if n_lo - n_hi > max_count:
            raise ValueError("selection too large; raise max_count or low")
        if n_lo == n_hi:
            return np.empty(0)
        return self.term(np.arange(n_hi + 1, n_lo + 1))

    def differences_decreasing(self, M: int = 1000) -> bool:
        """Check (t_k - t_{k+1}) decreasing on the prefix (Theorem-9 hypothesis)."""
        t = self.prefix(M + 1)
        d = -np.diff(t)
        return bool(np.all(np.diff(d) <= 1e-15))


def default_b_grid(depth: int = 16) -> np.ndarray:
    return 2.0 ** (-np.arange(1, depth + 1))


def weak_lr_constant(seq: TimeSequence, r: float, b_grid=None) -> float:
    """sup over the b-grid of b^r * #{m : t_m > b} — the weak-type constant.

    Stable under grid refinement => l^{r,inf} evidence; growth => evidence of
    non-membership (see weak_lr_trend).
    """
    if r <= 0:
        raise ValueError("r must be positive")
    if b_grid is None:
        b_grid = default_b_grid()
    b_grid = np.asarray(b_grid, dtype=float)
    counts = np.array([seq.count_above(b) for b in b_grid])
    return float(np.max(b_grid ** r * counts))


def weak_lr_trend(seq: TimeSequence, r: float, b_grid=None) -> tuple[float, float, bool]:
    """(constant on coarse half, constant on fine half, growing?).

    The grid is ordered from large to small b; "growing" means the fine-b half
    exceeds the coarse-b half by more than 25%.
    """
    if b_grid is None:
        b_grid = default_b_grid()
    b_grid = np.asarray(b_grid, dtype=float)
    half = b_grid.size // 2
    coarse = weak_lr_constant(seq, r, b_grid[:half])
    fine = weak_lr_constant(seq, r, b_grid[half:])
    return coarse, fine, bool(fine > 1.25 * coarse)


def lr_partial_sum(seq: TimeSequence, r: float, M: int) -> float:
    """Partial sum of t_m^r over m <= M."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    if r == 0:
        return float(M)
    return float(np.sum(seq.prefix(M) ** r))


def lr_converges(seq: TimeSequence, r: float, M: int = 100_000,
                 rel_tol: float = 0.01) -> bool:
    """Doubling heuristic: the sum looks convergent if S_{2M} - S_M is small."""
    s1 = lr_partial_sum(seq, r, M)
    s2 = lr_partial_sum(seq, r, 2 * M)
    if s1 == 0:
        return True
    return (s2 - s1) / s2 < rel_tol


def critical_exponent_l2(a: float, s: float) -> float:
    """r = 2s / (a - 2s), the l^{r,inf} convergence threshold (n >= 2)."""
    if not (0 < s < a / 2):
        raise ValueError("need 0 < s < a/2")
    return 2.0 * s / (a - 2.0 * s)


def critical_exponent_l4(a: float, s: float) -> float:
    """r(s) = 2s / (a - 4s), the counterexample threshold."""
    if not (0 < s < a / 4):
        raise ValueError("need 0 < s < a/4")
    return 2.0 * s / (a - 4.0 * s)


def split_thresholds(j: int, a: float, s: float, eps: float) -> tuple[float, float, float, float]:
    """(k(j), b(j), b1(j), b2(j)) with k(j) = (a-2s) j and the eps-tilted cutoffs.

    b(j) = 2^{-k(j)}, b1(j) = 2^{-k(j)-eps1 j}, b2(j) = 2^{-k(j)+eps2 j} where
    eps1 = 2 eps and eps2 = 2 eps / r with r = 2s/(a-2s); the identity
    (a-2s) j = 2 s j / r holds by construction.
    """
    if j < 0:
        raise ValueError("j must be nonnegative")
    if eps <= 0:
        raise ValueError("eps must be positive")
    r = critical_exponent_l2(a, s)
    k_j = (a - 2.0 * s) * j
    eps1 = 2.0 * eps
    eps2 = 2.0 * eps / r
    return (k_j,
            2.0 ** (-k_j),
            2.0 ** (-k_j - eps1 * j),
            2.0 ** (-k_j + eps2 * j))
