"""
Closed-form bounds on class numbers and the per-curve verifier.

thm1_bound uses the general-N form
    |log #J_C - g log q| <= (N - 1) (log max{1, log(7g/(N-1)) / log q} + 3);
hyperelliptic curves take N = 2.
"""

import math

import mpmath

from ..models.curves import BoundInputs, CurveRecord, CurveVerdict

# Below this gap a float comparison against a Weil endpoint is re-done exactly
EXACT_FALLBACK_GAP = 1e-9


def thm1_bound(g: int, q: int, N: int = 2) -> float:
    """(N-1) * (log max{1, log(7g/(N-1))/log q} + 3)."""
    inputs = BoundInputs(g=g, q=q, N=N)
    inner = math.log(7 * inputs.g / (inputs.N - 1)) / math.log(inputs.q)
    return (inputs.N - 1) * (math.log(max(1.0, inner)) + 3)


def weil_interval(g: int, q: int) -> tuple[float, float]:
    """((sqrt q - 1)^{2g}, (sqrt q + 1)^{2g})."""
    if g < 1:
        raise ValueError(f"g must be >= 1, got {g}")
    root = math.sqrt(q)
    return (root - 1) ** (2 * g), (root + 1) ** (2 * g)


def weil_exact_endpoints(g: int, q: int) -> tuple[int, int]:
    """
    Integers (A, B) with (sqrt q -+ 1)^{2g} = A -+ B sqrt q.

    Expands (q + 1 -+ 2 sqrt q)^g keeping even and odd powers of sqrt q apart.
    """
    a, b = 1, 0
    for _ in range(g):
        # (a + b s)(q + 1 + 2 s) with s^2 = q
        a, b = a * (q + 1) + 2 * b * q, a * 2 + b * (q + 1)
    return a, b


def _exact_in_weil(h: int, g: int, q: int) -> tuple[bool, bool]:
    """(h >= lower endpoint, h <= upper endpoint), decided in integers."""
    a, b = weil_exact_endpoints(g, q)
    # h >= A - B sqrt q  <=>  B sqrt q >= A - h
    gap = a - h
    above_lower = gap <= 0 or b * b * q >= gap * gap
    # h <= A + B sqrt q  <=>  h - A <= B sqrt q
    gap = h - a
    below_upper = gap <= 0 or gap * gap <= b * b * q
    return above_lower, below_upper


def in_weil_interval(h: int, g: int, q: int) -> bool:
    """
    Weil membership of a class number.

    Compares 2g log(sqrt q -+ 1) with log h at 40 digits and settles near-ties exactly.
    """
    if h < 1:
        return False
    with mpmath.workdps(40):
        log_h = mpmath.log(h)
        root = mpmath.sqrt(q)
        lower_gap = log_h - 2 * g * mpmath.log(root - 1)
        upper_gap = 2 * g * mpmath.log(root + 1) - log_h
    if abs(lower_gap) < EXACT_FALLBACK_GAP or abs(upper_gap) < EXACT_FALLBACK_GAP:
        above, below = _exact_in_weil(h, g, q)
        return above and below
    return lower_gap > 0 and upper_gap > 0


def log_deviation(h: int, g: int, q: int) -> float:
    """|log h - g log q| from the exact integer."""
    with mpmath.workdps(30):
        return float(abs(mpmath.log(h) - g * mpmath.log(q)))


def verify_class_number(h: int, g: int, q: int) -> list[str]:
    """Violations of the Weil interval and the N = 2 bound for one class number."""
    violations = []
    if not in_weil_interval(h, g, q):
        lo, hi = weil_interval(g, q)
        violations.append(f"class number {h} outside Weil interval [{lo:.6g}, {hi:.6g}]")
    if h < 1:
        violations.append(f"class number {h} is not a group order")
        return violations
    deviation = log_deviation(h, g, q)
    bound = thm1_bound(g, q, 2)
    if deviation > bound:
        violations.append(f"|log h - g log q| = {deviation:.6g} exceeds bound {bound:.6g}")
    return violations


def verify_curve(record: CurveRecord) -> CurveVerdict:
    """Check one record; violations are reported, never raised."""
    g, q, h = record.g, record.q, record.class_number
    lo, hi = weil_interval(g, q)
    bound = thm1_bound(g, q, 2)
    deviation = log_deviation(h, g, q) if h >= 1 else math.inf
    return CurveVerdict(
        q=q,
        g=g,
        class_number=h,
        weil_lo=lo,
        weil_hi=hi,
        in_weil_interval=in_weil_interval(h, g, q),
        log_deviation=deviation,
        thm1_bound=bound,
        within_thm1_bound=deviation <= bound,
        violations=verify_class_number(h, g, q),
        poly_text=record.poly_text,
    )
