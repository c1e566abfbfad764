"""Bessel functions of the first kind and normalized Laguerre overlaps.

Both are evaluated with plain recurrences so that the dressed-state matrix
elements can be computed at drive photon numbers of order 1e4 without
factorial overflow.
"""

import math

import numpy as np

BESSEL_MAX_ORDER = 10
BESSEL_MAX_ARG = 50.0

# |x| below this uses the power series; cancellation stays under ~1e-14 here.
_SERIES_CUTOFF = 8.0


def _bessel_series(n, x, terms=60):
    half = 0.5 * x
    term = half**n / math.factorial(n)
    total = term
    q = -half * half
    for k in range(1, terms):
        term *= q / (k * (n + k))
        total += term
        if abs(term) < 1e-18 * max(abs(total), 1e-300):
            break
    return total


def _bessel_miller(n, x):
    # Backward recurrence normalized by J_0 + 2 * sum_k J_2k = 1.
    top = max(n, int(x))
    start = 2 * ((top + 20 + int(math.sqrt(40.0 * top))) // 2)
    j_next, j_cur = 0.0, 1e-30
    norm = 0.0
    result = 0.0
    for k in range(start, 0, -1):
        j_prev = (2.0 * k / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if abs(j_cur) > 1e250:
            j_next *= 1e-250
            j_cur *= 1e-250
            result *= 1e-250
            norm *= 1e-250
        if k - 1 == n:
            result = j_cur
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j_cur
    norm += j_cur
    return result / norm


def _bessel_scalar(n, x):
    sign = 1.0
    if x < 0:
        x = -x
        sign = -1.0 if n % 2 else 1.0
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    if x < _SERIES_CUTOFF:
        return sign * _bessel_series(n, x)
    return sign * _bessel_miller(n, x)


def bessel_j(order, x):
    """Bessel function of the first kind ``J_order(x)``.

    Parameters
    ----------
    order : int
        Non-negative integer order, at most 10.
    x : float or array_like
        Argument(s), ``|x| <= 50``.

    Returns
    -------
    float or ndarray
        Same shape as ``x``. Absolute error is below 1e-12 on the
        supported domain.
    """
    if int(order) != order or order < 0 or order > BESSEL_MAX_ORDER:
        raise ValueError(f"order must be an integer in [0, {BESSEL_MAX_ORDER}], got {order}")
    order = int(order)
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) > BESSEL_MAX_ARG):
        raise ValueError(f"|x| must not exceed {BESSEL_MAX_ARG}")
    if arr.ndim == 0:
        return _bessel_scalar(order, float(arr))
    out = np.empty_like(arr)
    for idx, val in np.ndenumerate(arr):
        out[idx] = _bessel_scalar(order, float(val))
    return out


def normalized_laguerre(n, k, x):
    r"""Return ``sqrt(n!/(n+k)!) * x**(k/2) * exp(-x/2) * L_n^{(k)}(x)``.

    This is the magnitude-bounded combination that appears in displaced
    Fock-state overlaps; its absolute value never exceeds one.  It is
    obtained from the three-term Laguerre recurrence rescaled so that no
    factorial or power is ever formed explicitly.
    """
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0.0:
        return 1.0 if k == 0 else 0.0
    log_f0 = -0.5 * x + 0.5 * k * math.log(x) - 0.5 * math.lgamma(k + 1)
    f_prev = math.exp(log_f0)
    if n == 0:
        return f_prev
    f_cur = f_prev * (1.0 + k - x) / math.sqrt(k + 1.0)
    for j in range(1, n):
        f_next = ((2 * j + 1 + k - x) * f_cur - math.sqrt(j * (j + k)) * f_prev) / math.sqrt(
            (j + 1.0) * (j + k + 1.0)
        )
        f_prev, f_cur = f_cur, f_next
    return f_cur
