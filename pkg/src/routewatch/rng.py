"""Counter-based, platform-independent random numbers for simulations.

The generator is stateless: draw i of a stream is a pure function of
(seed, i), so results are bit-identical across runs, platforms and any
internal parallelism.  Gaussians come from the inverse normal CDF
(rational approximation, ~1e-9 relative accuracy), not from
platform-dependent library samplers.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

# Inverse normal CDF rational-approximation coefficients (Acklam).
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def _mix64(x: int) -> int:
    """SplitMix64 finalizer."""
    x &= _MASK64
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB & _MASK64
    return x ^ (x >> 31)


def normal_inverse_cdf(p: float) -> float:
    """Quantile of the standard normal distribution for p in (0, 1)."""
    import math

    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    if p > 1.0 - _P_LOW:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        return -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    q = p - 0.5
    r = q * q
    return (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
        (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)


class CounterRng:
    """Seedable counter-based generator with uniform and normal draws."""

    def __init__(self, seed: int):
        self._seed = seed & _MASK64

    def uniform(self, index: int) -> float:
        """Draw `index` of the uniform(0, 1) stream (endpoints excluded)."""
        z = _mix64(self._seed + (index + 1) * _GOLDEN)
        return ((z >> 11) + 0.5) * (1.0 / (1 << 53))

    def normal(self, index: int) -> float:
        """Draw `index` of the standard normal stream."""
        return normal_inverse_cdf(self.uniform(index))

    def normals(self, count: int, start: int = 0) -> list[float]:
        return [self.normal(start + i) for i in range(count)]
