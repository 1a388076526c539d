"""Compensated floating-point accumulation.

Every series and signed subset sum in this package runs through
:class:`CompensatedSum` so that accumulation error stays near one ulp of
the true sum instead of growing with the term count.  The scheme is
Neumaier's variant of Kahan summation: it keeps a separate correction
term and, unlike textbook Kahan, stays accurate when an incoming term is
larger than the running total.
"""

from __future__ import annotations

__all__ = ["CompensatedSum"]


class CompensatedSum:
    """Neumaier-style compensated accumulator.

    Examples
    --------
    >>> acc = CompensatedSum()
    >>> for x in [1.0, 1e100, 1.0, -1e100]:
    ...     acc.add(x)
    >>> acc.value
    2.0
    """

    __slots__ = ("_sum", "_comp")

    def __init__(self, value: float = 0.0) -> None:
        self._sum = float(value)
        self._comp = 0.0

    def add(self, x: float) -> None:
        """Fold one term into the running sum."""
        t = self._sum + x
        if abs(self._sum) >= abs(x):
            # low-order bits of x survive in the correction
            self._comp += (self._sum - t) + x
        else:
            self._comp += (x - t) + self._sum
        self._sum = t

    @property
    def value(self) -> float:
        """Best available estimate of the sum."""
        return self._sum + self._comp

    def __repr__(self) -> str:  # pragma: no cover
        return f"CompensatedSum({self.value!r})"
