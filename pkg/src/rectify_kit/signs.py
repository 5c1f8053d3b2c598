"""Sign conventions, fixed in one place.

Cohomological grading throughout. The structure relation at arity n reads

    sum over r+s+t = n of (-1)^(r+st) m_{r+1+t}(1^r (x) m_s (x) 1^t) = 0,

where applying 1^r (x) m_s (x) 1^t to a tuple (a_1, ..., a_n) carries the
Koszul sign (-1)^(s * (|a_1|+...+|a_r|)) for moving the odd-or-even operator
m_s (degree 2-s, parity s mod 2) past the first r arguments.

Shifted (suspended) coordinates use eps_i = |a_i| - 1. The comparison sign
between an operation m_n and its suspended avatar b_n is

    (-1)^(sum over i < n of (n-i) * eps_i),

and the same comparison converts functor components F^n to their suspended
avatars. In suspended coordinates every b_n has degree +1 and every functor
avatar has degree 0, so coderivation and derivation prefixes degenerate to
(-1)^(eps_1+...+eps_r) with no operator-degree factor.

Nothing here is arbitrary once the relation shape is chosen: a wrong sign
fails the d^2 = 0, Leibniz, or associativity checks on any DG input, and the
test suite pins the convention down that way.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def relation_sign(r: int, s: int, t: int) -> int:
    return -1 if (r + s * t) % 2 else 1


def koszul_insertion_sign(s: int, degrees_before: Iterable[int]) -> int:
    """Sign for moving m_s past arguments of the given degrees."""
    total = s * sum(degrees_before)
    return -1 if total % 2 else 1


def suspension_sign(degrees: Sequence[int]) -> int:
    """Comparison sign between m_n (or F^n) and its suspended avatar.

    ``degrees`` are the unshifted degrees of the arguments, outermost first."""
    n = len(degrees)
    total = sum((n - i) * (degrees[i - 1] - 1) for i in range(1, n))
    return -1 if total % 2 else 1


def shifted_prefix_sign(shifted_degrees_before: Iterable[int]) -> int:
    """Prefix sign of a degree +1 (co)derivation acting past shifted letters."""
    total = sum(shifted_degrees_before)
    return -1 if total % 2 else 1
