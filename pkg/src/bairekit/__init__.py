"""Certified exact-real toolkit for category realisers and their reductions.

Subpackages by concern: ``exact`` (exact reals over arbitrary-precision
rationals), ``sternbrocot`` (canonical rational enumerations), ``opensets``
(the four open-set representations and their conversions), ``gallery``
(oscillation-enriched functions), ``realisers`` (constructive category
realiser, avoidance, finiteness, strong Cantor, closed-set enumeration),
``reductions`` (the combinators between realiser classes), ``certificates``
and ``verify`` (the proof-carrying record layer), ``instances`` and ``cli``
(the batch front door).
"""

from .exact import (ExactReal, Rational, arith, cmp_at_precision, from_rational,
                    midpoint, separation_certificate)
from .errors import (BudgetExhausted, CertificateFailure, MalformedInstance,
                     ToolkitError)

__all__ = [
    "ExactReal", "Rational", "arith", "cmp_at_precision", "from_rational",
    "midpoint", "separation_certificate",
    "BudgetExhausted", "CertificateFailure", "MalformedInstance", "ToolkitError",
]
