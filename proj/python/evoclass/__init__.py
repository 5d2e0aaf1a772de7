"""Evolution algebra invariants, 3-dim classification and isomorphism tests.

Algebras, adjunction specs and moduli points use the JSON formats of the evoclass CLI;
each function accepts a dict or a JSON string and returns a dict.
"""

import json as _json

from . import _core
from ._core import EvoclassError

__all__ = ["EvoclassError", "invariants", "classify", "iso", "construct", "same_orbit", "catalog"]


def _text(obj):
    return obj if isinstance(obj, str) else _json.dumps(obj)


def invariants(algebra, field=None):
    """Annihilator series and socle."""
    return _json.loads(_core.invariants(_text(algebra), field))


def classify(algebra, field=None):
    """Classification report of a 3-dim evolution algebra."""
    return _json.loads(_core.classify(_text(algebra), field))


def iso(a, b, field=None):
    """Isomorphism verdict with method and, when found, a witness."""
    return _json.loads(_core.iso(_text(a), _text(b), field))


def construct(spec, field=None):
    """The algebra built from an adjunction spec."""
    return _json.loads(_core.construct(_text(spec), field))


def same_orbit(action, x, y):
    """Whether two moduli points share an orbit of the named action."""
    return _json.loads(_core.same_orbit(action, _text(x), _text(y)))


def catalog(field, jobs=0, verify=False):
    """Every 3x3 structure matrix over F2 or F3, partitioned into isomorphism classes."""
    return _json.loads(_core.catalog(field, jobs, verify))
