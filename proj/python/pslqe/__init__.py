"""Integer relation search with an a priori error budget.

Every call returns plain Python data. Relation vectors are lists of ints;
real quantities stay decimal strings so no precision is lost.
"""

import csv
import io
import json

from . import _pslqe
from ._pslqe import InfeasiblePlan, InputError, __version__

__all__ = ["plan", "find", "minpoly", "sweep", "verify", "selftest", "InfeasiblePlan", "InputError", "__version__"]


def _ints(doc, key):
    if doc.get(key) is not None:
        doc[key] = [int(v) for v in doc[key]]
    return doc


def plan(input, eps, G, digits=50, omega=0.5):
    return json.loads(_pslqe.plan(input, str(eps), str(G), digits, omega))


def find(input, eps=None, G=None, eps2=None, data="exact", max_iterations=None, exact=False, digits=50,
         gamma=None, omega=0.5, seed=1):
    doc = json.loads(_pslqe.find(input, _str(eps), _str(G), _str(eps2), data, max_iterations, exact, digits,
                                 gamma, omega, seed))
    return _ints(doc, "m")


def minpoly(constant, degree, eps, G, data="exact", digits=50):
    return _ints(json.loads(_pslqe.minpoly(constant, degree, str(eps), str(G), data, digits)), "m")


def sweep(input, first, last, G, reference=None, data="exact", digits=50, jobs=0):
    ref = None if reference is None else [str(v) for v in reference]
    text = _pslqe.sweep(input, first, last, str(G), ref, data, digits, jobs)
    rows = csv.DictReader(io.StringIO("".join(l for l in text.splitlines(True) if not l.startswith("#"))))
    return [dict(r, i=int(r["i"]), iterations=int(r["iterations"]) if r["iterations"] else None) for r in rows]


def verify(input, m, eps=None, G=None, digits=50):
    return _ints(json.loads(_pslqe.verify(input, [str(v) for v in m], _str(eps), _str(G), digits)), "m")


def selftest(digits=40, seed=1):
    return json.loads(_pslqe.selftest(digits, seed))


def _str(v):
    return None if v is None else str(v)
