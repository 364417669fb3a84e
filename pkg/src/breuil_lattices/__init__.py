"""Strongly divisible lattices in two families of rank three filtered (phi, N)-modules.

Modules, bottom up:

* ``padic``, ``finite_field``: capped p-adic numbers in Q_p(pi), finite fields;
* ``sring``: the ring S on the divided-power basis, with phi and N;
* ``families``: the two parameter families, their regions and gluing;
* ``limits``: the four recursions and their limits Delta;
* ``sdm``: the lattices and their strong divisibility checks;
* ``breuil``: Breuil modules over F[u]/u^p and the irreducibility verdicts;
* ``pipeline``, ``suite``, ``cli``: job files, the acceptance battery, the command line.
"""
from .breuil import (BreuilModule, Verdict, classify_irreducible, expected_shape, module_verdict,
                     reduce, shapes_match)
from .families import (ONE, ZERO, FamilyParams, ParameterError, classify_region, make_params,
                       validate)
from .finite_field import GF, FiniteField
from .limits import delta, recursion_certificate
from .padic import IndeterminateError, PadicContext, PadicElem, PrecisionError, Val, v
from .sdm import SDModule, build, non_homothety, verify
from .sring import SElem, SRingContext

__all__ = [
    "BreuilModule", "Verdict", "classify_irreducible", "expected_shape", "module_verdict",
    "reduce", "shapes_match", "ONE", "ZERO", "FamilyParams", "ParameterError",
    "classify_region", "make_params", "validate", "GF", "FiniteField", "delta",
    "recursion_certificate", "IndeterminateError", "PadicContext", "PadicElem",
    "PrecisionError", "Val", "v", "SDModule", "build", "non_homothety", "verify", "SElem",
    "SRingContext",
]
__version__ = "0.1.0"
