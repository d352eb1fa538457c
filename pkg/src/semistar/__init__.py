"""Stable semistar operations on finite tree models of semilocal Prüfer domains."""

from .closure import (
    Generator,
    SpecError,
    SpectraReport,
    StableOpSpec,
    analyze,
    build_spec,
    check_stability,
    closure_apply,
    enumerate_stable,
    gen_apply,
    gen_leq,
    normalize,
    phi,
    phi_inverse,
    psi,
    up_closure,
)
from .groups import GroupElement, OrderedGroup, UpSet
from .spectrum import ModuleTuple, SpectrumTree, validate_model

__version__ = "0.1.0"
