"""Integer division in a residue number system with power-based moduli."""

from .core import (
    DigitState,
    ModulusSpec,
    RnsFormat,
    RnsValue,
    decode,
    efficiency,
    encode,
    format_efficiency,
    make_format,
    mod9_default_format,
    mod9_power_format,
    toy_format,
)
from .decomposition import BaseExtend, FactorScript, Increment, Scale, decompose
from .engine import DivisionOptions, DivisionResult, divide, divide_int
from .errors import DivideByZero, RnsError
from .inverses import InverseTable, build_inverse_table, mod_inverse
from .mixed_radix import Ordering, base_extend, compare, mrc_digits, mrc_value
from .oracle import fuzz_divisions, oracle_divmod, verify_inverse_fixture
from .scaling import multi_factor_scale, scale_by_power
from .trace import Trace, TraceRow, cycle_estimate, emit_trace

__all__ = [
    "BaseExtend", "DigitState", "DivideByZero", "DivisionOptions", "DivisionResult",
    "FactorScript", "Increment", "InverseTable", "ModulusSpec", "Ordering", "RnsError",
    "RnsFormat", "RnsValue", "Scale", "Trace", "TraceRow", "base_extend",
    "build_inverse_table", "compare", "cycle_estimate", "decode", "decompose", "divide",
    "divide_int", "efficiency", "emit_trace", "encode", "format_efficiency",
    "fuzz_divisions", "make_format", "mod9_default_format", "mod9_power_format",
    "mod_inverse", "mrc_digits", "mrc_value", "multi_factor_scale", "oracle_divmod",
    "scale_by_power", "toy_format", "verify_inverse_fixture",
]
