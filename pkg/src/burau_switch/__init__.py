"""Braid-controlled quantum switch built on the Squier-unitarized Burau representation of B3."""
from .braid import BraidGenerator, BraidWord, concat, exponent_sum, free_reduce, invert, parse_braid_word
from .device import (
    DeviceConfig,
    TargetPair,
    gap_switch,
    gap_test,
    mixer,
    p_fixed,
    p_switch,
    p_test,
    rotation,
    switch_matrix,
)
from .laurent import LaurentMatrix, LaurentPoly, evaluate_word, squier_form
from .numerics import eigenphases, helstrom, shortest_arc, unitarize

__version__ = "0.1.0"
