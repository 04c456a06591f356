"""Exact computations for composition operators over odometers with product measures."""

from .errors import (
    ConfigError,
    EpsilonTooLarge,
    HorizonExhausted,
    InconsistentDeclarations,
    InvalidBase,
    InvalidFamily,
    InvalidShift,
    KTooSmall,
    NotFound,
    OdolinError,
    OutOfRange,
    SizeLimit,
    WindowMismatch,
    WindowTooSmall,
)
from .odometer import BaseSeq, MixedRadixInt, add_with_carry, carry_at, decode, digits_of, encode
from .measures import CoordMeasure, Declaration, MeasureFamily, custom, ex33, thm32, thm36, thm37, uniform
from .cylinders import EMPTY, FULL, Block, Box, carry_split_measure, disjoint_under, set_measure, shifted_intersection_measure
from .shift_disjoint import PsiResult, ShiftProblem, best_for_shift, brute_force_psi, psi_range, psi_single
from .classifier import Status, Thresholds, Verdict, classify, consistency_check, evidence
from .witness import (
    WitnessReport,
    dl_overlap_check,
    ex33_witness,
    mixing_witness,
    nonmixing_probe,
    transitive_witness,
)
from .operator_window import OperatorQuery, indicator_orbit, norm_ratio_Tfk, star_constant

__version__ = "0.1.0"
