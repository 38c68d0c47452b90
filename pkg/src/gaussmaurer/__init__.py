"""Key-rate analysis and small-n simulation of soft-decision secret key agreement
over a Gaussian satellite broadcast with one eavesdropper."""

from .baseline import BscTriple, bsc_crossover, bsc_repetition_rate, hard_rate_n1, optimal_block_length
from .entropy import RateReport, build_cell_table, conditional_bit_entropy, soft_rate_lower_bound
from .model import ModelParams, binary_entropy, snr_nnr_to_params
from .protocol import run_protocol
from .quantizer import PAPER_THRESHOLDS, Thresholds, validate_thresholds
from .security import estimate_security

__all__ = [
    "BscTriple", "ModelParams", "PAPER_THRESHOLDS", "RateReport", "Thresholds",
    "binary_entropy", "bsc_crossover", "bsc_repetition_rate", "build_cell_table",
    "conditional_bit_entropy", "estimate_security", "hard_rate_n1", "optimal_block_length",
    "run_protocol", "snr_nnr_to_params", "soft_rate_lower_bound", "validate_thresholds",
]
