"""Non-commutativity measures of quantum correlations and their behaviour under local channels."""
from .channels import (
    AffineQubitChannel,
    DecoheringChannel,
    IsotropicChannel,
    KrausChannel,
    apply_local,
    channel_to_kraus,
)
from .measures import MinimizerConfig, bell_diagonal_D, block_decompose, guo_D, minimize_d
from .states import BellDiagonalCoeffs, BipartiteState, bell_diagonal_state, validate_state

__version__ = "0.1.0"
