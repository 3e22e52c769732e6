"""Informed stego-systems under an AWGN active warden.

Three embedders over a common scalar lattice: the binary scalar Costa scheme
(SCS), a trellis-coded quantization scheme (TCQ) with state-dependent dither,
and the spread-transform SCS composite (ST-SCS).  The package pairs each
scheme with its analytic stego density, a calibrated AWGN attack channel, and
estimators for the two evaluation axes: Kullback-Leibler detectability and
capacity (mutual information or a BSC lower bound).
"""

from .analysis import (
    CapacityEstimate,
    Histogram,
    KldReport,
    build_histogram,
    default_epsilon,
    embed_and_attack,
    estimate_capacity_ber,
    estimate_capacity_mi,
    kld,
    kld_derivative_alpha,
    kld_noise_floor,
    measure_ber,
    mutual_information_binary,
    optimize_alpha,
    scheme_kld,
)
from .errors import ParameterError, PgmFormatError
from .experiments import (
    PRESETS,
    ExperimentRecord,
    ExperimentSpec,
    emit_csv,
    emit_plot,
    make_preset,
    parse_specfile,
    run_and_write,
    run_experiment,
)
from .images import GrayImage, image_to_signal, load_pgm, save_pgm, signal_to_image
from .lattice import mod_residual, quantize
from .schemes import SchemeSpec
from .scs import ScsParams, delta_for_dwr, scs_embed, scs_extract, scs_theoretical_pdf
from .signals import (
    Key,
    db_to_linear,
    empirical_power,
    gen_gaussian_host,
    linear_to_db,
    random_bits,
)
from .spread import (
    SpreadParams,
    StScsParams,
    spread_project,
    stscs_embed,
    stscs_extract,
    stscs_params_for_dwr,
    stscs_theoretical_pdf,
)
from .tcq import (
    TcqParams,
    Trellis,
    build_trellis,
    tcq_embed,
    tcq_extract,
    tcq_theoretical_pdf,
    viterbi_decode,
)
from .warden import AttackParams, awgn_attack

__version__ = "0.1.0"
