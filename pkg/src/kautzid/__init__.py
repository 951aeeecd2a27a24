"""Adaptive Kautz filter banks for identifying resonant plants from
uncertain prior pole knowledge."""
from .adaptive import (
    DivergenceError,
    FirModel,
    IdentificationRun,
    default_step_size,
    default_steps,
    fir_identify,
    fir_ls,
    lms_identify,
    ls_optimal_weights,
    white_noise,
)
from .cost import CostReport, cost_model
from .experiments import (
    ErrorCurve,
    ExperimentConfig,
    load_config,
    order_ratio,
    run_ensemble_experiment,
    run_monte_carlo,
    run_sdof_experiment,
    write_report,
)
from .kautz import (
    KautzBank,
    PolePair,
    PoleSet,
    bank_step,
    basis_impulse_responses,
    build_kautz_bank,
    kautz_model_impulse_response,
    scaling_constants,
    truncation_length,
)
from .prony import (
    PoleScreeningError,
    PronyResult,
    TrainingEnsemble,
    estimate_poles,
    extend_poles_periodically,
    modified_prony,
    poles_for_order,
    screen_poles,
)
from .signals import (
    FrequencyResponse,
    ImpulseResponse,
    RationalTransferFunction,
    frf_to_impulse_response,
    impulse_response_of,
    impulse_response_to_frf,
    inner_product,
    normalized_error,
)
from .systems import (
    MdofProxySpec,
    SdofParams,
    UncertaintySpec,
    mdof_proxy_ensemble,
    sample_systems,
    sdof_discrete_poles,
    sdof_impulse_response,
    sdof_transfer_function,
)

__version__ = "0.1.0"
