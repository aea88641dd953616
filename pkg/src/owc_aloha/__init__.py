"""Reliability of a slotted-ALOHA uplink with capture in an indoor OWC cell.

Analytic SINR statistics via characteristic functions and Fourier inversion,
an independent Monte Carlo oracle, and outage probabilities under Bernoulli
arrivals, with parameter sweeps over the cell geometry and traffic load.
"""

from .channel import (
    CellGeometry,
    LedTransmitter,
    PhotoDetector,
    PowerNoiseParams,
    SystemModel,
    build_model,
    channel_gain,
    default_model,
    lambertian_order,
    radial_pdf,
    snr_cdf_closed_form,
    snr_of_gain,
    snr_pdf,
)
from .errors import ConfigError, QuadratureError
from .montecarlo import (
    McConfig,
    McEstimate,
    combine_estimates,
    sample_user_snr,
    simulate_conditional_outage,
    simulate_unconditional_outage,
)
from .reliability import (
    OutageQuery,
    SweepResult,
    SweepRow,
    TrafficModel,
    binomial_pmf,
    conditional_outage,
    sweep,
    unconditional_outage,
)
from .sinr import (
    QuadratureSpec,
    conditional_sinr_cdf,
    conditional_sinr_pdf,
    interference_cf,
    interference_pdf,
    interference_pdf_convolution,
    single_interferer_cf,
)
from .tabulated import TabulatedDistribution

__version__ = "0.1.0"
