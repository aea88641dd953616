"""Run the full analytic-vs-oracle validation suite and print the report.

Equivalent to `owc-aloha validate`; every analytic ingredient is checked
against an independent route (closed form vs quadrature, Fourier inversion
vs grid convolution, everything vs Monte Carlo).

Run:  python demos/05_validation_report.py
"""

import dataclasses
import sys

from owc_aloha.cli import cmd_validate
from owc_aloha.config import RunConfig

cfg = dataclasses.replace(RunConfig(), trials=100_000)
sys.exit(cmd_validate(cfg, "-"))
