"""Configuration, sweeps, falsification search, reports and the CLI."""

from .config import (
    FalsifySpec,
    InstanceGroup,
    OutputSpec,
    SweepConfig,
    default_config,
    load_config,
    parse_config,
)
from .report import COLUMNS, RunReport, json_to_csv, read_csv, rows_to_csv
from .runner import (
    run_certify,
    run_falsify,
    run_verify_identities,
    run_verify_theorems,
)

__all__ = [
    "FalsifySpec",
    "InstanceGroup",
    "OutputSpec",
    "SweepConfig",
    "default_config",
    "load_config",
    "parse_config",
    "COLUMNS",
    "RunReport",
    "json_to_csv",
    "read_csv",
    "rows_to_csv",
    "run_certify",
    "run_falsify",
    "run_verify_identities",
    "run_verify_theorems",
]
