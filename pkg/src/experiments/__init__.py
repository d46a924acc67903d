"""Figure sweeps, transition scans, verification and the command line."""

from .sweeps import SweepRow, run_fig12_sweep, run_fig3_sweep, white_noise_rates
from .transition import TransitionBoundary, run_transition_scan, find_boundary
from .verify import VerifyCheck, VerifyReport, run_verify
from .csv_writer import write_csv, write_gnuplot_stub, format_value
from .cli import main

__all__ = [
    'SweepRow',
    'run_fig12_sweep',
    'run_fig3_sweep',
    'white_noise_rates',
    'TransitionBoundary',
    'run_transition_scan',
    'find_boundary',
    'VerifyCheck',
    'VerifyReport',
    'run_verify',
    'write_csv',
    'write_gnuplot_stub',
    'format_value',
    'main',
]
