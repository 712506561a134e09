# config.py
import contextlib
import contextvars
import os

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Run configuration (command-line flags take precedence)
THREADS_ENV_VAR = "HOMSCOPE_THREADS"
HOMSCOPE_LOG_LEVEL = os.getenv("HOMSCOPE_LOG_LEVEL", "WARNING")
HOMSCOPE_OUT_DIR = os.getenv("HOMSCOPE_OUT_DIR", "results")

# Numerical tolerances shared by the library
NUMERIC_DEFAULTS = {
    "witness_tolerance": 1e-6,
    "clamp_tolerance": 1e-6,
    "max_norm_loss": 0.01,
    "imag_tolerance": 1e-10,
    "coverage_sigmas": 10.0,
    "z_samples_per_wavelength": 8,
    "comb_samples_per_period": 16,
    "tooth_samples": 8,
}

# Default options per scenario kind
SCENARIO_DEFAULTS = {
    "hom_scan": {"convention": "halved", "mu": 0.0},
    "coincidence_map": {"convention": "halved"},
    "wigner_map": {"method": "fft"},
    "classical_dip": {"second_order_only": False},
    "pump_state": {"method": "fft"},
    "comb_readout": {"pairing": "separable"},
    "spectrogram": {},
}


def resolve_threads(flag_value=None):
    """Worker count: the --threads flag wins, then HOMSCOPE_THREADS, then 1"""
    if flag_value is not None:
        return max(1, int(flag_value))
    env_value = os.getenv(THREADS_ENV_VAR)
    if env_value:
        try:
            return max(1, int(env_value))
        except ValueError:
            return 1
    return 1


# Per-run overrides of NUMERIC_DEFAULTS, scoped to the calling context
_NUMERIC_OVERRIDES = contextvars.ContextVar("homscope_numeric_overrides", default={})


def numeric(key):
    """Effective numeric setting: the innermost override, else the default"""
    return _NUMERIC_OVERRIDES.get().get(key, NUMERIC_DEFAULTS[key])


@contextlib.contextmanager
def numeric_overrides(values):
    """Apply the entries of `values` that name numeric defaults for the enclosed block"""
    layered = {**_NUMERIC_OVERRIDES.get(), **{k: v for k, v in values.items() if k in NUMERIC_DEFAULTS}}
    token = _NUMERIC_OVERRIDES.set(layered)
    try:
        yield
    finally:
        _NUMERIC_OVERRIDES.reset(token)
