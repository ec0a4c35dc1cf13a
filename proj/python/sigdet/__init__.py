"""Two-sample multivariate signal detection by permutation testing."""

from ._sigdet import (
    SigdetError,
    basic_battery,
    catalog_names,
    draw,
    fit,
    make_covariance,
    permutation_test,
    power_csv,
    preset_names,
    preset_yaml,
    run,
    statistic,
)

__all__ = [
    "SigdetError",
    "basic_battery",
    "catalog_names",
    "draw",
    "fit",
    "make_covariance",
    "permutation_test",
    "power_csv",
    "preset_names",
    "preset_yaml",
    "run",
    "statistic",
]
