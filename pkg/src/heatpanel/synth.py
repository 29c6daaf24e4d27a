"""Synthetic panels with known structure, for fixtures and tests."""
import numpy as np

from .panel import StudyPanel

TEHRAN_LIKE_VARIABLES = ("precip", "ndsi", "ndwi", "ndbi", "evi", "ndvi", "night_lst")


def linear_noise_panel(n_regions=22, years=range(2003, 2022),
                       variables=TEHRAN_LIKE_VARIABLES, seed=0, decimals=6):
    """Every series is ``level + slope * (year - first_year) + noise``.

    Level, slope and noise scale are drawn per (region, variable). Values are
    rounded to ``decimals`` so the CSV form stays short.
    """
    rng = np.random.default_rng(seed)
    years = list(years)
    t = np.asarray(years, dtype=float) - years[0]
    shape = (n_regions, len(variables))
    level = rng.normal(0.0, 1.0, shape)
    slope = rng.normal(0.0, 0.05, shape)
    scale = rng.uniform(0.05, 0.5, shape)
    noise = rng.normal(0.0, 1.0, (n_regions, len(years), len(variables)))
    values = level[:, None, :] + slope[:, None, :] * t[None, :, None] + scale[:, None, :] * noise
    values = np.round(values, decimals)
    regions = [str(i + 1) for i in range(n_regions)]
    return StudyPanel(regions, years, variables, values)


def separable_panel(n_increasing=10, n_flat=10, years=(2019, 2020, 2021), effect=5.0,
                    seed=7, decimals=6):
    """Two planted region groups.

    ``night_lst`` rises by 0.5 per year in the first ``n_increasing`` regions
    and is flat (plus small noise) elsewhere. Factor ``f1`` is shifted up by
    ``effect`` noise standard deviations in the rising regions in every year;
    ``f2`` is pure unit noise, unrelated to the grouping.
    """
    rng = np.random.default_rng(seed)
    n = n_increasing + n_flat
    t = np.arange(len(years), dtype=float)
    rising = np.arange(n) < n_increasing

    lst = 290.0 + rng.normal(0.0, 1.0, n)[:, None] + 0.05 * rng.normal(size=(n, len(years)))
    lst = lst + np.where(rising, 0.5, 0.0)[:, None] * t[None, :]
    f1 = rng.normal(size=(n, len(years))) + np.where(rising, effect, 0.0)[:, None]
    f2 = rng.normal(size=(n, len(years)))

    values = np.round(np.stack([lst, f1, f2], axis=2), decimals)
    regions = [f"R{i + 1:02d}" for i in range(n)]
    return StudyPanel(regions, list(years), ["night_lst", "f1", "f2"], values)
