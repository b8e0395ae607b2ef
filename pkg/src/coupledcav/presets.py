"""Named, versioned parameter sets for regenerating the figure and table data.

Where a figure's curve values are not listed explicitly, the chosen values
bracket the qualitative regimes the figure discusses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import SiteParams, TimeGrid
from .errors import UnknownPreset

PRESET_VERSION = 1

ALPHA_EQUAL = 1 / math.sqrt(2)
ALPHA_THIRD = math.sqrt(1 / 3)
ALPHA_TENTH = math.sqrt(1 / 10)


@dataclass(frozen=True)
class Preset:
    name: str
    kind: str
    grid: TimeGrid
    base: dict
    curves: tuple = ()
    panels: dict = field(default_factory=dict)
    version: int = PRESET_VERSION
    description: str = ""


def _coh(name, kappa, gamma2, js, t_end, desc):
    return Preset(
        name,
        "coherence_curves",
        TimeGrid.span(t_end, int(t_end * 100) + 1),
        {"kappa": kappa, "gamma2": gamma2, "alpha": ALPHA_EQUAL, "vary": "j_coupling"},
        tuple(js),
        description=desc,
    )


def _conc(name, kappas, gamma2, alpha, pairs, t_end, desc):
    return Preset(
        name,
        "concurrence_curves",
        TimeGrid.span(t_end, int(t_end * 100) + 1),
        {"kappa_a": kappas[0], "kappa_b": kappas[1], "gamma2": gamma2, "alpha": alpha},
        tuple(pairs),
        description=desc,
    )


DELTA_GRID = tuple(np.round(np.arange(0.0, 3.0001, 0.25), 10))

PRESETS: dict[str, Preset] = {
    p.name: p
    for p in [
        _coh("fig2a", 0.24, 0.5, (0.0, 0.5, 1.0, 2.0), 15.0, "coherence, weak coupling, lossy C2"),
        _coh("fig2b", 0.4, 0.5, (0.0, 0.5, 1.0, 2.0), 15.0, "coherence, strong coupling, lossy C2"),
        _coh("fig2c", 0.24, 0.0, (0.0, 0.5, 1.0, 2.0), 50.0, "coherence trapping, weak coupling"),
        _coh("fig2d", 0.4, 0.0, (0.0, 0.5, 1.0, 2.0), 50.0, "coherence trapping, strong coupling"),
        Preset(
            "fig3",
            "blp_vs_j",
            TimeGrid.span(50.0, 20001),
            {"gamma2": 0.5, "j_values": tuple(np.round(np.arange(0.0, 3.0001, 0.1), 10))},
            (0.24, 0.4),
            description="BLP measure versus C1-C2 coupling",
        ),
        Preset(
            "fig4",
            "coherence_map",
            TimeGrid.span(15.0, 301),
            {"alpha": ALPHA_EQUAL, "vary": "detuning", "values": DELTA_GRID},
            panels={
                "a": {"kappa": 0.24, "gamma2": 0.2, "j_coupling": 0.5},
                "b": {"kappa": 0.24, "gamma2": 0.2, "j_coupling": 1.0},
                "c": {"kappa": 0.4, "gamma2": 0.5, "j_coupling": 0.5},
                "d": {"kappa": 0.4, "gamma2": 0.5, "j_coupling": 1.0},
            },
            description="coherence versus detuning and time",
        ),
        Preset(
            "fig5",
            "coherence_curves",
            TimeGrid.span(100.0, 10001),
            {"gamma2": 0.0, "alpha": ALPHA_EQUAL, "vary": "detuning", "j_coupling": 0.3},
            (0.0, 0.25, 0.5, 1.0),
            panels={"a": {"kappa": 0.24}, "b": {"kappa": 0.4}},
            description="no trapping off resonance with a perfect C2",
        ),
        _conc("fig6a", (0.2, 0.2), 0.2, ALPHA_TENTH, [(0, 0), (0.5, 1), (2, 2), (3, 3)], 30.0,
              "concurrence, weak coupling, lossy C2"),
        _conc("fig6b", (2.0, 2.0), 0.2, ALPHA_THIRD, [(0, 0), (1, 1), (3, 3), (4, 5)], 30.0,
              "concurrence, strong coupling, lossy C2"),
        Preset(
            "fig6c",
            "concurrence_map",
            TimeGrid.span(30.0, 601),
            {"kappa_a": 0.2, "kappa_b": 0.2, "gamma2": 0.2, "alpha": ALPHA_TENTH,
             "vary": "j", "values": tuple(np.round(np.arange(0.0, 5.0001, 0.1), 10))},
            description="concurrence versus J and time, weak coupling",
        ),
        Preset(
            "fig6d",
            "concurrence_map",
            TimeGrid.span(30.0, 601),
            {"kappa_a": 2.0, "kappa_b": 2.0, "gamma2": 0.2, "alpha": ALPHA_THIRD,
             "vary": "j", "values": tuple(np.round(np.arange(0.0, 5.0001, 0.1), 10))},
            description="concurrence versus J and time, strong coupling",
        ),
        _conc("fig7a", (0.2, 0.3), 0.0, ALPHA_THIRD, [(0, 0), (0.5, 1), (1, 1), (2, 2), (3, 3)], 100.0,
              "entanglement trapping, weak coupling"),
        _conc("fig7b", (2.0, 2.0), 0.0, ALPHA_THIRD, [(0, 0), (1, 1), (2, 3), (3, 3)], 100.0,
              "entanglement trapping, strong coupling"),
        Preset(
            "fig8",
            "concurrence_map",
            TimeGrid.span(100.0, 1001),
            {"kappa_a": 0.2, "kappa_b": 0.3, "j_a": 0.5, "j_b": 1.0, "gamma2": 0.0,
             "vary": "alpha", "values": tuple(np.round(np.arange(0.05, 0.9501, 0.05), 10))},
            description="concurrence versus initial-state weight and time",
        ),
        Preset(
            "table1",
            "table1",
            TimeGrid.span(2e4, 2),
            {"kappa_a": 0.2, "kappa_b": 0.3, "alpha": ALPHA_THIRD,
             "gamma2_ratios": (1e-2, 1e-3, 1e-4), "coupling_pairs": ((0.5, 0.5), (0.5, 1.0))},
            description="entanglement lifetimes with slightly lossy C2",
        ),
    ]
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownPreset(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


def site(kappa, j_coupling, gamma2, detuning=0.0) -> SiteParams:
    return SiteParams(kappa=kappa, j_coupling=j_coupling, gamma1=1.0, gamma2=gamma2, detuning=detuning)


def j_label(j_a, j_b) -> str:
    return f"J{j_a:g}" if j_a == j_b else f"JA{j_a:g}_JB{j_b:g}"
