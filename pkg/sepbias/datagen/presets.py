"""Synthetic analogues of real dataset-attribute pairs.

Each preset keeps the measured group separability, the fraction of Group 1
and the per-group prevalence of the positive class; everything else uses
the PopulationSpec defaults.
"""
from dataclasses import dataclass

from datagen.models import PopulationSpec
from sepbias.exceptions import DomainError


@dataclass(frozen=True)
class Preset:
    name: str
    separability_auc: float
    group_prior: float
    class_prior: tuple[float, float]

    def spec(self, **fields) -> PopulationSpec:
        return PopulationSpec.from_auc(
            self.separability_auc,
            group_prior=self.group_prior,
            class_prior=self.class_prior,
            **fields,
        )


# Ascending separability.
PRESETS: tuple[Preset, ...] = (
    Preset('papila-sex', 0.642, 0.652, (0.240, 0.190)),
    Preset('ham10000-sex', 0.723, 0.458, (0.168, 0.116)),
    Preset('ham10000-age', 0.803, 0.281, (0.0955, 0.269)),
    Preset('papila-age', 0.812, 0.595, (0.0647, 0.304)),
    Preset('fitzpatrick17k-skin', 0.891, 0.309, (0.149, 0.103)),
    Preset('chexpert-age', 0.920, 0.608, (0.871, 0.942)),
    Preset('mimic-age', 0.930, 0.654, (0.581, 0.749)),
    Preset('chexpert-race', 0.936, 0.221, (0.917, 0.905)),
    Preset('mimic-race', 0.951, 0.226, (0.709, 0.627)),
    Preset('chexpert-sex', 0.980, 0.412, (0.916, 0.912)),
    Preset('mimic-sex', 0.986, 0.465, (0.708, 0.671)),
)

PRESETS_BY_NAME: dict[str, Preset] = {preset.name: preset for preset in PRESETS}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS_BY_NAME[name]
    except KeyError:
        raise DomainError(f'unknown preset {name!r}; choose from {", ".join(PRESETS_BY_NAME)}') from None


def preset_spec(name: str, **fields) -> PopulationSpec:
    return get_preset(name).spec(**fields)
