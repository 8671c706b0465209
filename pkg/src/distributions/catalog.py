"""
Model catalog and 'family:p1,p2' parsing
"""

import logging
from typing import Callable, Dict, Iterable, List, Optional

from ..core.errors import ConfigurationError
from .base import WeibullTailModel
from .models import AbsNormalModel, GammaModel, WeibullModel

logger = logging.getLogger(__name__)

ModelFactory = Callable[..., WeibullTailModel]

_FAMILIES: Dict[str, ModelFactory] = {
    "absnormal": lambda mu=0.0, sigma=1.0: AbsNormalModel(mu=mu, sigma=sigma),
    "gamma": lambda shape, rate=1.0: GammaModel(shape=shape, rate=rate),
    "weibull": lambda shape, scale=1.0: WeibullModel(shape=shape, scale=scale),
}


def register_family(name: str, factory: ModelFactory) -> None:
    """Make `name:p1,...` parseable; factory receives the parameters positionally"""
    key = name.strip().lower()
    if not key or ":" in key:
        raise ConfigurationError(f"Invalid family name: {name!r}")
    if key in _FAMILIES:
        logger.warning(f"Replacing registered model family '{key}'")
    _FAMILIES[key] = factory


def registered_families() -> List[str]:
    return sorted(_FAMILIES)


def parse_model_spec(spec: str) -> WeibullTailModel:
    """Parse e.g. 'gamma:1.5,1' or 'absnormal:0,1' into a model"""
    family, _, raw_params = spec.strip().partition(":")
    family = family.strip().lower()
    factory = _FAMILIES.get(family)
    if factory is None:
        raise ConfigurationError(
            f"Unknown model family '{family}' in {spec!r}",
            details={"known_families": registered_families()}
        )

    try:
        params = [float(token) for token in raw_params.split(",") if token.strip()]
    except ValueError as e:
        raise ConfigurationError(f"Model parameters must be numbers: {spec!r}", cause=e)

    try:
        return factory(*params)
    except TypeError as e:
        raise ConfigurationError(f"Wrong number of parameters for '{family}': {spec!r}", cause=e)


def catalog(extra_models: Optional[Iterable[WeibullTailModel]] = None) -> List[WeibullTailModel]:
    """The five models of the reference study, followed by any extra models"""
    models: List[WeibullTailModel] = [
        GammaModel(shape=0.5, rate=1.0),
        GammaModel(shape=1.5, rate=1.0),
        AbsNormalModel(mu=0.0, sigma=1.0),
        WeibullModel(shape=2.5, scale=2.5),
        WeibullModel(shape=0.4, scale=0.4),
    ]
    models.extend(extra_models or [])
    return models
