"""Registry of the named games shipped with the package."""

from __future__ import annotations

from .games import ImpossibleMarket, MatrixGame, Tandem, TwoPlayerGame, load_payoff_tables
from .ipd import IpdConfig, IpdGame, IpdTftAlldMixGame

__all__ = ["catalog", "build_game", "MATRIX_GAME_NAMES"]

MATRIX_GAME_NAMES = (
    "PrisonersDilemma",
    "MatchingPennies",
    "StagHunt",
    "ChickenGame",
    "BachOrStravinsky",
    "BabyChickenGame",
    "AwkwardGame",
    "EagleGame",
)

_ALIASES = {
    "bos": "BachOrStravinsky",
    "pd": "PrisonersDilemma",
    "chicken": "ChickenGame",
    "babychicken": "BabyChickenGame",
    "awkward": "AwkwardGame",
    "eagle": "EagleGame",
}


def catalog() -> tuple[str, ...]:
    """Canonical names of every game that build_game accepts."""
    return MATRIX_GAME_NAMES + ("ImpossibleMarket", "Tandem", "IPD", "IpdTftAlldMix")


def build_game(name: str, gamma: float = 0.96) -> TwoPlayerGame:
    """Construct a catalog game by (case-insensitive) name."""
    key = name.replace("-", "").replace("_", "").lower()
    canon = {n.lower(): n for n in catalog()}
    key = _ALIASES.get(key, key)
    key = canon.get(key.lower(), key)
    if key in MATRIX_GAME_NAMES:
        return MatrixGame(load_payoff_tables()[key])
    if key == "ImpossibleMarket":
        return ImpossibleMarket()
    if key == "Tandem":
        return Tandem()
    if key == "IPD":
        return IpdGame(IpdConfig(gamma=gamma))
    if key == "IpdTftAlldMix":
        return IpdTftAlldMixGame(IpdConfig(gamma=gamma))
    raise ValueError(f"unknown game {name!r}; known games: {', '.join(catalog())}")
