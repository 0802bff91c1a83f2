from .evolution import EvolutionStage
from .overlay import AnalyticOverlayStage
from .review import ToleranceReviewStage
from .spectroscopy import SpectroscopyStage

__all__ = [
    "AnalyticOverlayStage",
    "EvolutionStage",
    "SpectroscopyStage",
    "ToleranceReviewStage",
]
