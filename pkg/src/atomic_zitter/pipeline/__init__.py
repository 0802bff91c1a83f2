from .engine import CompareReport, RunReport, ScenarioEngine
from .stage import RunContext, Stage

__all__ = ["CompareReport", "RunContext", "RunReport", "ScenarioEngine", "Stage"]
