"""Pipeline stage orchestration."""

from src.pipeline.runner import PipelineRunner, SimulationOutcome, ValidationReport, stage

__all__ = ["PipelineRunner", "SimulationOutcome", "ValidationReport", "stage"]
