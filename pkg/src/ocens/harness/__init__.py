from .config import ExperimentConfig, DatasetConfig, load_config
from .reports import emit_reports, report_from_files
from .runner import EvaluationReport, run_experiment
from .synth import gen_synthetic
