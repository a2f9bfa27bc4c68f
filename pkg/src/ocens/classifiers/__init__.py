"""One-class base learners sharing the ``TrainedClassifier`` contract."""

from .base import (
    ALGORITHMS,
    DENSITY_AGG,
    GDE,
    OCSVM,
    PGA,
    ClassifierSpec,
    TrainedClassifier,
)
from .density import GEOMETRIC, HARMONIC, DensityAggModel, train_density_agg
from .gde import GDEModel, train_gde
from .ocsvm import LINEAR, POLYNOMIAL, OCSVMModel, solve_oc_dual, train_ocsvm
from .pga import PGAModel, train_pga
from .serialize import dumps, load, loads, save

MODEL_TYPES = {
    PGA: PGAModel,
    GDE: GDEModel,
    DENSITY_AGG: DensityAggModel,
    OCSVM: OCSVMModel,
}

_TRAINERS = {
    PGA: train_pga,
    GDE: train_gde,
    DENSITY_AGG: train_density_agg,
    OCSVM: train_ocsvm,
}


def train(spec, positives):
    """Fit the classifier described by ``spec`` on a positives-only view."""
    return _TRAINERS[spec.algorithm](positives, name=spec.name, **spec.params)


def score(model, x):
    return model.score(x)


def default_members():
    """The six-member pool: two density aggregators, GDE, PGA, two OC-SVMs."""
    return [
        ClassifierSpec(DENSITY_AGG, {"psi": HARMONIC, "s": 0.02}, "DENS_HM"),
        ClassifierSpec(DENSITY_AGG, {"psi": GEOMETRIC, "s": 0.01}, "DENS_GM"),
        ClassifierSpec(GDE, {}, "GDE"),
        ClassifierSpec(PGA, {"p_alpha": 0.01, "k_nn": 1}, "PGA"),
        ClassifierSpec(OCSVM, {"kernel": LINEAR, "nu": 0.05}, "OCSVM_LIN"),
        ClassifierSpec(OCSVM, {"kernel": POLYNOMIAL, "nu": 0.05, "degree": 2}, "OCSVM_POLY"),
    ]


__all__ = [
    "ALGORITHMS", "DENSITY_AGG", "GDE", "OCSVM", "PGA", "GEOMETRIC", "HARMONIC",
    "LINEAR", "POLYNOMIAL", "ClassifierSpec", "TrainedClassifier", "PGAModel",
    "GDEModel", "DensityAggModel", "OCSVMModel", "train", "score", "train_pga",
    "train_gde", "train_density_agg", "train_ocsvm", "solve_oc_dual",
    "default_members", "dumps", "loads", "save", "load",
]
