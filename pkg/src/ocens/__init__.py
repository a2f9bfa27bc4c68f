"""One-class classifier ensembles: base learners, fixed combining rules,
estimated-best selection and the meta-learning stacker."""

__version__ = "0.1.0"
