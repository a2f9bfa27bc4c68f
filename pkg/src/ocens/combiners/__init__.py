from .esbe import ESBEModel, select_dominant, train_esbe
from .fixed import (
    AVERAGE,
    EXCLUSIVE,
    MAJORITY,
    MAX,
    MEAN_VOTE,
    PRODUCT,
    RULES,
    WEIGHTED_MEAN_VOTE,
    WEIGHTED_RULES,
    WEIGHTED_VOTE_PRODUCT,
    FixedRuleEnsemble,
    MemberOutputs,
    combine_batch,
    combine_fixed,
)
from .tupso import (
    META_FEATURES,
    TupsoModel,
    build_meta_dataset,
    default_meta_spec,
    extract_meta_features,
    inner_fold_outputs,
    train_tupso,
    tupso_score,
)
