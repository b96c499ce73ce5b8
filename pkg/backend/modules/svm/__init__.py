from .classifier import (
    SvmModel,
    SvmTrainConfig,
    svm_decision,
    svm_objective,
    svm_predict,
    svm_predict_many,
    svm_train,
)

__all__ = [
    'SvmModel', 'SvmTrainConfig', 'svm_decision', 'svm_objective',
    'svm_predict', 'svm_predict_many', 'svm_train',
]
