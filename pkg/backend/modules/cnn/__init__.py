from .gradcheck import GradcheckResult, run_gradcheck
from .layers import (
    ConvLayer,
    FcLayer,
    conv2d_backward,
    conv2d_forward,
    cross_entropy,
    fc_backward,
    fc_forward,
    maxpool2x2,
    maxpool2x2_backward,
    relu,
    relu_backward,
    softmax,
)
from .network import (
    CnnModel,
    cnn_backward,
    cnn_drone_probability,
    cnn_forward,
    cnn_loss,
    cnn_predict,
    cnn_predict_many,
    init_model,
)
from .trainer import CnnTrainConfig, EpochLog, cnn_train

__all__ = [
    'ConvLayer', 'FcLayer', 'CnnModel', 'CnnTrainConfig', 'EpochLog', 'GradcheckResult',
    'conv2d_forward', 'conv2d_backward', 'maxpool2x2', 'maxpool2x2_backward',
    'relu', 'relu_backward', 'fc_forward', 'fc_backward', 'softmax', 'cross_entropy',
    'init_model', 'cnn_forward', 'cnn_backward', 'cnn_loss', 'cnn_predict',
    'cnn_predict_many', 'cnn_drone_probability', 'cnn_train', 'run_gradcheck',
]
