"""Finite-difference verification of the hand-written backward pass."""

from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from config import settings

from .network import cnn_backward, cnn_forward, cnn_loss, init_model

TINY_INPUT = 8
TINY_CHANNELS = (2,)
TINY_HIDDEN = 4
TINY_BATCH = 2


@dataclass(frozen=True)
class GradcheckResult:
    max_relative_error: float
    worst_parameter: str
    worst_index: Tuple[int, ...]
    checked: int
    tolerance: float = settings.GRADCHECK_TOLERANCE

    @property
    def passed(self) -> bool:
        return self.max_relative_error < self.tolerance


def relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(abs(analytic) + abs(numeric), 1e-6)


def run_gradcheck(seed: int = settings.GRADCHECK_SEED,
                  backward: Callable = cnn_backward,
                  step: float = settings.GRADCHECK_STEP) -> GradcheckResult:
    """
    Compare analytic gradients against central differences on a tiny network

    Every parameter of an 8x8-input network with one 2-channel conv stage
    and a 4-unit hidden layer is perturbed by +/- step.

    Args:
        seed: Seeds the weights, inputs and targets
        backward: Gradient function under test (cnn_backward by default)
        step: Finite-difference step

    Returns:
        GradcheckResult with the worst coordinate found
    """
    model = init_model(TINY_INPUT, TINY_CHANNELS, TINY_HIDDEN, seed)
    rng = np.random.Generator(np.random.PCG64(seed + 1))
    x = rng.uniform(0.0, 1.0, size=(TINY_BATCH, TINY_INPUT, TINY_INPUT))
    target = rng.integers(0, 2, size=TINY_BATCH)
    # small non-zero biases keep every unit away from exact ties
    for _, param in model.parameters():
        if param.ndim == 1:
            param += rng.uniform(-0.1, 0.1, size=param.shape)

    _, cache = cnn_forward(model, x)
    grads = backward(model, cache, target)

    worst = (0.0, '', ())
    checked = 0
    for name, param in model.parameters():
        for index in np.ndindex(param.shape):
            original = param[index]
            param[index] = original + step
            plus = cnn_loss(model, x, target)
            param[index] = original - step
            minus = cnn_loss(model, x, target)
            param[index] = original

            numeric = (plus - minus) / (2.0 * step)
            error = relative_error(float(grads[name][index]), numeric)
            checked += 1
            if error > worst[0]:
                worst = (error, name, tuple(int(i) for i in index))

    return GradcheckResult(worst[0], worst[1], worst[2], checked)
