import logging
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from engine.network import Model, predict

from .exceptions import UnknownMethodError
from .interfaces import AttributionMethod
from .strategies import (
    GradCamMethod,
    GradientInputMethod,
    IntegratedGradientsMethod,
    SaliencyMethod,
    SmoothGradMethod,
)
from .types import AttributionConfig, ExplanationMap, Method

logger = logging.getLogger(__name__)

METHODS: Dict[str, AttributionMethod] = {
    m.name: m for m in (SaliencyMethod(), GradientInputMethod(), IntegratedGradientsMethod(),
                        SmoothGradMethod(), GradCamMethod())
}
DEFAULT_CONFIG = AttributionConfig()


def get_method(method: Union[str, Method, AttributionMethod]) -> AttributionMethod:
    if isinstance(method, AttributionMethod):
        return method
    key = method.value if isinstance(method, Method) else str(method).upper()
    try:
        return METHODS[key]
    except KeyError:
        raise UnknownMethodError(f"Unknown attribution method {method!r}; known: {sorted(METHODS)}") from None


def explain(method, model: Model, x: np.ndarray, class_index: Optional[int] = None,
            cfg: Optional[AttributionConfig] = None, sample_id: str = "") -> ExplanationMap:
    """Explain one sample; the class defaults to the model's prediction."""
    strategy = get_method(method)
    cfg = cfg or DEFAULT_CONFIG
    x = model.check_batch(np.asarray(x, dtype=np.float64)[None])[0]
    predicted = int(predict(model, x[None])[0])
    target = predicted if class_index is None else int(class_index)
    values, raw = strategy.attribute(model, x, target, cfg, sample_id)
    return ExplanationMap(values=values, method=strategy.name, model_id=model.model_id, sample_id=sample_id,
                          predicted_class=predicted, class_index=target, raw=raw)


def explain_batch(method, model: Model, X: np.ndarray, sample_ids: Sequence[str],
                  cfg: Optional[AttributionConfig] = None) -> List[ExplanationMap]:
    """Explain every row of ``X`` for its predicted class."""
    strategy = get_method(method)
    cfg = cfg or DEFAULT_CONFIG
    X = model.check_batch(X)
    predicted = predict(model, X) if len(X) else np.zeros(0, dtype=np.int64)
    results = strategy.attribute_batch(model, X, predicted, cfg, list(sample_ids))
    logger.debug("Explained %d samples with %s under %s", len(X), strategy.name, model.model_id)
    return [
        ExplanationMap(values=values, method=strategy.name, model_id=model.model_id, sample_id=sid,
                       predicted_class=int(k), class_index=int(k), raw=raw)
        for (values, raw), k, sid in zip(results, predicted, sample_ids)
    ]


def saliency(model: Model, x: np.ndarray, class_index: int, sample_id: str = "") -> ExplanationMap:
    return explain(Method.SM, model, x, class_index, sample_id=sample_id)


def gradient_input(model: Model, x: np.ndarray, class_index: int, sample_id: str = "") -> ExplanationMap:
    return explain(Method.GI, model, x, class_index, sample_id=sample_id)


def integrated_gradients(model: Model, x: np.ndarray, class_index: int, cfg: Optional[AttributionConfig] = None,
                         sample_id: str = "") -> ExplanationMap:
    return explain(Method.IG, model, x, class_index, cfg, sample_id)


def smoothgrad(model: Model, x: np.ndarray, class_index: int, cfg: Optional[AttributionConfig] = None,
               sample_id: str = "") -> ExplanationMap:
    return explain(Method.SG, model, x, class_index, cfg, sample_id)


def grad_cam(model: Model, x: np.ndarray, class_index: int, sample_id: str = "") -> ExplanationMap:
    return explain(Method.GC, model, x, class_index, sample_id=sample_id)
