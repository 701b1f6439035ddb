"""
Overview:
    Agreement between the predictions of two models, usually a dense model and its sparse counterpart.
"""
from dataclasses import dataclass

import numpy as np
from hbutils.model import get_repr_info

from ..data import Dataset
from ..numeric import ParamSet
from ..objective import Mlp

__all__ = [
    'PROBABILITY_FLOOR',
    'AgreementReport', 'BoundModel',
    'agreement',
]

PROBABILITY_FLOOR = 1e-12


@dataclass(frozen=True)
class AgreementReport:
    """
    Overview:
        ``top1_agreement`` is the fraction of samples with equal top predictions, ``mean_cross_entropy`` \
        is the mean cross-entropy of the second model's predictions against the first model's.
    """
    top1_agreement: float
    mean_cross_entropy: float
    samples: int

    def to_json(self) -> dict:
        return {
            'top1_agreement': self.top1_agreement,
            'mean_cross_entropy': self.mean_cross_entropy,
            'samples': self.samples,
        }


class BoundModel:
    """
    Overview:
        Model with fixed parameters, exposing ``predict_proba``.
    """

    def __init__(self, model: Mlp, params: ParamSet):
        if not params.same_layout(model.template()):
            raise ValueError(f'Parameters with layout of {model!r} expected but {params!r} found.')
        self.__model = model
        self.__params = params

    @property
    def model(self) -> Mlp:
        return self.__model

    @property
    def params(self) -> ParamSet:
        return self.__params

    def predict_proba(self, X) -> np.ndarray:
        return self.__model.predict_proba(self.__params, X)

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('model', lambda: self.__model),
            ]
        )


def agreement(model_a, model_b, data: Dataset) -> AgreementReport:
    """
    Overview:
        Compare the predictions of two models on ``data``. Top predictions break ties \
        towards the lowest class index, probabilities of ``model_b`` are floored at ``1e-12``.

    :param model_a: Reference model, anything with ``predict_proba(X)``.
    :param model_b: Compared model, with the same output classes.
    :param data: Evaluation data, not empty.
    :return: Agreement report.

    Examples::
        >>> import numpy as np
        >>> from acdckit.data import Dataset
        >>> from acdckit.diagnostics import BoundModel, agreement
        >>> from acdckit.objective import Mlp
        >>> model = Mlp([2, 3])
        >>> bound = BoundModel(model, model.template())
        >>> report = agreement(bound, bound, Dataset(np.ones((4, 2)), [0, 1, 2, 0], 3))
        >>> report.top1_agreement, round(report.mean_cross_entropy, 12) == round(float(np.log(3)), 12)
        (1.0, True)
    """
    if len(data) == 0:
        raise ValueError('Non-empty dataset expected but empty dataset found.')
    p_a = np.asarray(model_a.predict_proba(data.X), dtype=np.float64)
    p_b = np.asarray(model_b.predict_proba(data.X), dtype=np.float64)
    if p_a.shape != p_b.shape or p_a.shape[0] != len(data):
        raise ValueError(f'Predictions of equal shape over {len(data)!r} samples expected '
                         f'but {p_a.shape!r} and {p_b.shape!r} found.')

    top1 = float(np.mean(np.argmax(p_a, axis=1) == np.argmax(p_b, axis=1)))
    ce = -np.sum(p_a * np.log(np.maximum(p_b, PROBABILITY_FLOOR)), axis=1)
    return AgreementReport(top1, float(max(0.0, np.mean(ce))), len(data))
