import numpy as np
import pytest

from acdckit.data import Dataset, gaussian_blobs
from acdckit.diagnostics import AgreementReport, BoundModel, agreement
from acdckit.numeric import SeededRng
from acdckit.objective import Mlp


class _Fixed:
    def __init__(self, p):
        self.p = np.asarray(p, dtype=np.float64)

    def predict_proba(self, X):
        return self.p


@pytest.mark.unittest
class TestDiagnosticsAgreement:
    def test_identical(self):
        model = Mlp([4, 8, 3])
        data = gaussian_blobs(4, 3, 50, 0.3, SeededRng(0))
        bound = BoundModel(model, model.init_params(SeededRng(1)))
        report = agreement(bound, bound, data)
        assert report.top1_agreement == 1.0
        assert report.samples == 50
        p = bound.predict_proba(data.X)
        entropy = float(np.mean(-np.sum(p * np.log(p), axis=1)))
        assert report.mean_cross_entropy == pytest.approx(entropy)

    def test_fixed(self):
        data = Dataset(np.zeros((2, 1)), [0, 1], 2)
        a = _Fixed([[0.9, 0.1], [0.2, 0.8]])
        b = _Fixed([[0.6, 0.4], [0.7, 0.3]])
        report = agreement(a, b, data)
        assert report.top1_agreement == 0.5
        expected = -(0.9 * np.log(0.6) + 0.1 * np.log(0.4) + 0.2 * np.log(0.7) + 0.8 * np.log(0.3)) / 2
        assert report.mean_cross_entropy == pytest.approx(expected)
        assert report.to_json() == {
            'top1_agreement': 0.5, 'mean_cross_entropy': report.mean_cross_entropy, 'samples': 2,
        }

    def test_ties_and_floor(self):
        data = Dataset(np.zeros((1, 1)), [0], 2)
        report = agreement(_Fixed([[0.5, 0.5]]), _Fixed([[1.0, 0.0]]), data)
        assert report.top1_agreement == 1.0
        assert report.mean_cross_entropy == pytest.approx(-0.5 * np.log(1e-12))
        assert np.isfinite(report.mean_cross_entropy)

    def test_invalid(self):
        model = Mlp([2, 3])
        bound = BoundModel(model, model.template())
        with pytest.raises(ValueError):
            agreement(bound, bound, Dataset(np.zeros((0, 2)), np.zeros(0, dtype=int), 3))
        with pytest.raises(ValueError):
            agreement(bound, _Fixed([[0.5, 0.5]]), Dataset(np.zeros((1, 2)), [0], 3))
        with pytest.raises(ValueError):
            BoundModel(model, Mlp([2, 4]).template())

    def test_report(self):
        assert AgreementReport(1.0, 0.0, 3) == AgreementReport(1.0, 0.0, 3)
        assert repr(BoundModel(Mlp([2, 3]), Mlp([2, 3]).template())) == '<BoundModel model: <Mlp widths: [2, 3]>>'
