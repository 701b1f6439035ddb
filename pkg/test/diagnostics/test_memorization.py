import logging
import statistics

import numpy as np
import pytest

from acdckit.acdc import OptimizerState, TrainConfig, acdc_train, build_schedule
from acdckit.data import Dataset, gaussian_blobs
from acdckit.diagnostics import CorruptionRecord, MemorizationReport, MissingSnapshotError, corrupt_labels, \
    memorization_track
from acdckit.numeric import SeededRng
from acdckit.objective import Mlp
from acdckit.sparsity import GlobalTopK


@pytest.mark.unittest
class TestDiagnosticsMemorization:
    def test_corrupt_labels(self):
        data = gaussian_blobs(3, 4, 200, 0.5, SeededRng(0))
        corrupted, record = corrupt_labels(data, 10, 4, SeededRng(1))
        assert len(record) == 10
        assert list(record.indices) == sorted(set(record.indices))
        assert record.seed == 1
        assert corrupted.classes == 4
        assert np.array_equal(corrupted.X, data.X)
        changed = np.flatnonzero(corrupted.y != data.y).tolist()
        assert changed == list(record.indices)
        assert corrupted.y[list(record.indices)].tolist() == list(record.replacement)
        assert data.y[list(record.indices)].tolist() == list(record.original)

        again, again_record = corrupt_labels(data, 10, 4, SeededRng(1))
        assert again_record == record
        assert np.array_equal(again.y, corrupted.y)

    def test_corrupt_two_classes(self):
        data = Dataset(np.zeros((6, 1)), [0, 1, 0, 1, 0, 1], 2)
        corrupted, record = corrupt_labels(data, 6, 2, SeededRng(3))
        assert corrupted.y.tolist() == [1, 0, 1, 0, 1, 0]
        assert record.indices == (0, 1, 2, 3, 4, 5)

    def test_corrupt_edge(self):
        data = Dataset(np.zeros((4, 1)), [0, 1, 2, 0], 3, label_names=['a', 'b', 'c'])
        corrupted, record = corrupt_labels(data, 0, 3, SeededRng(0))
        assert len(record) == 0
        assert corrupted == data
        assert corrupted.label_names == ('a', 'b', 'c')

        widened, _ = corrupt_labels(data, 2, 5, SeededRng(0))
        assert widened.classes == 5
        assert widened.label_names is None

        with pytest.raises(ValueError):
            corrupt_labels(data, 5, 3, SeededRng(0))
        with pytest.raises(ValueError):
            corrupt_labels(data, -1, 3, SeededRng(0))
        with pytest.raises(ValueError):
            corrupt_labels(data, 1, 1, SeededRng(0))
        with pytest.raises(ValueError):
            corrupt_labels(data, 1, 2, SeededRng(0))

    def test_record(self):
        record = CorruptionRecord((1, 4), (0, 2), (1, 0), seed=7)
        assert CorruptionRecord.from_json(record.to_json()) == record
        with pytest.raises(ValueError):
            CorruptionRecord((1,), (0, 2), (1, 0))
        with pytest.raises(ValueError):
            CorruptionRecord((1,), (2,), (2,))

    def test_track(self):
        record = CorruptionRecord((1, 4), (0, 2), (1, 0))
        report = memorization_track([[0, 2], [1, 2]], record)
        assert report == MemorizationReport((0, 1), (0.0, 0.5), (1.0, 0.5))
        assert report.to_json() == {'epochs': [0, 1], 'acc_corrupted': [0.0, 0.5], 'acc_true': [1.0, 0.5]}

        by_epoch = memorization_track({7: [1, 0], 3: [0, 2]}, record)
        assert by_epoch.epochs == (3, 7)
        assert by_epoch.acc_corrupted == (0.0, 1.0)
        assert by_epoch.acc_true == (1.0, 0.0)

        empty = memorization_track(np.zeros((2, 0), dtype=int), CorruptionRecord((), (), ()))
        assert empty.rows() == [{'epoch': 0, 'acc_corrupted': 0.0, 'acc_true': 0.0},
                                {'epoch': 1, 'acc_corrupted': 0.0, 'acc_true': 0.0}]

    def test_track_missing(self):
        record = CorruptionRecord((1, 4), (0, 2), (1, 0))
        with pytest.raises(MissingSnapshotError):
            memorization_track(None, record)
        with pytest.raises(MissingSnapshotError):
            memorization_track([], record)
        with pytest.raises(MissingSnapshotError):
            memorization_track([[0, 1, 2]], record)
        assert issubclass(MissingSnapshotError, ValueError)

    @pytest.mark.timeout(600)
    def test_sparse_memorization_trend(self, caplog):
        gaps = []
        schedule = build_schedule(60, 6, 5, 5, 8, 10, absorb_residual=True)
        final_start, final_stop = schedule.ranges('compressed')[-1]
        for seed in range(3):
            data = gaussian_blobs(20, 5, 2000, 1.0, SeededRng(seed))
            corrupted, record = corrupt_labels(data, 100, 5, SeededRng(seed).spawn(1))
            result = acdc_train(Mlp([20, 64, 5]), corrupted, schedule, OptimizerState.default(60, batch_size=128),
                                GlobalTopK(fraction=0.05), SeededRng(seed).spawn(2),
                                TrainConfig(128, select_best=False, track_indices=record.indices))
            report = memorization_track(result.tracked_predictions, record)
            assert report.epochs == tuple(range(60))
            final = [row for row in report.rows() if final_start <= row['epoch'] < final_stop]
            assert len(final) == final_stop - final_start
            for row in final:
                assert 0.0 <= row['acc_corrupted'] + row['acc_true'] <= 1.0
            gaps.append(statistics.mean(row['acc_true'] - row['acc_corrupted'] for row in final))

        with caplog.at_level(logging.INFO):
            logging.getLogger(__name__).info('Final compressed phase, true minus corrupted accuracy: %s, median %.4f.',
                                             gaps, statistics.median(gaps))
        assert 'median' in caplog.text
