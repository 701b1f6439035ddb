"""
Overview:
    Phase schedules of alternating compressed/decompressed training.

    A schedule starts with a dense warm-up, then alternates compressed and decompressed phases, \
    widens the last decompressed phase and ends with a compressed fine-tuning phase.
"""
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, List, Mapping, Optional, Tuple

from hbutils.model import get_repr_info, int_enum_loads

__all__ = [
    'ScheduleError',
    'PhaseKind', 'Phase', 'PhaseSchedule',
    'build_schedule',
]


class ScheduleError(ValueError):
    """
    Overview:
        Raised when phase lengths do not tile the epoch budget. \
        ``residual`` is the count of epochs left over by the closest fitting layout.
    """

    def __init__(self, message: str, residual: Optional[int] = None):
        ValueError.__init__(self, message)
        self.residual = residual


@int_enum_loads(name_preprocess=str.upper)
class PhaseKind(IntEnum):
    COMPRESSED = 1
    DECOMPRESSED = 2

    @property
    def code(self) -> str:
        return self.name[0]


@dataclass(frozen=True)
class Phase:
    """
    Overview:
        Epoch range ``[start, stop)`` of one kind.
    """
    kind: PhaseKind
    start: int
    stop: int

    def __post_init__(self):
        if not 0 <= self.start < self.stop:
            raise ScheduleError(f'Non-empty phase range expected but [{self.start!r}, {self.stop!r}) found.')

    @property
    def length(self) -> int:
        return self.stop - self.start

    @property
    def compressed(self) -> bool:
        return self.kind == PhaseKind.COMPRESSED

    def __contains__(self, epoch: int) -> bool:
        return self.start <= epoch < self.stop

    def to_json(self) -> dict:
        return {'kind': self.kind.name.lower(), 'start': self.start, 'stop': self.stop}

    def __str__(self):
        return f'{self.kind.code}[{self.start}, {self.stop})'


class PhaseSchedule:
    """
    Overview:
        Validated phase layout over ``[0, total_epochs)``.

    Examples::
        >>> from acdckit.acdc import build_schedule
        >>> s = build_schedule(20, 4, 3, 3, 4, 3)
        >>> [str(p) for p in s]
        ['D[0, 4)', 'C[4, 7)', 'D[7, 10)', 'C[10, 13)', 'D[13, 17)', 'C[17, 20)']
        >>> s.kind_at(11).name
        'COMPRESSED'
    """

    def __init__(self, total_epochs: int, warmup: int, compressed: int, decompressed: int,
                 final_decompressed: int, finetune: int, phases: List[Phase]):
        self.__total_epochs = total_epochs
        self.__warmup = warmup
        self.__compressed = compressed
        self.__decompressed = decompressed
        self.__final_decompressed = final_decompressed
        self.__finetune = finetune
        self.__phases = tuple(phases)
        self._check()

    def _check(self):
        if not self.__phases:
            raise ScheduleError('At least one phase expected but none found.')
        position = 0
        for i, phase in enumerate(self.__phases):
            if phase.start != position:
                raise ScheduleError(f'Phase starting at {position!r} expected but {phase} found.')
            if i > 0 and phase.kind == self.__phases[i - 1].kind:
                raise ScheduleError(f'Alternating phases expected but {self.__phases[i - 1]} and {phase} found.')
            position = phase.stop
        if position != self.__total_epochs:
            raise ScheduleError(f'Phases covering {self.__total_epochs!r} epochs expected but {position!r} found.',
                                residual=self.__total_epochs - position)
        if self.__phases[0].kind != PhaseKind.DECOMPRESSED or self.__phases[0].length != self.__warmup:
            raise ScheduleError(f'Dense warm-up of {self.__warmup!r} epochs expected but {self.__phases[0]} found.')
        if self.__phases[-1].kind != PhaseKind.COMPRESSED or self.__phases[-1].length != self.__finetune:
            raise ScheduleError(f'Compressed fine-tuning of {self.__finetune!r} epochs expected '
                                f'but {self.__phases[-1]} found.')

    @property
    def total_epochs(self) -> int:
        return self.__total_epochs

    @property
    def warmup(self) -> int:
        return self.__warmup

    @property
    def compressed(self) -> int:
        return self.__compressed

    @property
    def decompressed(self) -> int:
        return self.__decompressed

    @property
    def final_decompressed(self) -> int:
        return self.__final_decompressed

    @property
    def finetune(self) -> int:
        return self.__finetune

    @property
    def phases(self) -> Tuple[Phase, ...]:
        return self.__phases

    @property
    def cycles(self) -> int:
        """
        Count of compressed phases before the fine-tuning phase.
        """
        return sum(1 for p in self.__phases[:-1] if p.compressed)

    def __iter__(self) -> Iterator[Phase]:
        return iter(self.__phases)

    def __len__(self):
        return len(self.__phases)

    def __getitem__(self, index: int) -> Phase:
        return self.__phases[index]

    def phase_at(self, epoch: int) -> Phase:
        if not 0 <= epoch < self.__total_epochs:
            raise IndexError(f'Epoch in [0, {self.__total_epochs!r}) expected but {epoch!r} found.')
        for phase in self.__phases:
            if epoch in phase:
                return phase
        raise AssertionError(f'Epoch {epoch!r} outside of all phases.')  # pragma: no cover

    def kind_at(self, epoch: int) -> PhaseKind:
        return self.phase_at(epoch).kind

    def kinds(self) -> List[PhaseKind]:
        """
        Overview:
            Phase kind of every epoch.
        """
        return [phase.kind for phase in self.__phases for _ in range(phase.length)]

    def ranges(self, kind) -> List[Tuple[int, int]]:
        kind = PhaseKind.loads(kind)
        return [(p.start, p.stop) for p in self.__phases if p.kind == kind]

    def compressed_epochs(self) -> int:
        return sum(p.length for p in self.__phases if p.compressed)

    def to_json(self) -> dict:
        return {
            'total_epochs': self.__total_epochs,
            'warmup': self.__warmup,
            'compressed': self.__compressed,
            'decompressed': self.__decompressed,
            'final_decompressed': self.__final_decompressed,
            'finetune': self.__finetune,
            'phases': [p.to_json() for p in self.__phases],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> 'PhaseSchedule':
        return cls(
            data['total_epochs'], data['warmup'], data['compressed'], data['decompressed'],
            data['final_decompressed'], data['finetune'],
            [Phase(PhaseKind.loads(p['kind']), int(p['start']), int(p['stop'])) for p in data['phases']],
        )

    def __eq__(self, other):
        return isinstance(other, PhaseSchedule) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(self.__phases)

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('total', lambda: self.__total_epochs),
                ('phases', lambda: ' '.join(str(p) for p in self.__phases)),
            ]
        )


def _check_count(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ScheduleError(f'Non-negative integer {name} expected but {value!r} found.')
    return value


def build_schedule(total: int, warmup: int, compressed: int, decompressed: int,
                   final_decompressed: int, finetune: int, absorb_residual: bool = False) -> PhaseSchedule:
    """
    Overview:
        Build the phase layout ``D(warmup)``, then ``n`` times ``C(compressed)`` each followed by \
        ``D(decompressed)`` where the last of these is widened to ``D(final_decompressed)``, \
        then ``C(finetune)``. The cycle count ``n`` is derived from ``total``, when the remaining epochs \
        are exactly ``warmup + finetune`` there is no alternation at all.

    :param total: Total epoch count.
    :param warmup: Length of the dense warm-up, at least 1.
    :param compressed: Length of every alternating compressed phase.
    :param decompressed: Length of every alternating decompressed phase but the last one.
    :param final_decompressed: Length of the last decompressed phase.
    :param finetune: Length of the final compressed phase, at least 1.
    :param absorb_residual: Widen the last decompressed phase by the epochs left over \
        instead of raising :class:`ScheduleError`.
    :return: Phase schedule.
    :raises ScheduleError: When the lengths do not tile ``total``, ``residual`` holds the left-over epochs.

    Examples::
        >>> from acdckit.acdc import build_schedule
        >>> s = build_schedule(100, 10, 5, 5, 10, 15)
        >>> s.ranges('compressed')
        [(10, 15), (20, 25), (30, 35), (40, 45), (50, 55), (60, 65), (70, 75), (85, 100)]
        >>> build_schedule(20, 5, 15, 0, 0, 15).ranges('compressed')
        [(5, 20)]
    """
    total = _check_count(total, 'total epochs')
    warmup = _check_count(warmup, 'warm-up length')
    compressed = _check_count(compressed, 'compressed length')
    decompressed = _check_count(decompressed, 'decompressed length')
    final_decompressed = _check_count(final_decompressed, 'final decompressed length')
    finetune = _check_count(finetune, 'fine-tuning length')
    if warmup < 1 or finetune < 1:
        raise ScheduleError(f'Positive warm-up and fine-tuning lengths expected '
                            f'but {(warmup, finetune)!r} found.')

    remaining = total - warmup - finetune
    if remaining < 0:
        raise ScheduleError(f'Warm-up and fine-tuning within {total!r} epochs expected '
                            f'but {warmup + finetune!r} found.', residual=remaining)

    residual = 0
    if remaining == 0:
        cycles = 0
    else:
        period = compressed + decompressed
        if compressed < 1 or final_decompressed < 1:
            raise ScheduleError(f'Positive compressed and final decompressed lengths expected for {remaining!r} '
                                f'alternating epochs but {(compressed, final_decompressed)!r} found.',
                                residual=remaining)
        base = remaining - final_decompressed + decompressed
        cycles, residual = divmod(base, period) if base >= 0 else (0, base)
        if cycles < 1:
            raise ScheduleError(f'At least one alternation within {remaining!r} epochs expected but '
                                f'{compressed!r} + {final_decompressed!r} epochs found.', residual=remaining)
        if cycles >= 2 and decompressed < 1:
            raise ScheduleError(f'Positive decompressed length expected for {cycles!r} alternations '
                                f'but {decompressed!r} found.', residual=residual)
        if residual:
            if not absorb_residual:
                raise ScheduleError(f'Phase lengths tiling {total!r} epochs expected but {residual!r} epochs '
                                    f'left over after {cycles!r} alternations.', residual=residual)

    phases = [Phase(PhaseKind.DECOMPRESSED, 0, warmup)]
    position = warmup
    for i in range(cycles):
        phases.append(Phase(PhaseKind.COMPRESSED, position, position + compressed))
        position += compressed
        length = final_decompressed + residual if i == cycles - 1 else decompressed
        phases.append(Phase(PhaseKind.DECOMPRESSED, position, position + length))
        position += length
    phases.append(Phase(PhaseKind.COMPRESSED, position, position + finetune))

    return PhaseSchedule(total, warmup, compressed, decompressed, final_decompressed, finetune, phases)
