"""
Overview:
    Layer manifests, the convolutional and linear layers of an architecture with their dimensions.
"""
import json
import os
from dataclasses import dataclass
from typing import List, Mapping, Sequence, Tuple, Union

from hbutils.model import get_repr_info

__all__ = [
    'ConvLayer', 'LinearLayer', 'LayerManifest',
    'BUILTIN_MANIFESTS', 'load_builtin_manifest', 'manifest_for_mlp',
]

_MANIFEST_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'manifests')
BUILTIN_MANIFESTS = ('mobilenet_v1', 'resnet50')


def _positive(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ValueError(f'Positive integer {name} expected but {value!r} found.')
    return value


@dataclass(frozen=True)
class ConvLayer:
    """
    Overview:
        2d convolution, ``kernel`` and ``output`` are ``(height, width)`` pairs.
    """
    name: str
    kernel: Tuple[int, int]
    in_channels: int
    out_channels: int
    output: Tuple[int, int]
    groups: int = 1
    prunable: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'kernel', tuple(self.kernel))
        object.__setattr__(self, 'output', tuple(self.output))
        if len(self.kernel) != 2 or len(self.output) != 2:
            raise ValueError(f'Pairs of kernel and output sizes expected but {(self.kernel, self.output)!r} found.')
        for value, name in [(self.kernel[0], 'kernel height'), (self.kernel[1], 'kernel width'),
                            (self.in_channels, 'input channels'), (self.out_channels, 'output channels'),
                            (self.output[0], 'output height'), (self.output[1], 'output width'),
                            (self.groups, 'groups')]:
            _positive(value, f'{name} of layer {self.name!r}')
        if self.in_channels % self.groups or self.out_channels % self.groups:
            raise ValueError(f'Groups dividing channels {(self.in_channels, self.out_channels)!r} expected '
                             f'but {self.groups!r} found in layer {self.name!r}.')

    @property
    def kind(self) -> str:
        return 'conv2d'

    @property
    def weights(self) -> int:
        return self.kernel[0] * self.kernel[1] * (self.in_channels // self.groups) * self.out_channels

    @property
    def macs(self) -> int:
        return self.weights * self.output[0] * self.output[1]

    def to_json(self) -> dict:
        return {
            'name': self.name, 'kind': self.kind, 'kernel': list(self.kernel),
            'in_channels': self.in_channels, 'out_channels': self.out_channels,
            'output': list(self.output), 'groups': self.groups, 'prunable': self.prunable,
        }


@dataclass(frozen=True)
class LinearLayer:
    name: str
    in_features: int
    out_features: int
    prunable: bool = True

    def __post_init__(self):
        _positive(self.in_features, f'input features of layer {self.name!r}')
        _positive(self.out_features, f'output features of layer {self.name!r}')

    @property
    def kind(self) -> str:
        return 'linear'

    @property
    def weights(self) -> int:
        return self.in_features * self.out_features

    @property
    def macs(self) -> int:
        return self.weights

    def to_json(self) -> dict:
        return {
            'name': self.name, 'kind': self.kind,
            'in_features': self.in_features, 'out_features': self.out_features, 'prunable': self.prunable,
        }


Layer = Union[ConvLayer, LinearLayer]


def _layer_from_json(data: Mapping) -> Layer:
    kind = data.get('kind')
    if kind == 'conv2d':
        return ConvLayer(data['name'], tuple(data['kernel']), data['in_channels'], data['out_channels'],
                         tuple(data['output']), data.get('groups', 1), data.get('prunable', True))
    elif kind == 'linear':
        return LinearLayer(data['name'], data['in_features'], data['out_features'], data.get('prunable', True))
    else:
        raise ValueError(f'Layer kind conv2d or linear expected but {kind!r} found.')


class LayerManifest:
    """
    Overview:
        Ordered layers of an architecture. Normalization, pooling and activations are not listed.

    Examples::
        >>> from acdckit.flops import load_builtin_manifest
        >>> m = load_builtin_manifest('resnet50')
        >>> len(m), m.macs
        (54, 4089184256)
    """

    def __init__(self, name: str, layers: Sequence[Layer], assumptions: str = ''):
        layers = list(layers)
        names = [layer.name for layer in layers]
        if len(set(names)) != len(names):
            raise ValueError(f'Unique layer names expected but {sorted({n for n in names if names.count(n) > 1})!r} '
                             f'duplicated.')
        self.__name = name
        self.__layers = tuple(layers)
        self.__assumptions = assumptions

    @property
    def name(self) -> str:
        return self.__name

    @property
    def layers(self) -> Tuple[Layer, ...]:
        return self.__layers

    @property
    def names(self) -> List[str]:
        return [layer.name for layer in self.__layers]

    @property
    def assumptions(self) -> str:
        return self.__assumptions

    @property
    def macs(self) -> int:
        return sum(layer.macs for layer in self.__layers)

    def __len__(self):
        return len(self.__layers)

    def __iter__(self):
        return iter(self.__layers)

    def to_json(self) -> dict:
        return {
            'format_version': '1.0',
            'name': self.__name,
            'assumptions': self.__assumptions,
            'layers': [layer.to_json() for layer in self.__layers],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> 'LayerManifest':
        return cls(data.get('name', ''), [_layer_from_json(item) for item in data['layers']],
                   data.get('assumptions', ''))

    @classmethod
    def load(cls, path: str) -> 'LayerManifest':
        with open(path, 'r') as f:
            return cls.from_json(json.load(f))

    def save(self, path: str):
        with open(path, 'w') as f:
            json.dump(self.to_json(), f, indent=2)

    def __eq__(self, other):
        return isinstance(other, LayerManifest) and \
            (self.__name, self.__layers, self.__assumptions) == (other.__name, other.__layers, other.__assumptions)

    def __hash__(self):
        return hash((self.__name, self.__layers))

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('name', lambda: self.__name, lambda: bool(self.__name)),
                ('layers', lambda: len(self.__layers)),
                ('macs', lambda: self.macs),
            ]
        )


def load_builtin_manifest(name: str) -> LayerManifest:
    """
    Overview:
        Load one of the shipped manifests, ``resnet50`` or ``mobilenet_v1``.
    """
    if name not in BUILTIN_MANIFESTS:
        raise ValueError(f'Manifest name in {list(BUILTIN_MANIFESTS)!r} expected but {name!r} found.')
    return LayerManifest.load(os.path.join(_MANIFEST_DIR, f'{name}.json'))


def manifest_for_mlp(widths: Sequence[int], name: str = 'mlp') -> LayerManifest:
    """
    Overview:
        Manifest of a perceptron with layer ``widths``. Layers are named after the weight \
        segments of :class:`acdckit.objective.Mlp`, so its segment densities apply directly.

    Examples::
        >>> from acdckit.flops import manifest_for_mlp
        >>> manifest_for_mlp([20, 64, 5]).names
        ['layer0.weight', 'layer1.weight']
    """
    widths = [int(w) for w in widths]
    if len(widths) < 2:
        raise ValueError(f'At least 2 widths expected but {widths!r} found.')
    return LayerManifest(name, [
        LinearLayer(f'layer{i}.weight', n_in, n_out)
        for i, (n_in, n_out) in enumerate(zip(widths[:-1], widths[1:]))
    ], assumptions='Fully connected layers, biases and activations ignored.')
