import pytest
from hbutils.testing import isolated_directory

from acdckit.flops import BUILTIN_MANIFESTS, ConvLayer, LayerManifest, LinearLayer, load_builtin_manifest, \
    manifest_for_mlp


@pytest.mark.unittest
class TestFlopsManifest:
    def test_conv_layer(self):
        layer = ConvLayer('c', [3, 3], 64, 128, [28, 28])
        assert layer.kind == 'conv2d'
        assert layer.kernel == (3, 3)
        assert layer.weights == 3 * 3 * 64 * 128
        assert layer.macs == layer.weights * 28 * 28

        depthwise = ConvLayer('dw', (3, 3), 32, 32, (112, 112), groups=32)
        assert depthwise.weights == 3 * 3 * 32
        assert depthwise.macs == 288 * 112 * 112

    def test_conv_layer_invalid(self):
        with pytest.raises(ValueError):
            ConvLayer('c', (3,), 3, 3, (4, 4))
        with pytest.raises(ValueError):
            ConvLayer('c', (3, 3), 0, 3, (4, 4))
        with pytest.raises(ValueError):
            ConvLayer('c', (3, 3), 3, 3, (4, 4), groups=2)
        with pytest.raises(ValueError):
            ConvLayer('c', (3, 3), 3, 3, (4, 4.5))

    def test_linear_layer(self):
        layer = LinearLayer('fc', 2048, 1000)
        assert layer.kind == 'linear'
        assert layer.macs == layer.weights == 2048000
        assert layer.to_json() == {
            'name': 'fc', 'kind': 'linear', 'in_features': 2048, 'out_features': 1000, 'prunable': True,
        }
        with pytest.raises(ValueError):
            LinearLayer('fc', True, 3)

    def test_manifest(self):
        m = LayerManifest('tiny', [ConvLayer('c', (1, 1), 2, 4, (3, 3)), LinearLayer('fc', 4, 2, prunable=False)])
        assert len(m) == 2
        assert m.names == ['c', 'fc']
        assert m.macs == 8 * 9 + 8
        assert [layer.name for layer in m] == ['c', 'fc']
        assert repr(m) == '<LayerManifest name: tiny, layers: 2, macs: 80>'
        assert repr(LayerManifest('', [])) == '<LayerManifest layers: 0, macs: 0>'
        assert LayerManifest.from_json(m.to_json()) == m
        assert hash(LayerManifest.from_json(m.to_json())) == hash(m)

        with pytest.raises(ValueError):
            LayerManifest('dup', [LinearLayer('fc', 4, 2), LinearLayer('fc', 2, 2)])
        with pytest.raises(ValueError):
            LayerManifest.from_json({'layers': [{'name': 'p', 'kind': 'pool'}]})

    def test_save_load(self):
        m = manifest_for_mlp([20, 64, 5])
        with isolated_directory():
            m.save('mlp.json')
            assert LayerManifest.load('mlp.json') == m

    def test_builtin(self):
        assert set(BUILTIN_MANIFESTS) == {'resnet50', 'mobilenet_v1'}
        resnet = load_builtin_manifest('resnet50')
        assert len(resnet) == 54
        assert resnet.macs == 4089184256
        assert resnet.names[0] == 'conv1'
        assert resnet.layers[-1].kind == 'linear'
        assert 'torchvision' in resnet.assumptions

        mobilenet = load_builtin_manifest('mobilenet_v1')
        assert mobilenet.layers[0].in_channels == 3
        assert any(isinstance(layer, ConvLayer) and layer.groups > 1 for layer in mobilenet)

        with pytest.raises(ValueError):
            load_builtin_manifest('vgg16')

    def test_mlp(self):
        m = manifest_for_mlp([20, 64, 5])
        assert m.name == 'mlp'
        assert m.names == ['layer0.weight', 'layer1.weight']
        assert m.macs == 20 * 64 + 64 * 5
        assert manifest_for_mlp([4, 3], name='logistic').name == 'logistic'
        with pytest.raises(ValueError):
            manifest_for_mlp([4])
