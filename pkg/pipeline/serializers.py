"""
Schema of the run configuration file.

Every section is optional and missing values take the defaults below: k=5,
IG and SmoothGrad with 60 samples, 15 % fidelity subsets, l1 stability radius
0.1 and a 3 % accuracy tolerance.
"""

from rest_framework import serializers

from attribution.types import AttributionConfig, Method
from degradation.types import LAYER_ORDERS, DegradationKind, DegradationSpec
from distances.types import KIND_NAMES
from engine.network import ARCHITECTURES
from engine.training import TrainConfig
from evaluation.types import CORRELATIONS, FidelityConfig, StabilityConfig
from utils.exceptions import ConfigError

DATASET_SOURCES = ("shapes", "idx")


class StrictSerializer(serializers.Serializer):
    """Rejects keys the schema does not know instead of silently dropping them."""

    def to_internal_value(self, data):
        if isinstance(data, dict):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError({key: ["Unknown field."] for key in unknown})
        return super().to_internal_value(data)


def _check(factory, attrs):
    """Let the domain dataclass enforce its own invariants."""
    try:
        factory(**attrs)
    except (ConfigError, TypeError, ValueError) as exc:
        raise serializers.ValidationError(str(exc)) from exc
    return attrs


class ArchitectureField(serializers.Field):
    default_error_messages = {
        "unknown": "Unknown architecture {value!r}; known: {known}.",
        "invalid": "Expected a preset name or a list of layer mappings with a 'type'.",
    }

    def to_internal_value(self, data):
        if isinstance(data, str):
            if data not in ARCHITECTURES:
                self.fail("unknown", value=data, known=sorted(ARCHITECTURES))
            return data
        if isinstance(data, list) and data and all(isinstance(d, dict) and isinstance(d.get("type"), str)
                                                   for d in data):
            return [dict(d) for d in data]
        self.fail("invalid")

    def to_representation(self, value):
        return value


class DatasetSpecSerializer(StrictSerializer):
    source = serializers.ChoiceField(choices=DATASET_SOURCES, default="shapes")
    n = serializers.IntegerField(min_value=2, default=1000)
    size = serializers.IntegerField(min_value=8, default=16)
    classes = serializers.IntegerField(min_value=2, max_value=8, default=4)
    noise_level = serializers.FloatField(min_value=0.0, max_value=0.59, default=0.35)
    images_path = serializers.CharField(required=False)
    labels_path = serializers.CharField(required=False)
    limit = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    test_fraction = serializers.FloatField(min_value=0.01, max_value=0.99, default=0.2)

    def validate(self, attrs):
        if attrs["source"] == "idx" and not (attrs.get("images_path") and attrs.get("labels_path")):
            raise serializers.ValidationError("An idx dataset needs both images_path and labels_path.")
        return attrs


class TrainingSerializer(StrictSerializer):
    epochs = serializers.IntegerField(min_value=1, default=TrainConfig.epochs)
    batch_size = serializers.IntegerField(min_value=1, default=TrainConfig.batch_size)
    learning_rate = serializers.FloatField(min_value=0.0, default=TrainConfig.learning_rate)
    momentum = serializers.FloatField(min_value=0.0, default=TrainConfig.momentum)

    def validate(self, attrs):
        return _check(TrainConfig, attrs)


class AttributionSerializer(StrictSerializer):
    ig_steps = serializers.IntegerField(min_value=2, default=AttributionConfig.ig_steps)
    ig_baseline = serializers.FloatField(default=0.0)
    sg_samples = serializers.IntegerField(min_value=1, default=AttributionConfig.sg_samples)
    sg_sigma = serializers.FloatField(default=AttributionConfig.sg_sigma)
    sg_abs = serializers.BooleanField(default=AttributionConfig.sg_abs)

    def validate(self, attrs):
        return _check(AttributionConfig, attrs)


class FidelitySerializer(StrictSerializer):
    subset_fraction = serializers.FloatField(default=FidelityConfig.subset_fraction)
    num_subsets = serializers.IntegerField(min_value=2, default=FidelityConfig.num_subsets)
    baseline = serializers.FloatField(default=FidelityConfig.baseline)
    correlation = serializers.ChoiceField(choices=CORRELATIONS, default=FidelityConfig.correlation)

    def validate(self, attrs):
        return _check(FidelityConfig, attrs)


class StabilitySerializer(StrictSerializer):
    radius = serializers.FloatField(min_value=0.0, default=StabilityConfig.radius)
    num_neighbors = serializers.IntegerField(min_value=1, default=StabilityConfig.num_neighbors)
    inner_distance = serializers.ChoiceField(choices=KIND_NAMES, default="spearman_abs")


class DegradationSerializer(StrictSerializer):
    kind = serializers.ChoiceField(choices=[k.value for k in DegradationKind])
    level = serializers.FloatField()
    noise_sigma = serializers.FloatField(default=0.5)
    free = serializers.BooleanField(default=False)
    layer_order = serializers.ChoiceField(choices=LAYER_ORDERS, default="output_first")

    def validate(self, attrs):
        return _check(DegradationSpec, attrs)


class SeedsSerializer(StrictSerializer):
    data = serializers.IntegerField(min_value=0, default=0)
    split = serializers.IntegerField(min_value=0, default=0)
    partition = serializers.IntegerField(min_value=0, default=0)
    attribution = serializers.IntegerField(min_value=0, default=0)
    metrics = serializers.IntegerField(min_value=0, default=0)
    degradation = serializers.IntegerField(min_value=0, default=0)


class RunConfigSerializer(StrictSerializer):
    SECTIONS = ("dataset", "training", "attribution", "fidelity", "stability", "seeds")

    output_dir = serializers.CharField(required=False, allow_null=True, default=None)
    dataset = DatasetSpecSerializer()
    architecture = ArchitectureField(default="mlp")
    k = serializers.IntegerField(min_value=2, default=5)
    training = TrainingSerializer()
    accuracy_tolerance = serializers.FloatField(min_value=0.0, max_value=1.0, default=0.03)
    strict_spread = serializers.BooleanField(default=False)
    method = serializers.ChoiceField(choices=[m.value for m in Method], default="SM")
    distance = serializers.ChoiceField(choices=KIND_NAMES, default="spearman_abs")
    attribution = AttributionSerializer()
    fidelity = FidelitySerializer()
    stability = StabilitySerializer()
    metric_samples = serializers.IntegerField(min_value=1, default=50)
    degradation = DegradationSerializer(required=False, allow_null=True, default=None)
    degradation_grid = DegradationSerializer(many=True, required=False, allow_null=True, default=None)
    seeds = SeedsSerializer()
    n_jobs = serializers.IntegerField(required=False, allow_null=True, default=None)

    def to_internal_value(self, data):
        if isinstance(data, dict):
            data = {**{name: {} for name in self.SECTIONS}, **data}
        return super().to_internal_value(data)

    def validate_n_jobs(self, value):
        if value == 0:
            raise serializers.ValidationError("n_jobs must be a positive worker count or negative (joblib style).")
        return value
