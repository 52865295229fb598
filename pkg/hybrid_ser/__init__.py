"""hybrid-ser: harmonic/percussive Mel feature maps for speech emotion recognition."""

from hybrid_ser.audio_io import AudioBuffer, decode_wav, read_wav, resample
from hybrid_ser.featuremap import (
    EmotionLabel,
    FeatureMap,
    FeatureMapSpec,
    build_feature_map,
    extract_maps,
    load_maps,
    save_maps,
    subsample,
)
from hybrid_ser.hpss import HpssConfig, HpssPair, averaged_hp, decompose
from hybrid_ser.manifest import ManifestRow, parse_manifest
from hybrid_ser.pool import ExtractionPool, FileResult, run_extraction

__all__ = [
    "AudioBuffer",
    "EmotionLabel",
    "ExtractionPool",
    "FeatureMap",
    "FeatureMapSpec",
    "FileResult",
    "HpssConfig",
    "HpssPair",
    "ManifestRow",
    "averaged_hp",
    "build_feature_map",
    "decode_wav",
    "decompose",
    "extract_maps",
    "load_maps",
    "parse_manifest",
    "read_wav",
    "resample",
    "run_extraction",
    "save_maps",
    "subsample",
]
