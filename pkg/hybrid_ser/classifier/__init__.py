"""Emotion classifier on top of feature-map embeddings.

Provides the pooling embedder and EMB2 import/export, the dense network
with Adam training, evaluation reports and model checkpoints.
"""

from hybrid_ser.classifier.embedding import (
    EMBEDDING_DIM,
    embed_maps,
    export_embeddings,
    import_embeddings,
    pool_embed,
)
from hybrid_ser.classifier.mlp import MlpModel, forward, gradient_check, predict
from hybrid_ser.classifier.metrics import (
    EvalReport,
    evaluate,
    format_confusion_table,
    write_report_csv,
    write_report_json,
)
from hybrid_ser.classifier.training import TrainConfig, train
from hybrid_ser.classifier.checkpoint import load_model, save_model

__all__ = [
    "EMBEDDING_DIM",
    "embed_maps",
    "export_embeddings",
    "import_embeddings",
    "pool_embed",
    "MlpModel",
    "forward",
    "gradient_check",
    "predict",
    "EvalReport",
    "evaluate",
    "format_confusion_table",
    "write_report_csv",
    "write_report_json",
    "TrainConfig",
    "train",
    "load_model",
    "save_model",
]
