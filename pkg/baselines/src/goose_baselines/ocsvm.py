"""One-class SVM detector: an RBF boundary around Normal window behavior."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.svm import OneClassSVM

from .data import FeatureEncoder, Window, flatten_matrix


@dataclass(frozen=True)
class OcsvmConfig:
    nu: float = 0.05
    # unit RBF width over the scaled transition features; 1/d collapses the
    # kernel to near-constant across the tight Normal cluster
    gamma: float | str = 1.0
    window_length: int = 10
    seed: int = 0  # kept for interface parity; the solver is deterministic


class OcsvmDetector:
    """Normal-only training; negative decision values flag anomalies."""

    def __init__(self, config: OcsvmConfig = OcsvmConfig()):
        if isinstance(config.nu, (int, float)) and not 0 < config.nu <= 1:
            raise ValueError("nu must lie in (0, 1]")
        self.config = config
        self.encoder: FeatureEncoder | None = None
        self.model: OneClassSVM | None = None

    def fit(self, train_windows: list[Window]) -> "OcsvmDetector":
        normals = [w for w in train_windows if not w.is_anomaly]
        if not normals:
            raise ValueError("training split contains no Normal windows")
        self.encoder = FeatureEncoder().fit(train_windows)
        x = flatten_matrix(self.encoder, normals, self.config.window_length)
        self.model = OneClassSVM(kernel="rbf", nu=self.config.nu,
                                 gamma=self.config.gamma)
        self.model.fit(x)
        return self

    def decision_values(self, windows: list[Window]) -> np.ndarray:
        assert self.model is not None and self.encoder is not None, "fit() first"
        x = flatten_matrix(self.encoder, windows, self.config.window_length)
        return self.model.decision_function(x)

    def predict(self, windows: list[Window]) -> np.ndarray:
        """True where the decision function is negative (outside the boundary)."""
        return self.decision_values(windows) < 0
