"""Feedforward reconstruction detector.

An autoencoder trained on Normal-class windows only; the anomaly score of a
window is its squared reconstruction error, thresholded at a quantile of the
training scores.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
from torch import nn

from .data import FeatureEncoder, Window, flatten_matrix


@dataclass(frozen=True)
class FnnConfig:
    hidden: tuple[int, ...] = (32, 16, 32)
    epochs: int = 300
    lr: float = 1e-3
    weight_decay: float = 1e-4   # the reconstruction loss regularizer
    threshold_quantile: float = 0.99
    window_length: int = 10
    seed: int = 0


def _autoencoder(input_dim: int, hidden: tuple[int, ...]) -> nn.Sequential:
    dims = [input_dim, *hidden, input_dim]
    layers: list[nn.Module] = []
    for i in range(len(dims) - 1):
        layers.append(nn.Linear(dims[i], dims[i + 1]))
        if i < len(dims) - 2:
            layers.append(nn.ReLU())
    return nn.Sequential(*layers)


class FnnDetector:
    """Reconstruction autoencoder over flattened window features."""

    def __init__(self, config: FnnConfig = FnnConfig()):
        self.config = config
        self.encoder: FeatureEncoder | None = None
        self.model: nn.Sequential | None = None
        self.threshold: float | None = None

    def fit(self, train_windows: list[Window]) -> "FnnDetector":
        normals = [w for w in train_windows if not w.is_anomaly]
        if not normals:
            raise ValueError("training split contains no Normal windows")
        torch.manual_seed(self.config.seed)
        torch.set_num_threads(1)
        self.encoder = FeatureEncoder().fit(train_windows)
        x = torch.tensor(
            flatten_matrix(self.encoder, normals, self.config.window_length),
            dtype=torch.float32,
        )
        self.model = _autoencoder(x.shape[1], self.config.hidden)
        optimizer = torch.optim.Adam(self.model.parameters(), lr=self.config.lr,
                                     weight_decay=self.config.weight_decay)
        loss_fn = nn.MSELoss()
        self.model.train()
        for _ in range(self.config.epochs):
            optimizer.zero_grad()
            loss = loss_fn(self.model(x), x)
            loss.backward()
            optimizer.step()
        self.model.eval()
        train_scores = self.scores(normals)
        self.threshold = float(np.quantile(train_scores,
                                           self.config.threshold_quantile))
        return self

    def scores(self, windows: list[Window]) -> np.ndarray:
        """Squared reconstruction error per window."""
        assert self.model is not None and self.encoder is not None
        x = torch.tensor(
            flatten_matrix(self.encoder, windows, self.config.window_length),
            dtype=torch.float32,
        )
        with torch.no_grad():
            recon = self.model(x)
        return ((recon - x) ** 2).sum(dim=1).numpy()

    def predict(self, windows: list[Window]) -> np.ndarray:
        """True where the window scores above the Normal-traffic threshold."""
        assert self.threshold is not None, "fit() first"
        return self.scores(windows) > self.threshold

    def weight_norm(self) -> float:
        assert self.model is not None
        with torch.no_grad():
            total = sum((p ** 2).sum().item() for p in self.model.parameters()
                        if p.dim() > 1)
        return total ** 0.5
