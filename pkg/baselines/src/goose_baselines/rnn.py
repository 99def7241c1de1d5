"""Recurrent (LSTM) sequence classifier.

Consumes windows as causal step sequences; the final hidden state feeds a
sigmoid head giving P(anomaly), thresholded at 0.5. Anomalies dominate the
corpus, so the loss reweights the Normal class (pos_weight_scale times the
inverse prevalence).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
from torch import nn

from .data import STEP_DIM, FeatureEncoder, Window, binary_labels


@dataclass(frozen=True)
class RnnConfig:
    hidden: int = 32
    epochs: int = 80
    lr: float = 1e-2
    batch_size: int = 64
    pos_weight_scale: float = 2.0
    seed: int = 0


class _LstmHead(nn.Module):
    def __init__(self, hidden: int):
        super().__init__()
        self.lstm = nn.LSTM(STEP_DIM, hidden, batch_first=True)
        self.head = nn.Linear(hidden, 1)

    def forward(self, x: torch.Tensor, lengths: torch.Tensor) -> torch.Tensor:
        out, _ = self.lstm(x)
        # final valid hidden state per sequence
        idx = (lengths - 1).view(-1, 1, 1).expand(-1, 1, out.shape[2])
        final = out.gather(1, idx).squeeze(1)
        return self.head(final).squeeze(1)


def _pad(encoder: FeatureEncoder, windows: list[Window]):
    lengths = torch.tensor([len(w) for w in windows], dtype=torch.long)
    max_len = int(lengths.max())
    batch = torch.zeros((len(windows), max_len, STEP_DIM), dtype=torch.float32)
    for i, w in enumerate(windows):
        enc = torch.tensor(encoder.sequence(w), dtype=torch.float32)
        batch[i, : enc.shape[0]] = enc
    return batch, lengths


class RnnDetector:
    """Supervised binary LSTM over window sequences (length 1 included)."""

    def __init__(self, config: RnnConfig = RnnConfig()):
        self.config = config
        self.encoder: FeatureEncoder | None = None
        self.model: _LstmHead | None = None

    def fit(self, train_windows: list[Window]) -> "RnnDetector":
        labels = binary_labels(train_windows)
        if labels.min() == labels.max():
            raise ValueError("training split needs both Normal and anomaly windows")
        torch.manual_seed(self.config.seed)
        torch.set_num_threads(1)
        self.encoder = FeatureEncoder().fit(train_windows)
        x, lengths = _pad(self.encoder, train_windows)
        y = torch.tensor(labels, dtype=torch.float32)
        self.model = _LstmHead(self.config.hidden)
        optimizer = torch.optim.Adam(self.model.parameters(), lr=self.config.lr)
        pos_weight = torch.tensor(
            self.config.pos_weight_scale * (labels == 0).sum()
            / max((labels == 1).sum(), 1),
            dtype=torch.float32,
        )
        loss_fn = nn.BCEWithLogitsLoss(pos_weight=pos_weight)
        self.model.train()
        generator = torch.Generator().manual_seed(self.config.seed)
        n = x.shape[0]
        for _ in range(self.config.epochs):
            order = torch.randperm(n, generator=generator)
            for start in range(0, n, self.config.batch_size):
                batch = order[start:start + self.config.batch_size]
                optimizer.zero_grad()
                loss = loss_fn(self.model(x[batch], lengths[batch]), y[batch])
                loss.backward()
                optimizer.step()
        self.model.eval()
        return self

    def probabilities(self, windows: list[Window]) -> np.ndarray:
        assert self.model is not None and self.encoder is not None, "fit() first"
        x, lengths = _pad(self.encoder, windows)
        with torch.no_grad():
            logits = self.model(x, lengths)
        return torch.sigmoid(logits).numpy()

    def predict(self, windows: list[Window]) -> np.ndarray:
        return self.probabilities(windows) > 0.5
