"""Multi-mixing baseline: convex interpolation between existing windows.

Kept deliberately faithful to its limitations -- it only blends what it has
seen, inherits labels from the heavier parent, and never re-targets rule
signatures, so skewed seeds stay skewed.
"""

from __future__ import annotations

import numpy as np

from ..core.message import CATEGORICAL_FIELDS, GooseMessage, MessageWindow, NUMERIC_FIELDS
from ..ingest.corpus_csv import CorpusFile
from .perturb import project_numeric
from .surrogates import window_numeric

__all__ = ["mix_pair", "multimix_baseline"]


def mix_pair(a: MessageWindow, b: MessageWindow, weight: float,
             window_id: str = "mix") -> MessageWindow:
    """Convex per-feature combination; weight is parent a's share.

    Numeric features are averaged then projected; categorical features and
    the label come from the heavier-weighted parent. Weight 1.0 reproduces
    parent a exactly (for equal-length parents).
    """
    if not 0.0 <= weight <= 1.0:
        raise ValueError("weight must lie in [0, 1]")
    heavier = a if weight >= 0.5 else b
    aligned = min(len(a.messages), len(b.messages))
    mixed = project_numeric(
        weight * window_numeric(a)[:aligned] + (1.0 - weight) * window_numeric(b)[:aligned]
    )
    messages = []
    for i in range(aligned):
        fields = {name: int(mixed[i, j]) for j, name in enumerate(NUMERIC_FIELDS)}
        fields.update({name: getattr(heavier.messages[i], name) for name in CATEGORICAL_FIELDS})
        messages.append(GooseMessage(**fields))
    return MessageWindow(tuple(messages), window_id=window_id, label=heavier.label)


def multimix_baseline(seeds, count: int, rng_seed: int) -> CorpusFile:
    """Generate `count` windows by mixing random seed pairs."""
    windows = list(getattr(seeds, "templates", None) or getattr(seeds, "windows", seeds))
    if len(windows) < 2:
        raise ValueError("multi-mixing needs at least two seed windows")
    out = []
    for i in range(count):
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(rng_seed, spawn_key=(i,)))
        )
        ia, ib = rng.choice(len(windows), size=2, replace=False)
        weight = float(rng.uniform())
        out.append(mix_pair(windows[ia], windows[ib], weight, window_id=f"mix-{i:04d}"))
    return CorpusFile(windows=out, provenance=f"multimix:seed={rng_seed}")
