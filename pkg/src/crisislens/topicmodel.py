"""LDA by collapsed Gibbs sampling.

One model per corpus: vocabulary building with stopword and frequency
filtering, then `iterations` full sweeps of the collapsed per-token update

    P(z_i = k | rest) ∝ (n_dk + α) · (n_kw + β) / (n_k + Vβ)

with the current token excluded from all counts. Everything downstream
(φ, θ, top words, log-likelihood) is computed from the final count state.

Determinism contract: (corpus, config, seed) fixes every output bit-for-bit.
All randomness comes from one numpy PCG64 generator; initialization draws one
uniform per token, and each sweep draws one uniform per token, consumed in
token order. The sampled topic is the smallest k whose cumulative
unnormalized weight exceeds u times the total, accumulating k ascending.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.special import gammaln

from .errors import EmptyCorpusError, OverparameterizedError, ValidationError

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None


@dataclass(frozen=True)
class SamplerConfig:
    """Gibbs sampler hyperparameters. alpha and beta are per-topic/symmetric."""

    k: int
    alpha: float
    beta: float
    iterations: int
    seed: int

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError(f"k must be >= 1, got {self.k}")
        if not self.alpha > 0:
            raise ValidationError(f"alpha must be > 0, got {self.alpha}")
        if not self.beta > 0:
            raise ValidationError(f"beta must be > 0, got {self.beta}")
        if self.iterations < 1:
            raise ValidationError(f"iterations must be >= 1, got {self.iterations}")

    @classmethod
    def mallet_defaults(cls, k: int = 25, iterations: int = 1000, seed: int = 0) -> "SamplerConfig":
        # Mallet convention: total alpha mass 5.0 split over topics, beta 0.01.
        return cls(k=k, alpha=5.0 / k, beta=0.01, iterations=iterations, seed=seed)


@dataclass
class EncodedCorpus:
    """Documents as token-id arrays over a fixed vocabulary."""

    vocab: list[str]
    docs: list[np.ndarray]
    doc_ids: list[str]
    dropped_ids: list[str] = field(default_factory=list)

    @property
    def num_docs(self) -> int:
        return len(self.docs)

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    @property
    def total_tokens(self) -> int:
        return sum(len(doc) for doc in self.docs)


def load_stopwords(path: Path | str) -> set[str]:
    """Read a stopword file: one lowercase term per line, blanks ignored."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read stopword file {path}: {exc}") from exc
    return {line.strip().casefold() for line in text.splitlines() if line.strip()}


def build_vocab(
    docs: Sequence[Sequence[str]],
    stopwords: set[str] = frozenset(),
    min_count: int = 1,
    doc_ids: Sequence[str] | None = None,
) -> EncodedCorpus:
    """Encode token lists onto a shared vocabulary.

    Stopwords and terms with corpus frequency below min_count are removed;
    documents emptied by filtering are dropped and reported via dropped_ids.
    Vocabulary order is first appearance in the filtered token stream.
    """
    if doc_ids is None:
        doc_ids = [f"doc{i}" for i in range(len(docs))]
    if len(doc_ids) != len(docs):
        raise ValidationError("doc_ids length does not match docs")
    counts: dict[str, int] = {}
    for doc in docs:
        for tok in doc:
            if tok not in stopwords:
                counts[tok] = counts.get(tok, 0) + 1
    index: dict[str, int] = {}
    vocab: list[str] = []
    encoded: list[np.ndarray] = []
    kept_ids: list[str] = []
    dropped: list[str] = []
    for ident, doc in zip(doc_ids, docs):
        ids = []
        for tok in doc:
            if tok in stopwords or counts.get(tok, 0) < min_count:
                continue
            pos = index.get(tok)
            if pos is None:
                pos = len(vocab)
                index[tok] = pos
                vocab.append(tok)
            ids.append(pos)
        if ids:
            encoded.append(np.asarray(ids, dtype=np.int32))
            kept_ids.append(ident)
        else:
            dropped.append(ident)
    if not encoded:
        raise EmptyCorpusError("all documents empty after stopword/frequency filtering")
    return EncodedCorpus(vocab=vocab, docs=encoded, doc_ids=kept_ids, dropped_ids=dropped)


def _gibbs_sweep_py(word_ids, doc_idx, z, n_dk, n_kw, n_k, alpha, beta, uniforms, probs):
    # One full sweep. Counts stay consistent token-by-token; no allocation.
    K = probs.shape[0]
    V = n_kw.shape[1]
    vbeta = V * beta
    for i in range(word_ids.shape[0]):
        w = word_ids[i]
        d = doc_idx[i]
        old = z[i]
        n_dk[d, old] -= 1
        n_kw[old, w] -= 1
        n_k[old] -= 1
        total = 0.0
        for k in range(K):
            p = (n_dk[d, k] + alpha) * (n_kw[k, w] + beta) / (n_k[k] + vbeta)
            probs[k] = p
            total += p
        threshold = uniforms[i] * total
        new = K - 1
        acc = 0.0
        for k in range(K):
            acc += probs[k]
            if acc > threshold:
                new = k
                break
        z[i] = new
        n_dk[d, new] += 1
        n_kw[new, w] += 1
        n_k[new] += 1


if njit is not None:
    _gibbs_sweep = njit(cache=True)(_gibbs_sweep_py)
else:  # pragma: no cover
    _gibbs_sweep = _gibbs_sweep_py


@dataclass
class TopicModel:
    """Final sampler state plus enough metadata to recompute φ and θ.

    assignments is None for models restored from a dump (the dump stores
    counts only; φ/θ need nothing else).
    """

    config: SamplerConfig
    vocab: list[str]
    doc_ids: list[str]
    dropped_ids: list[str]
    doc_lengths: np.ndarray
    n_dk: np.ndarray
    n_kw: np.ndarray
    n_k: np.ndarray
    assignments: np.ndarray | None = None
    ll_trace: list[tuple[int, float]] = field(default_factory=list)

    @property
    def num_docs(self) -> int:
        return self.n_dk.shape[0]

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    @property
    def total_tokens(self) -> int:
        return int(self.doc_lengths.sum())


def _check_counts(model: TopicModel) -> None:
    """Exact count-conservation invariants; raises on any violation."""
    if not np.array_equal(model.n_dk.sum(axis=1), model.doc_lengths):
        raise ValidationError("count invariant broken: n_dk row sums != doc lengths")
    if not np.array_equal(model.n_kw.sum(axis=1), model.n_k):
        raise ValidationError("count invariant broken: n_kw row sums != n_k")
    if int(model.n_k.sum()) != model.total_tokens:
        raise ValidationError("count invariant broken: n_k total != token count")
    if model.assignments is not None:
        if model.assignments.min() < 0 or model.assignments.max() >= model.config.k:
            raise ValidationError("count invariant broken: assignment out of range")


def fit(
    corpus: EncodedCorpus,
    config: SamplerConfig,
    validate_every_sweep: bool = False,
    ll_every: int | None = None,
    sweep_callback: Callable[[int, TopicModel], None] | None = None,
) -> TopicModel:
    """Run collapsed Gibbs sampling to completion and return the final state.

    ll_every=n records the collapsed log-likelihood after every n-th sweep.
    sweep_callback(sweep_index, model) is invoked after each sweep with live
    views of the state (read-only by convention); sweep_index counts from 1.
    """
    if corpus.num_docs == 0:
        raise EmptyCorpusError("corpus has no documents")
    n_tokens = corpus.total_tokens
    if config.k > n_tokens:
        raise OverparameterizedError(
            f"k={config.k} exceeds corpus token count {n_tokens}"
        )
    K = config.k
    V = corpus.vocab_size
    D = corpus.num_docs
    word_ids = np.concatenate(corpus.docs).astype(np.int32)
    doc_idx = np.concatenate(
        [np.full(len(doc), d, dtype=np.int32) for d, doc in enumerate(corpus.docs)]
    )
    doc_lengths = np.asarray([len(doc) for doc in corpus.docs], dtype=np.int32)

    rng = np.random.default_rng(config.seed)
    u0 = rng.random(n_tokens)
    z = np.minimum((u0 * K).astype(np.int32), K - 1)

    n_dk = np.zeros((D, K), dtype=np.int32)
    n_kw = np.zeros((K, V), dtype=np.int32)
    n_k = np.zeros(K, dtype=np.int32)
    np.add.at(n_dk, (doc_idx, z), 1)
    np.add.at(n_kw, (z, word_ids), 1)
    np.add.at(n_k, z, 1)

    model = TopicModel(
        config=config,
        vocab=list(corpus.vocab),
        doc_ids=list(corpus.doc_ids),
        dropped_ids=list(corpus.dropped_ids),
        doc_lengths=doc_lengths,
        n_dk=n_dk,
        n_kw=n_kw,
        n_k=n_k,
        assignments=z,
    )

    probs = np.empty(K, dtype=np.float64)
    for sweep in range(1, config.iterations + 1):
        uniforms = rng.random(n_tokens)
        _gibbs_sweep(
            word_ids, doc_idx, z, n_dk, n_kw, n_k,
            config.alpha, config.beta, uniforms, probs,
        )
        if validate_every_sweep:
            _check_counts(model)
        if ll_every is not None and sweep % ll_every == 0:
            model.ll_trace.append((sweep, log_likelihood(model)))
        if sweep_callback is not None:
            sweep_callback(sweep, model)
    _check_counts(model)
    return model


def phi(model: TopicModel) -> np.ndarray:
    """Topic-word distributions: φ[k][w] = (n_kw + β) / (n_k + Vβ)."""
    beta = model.config.beta
    V = model.vocab_size
    return (model.n_kw + beta) / (model.n_k[:, None] + V * beta)


def theta(model: TopicModel) -> np.ndarray:
    """Doc-topic distributions: θ[d][k] = (n_dk + α) / (len(d) + Kα)."""
    alpha = model.config.alpha
    K = model.config.k
    return (model.n_dk + alpha) / (model.doc_lengths[:, None] + K * alpha)


def top_words(model: TopicModel, k: int, n: int) -> list[tuple[str, float]]:
    """Top-n (term, φ) pairs for topic k, ties broken by vocabulary order."""
    if not 0 <= k < model.config.k:
        raise ValidationError(f"topic id {k} out of range [0, {model.config.k})")
    if n < 1:
        raise ValidationError(f"top-word count must be >= 1, got {n}")
    row = phi(model)[k]
    order = np.argsort(-row, kind="stable")[: min(n, model.vocab_size)]
    return [(model.vocab[w], float(row[w])) for w in order]


def dominant_topic(model: TopicModel, d: int) -> int:
    """argmax_k θ[d][k]; ties go to the lowest topic id."""
    if not 0 <= d < model.num_docs:
        raise ValidationError(f"doc id {d} out of range [0, {model.num_docs})")
    return int(np.argmax(theta(model)[d]))


def log_likelihood(model: TopicModel) -> float:
    """Collapsed joint log p(w, z) with θ and φ integrated out."""
    alpha = model.config.alpha
    beta = model.config.beta
    K = model.config.k
    V = model.vocab_size
    D = model.num_docs
    word_part = (
        K * (gammaln(V * beta) - V * gammaln(beta))
        + gammaln(model.n_kw + beta).sum()
        - gammaln(model.n_k + V * beta).sum()
    )
    doc_part = (
        D * (gammaln(K * alpha) - K * gammaln(alpha))
        + gammaln(model.n_dk + alpha).sum()
        - gammaln(model.doc_lengths + K * alpha).sum()
    )
    return float(word_part + doc_part)


def write_topics_txt(model: TopicModel, path: Path | str, n: int = 20) -> None:
    """Human-readable top-word listing, one line per topic."""
    lines = [f"# top {n} words per topic (k={model.config.k}, seed={model.config.seed})"]
    for k in range(model.config.k):
        words = " / ".join(f"{term} ({prob:.4f})" for term, prob in top_words(model, k, n))
        lines.append(f"topic {k}: {words}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _int_row(values: Iterable[int]) -> str:
    return " ".join(str(int(v)) for v in values)


def save_model(model: TopicModel, path: Path | str) -> None:
    """Dump config, vocabulary, and count matrices as structured text.

    The dump is sufficient to recompute φ and θ exactly, and is byte-stable:
    identical models always serialize to identical bytes.
    """
    cfg = model.config
    parts = [
        "# lda-model v1",
        "[config]",
        f"k = {cfg.k}",
        f"alpha = {cfg.alpha!r}",
        f"beta = {cfg.beta!r}",
        f"iterations = {cfg.iterations}",
        f"seed = {cfg.seed}",
        "[size]",
        f"docs = {model.num_docs}",
        f"vocab = {model.vocab_size}",
        f"tokens = {model.total_tokens}",
        "[vocab]",
        *model.vocab,
        "[doc_ids]",
        *model.doc_ids,
        "[dropped_ids]",
        *model.dropped_ids,
        "[n_kw]",
        *(_int_row(row) for row in model.n_kw),
        "[n_dk]",
        *(_int_row(row) for row in model.n_dk),
    ]
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")


def load_model(path: Path | str) -> TopicModel:
    """Restore a model dump written by save_model (assignments are not kept)."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read model dump {path}: {exc}") from exc
    if not lines or lines[0] != "# lda-model v1":
        raise ValidationError(f"{path}: not a model dump (bad header)")
    sections: dict[str, list[str]] = {}
    current: str | None = None
    for line in lines[1:]:
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1]
            sections[current] = []
        elif current is not None:
            sections[current].append(line)
    try:
        kv = dict(item.split(" = ", 1) for item in sections["config"])
        cfg = SamplerConfig(
            k=int(kv["k"]),
            alpha=float(kv["alpha"]),
            beta=float(kv["beta"]),
            iterations=int(kv["iterations"]),
            seed=int(kv["seed"]),
        )
        size = dict(item.split(" = ", 1) for item in sections["size"])
        vocab = sections["vocab"]
        doc_ids = sections["doc_ids"]
        dropped = sections.get("dropped_ids", [])
        n_kw = np.asarray(
            [[int(v) for v in row.split()] for row in sections["n_kw"]], dtype=np.int32
        ).reshape(cfg.k, len(vocab))
        n_dk = np.asarray(
            [[int(v) for v in row.split()] for row in sections["n_dk"]], dtype=np.int32
        ).reshape(len(doc_ids), cfg.k)
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"{path}: corrupt model dump: {exc}") from exc
    if int(size["docs"]) != len(doc_ids) or int(size["vocab"]) != len(vocab):
        raise ValidationError(f"{path}: corrupt model dump: size mismatch")
    model = TopicModel(
        config=cfg,
        vocab=vocab,
        doc_ids=doc_ids,
        dropped_ids=dropped,
        doc_lengths=n_dk.sum(axis=1).astype(np.int32),
        n_dk=n_dk,
        n_kw=n_kw,
        n_k=n_kw.sum(axis=1).astype(np.int32),
    )
    if model.total_tokens != int(size["tokens"]):
        raise ValidationError(f"{path}: corrupt model dump: token count mismatch")
    return model
