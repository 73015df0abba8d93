"""From-scratch Siamese recurrent classifiers over token sequences.

Everything is plain numpy float64: parameter initialization, SRN/GRU/LSTM
cells and a summing baseline, masked batched forward passes, manual
backpropagation through time, AdaDelta, training and evaluation loops, and
a binary checkpoint format.  No autograd: every operation in the forward
pass has its gradient written out by hand, which keeps the model
inspectable and makes finite-difference checking straightforward.

Both sentences of a pair go through one shared encoder (the Siamese
property): a batch stacks the left sentences on top of the right ones, runs
the encoder once, splits the result into two blocks of sentence vectors,
and classifies their concatenation through a comparison layer and a softmax
classifier.  Padding is handled by a carry mask, so a padded batch computes
exactly what the sentences would produce one by one.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError, NumericsError
from .lang import Sentence, render
from .relations import RELATIONS

LEAKY_SLOPE = 0.01

_GATES = {"srn": ("",), "gru": ("z", "r", ""), "lstm": ("i", "f", "o", "g"), "sum": ()}


@dataclass(frozen=True)
class ModelConfig:
    """Architecture description: cell kind, token list, and layer sizes.

    `vocab` fixes the embedding row of every token.  For recurrent kinds the
    encoder output is the final hidden state; for the summing baseline it is
    the sum of the word embeddings.  Either way a projection maps it to a
    `sentence_dim` vector through tanh.
    """

    kind: str
    vocab: tuple[str, ...]
    embed_dim: int = 25
    hidden: int = 128
    sentence_dim: int = 25
    comparison_dim: int = 75
    classes: int = len(RELATIONS)
    frozen_embeddings: bool = False

    def __post_init__(self):
        if self.kind not in _GATES:
            raise ConfigError(
                f"unknown model kind {self.kind!r}; choose from srn, gru, lstm, sum"
            )
        if not self.vocab or len(set(self.vocab)) != len(self.vocab):
            raise ConfigError("vocab must be a nonempty list of distinct tokens")
        object.__setattr__(self, "vocab", tuple(self.vocab))

    @property
    def encoder_dim(self) -> int:
        return self.embed_dim if self.kind == "sum" else self.hidden

    @property
    def vocab_index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.vocab)}


def param_order(config: ModelConfig) -> list[str]:
    names = ["embed"]
    gates = _GATES[config.kind]
    names += [f"W{g}" for g in gates]
    names += [f"U{g}" for g in gates]
    names += [f"b{g}" for g in gates]
    names += ["P", "pb", "C", "cb", "O", "ob"]
    return names


def param_shapes(config: ModelConfig) -> dict[str, tuple[int, ...]]:
    e, h = config.embed_dim, config.hidden
    s, m, k = config.sentence_dim, config.comparison_dim, config.classes
    shapes: dict[str, tuple[int, ...]] = {"embed": (len(config.vocab), e)}
    for g in _GATES[config.kind]:
        shapes[f"W{g}"] = (e, h)
        shapes[f"U{g}"] = (h, h)
        shapes[f"b{g}"] = (h,)
    shapes["P"] = (config.encoder_dim, s)
    shapes["pb"] = (s,)
    shapes["C"] = (2 * s, m)
    shapes["cb"] = (m,)
    shapes["O"] = (m, k)
    shapes["ob"] = (k,)
    return shapes


def init_params(config: ModelConfig, seed: int) -> dict[str, np.ndarray]:
    """Uniform weights at 1/sqrt(fan-in) bounds, standard-normal embeddings,
    zero biases.  Recurrent matrices all use the hidden size as fan-in."""
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    params: dict[str, np.ndarray] = {}
    bounds = {
        "W": 1.0 / np.sqrt(config.hidden),
        "U": 1.0 / np.sqrt(config.hidden),
        "P": 1.0 / np.sqrt(config.encoder_dim),
        "C": 1.0 / np.sqrt(2 * config.sentence_dim),
        "O": 1.0 / np.sqrt(config.comparison_dim),
    }
    for name, shape in param_shapes(config).items():
        if name == "embed":
            params[name] = rng.standard_normal(shape)
        elif name[0] in ("b", "p", "c", "o"):
            params[name] = np.zeros(shape)
        else:
            bound = bounds[name[0]]
            params[name] = rng.uniform(-bound, bound, shape)
    return params


# --- activations ----------------------------------------------------------------

def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _softmax(x: np.ndarray) -> np.ndarray:
    shifted = x - x.max(axis=-1, keepdims=True)
    ex = np.exp(shifted)
    return ex / ex.sum(axis=-1, keepdims=True)


# --- recurrent cells ---------------------------------------------------------------

def _cell_forward(kind, params, x, h, c):
    if kind == "srn":
        h2 = np.tanh(x @ params["W"] + h @ params["U"] + params["b"])
        return h2, c, (x, h, h2)
    if kind == "gru":
        z = _sigmoid(x @ params["Wz"] + h @ params["Uz"] + params["bz"])
        r = _sigmoid(x @ params["Wr"] + h @ params["Ur"] + params["br"])
        rh = r * h
        cand = np.tanh(x @ params["W"] + rh @ params["U"] + params["b"])
        h2 = (1.0 - z) * h + z * cand
        return h2, c, (x, h, z, r, rh, cand)
    if kind == "lstm":
        i = _sigmoid(x @ params["Wi"] + h @ params["Ui"] + params["bi"])
        f = _sigmoid(x @ params["Wf"] + h @ params["Uf"] + params["bf"])
        o = _sigmoid(x @ params["Wo"] + h @ params["Uo"] + params["bo"])
        g = np.tanh(x @ params["Wg"] + h @ params["Ug"] + params["bg"])
        c2 = f * c + i * g
        tc2 = np.tanh(c2)
        h2 = o * tc2
        return h2, c2, (x, h, c, i, f, o, g, tc2)
    raise ConfigError(f"kind {kind!r} has no recurrent cell")


def cell_step(kind, params, x, h, c=None):
    """One batched cell application; returns (new hidden, new cell memory).

    The cell memory is only meaningful for the LSTM and passes through
    unchanged otherwise.
    """
    if c is None:
        c = np.zeros_like(h)
    h2, c2, _ = _cell_forward(kind, params, x, h, c)
    return h2, c2


def _cell_backward(kind, params, cache, dh, dc, grads):
    """Gradient of one cell step.  Returns (dx, dh_prev, dc_prev) and
    accumulates parameter gradients in `grads`."""
    if kind == "srn":
        x, h, h2 = cache
        dpre = dh * (1.0 - h2 * h2)
        grads["W"] += x.T @ dpre
        grads["U"] += h.T @ dpre
        grads["b"] += dpre.sum(axis=0)
        return dpre @ params["W"].T, dpre @ params["U"].T, dc
    if kind == "gru":
        x, h, z, r, rh, cand = cache
        dz = dh * (cand - h)
        dcand = dh * z
        dh_prev = dh * (1.0 - z)
        dcand_pre = dcand * (1.0 - cand * cand)
        grads["W"] += x.T @ dcand_pre
        grads["U"] += rh.T @ dcand_pre
        grads["b"] += dcand_pre.sum(axis=0)
        drh = dcand_pre @ params["U"].T
        dr = drh * h
        dh_prev = dh_prev + drh * r
        dz_pre = dz * z * (1.0 - z)
        dr_pre = dr * r * (1.0 - r)
        grads["Wz"] += x.T @ dz_pre
        grads["Uz"] += h.T @ dz_pre
        grads["bz"] += dz_pre.sum(axis=0)
        grads["Wr"] += x.T @ dr_pre
        grads["Ur"] += h.T @ dr_pre
        grads["br"] += dr_pre.sum(axis=0)
        dh_prev = dh_prev + dz_pre @ params["Uz"].T + dr_pre @ params["Ur"].T
        dx = (
            dcand_pre @ params["W"].T
            + dz_pre @ params["Wz"].T
            + dr_pre @ params["Wr"].T
        )
        return dx, dh_prev, dc
    if kind == "lstm":
        x, h, c, i, f, o, g, tc2 = cache
        do = dh * tc2
        dc2 = dh * o * (1.0 - tc2 * tc2) + dc
        di = dc2 * g
        df = dc2 * c
        dg = dc2 * i
        dc_prev = dc2 * f
        di_pre = di * i * (1.0 - i)
        df_pre = df * f * (1.0 - f)
        do_pre = do * o * (1.0 - o)
        dg_pre = dg * (1.0 - g * g)
        dx = np.zeros_like(x)
        dh_prev = np.zeros_like(h)
        for gate, dpre in (("i", di_pre), ("f", df_pre), ("o", do_pre), ("g", dg_pre)):
            grads[f"W{gate}"] += x.T @ dpre
            grads[f"U{gate}"] += h.T @ dpre
            grads[f"b{gate}"] += dpre.sum(axis=0)
            dx += dpre @ params[f"W{gate}"].T
            dh_prev += dpre @ params[f"U{gate}"].T
        return dx, dh_prev, dc_prev
    raise ConfigError(f"kind {kind!r} has no recurrent cell")


# --- batched forward and backward ---------------------------------------------------

def _encode_forward(config, params, idx, mask):
    """Sentence vectors for a padded token batch.

    idx and mask are (N, T); padded positions carry the previous hidden
    state through, so right-padded batches match per-sentence processing
    exactly.  Returns (vectors, cache).
    """
    embedded = params["embed"][idx]
    if config.kind == "sum":
        enc = (embedded * mask[:, :, None]).sum(axis=1)
        steps = None
    else:
        n, t = idx.shape
        h = np.zeros((n, config.hidden))
        c = np.zeros((n, config.hidden))
        steps = []
        for j in range(t):
            x = embedded[:, j]
            m = mask[:, j:j + 1]
            h2, c2, cell_cache = _cell_forward(config.kind, params, x, h, c)
            h_next = m * h2 + (1.0 - m) * h
            c_next = m * c2 + (1.0 - m) * c
            steps.append((cell_cache, m))
            h, c = h_next, c_next
        enc = h
    pre = enc @ params["P"] + params["pb"]
    vectors = np.tanh(pre)
    cache = {"idx": idx, "mask": mask, "enc": enc, "vectors": vectors, "steps": steps}
    return vectors, cache


def _encode_backward(config, params, cache, dvec, grads):
    enc = cache["enc"]
    dpre = dvec * (1.0 - cache["vectors"] ** 2)
    grads["P"] += enc.T @ dpre
    grads["pb"] += dpre.sum(axis=0)
    denc = dpre @ params["P"].T
    idx, mask = cache["idx"], cache["mask"]
    dembedded = np.zeros(idx.shape + (config.embed_dim,))
    if config.kind == "sum":
        dembedded += denc[:, None, :] * mask[:, :, None]
    else:
        dh = denc
        dc = np.zeros_like(dh)
        for j in range(len(cache["steps"]) - 1, -1, -1):
            cell_cache, m = cache["steps"][j]
            dx, dh_prev, dc_prev = _cell_backward(
                config.kind, params, cell_cache, m * dh, m * dc, grads
            )
            dembedded[:, j, :] = dx
            dh = dh_prev + (1.0 - m) * dh
            dc = dc_prev + (1.0 - m) * dc
    np.add.at(grads["embed"], idx, dembedded)
    return dembedded


def _zero_grads(config, params):
    return {name: np.zeros_like(value) for name, value in params.items()}


def loss_and_grads(config, params, idx, mask, labels):
    """Mean cross-entropy of a stacked pair batch and its full gradient.

    idx and mask hold the left sentences in rows 0..B-1 and the right
    sentences in rows B..2B-1; labels has length B.
    """
    loss, probs, cache = _forward(config, params, idx, mask, labels)
    grads = _backward(config, params, cache)
    return loss, grads, probs


def _forward(config, params, idx, mask, labels):
    pairs = labels.shape[0]
    if idx.shape[0] != 2 * pairs:
        raise ConfigError("batch must stack left and right sentence blocks")
    vectors, enc_cache = _encode_forward(config, params, idx, mask)
    left, right = vectors[:pairs], vectors[pairs:]
    joined = np.concatenate([left, right], axis=1)
    cmp_pre = joined @ params["C"] + params["cb"]
    cmp_act = np.where(cmp_pre > 0, cmp_pre, LEAKY_SLOPE * cmp_pre)
    logits = cmp_act @ params["O"] + params["ob"]
    probs = _softmax(logits)
    picked = probs[np.arange(pairs), labels]
    loss = float(-np.log(np.maximum(picked, 1e-300)).mean())
    cache = {
        "enc_cache": enc_cache,
        "joined": joined,
        "cmp_pre": cmp_pre,
        "cmp_act": cmp_act,
        "probs": probs,
        "labels": labels,
    }
    return loss, probs, cache


def _backward(config, params, cache):
    grads = _zero_grads(config, params)
    probs, labels = cache["probs"], cache["labels"]
    pairs = labels.shape[0]
    dlogits = probs.copy()
    dlogits[np.arange(pairs), labels] -= 1.0
    dlogits /= pairs
    grads["O"] += cache["cmp_act"].T @ dlogits
    grads["ob"] += dlogits.sum(axis=0)
    dcmp_act = dlogits @ params["O"].T
    dcmp_pre = dcmp_act * np.where(cache["cmp_pre"] > 0, 1.0, LEAKY_SLOPE)
    grads["C"] += cache["joined"].T @ dcmp_pre
    grads["cb"] += dcmp_pre.sum(axis=0)
    djoined = dcmp_pre @ params["C"].T
    s = config.sentence_dim
    dvec = np.concatenate([djoined[:, :s], djoined[:, s:]], axis=0)
    _encode_backward(config, params, cache["enc_cache"], dvec, grads)
    return grads


# --- single-sentence conveniences ----------------------------------------------------

def _tokens_to_indices(config: ModelConfig, words) -> np.ndarray:
    index = config.vocab_index
    missing = sorted({w for w in words if w not in index})
    if missing:
        raise DataError(f"words without an embedding row: {', '.join(missing)}")
    return np.array([index[w] for w in words], dtype=np.int64)


def encode_sentence(config, params, words) -> np.ndarray:
    """Sentence vector of one token sequence."""
    if not len(words):
        raise ConfigError("cannot encode an empty sentence")
    idx = _tokens_to_indices(config, words)[None, :]
    mask = np.ones(idx.shape)
    vectors, _ = _encode_forward(config, params, idx, mask)
    return vectors[0]


def sum_baseline_encode(config, params, words) -> np.ndarray:
    """Order-invariant sentence vector: summed embeddings, then projection."""
    if config.kind != "sum":
        raise ConfigError("sum_baseline_encode needs a summing model config")
    return encode_sentence(config, params, words)


def classify(config, params, left_vec, right_vec) -> np.ndarray:
    """Distribution over the seven relations for two sentence vectors."""
    joined = np.concatenate([left_vec, right_vec])[None, :]
    cmp_pre = joined @ params["C"] + params["cb"]
    cmp_act = np.where(cmp_pre > 0, cmp_pre, LEAKY_SLOPE * cmp_pre)
    logits = cmp_act @ params["O"] + params["ob"]
    return _softmax(logits)[0]


# --- optimizer -------------------------------------------------------------------

@dataclass
class AdaDeltaState:
    """Per-parameter running averages of squared gradients and updates."""

    rho: float = 0.95
    eps: float = 1e-6
    sq_grad: dict = field(default_factory=dict)
    sq_update: dict = field(default_factory=dict)


def adadelta_update(params, grads, state, frozen=frozenset()):
    """Apply one AdaDelta step in place; frozen tensors stay untouched."""
    for name in sorted(grads):
        if name in frozen:
            continue
        g = grads[name]
        if not np.isfinite(g).all():
            raise NumericsError(f"non-finite gradient in {name}")
        acc_g = state.sq_grad.get(name)
        if acc_g is None:
            acc_g = state.sq_grad[name] = np.zeros_like(g)
            state.sq_update[name] = np.zeros_like(g)
        acc_u = state.sq_update[name]
        acc_g *= state.rho
        acc_g += (1.0 - state.rho) * g * g
        delta = -np.sqrt(acc_u + state.eps) / np.sqrt(acc_g + state.eps) * g
        acc_u *= state.rho
        acc_u += (1.0 - state.rho) * delta * delta
        params[name] += delta
        if not np.isfinite(params[name]).all():
            raise NumericsError(f"non-finite values in {name} after update")


# --- batching of labeled pairs --------------------------------------------------------

_RELATION_INDEX = {rel: i for i, rel in enumerate(RELATIONS)}


def _pair_tokens(pair) -> tuple[list[str], list[str]]:
    return render(pair.left), render(pair.right)


def encode_dataset(config: ModelConfig, pairs):
    """Token-index sequences and label ids for a list of labeled pairs."""
    lefts, rights, labels = [], [], []
    for p in pairs:
        left, right = _pair_tokens(p)
        lefts.append(_tokens_to_indices(config, left))
        rights.append(_tokens_to_indices(config, right))
        labels.append(_RELATION_INDEX[p.relation])
    return lefts, rights, np.array(labels, dtype=np.int64)


def _stack_batch(lefts, rights):
    rows = lefts + rights
    t = max(len(r) for r in rows)
    idx = np.zeros((len(rows), t), dtype=np.int64)
    mask = np.zeros((len(rows), t))
    for i, row in enumerate(rows):
        idx[i, : len(row)] = row
        mask[i, : len(row)] = 1.0
    return idx, mask


# --- training and evaluation ----------------------------------------------------------

@dataclass
class EpochMetrics:
    epoch: int
    loss: float
    train_accuracy: float
    test_accuracy: float | None


@dataclass
class TrainResult:
    config: ModelConfig
    params: dict
    optimizer: AdaDeltaState
    metrics: list[EpochMetrics]
    final_train_accuracy: float
    final_test_accuracy: float | None


def dataset_vocab(*pair_lists) -> tuple[str, ...]:
    """Sorted token vocabulary covering every sentence in the given lists."""
    words = set()
    for pairs in pair_lists:
        for p in pairs:
            left, right = _pair_tokens(p)
            words.update(left)
            words.update(right)
    if not words:
        raise DataError("cannot build a vocabulary from empty datasets")
    return tuple(sorted(words))


def train(
    kind: str,
    train_pairs,
    test_pairs=None,
    *,
    epochs: int = 50,
    batch_size: int = 32,
    seed: int = 0,
    vocab: tuple[str, ...] | None = None,
    embeddings: np.ndarray | None = None,
    freeze_embeddings: bool = False,
    embed_dim: int = 25,
    hidden: int = 128,
    sentence_dim: int = 25,
    comparison_dim: int = 75,
    rho: float = 0.95,
    eps: float = 1e-6,
    on_epoch=None,
) -> TrainResult:
    """Train a classifier on labeled pairs with AdaDelta.

    Fully deterministic for a given seed: initialization uses the seed
    itself and every epoch shuffles with a stream derived from (seed,
    epoch).  When `embeddings` is given it becomes the embedding table
    (rows aligned with `vocab`) and `freeze_embeddings` excludes it from
    updates.  `rho` and `eps` tune the AdaDelta accumulators.  `on_epoch`
    is called with each EpochMetrics as it completes.  Per-epoch training
    accuracy is measured on the fly, before each update; the returned
    final accuracies come from a full pass.
    """
    if not train_pairs:
        raise DataError("training needs at least one labeled pair")
    if vocab is None:
        vocab = dataset_vocab(train_pairs, test_pairs or [])
    if embeddings is not None and embeddings.shape[0] != len(vocab):
        raise DataError(
            f"embedding table has {embeddings.shape[0]} rows for "
            f"{len(vocab)} vocabulary words"
        )
    config = ModelConfig(
        kind,
        tuple(vocab),
        embed_dim=embeddings.shape[1] if embeddings is not None else embed_dim,
        hidden=hidden,
        sentence_dim=sentence_dim,
        comparison_dim=comparison_dim,
        frozen_embeddings=freeze_embeddings,
    )
    params = init_params(config, seed)
    if embeddings is not None:
        params["embed"] = embeddings.astype(np.float64).copy()
    frozen = frozenset(["embed"]) if config.frozen_embeddings else frozenset()
    state = AdaDeltaState(rho=rho, eps=eps)
    lefts, rights, labels = encode_dataset(config, train_pairs)
    test_encoded = (
        encode_dataset(config, test_pairs) if test_pairs is not None else None
    )
    count = len(labels)
    metrics: list[EpochMetrics] = []
    for epoch in range(1, epochs + 1):
        shuffle_rng = np.random.default_rng(np.random.SeedSequence([seed, epoch]))
        order = shuffle_rng.permutation(count)
        total_loss = 0.0
        correct = 0
        for start in range(0, count, batch_size):
            chosen = order[start:start + batch_size]
            idx, mask = _stack_batch(
                [lefts[i] for i in chosen], [rights[i] for i in chosen]
            )
            batch_labels = labels[chosen]
            loss, grads, probs = loss_and_grads(config, params, idx, mask, batch_labels)
            adadelta_update(params, grads, state, frozen)
            total_loss += loss * len(chosen)
            correct += int((probs.argmax(axis=1) == batch_labels).sum())
        test_accuracy = (
            _accuracy(config, params, test_encoded) if test_encoded else None
        )
        row = EpochMetrics(
            epoch=epoch,
            loss=total_loss / count,
            train_accuracy=100.0 * correct / count,
            test_accuracy=test_accuracy,
        )
        metrics.append(row)
        if on_epoch is not None:
            on_epoch(row)
    final_train = _accuracy(config, params, (lefts, rights, labels))
    final_test = _accuracy(config, params, test_encoded) if test_encoded else None
    return TrainResult(config, params, state, metrics, final_train, final_test)


def _predict(config, params, encoded, batch_size=256):
    lefts, rights, labels = encoded
    out = np.empty(len(labels), dtype=np.int64)
    for start in range(0, len(labels), batch_size):
        stop = min(start + batch_size, len(labels))
        idx, mask = _stack_batch(lefts[start:stop], rights[start:stop])
        vectors, _ = _encode_forward(config, params, idx, mask)
        pairs = stop - start
        joined = np.concatenate([vectors[:pairs], vectors[pairs:]], axis=1)
        cmp_pre = joined @ params["C"] + params["cb"]
        cmp_act = np.where(cmp_pre > 0, cmp_pre, LEAKY_SLOPE * cmp_pre)
        logits = cmp_act @ params["O"] + params["ob"]
        out[start:stop] = logits.argmax(axis=1)
    return out


def _accuracy(config, params, encoded) -> float:
    predictions = _predict(config, params, encoded)
    return 100.0 * float((predictions == encoded[2]).mean())


@dataclass
class EvalResult:
    accuracy: float
    confusion: np.ndarray          # raw counts, rows are targets

    def normalized(self) -> np.ndarray:
        totals = self.confusion.sum(axis=1, keepdims=True)
        safe = np.maximum(totals, 1)
        return self.confusion / safe


def evaluate(config, params, pairs) -> EvalResult:
    """Accuracy and target-by-prediction confusion counts over a dataset."""
    encoded = encode_dataset(config, pairs)
    predictions = _predict(config, params, encoded)
    labels = encoded[2]
    k = config.classes
    confusion = np.zeros((k, k), dtype=np.int64)
    np.add.at(confusion, (labels, predictions), 1)
    accuracy = 100.0 * float((predictions == labels).mean())
    return EvalResult(accuracy, confusion)


def metrics_table(metrics: list[EpochMetrics]) -> str:
    """Plot-ready TSV of the per-epoch training trajectory."""
    lines = ["epoch\tloss\ttrain_acc\ttest_acc"]
    for row in metrics:
        test = "" if row.test_accuracy is None else f"{row.test_accuracy:.4f}"
        lines.append(f"{row.epoch}\t{row.loss:.6f}\t{row.train_accuracy:.4f}\t{test}")
    return "\n".join(lines) + "\n"


def confusion_table(result: EvalResult) -> str:
    """TSV confusion matrix, raw counts with relation headers."""
    header = "target\\prediction\t" + "\t".join(RELATIONS)
    lines = [header]
    for i, rel in enumerate(RELATIONS):
        cells = "\t".join(str(int(v)) for v in result.confusion[i])
        lines.append(f"{rel}\t{cells}")
    return "\n".join(lines) + "\n"


# --- gradient checking ---------------------------------------------------------------

def flatten_params(params, order) -> np.ndarray:
    return np.concatenate([params[name].ravel() for name in order])


def unflatten_params(vector, shapes, order) -> dict[str, np.ndarray]:
    out = {}
    pos = 0
    for name in order:
        size = int(np.prod(shapes[name])) if shapes[name] else 1
        out[name] = vector[pos:pos + size].reshape(shapes[name])
        pos += size
    return out


def gradient_check(config, params, idx, mask, labels, step=1e-5, floor=1e-6) -> float:
    """Largest relative disagreement between the analytic gradient and a
    central finite difference of the loss.

    The denominator |a| + |n| is floored at `floor`, so coordinates where
    both gradients are essentially zero are compared absolutely at that
    scale instead of amplifying rounding noise.
    """
    _, grads, _ = loss_and_grads(config, params, idx, mask, labels)
    order = param_order(config)
    shapes = {name: params[name].shape for name in order}
    analytic = flatten_params(grads, order)
    x0 = flatten_params(params, order)
    numeric = np.zeros_like(x0)
    for i in range(len(x0)):
        shifted = x0.copy()
        shifted[i] += step
        up, _, _ = _forward(config, unflatten_params(shifted, shapes, order),
                            idx, mask, labels)
        shifted[i] = x0[i] - step
        down, _, _ = _forward(config, unflatten_params(shifted, shapes, order),
                              idx, mask, labels)
        numeric[i] = (up - down) / (2.0 * step)
    denom = np.maximum(np.abs(analytic) + np.abs(numeric), floor)
    return float((np.abs(analytic - numeric) / denom).max())


# --- pretrained embeddings -----------------------------------------------------------

def load_pretrained_embeddings(path, words) -> np.ndarray:
    """Embedding rows for `words` from a text file of `word v1 .. vd` lines.

    Raises DataError listing every requested word the file lacks, and
    ConfigError on ragged lines.
    """
    wanted = {w: i for i, w in enumerate(words)}
    if len(wanted) != len(words):
        raise DataError("embedding request contains duplicate words")
    rows: dict[str, np.ndarray] = {}
    dim = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split(" ")
            if len(parts) < 2:
                raise ConfigError(f"{path}:{lineno}: not a word-vector line")
            word = parts[0]
            if dim is None:
                dim = len(parts) - 1
            elif len(parts) - 1 != dim:
                raise ConfigError(
                    f"{path}:{lineno}: expected {dim} values, got {len(parts) - 1}"
                )
            if word in wanted and word not in rows:
                try:
                    rows[word] = np.array([float(v) for v in parts[1:]])
                except ValueError as exc:
                    raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    missing = sorted(set(wanted) - set(rows))
    if missing:
        raise DataError(f"words missing from {path}: {', '.join(missing)}")
    table = np.empty((len(words), dim))
    for word, i in wanted.items():
        table[i] = rows[word]
    return table


def cosine_distance(u: np.ndarray, v: np.ndarray) -> float:
    norms = float(np.linalg.norm(u) * np.linalg.norm(v))
    if norms == 0.0:
        raise NumericsError("cosine distance of a zero vector")
    return 1.0 - float(u @ v) / norms


# --- checkpoints -----------------------------------------------------------------

CHECKPOINT_FORMAT = 1


@dataclass
class Checkpoint:
    config: ModelConfig
    params: dict
    optimizer: AdaDeltaState | None
    epoch: int
    seed: int


def save_checkpoint(path, config, params, optimizer=None, epoch=0, seed=0):
    """JSON header line plus raw little-endian float64 tensors in a fixed
    order: parameters, then optimizer accumulators for trainable tensors."""
    order = param_order(config)
    trainable = [n for n in order if not (n == "embed" and config.frozen_embeddings)]
    header = {
        "format": CHECKPOINT_FORMAT,
        "config": dataclasses.asdict(config),
        "tensors": [[name, list(params[name].shape)] for name in order],
        "optimizer": optimizer is not None,
        "epoch": epoch,
        "seed": seed,
    }
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8"))
        fh.write(b"\n")
        for name in order:
            fh.write(np.ascontiguousarray(params[name], dtype="<f8").tobytes())
        if optimizer is not None:
            for store in (optimizer.sq_grad, optimizer.sq_update):
                for name in trainable:
                    tensor = store.get(name)
                    if tensor is None:
                        tensor = np.zeros(params[name].shape)
                    fh.write(np.ascontiguousarray(tensor, dtype="<f8").tobytes())


def load_checkpoint(path) -> Checkpoint:
    with open(path, "rb") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ConfigError(f"{path}: not a checkpoint file: {exc}") from exc
        if header.get("format") != CHECKPOINT_FORMAT:
            raise ConfigError(f"{path}: unsupported checkpoint format")
        raw = header["config"]
        raw["vocab"] = tuple(raw["vocab"])
        config = ModelConfig(**raw)
        params = {}
        for name, shape in header["tensors"]:
            size = int(np.prod(shape)) if shape else 1
            data = fh.read(size * 8)
            if len(data) != size * 8:
                raise ConfigError(f"{path}: truncated tensor {name}")
            params[name] = np.frombuffer(data, dtype="<f8").reshape(shape).copy()
        optimizer = None
        if header["optimizer"]:
            optimizer = AdaDeltaState()
            trainable = [
                n for n in param_order(config)
                if not (n == "embed" and config.frozen_embeddings)
            ]
            for store in (optimizer.sq_grad, optimizer.sq_update):
                for name in trainable:
                    shape = params[name].shape
                    size = int(np.prod(shape)) if shape else 1
                    data = fh.read(size * 8)
                    if len(data) != size * 8:
                        raise ConfigError(f"{path}: truncated optimizer state {name}")
                    store[name] = np.frombuffer(data, dtype="<f8").reshape(shape).copy()
    return Checkpoint(config, params, optimizer, header["epoch"], header["seed"])
