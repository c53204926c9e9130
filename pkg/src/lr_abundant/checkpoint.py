"""Versioned JSON checkpoints of an :class:`~lr_abundant.lr_engine.Engine`.

Floats are written with ``repr`` precision (the json default), so a resumed
run reproduces a cold run bit for bit.
"""

from __future__ import annotations

import json
import os
import tempfile

from .lr_engine import Engine, LRState
from .zstream import ZStream

CHECKPOINT_VERSION = 1


class CheckpointError(ValueError):
    pass


def engine_to_dict(engine: Engine) -> dict:
    return {
        "version": CHECKPOINT_VERSION,
        "state": engine.state.to_dict(),
        "stream": engine.stream.to_state(),
    }


def engine_from_dict(data: dict) -> Engine:
    version = data.get("version")
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version!r}")
    try:
        state = LRState.from_dict(data["state"])
        stream = ZStream.from_state(data["stream"])
    except (KeyError, TypeError) as exc:
        raise CheckpointError(f"malformed checkpoint: {exc}") from exc
    return Engine(stream, state)


def save_checkpoint(path, engine: Engine) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ckpt-", suffix=".json")
    with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
        json.dump(engine_to_dict(engine), f, separators=(",", ":"))
        f.write("\n")
    os.replace(tmp, path)


def load_checkpoint(path) -> Engine:
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"not a checkpoint file: {exc}") from exc
    return engine_from_dict(data)
