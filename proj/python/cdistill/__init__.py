# Copyright 2026 The cdistill Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python bindings for the cdistill fake news detector.

Records are plain dicts with the JSONL schema used by the command line tool:
``id``, ``content``, ``publish_time``, ``comments`` (``text``, ``time``) and
``label``.
"""

import json

from . import _core
from ._core import DataError, Error, NumericError, UsageError

__all__ = [
    "DataError",
    "Error",
    "NumericError",
    "UsageError",
    "auc",
    "chronological_split",
    "default_config",
    "evaluate",
    "extract_emotion",
    "generate_corpus",
    "load_corpus",
    "predict",
    "save_corpus",
    "save_split",
    "segment_names",
    "spauc",
    "train_student",
    "train_teacher",
]


def _dump(records):
    return [json.dumps(r, ensure_ascii=False) for r in records]


def _load(lines):
    return [json.loads(line) for line in lines]


def _config_json(config):
    if config is None:
        return _core.default_config()
    if isinstance(config, str):
        return config
    return json.dumps(config)


def generate_corpus(seed, spec=None):
    """Synthetic corpus as a list of records."""
    return _load(_core.generate_corpus(json.dumps(spec or {}), seed))


def load_corpus(path):
    return _load(_core.load_corpus(str(path)))


def save_corpus(path, records):
    _core.save_corpus(str(path), _dump(records))


def chronological_split(records, ratio=(4, 1, 1)):
    """Returns (train, val, test)."""
    train, val, test = _core.chronological_split(_dump(records), list(ratio))
    return _load(train), _load(val), _load(test)


def save_split(directory, train, val, test):
    _core.save_split(str(directory), _dump(train), _dump(val), _dump(test))


def extract_emotion(texts):
    return _core.extract_emotion(list(texts))


def segment_names():
    return _core.segment_names()


def evaluate(scores, labels, threshold=0.5):
    return json.loads(_core.evaluate(list(scores), list(labels), threshold))


def auc(scores, labels):
    return _core.auc(list(scores), list(labels))


def spauc(scores, labels, fpr_max=0.1):
    return _core.spauc(list(scores), list(labels), fpr_max)


def default_config():
    return json.loads(_core.default_config())


def train_teacher(split_dir, out, config=None):
    """Trains a teacher and writes its checkpoint. Returns the epoch history CSV."""
    return _core.train_teacher(_config_json(config), str(split_dir), str(out))


def train_student(split_dir, teacher, out, config=None):
    return _core.train_student(_config_json(config), str(split_dir), str(teacher), str(out))


def predict(checkpoint, records, kind="student"):
    """Fake probabilities for `records` from a teacher or student checkpoint."""
    if kind == "teacher":
        return _core.predict_teacher(str(checkpoint), _dump(records))
    if kind == "student":
        return _core.predict_student(str(checkpoint), _dump(records))
    raise ValueError(f"unknown model kind: {kind}")
