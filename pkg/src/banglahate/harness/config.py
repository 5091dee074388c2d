"""Experiment configuration files.

A config is flat ``key = value`` text with dotted section prefixes::

    task = 1A
    seed = 13
    data.train = train.tsv
    model.kind = svm
    hp.epochs = 30
    downsample.fraction = 1/3

Blank lines and ``#`` comments are ignored. Unset keys take their defaults;
unset ``features.*`` keys depend on the model kind (TF-IDF uni+bigrams for
SVM, unigram counts otherwise). :meth:`ExperimentConfig.to_text` writes every
key in sorted order with canonical values, and the config digest is the
SHA-256 of that text minus the ``output.*`` lines.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional

from ..corpus import LabelSchema
from ..errors import ConfigError
from ..features import COUNT, NORM_L2, TFIDF, FeatureSpec
from ..models import MODEL_KINDS, SVM, Hyperparams
from ..preprocess import CleanConfig

OUTPUT_ENV = "BANGLAHATE_OUT"


def _parse_bool(value: str) -> bool:
    v = value.strip().lower()
    if v in ("true", "yes", "1", "on"):
        return True
    if v in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _opt_int(value: str) -> Optional[int]:
    return None if value.strip().lower() == "none" else int(value)


def _fraction_or_sqrt(value: str):
    v = value.strip()
    return v if v == "sqrt" else float(v)


HP_PARSERS = {
    "learning_rate": float,
    "epochs": int,
    "l2_reg": float,
    "batch_size": int,
    "tree_max_depth": _opt_int,
    "tree_min_samples_leaf": int,
    "forest_n_trees": int,
    "forest_feature_fraction": _fraction_or_sqrt,
    "forest_bootstrap": _parse_bool,
}


def default_feature_spec(model_kind: str) -> FeatureSpec:
    if model_kind == SVM:
        return FeatureSpec(TFIDF, (1, 2), 1, 50_000, NORM_L2)
    return FeatureSpec(COUNT, (1, 1), 1, 50_000, NORM_L2)


@dataclass(frozen=True)
class ExperimentConfig:
    task: str = "1A"
    name: str = ""
    seed: int = 0
    data_train: str = ""
    data_dev: str = ""
    data_test: str = ""
    data_format: str = "tsv"
    data_schema: str = ""
    data_stopwords: str = "default"
    clean: CleanConfig = CleanConfig()
    features: FeatureSpec = field(default_factory=lambda: default_feature_spec("logreg"))
    model_kind: str = "logreg"
    hp: Hyperparams = Hyperparams()
    downsample_fraction: Fraction = Fraction(1)
    downsample_stratified: bool = True
    output_dir: str = "runs"
    base_dir: Optional[Path] = field(default=None, compare=False)

    def __post_init__(self):
        if self.model_kind not in MODEL_KINDS:
            raise ConfigError(f"model.kind must be one of {', '.join(MODEL_KINDS)}; got {self.model_kind!r}")
        if self.data_format not in ("tsv", "jsonl"):
            raise ConfigError(f"data.format must be tsv or jsonl; got {self.data_format!r}")
        if not 0 < self.downsample_fraction <= 1:
            raise ConfigError("downsample.fraction must be in (0, 1]")
        if self.hp.seed != self.seed:
            object.__setattr__(self, "hp", replace(self.hp, seed=self.seed))

    @property
    def run_name(self) -> str:
        return self.name or f"{self.task}-{self.model_kind}"

    def items(self) -> dict:
        f = self.features
        out = {
            "task": self.task,
            "name": self.name,
            "seed": self.seed,
            "data.train": self.data_train,
            "data.dev": self.data_dev,
            "data.test": self.data_test,
            "data.format": self.data_format,
            "data.schema": self.data_schema,
            "data.stopwords": self.data_stopwords,
            "features.kind": f.kind,
            "features.ngram_min": f.ngram_range[0],
            "features.ngram_max": f.ngram_range[1],
            "features.min_df": f.min_df,
            "features.max_features": f.max_features,
            "features.norm": f.norm,
            "model.kind": self.model_kind,
            "downsample.fraction": str(self.downsample_fraction),
            "downsample.stratified": self.downsample_stratified,
            "output.dir": self.output_dir,
        }
        for key, value in self.clean.to_dict().items():
            out[f"clean.{key}"] = value
        for key in HP_PARSERS:
            out[f"hp.{key}"] = getattr(self.hp, key)
        return {k: _fmt(v) for k, v in out.items()}

    def to_text(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in sorted(self.items().items()))

    def digest(self) -> str:
        body = "".join(f"{k} = {v}\n" for k, v in sorted(self.items().items()) if not k.startswith("output."))
        return hashlib.sha256(body.encode("utf-8")).hexdigest()

    def resolve(self, path_value: str) -> Optional[Path]:
        if not path_value:
            return None
        p = Path(path_value)
        if not p.is_absolute() and self.base_dir is not None:
            p = self.base_dir / p
        return p

    def schema(self) -> LabelSchema:
        if self.data_schema:
            return LabelSchema.from_file(self.resolve(self.data_schema), self.task)
        return LabelSchema.default(self.task)

    def output_root(self) -> Path:
        env = os.environ.get(OUTPUT_ENV)
        if env:
            return Path(env)
        return self.resolve(self.output_dir) or Path("runs")

    def with_overrides(self, overrides: dict) -> "ExperimentConfig":
        items = self.items()
        explicit = {k: v for k, v in overrides.items()}
        unknown = set(explicit) - set(items)
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        if "model.kind" in explicit and not any(k.startswith("features.") for k in explicit):
            # feature defaults follow the new model kind
            items = {k: v for k, v in items.items() if not k.startswith("features.")}
        items.update(explicit)
        return parse_items(items, self.base_dir)


def _split_line(line: str, lineno: int):
    if "=" not in line:
        raise ConfigError(f"line {lineno}: expected 'key = value'")
    key, value = line.split("=", 1)
    return key.strip(), value.strip()


def parse_config_text(text: str, base_dir: Optional[Path] = None) -> ExperimentConfig:
    items = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, value = _split_line(line, lineno)
        if key in items:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        items[key] = value
    return parse_items(items, base_dir)


def parse_items(items: dict, base_dir: Optional[Path] = None) -> ExperimentConfig:
    items = dict(items)
    try:
        model_kind = items.pop("model.kind", "logreg")
        if model_kind not in MODEL_KINDS:
            raise ConfigError(f"model.kind must be one of {', '.join(MODEL_KINDS)}; got {model_kind!r}")
        fdef = default_feature_spec(model_kind)
        features = FeatureSpec(
            items.pop("features.kind", fdef.kind),
            (int(items.pop("features.ngram_min", fdef.ngram_range[0])),
             int(items.pop("features.ngram_max", fdef.ngram_range[1]))),
            int(items.pop("features.min_df", fdef.min_df)),
            _opt_int(items.pop("features.max_features", str(fdef.max_features))),
            items.pop("features.norm", fdef.norm),
        )
        clean_kwargs = {}
        for name, default in CleanConfig().to_dict().items():
            raw = items.pop(f"clean.{name}", None)
            if raw is not None:
                clean_kwargs[name] = _parse_bool(raw) if isinstance(default, bool) else raw
        hp_kwargs = {}
        for name, parse in HP_PARSERS.items():
            raw = items.pop(f"hp.{name}", None)
            if raw is not None:
                hp_kwargs[name] = parse(raw)
        seed = int(items.pop("seed", "0"))
        cfg = ExperimentConfig(
            task=items.pop("task", "1A"),
            name=items.pop("name", ""),
            seed=seed,
            data_train=items.pop("data.train", ""),
            data_dev=items.pop("data.dev", ""),
            data_test=items.pop("data.test", ""),
            data_format=items.pop("data.format", "tsv"),
            data_schema=items.pop("data.schema", ""),
            data_stopwords=items.pop("data.stopwords", "default"),
            clean=CleanConfig(**clean_kwargs),
            features=features,
            model_kind=model_kind,
            hp=Hyperparams(seed=seed, **hp_kwargs),
            downsample_fraction=Fraction(items.pop("downsample.fraction", "1")),
            downsample_stratified=_parse_bool(items.pop("downsample.stratified", "true")),
            output_dir=items.pop("output.dir", "runs"),
            base_dir=base_dir,
        )
    except ConfigError:
        raise
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(f"invalid config value: {exc}") from None
    if items:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(items))}")
    return cfg


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config_text(text, base_dir=path.resolve().parent)
